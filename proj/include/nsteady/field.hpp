#pragma once

#include <complex>
#include <vector>

#include "nsteady/grid.hpp"

namespace nsteady {

using Complex = std::complex<double>;

// Three-component field of Fourier coefficients on a Grid.
//
// coeffs[c*n^3 + site] is the coefficient of e^{i k . x} for component c at
// wavevector k = wavevector(site); a constant physical field c has exactly
// coeff(k=0) = c under the forward-transform normalization 1/n^3.
class SpectralVectorField {
 public:
  SpectralVectorField() = default;
  explicit SpectralVectorField(const Grid& grid)
      : grid_(grid), coeffs_(3 * grid.size(), Complex{0.0, 0.0}) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }

  Complex& at(int comp, std::size_t site) { return coeffs_[comp * size() + site]; }
  const Complex& at(int comp, std::size_t site) const {
    return coeffs_[comp * size() + site];
  }
  Complex* component(int comp) { return coeffs_.data() + comp * size(); }
  const Complex* component(int comp) const { return coeffs_.data() + comp * size(); }

  std::vector<Complex>& data() { return coeffs_; }
  const std::vector<Complex>& data() const { return coeffs_; }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

// Three-component field of physical-space samples. Samples are stored as
// complex numbers; real-valued fields keep a flag and zero imaginary parts.
class PhysicalVectorField {
 public:
  PhysicalVectorField() = default;
  explicit PhysicalVectorField(const Grid& grid, bool complex_valued = false)
      : grid_(grid),
        complex_valued_(complex_valued),
        samples_(3 * grid.size(), Complex{0.0, 0.0}) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  bool complex_valued() const { return complex_valued_; }
  void set_complex_valued(bool v) { complex_valued_ = v; }

  Complex& at(int comp, std::size_t site) { return samples_[comp * size() + site]; }
  const Complex& at(int comp, std::size_t site) const {
    return samples_[comp * size() + site];
  }
  Complex* component(int comp) { return samples_.data() + comp * size(); }
  const Complex* component(int comp) const { return samples_.data() + comp * size(); }

  std::vector<Complex>& data() { return samples_; }
  const std::vector<Complex>& data() const { return samples_; }

  // Euclidean magnitude across components at one site.
  double magnitude(std::size_t site) const {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += std::norm(at(c, site));
    return std::sqrt(s);
  }

  // Per-site magnitudes of the whole field, in site order.
  std::vector<double> magnitudes() const;

 private:
  Grid grid_;
  bool complex_valued_ = false;
  std::vector<Complex> samples_;
};

// Scalar companions used for divergence and pressure.
class SpectralScalarField {
 public:
  SpectralScalarField() = default;
  explicit SpectralScalarField(const Grid& grid)
      : grid_(grid), coeffs_(grid.size(), Complex{0.0, 0.0}) {}
  const Grid& grid() const { return grid_; }
  Complex& at(std::size_t site) { return coeffs_[site]; }
  const Complex& at(std::size_t site) const { return coeffs_[site]; }
  std::vector<Complex>& data() { return coeffs_; }
  const std::vector<Complex>& data() const { return coeffs_; }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

class PhysicalScalarField {
 public:
  PhysicalScalarField() = default;
  explicit PhysicalScalarField(const Grid& grid)
      : grid_(grid), samples_(grid.size(), Complex{0.0, 0.0}) {}
  const Grid& grid() const { return grid_; }
  Complex& at(std::size_t site) { return samples_[site]; }
  const Complex& at(std::size_t site) const { return samples_[site]; }
  std::vector<Complex>& data() { return samples_; }
  const std::vector<Complex>& data() const { return samples_; }
  std::vector<double> magnitudes() const;

 private:
  Grid grid_;
  std::vector<Complex> samples_;
};

}  // namespace nsteady
