#include "nsteady/field.hpp"

namespace nsteady {

std::vector<double> PhysicalVectorField::magnitudes() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = magnitude(i);
  return out;
}

std::vector<double> PhysicalScalarField::magnitudes() const {
  std::vector<double> out(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) out[i] = std::abs(samples_[i]);
  return out;
}

}  // namespace nsteady
