#include "nsteady/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace nsteady {

std::string NormReport::to_json_line() const {
  nlohmann::json j;
  j["space"] = space;
  j["p"] = p;
  if (std::isinf(q_or_theta))
    j["q_or_theta"] = "inf";
  else
    j["q_or_theta"] = q_or_theta;
  j["value"] = value;
  j["grid_n"] = grid_n;
  j["grid_L"] = grid_box_length;
  if (!notes.empty()) j["notes"] = notes;
  return j.dump();
}

Rearrangement decreasing_rearrangement(std::vector<double> magnitudes,
                                       double cell_volume) {
  std::stable_sort(magnitudes.begin(), magnitudes.end(), std::greater<double>());
  return Rearrangement{std::move(magnitudes), cell_volume};
}

Rearrangement decreasing_rearrangement(const PhysicalVectorField& field) {
  return decreasing_rearrangement(field.magnitudes(), field.grid().cell_volume());
}

Rearrangement decreasing_rearrangement(const PhysicalScalarField& field) {
  return decreasing_rearrangement(field.magnitudes(), field.grid().cell_volume());
}

double lorentz_value(const Rearrangement& r, double p, double q) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("lorentz: p must lie in (1, inf)");
  if (!(q >= 1.0)) throw std::invalid_argument("lorentz: q must lie in [1, inf]");
  const double vc = r.measure_step;
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      const double t = static_cast<double>(i + 1) * vc;
      best = std::max(best, std::pow(t, 1.0 / p) * r.values[i]);
    }
    return best;
  }
  // (q/p) * integral of f*(t)^q t^{q/p - 1} dt, exact on the step function:
  // the weight of rank i is (i+1 vc)^{q/p} - (i vc)^{q/p}.
  const double e = q / p;
  double sum = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    const double cur = std::pow(static_cast<double>(i + 1) * vc, e);
    sum += std::pow(r.values[i], q) * (cur - prev);
    prev = cur;
  }
  return std::pow(sum, 1.0 / q);
}

double weak_value_resolved(const Rearrangement& r, double p, std::size_t min_rank) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("lorentz: p must lie in (1, inf)");
  if (min_rank < 1) min_rank = 1;
  double best = 0.0;
  for (std::size_t i = min_rank - 1; i < r.values.size(); ++i) {
    const double t = static_cast<double>(i + 1) * r.measure_step;
    best = std::max(best, std::pow(t, 1.0 / p) * r.values[i]);
  }
  return best;
}

namespace {

NormReport make_lorentz_report(const Grid& g, const Rearrangement& r, double p,
                               double q) {
  NormReport rep;
  rep.space = std::isinf(q) ? "weak" : (q == p ? "lebesgue" : "lorentz");
  rep.p = p;
  rep.q_or_theta = q;
  rep.value = lorentz_value(r, p, q);
  rep.grid_n = g.n;
  rep.grid_box_length = g.box_length;
  return rep;
}

template <typename Field>
NormReport weighted_sup_impl(const Field& field, double theta, double offset) {
  if (theta < 0.0) throw std::invalid_argument("weighted_sup: theta must be nonnegative");
  const Grid& g = field.grid();
  std::vector<double> mags = field.magnitudes();
  double best = 0.0;
  std::size_t s = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++s) {
        const double x = g.coord(ix) + offset;
        const double y = g.coord(iy) + offset;
        const double z = g.coord(iz) + offset;
        const double r = std::sqrt(x * x + y * y + z * z);
        // pow(0, 0) == 1, so theta = 0 reduces to the plain sup norm.
        best = std::max(best, std::pow(r, theta) * mags[s]);
      }
  NormReport rep;
  rep.space = "weighted_sup";
  rep.p = 0.0;
  rep.q_or_theta = theta;
  rep.value = best;
  rep.grid_n = g.n;
  rep.grid_box_length = g.box_length;
  return rep;
}

template <typename Field>
NormReport morrey_impl(const Field& field, double p, double q, int stride,
                       const std::vector<double>& radii, double offset) {
  if (!(q >= 1.0 && q <= p)) throw std::invalid_argument("morrey: need 1 <= q <= p");
  if (stride < 1) throw std::invalid_argument("morrey: stride must be positive");
  if (radii.empty()) throw std::invalid_argument("morrey: need at least one radius");
  const Grid& g = field.grid();
  std::vector<double> radii_sorted = radii;
  std::sort(radii_sorted.begin(), radii_sorted.end());

  std::vector<double> powq = field.magnitudes();
  for (auto& m : powq) m = std::pow(m, q);

  const double vc = g.cell_volume();
  double best = 0.0;
  for (int cz = 0; cz < g.n; cz += stride) {
    const double z0 = g.coord(cz) + offset;
    for (int cy = 0; cy < g.n; cy += stride) {
      const double y0 = g.coord(cy) + offset;
      for (int cx = 0; cx < g.n; cx += stride) {
        const double x0 = g.coord(cx) + offset;
        // Bin each cell into the smallest radius containing it, then take
        // running sums so every listed radius is covered in one sweep.
        std::vector<double> bins(radii_sorted.size(), 0.0);
        std::size_t s = 0;
        for (int iz = 0; iz < g.n; ++iz) {
          const double dz = g.coord(iz) + offset - z0;
          for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.coord(iy) + offset - y0;
            for (int ix = 0; ix < g.n; ++ix, ++s) {
              const double dx = g.coord(ix) + offset - x0;
              const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
              auto it = std::upper_bound(radii_sorted.begin(), radii_sorted.end(), d);
              if (it != radii_sorted.end())
                bins[it - radii_sorted.begin()] += powq[s];
            }
          }
        }
        double running = 0.0;
        for (std::size_t i = 0; i < radii_sorted.size(); ++i) {
          running += bins[i];
          const double R = radii_sorted[i];
          best = std::max(best, std::pow(R, 3.0 / p - 3.0 / q) *
                                    std::pow(running * vc, 1.0 / q));
        }
      }
    }
  }
  NormReport rep;
  rep.space = "morrey";
  rep.p = p;
  rep.q_or_theta = q;
  rep.value = best;
  rep.grid_n = g.n;
  rep.grid_box_length = g.box_length;
  rep.notes = "lower bound: coarse centers, fixed radii, no periodic wrap";
  return rep;
}

}  // namespace

NormReport lorentz_norm(const PhysicalVectorField& field, double p, double q) {
  return make_lorentz_report(field.grid(), decreasing_rearrangement(field), p, q);
}

NormReport lorentz_norm(const PhysicalScalarField& field, double p, double q) {
  return make_lorentz_report(field.grid(), decreasing_rearrangement(field), p, q);
}

NormReport weighted_sup_norm(const PhysicalVectorField& field, double theta,
                             double coord_offset) {
  return weighted_sup_impl(field, theta, coord_offset);
}

NormReport weighted_sup_norm(const PhysicalScalarField& field, double theta,
                             double coord_offset) {
  return weighted_sup_impl(field, theta, coord_offset);
}

NormReport morrey_norm_lower_bound(const PhysicalVectorField& field, double p,
                                   double q, int center_stride,
                                   const std::vector<double>& radii,
                                   double coord_offset) {
  return morrey_impl(field, p, q, center_stride, radii, coord_offset);
}

NormReport morrey_norm_lower_bound(const PhysicalScalarField& field, double p,
                                   double q, int center_stride,
                                   const std::vector<double>& radii,
                                   double coord_offset) {
  return morrey_impl(field, p, q, center_stride, radii, coord_offset);
}

ThresholdSplit threshold_split(const PhysicalVectorField& field, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("threshold_split: epsilon must be positive");
  const Grid& g = field.grid();
  const double vc = g.cell_volume();

  std::vector<double> asc = field.magnitudes();
  std::sort(asc.begin(), asc.end());

  // Weak-3 norm of the sub-field keeping the m smallest samples.
  auto weak3_of_prefix = [&](std::size_t m) {
    double best = 0.0;
    for (std::size_t r = 1; r <= m; ++r)
      best = std::max(best, std::cbrt(static_cast<double>(r) * vc) * asc[m - r]);
    return best;
  };

  // Candidate thresholds are the distinct sample values; a threshold must
  // absorb every sample tied with it, so candidates are upper boundaries of
  // equal-value runs. The prefix norm is nondecreasing in m, so the largest
  // admissible boundary can be found by bisection.
  std::vector<std::size_t> bounds;
  for (std::size_t i = 1; i <= asc.size(); ++i)
    if (i == asc.size() || asc[i] > asc[i - 1]) bounds.push_back(i);

  std::size_t lo = 0, hi = bounds.size();  // bounds[0..lo) admissible
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (weak3_of_prefix(bounds[mid]) < epsilon)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == 0) {
    if (asc.empty() || asc.back() == 0.0) {
      // Zero field: trivial split.
      ThresholdSplit out{PhysicalVectorField(g), PhysicalVectorField(g), 0.0, 0.0};
      return out;
    }
    throw std::runtime_error(
        "threshold_split: epsilon is below the grid's resolution floor");
  }
  const std::size_t m = lo == 0 ? 0 : bounds[lo - 1];
  const double threshold = m == 0 ? 0.0 : asc[m - 1];

  ThresholdSplit out{PhysicalVectorField(g, field.complex_valued()),
                     PhysicalVectorField(g, field.complex_valued()),
                     threshold, weak3_of_prefix(m)};
  for (std::size_t s = 0; s < g.size(); ++s) {
    const bool big = field.magnitude(s) > threshold;
    for (int c = 0; c < 3; ++c)
      (big ? out.large_part : out.small_part).at(c, s) = field.at(c, s);
  }
  return out;
}

}  // namespace nsteady
