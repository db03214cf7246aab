#include "nsteady/grid.hpp"

#include <stdexcept>
#include <string>

namespace nsteady {

Grid make_grid(int n, double box_length) {
  if (n < 8) throw std::invalid_argument("grid: n must be at least 8, got " + std::to_string(n));
  if (n % 2 != 0) throw std::invalid_argument("grid: n must be even, got " + std::to_string(n));
  if (!(box_length > 0.0)) throw std::invalid_argument("grid: box length must be positive");
  return Grid{n, box_length};
}

}  // namespace nsteady
