#include "qmetric/grid.hpp"

#include <cmath>
#include <string>

#include "qmetric/errors.hpp"

namespace qmetric {

Grid2D::Grid2D(double x_min, double x_max, double y_min, double y_max, int nx,
               int ny)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), nx_(nx),
      ny_(ny) {
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) &&
        std::isfinite(y_max)))
    throw ContractError("Grid2D: bounds must be finite");
  if (!(x_max > x_min) || !(y_max > y_min))
    throw ContractError("Grid2D: require x_max > x_min and y_max > y_min");
  if (nx < 4 || ny < 4)
    throw ContractError("Grid2D: require nx >= 4 and ny >= 4, got nx=" +
                        std::to_string(nx) + " ny=" + std::to_string(ny));
}

Grid2D Grid2D::square(double half_width, int n) {
  return Grid2D(-half_width, half_width, -half_width, half_width, n, n);
}

}  // namespace qmetric
