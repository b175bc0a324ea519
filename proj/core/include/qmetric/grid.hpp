#pragma once

#include <cstddef>

namespace qmetric {

// Uniform rectangular lattice over [x_min, x_max] x [y_min, y_max], endpoint
// inclusive on both axes. Immutable after construction. Sample counts must be
// at least 4 per axis so trapezoidal quadrature and interior finite
// differences are well defined.
class Grid2D {
 public:
  Grid2D(double x_min, double x_max, double y_min, double y_max, int nx,
         int ny);

  // Square grid [-half_width, half_width]^2 with n samples per axis.
  static Grid2D square(double half_width, int n);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  double dx() const { return (x_max_ - x_min_) / (nx_ - 1); }
  double dy() const { return (y_max_ - y_min_) / (ny_ - 1); }

  double x(int ix) const { return x_min_ + ix * dx(); }
  double y(int iy) const { return y_min_ + iy * dy(); }

  std::size_t size() const {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }

  // Flat sample index: x index outermost, y index innermost, both ascending.
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * static_cast<std::size_t>(ny_) +
           static_cast<std::size_t>(iy);
  }

  bool operator==(const Grid2D&) const = default;

 private:
  double x_min_, x_max_, y_min_, y_max_;
  int nx_, ny_;
};

}  // namespace qmetric
