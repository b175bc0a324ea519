#pragma once

namespace qmetric {

// Natural units used throughout the library: hbar = c = |e| = 1, with the
// charge entering every formula through its magnitude. The struct exists so
// the convention is written down in one place instead of living as implicit
// factors of 1; no computation reads these fields.
struct UnitSystem {
  double hbar = 1.0;
  double c = 1.0;
  double e_abs = 1.0;
};

inline constexpr UnitSystem natural_units{};

}  // namespace qmetric
