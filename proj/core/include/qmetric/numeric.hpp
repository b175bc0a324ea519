#pragma once

#include <cstddef>

namespace qmetric {

// Deterministic pairwise reduction of term(k) for k in [lo, hi). The
// recursion splits at the midpoint with a fixed serial base case, so the
// summation order (and therefore the rounded result) is reproducible
// independent of how callers schedule work.
template <class T, class TermFn>
T pairwise_reduce(std::size_t lo, std::size_t hi, const TermFn& term) {
  if (hi - lo <= 32) {
    T sum{};
    for (std::size_t k = lo; k < hi; ++k) sum += term(k);
    return sum;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_reduce<T>(lo, mid, term) + pairwise_reduce<T>(mid, hi, term);
}

}  // namespace qmetric
