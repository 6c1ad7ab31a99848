#pragma once

// Finite-difference stencils shared by the operator and Madelung code.
// All are second order; `at(k)` returns the k-th sample along a line.

#include <cstddef>

namespace qhydro::detail {

template <typename T, typename At>
T d1_line(const At& at, std::size_t i, std::size_t n, double h, bool periodic) {
  if (periodic) {
    const std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
    return (at(ip) - at(im)) / (2.0 * h);
  }
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
  return (at(i + 1) - at(i - 1)) / (2.0 * h);
}

template <typename T, typename At>
T d2_line(const At& at, std::size_t i, std::size_t n, double h, bool periodic) {
  const double h2 = h * h;
  if (periodic) {
    const std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
    return (at(ip) - 2.0 * at(i) + at(im)) / h2;
  }
  if (i == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2;
  if (i == n - 1) return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / h2;
  return (at(i + 1) - 2.0 * at(i) + at(i - 1)) / h2;
}

}  // namespace qhydro::detail
