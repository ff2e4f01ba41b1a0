#pragma once

// Fourth-order first derivatives on a uniform grid. Periodic grids wrap; open
// grids switch to one-sided fourth-order stencils at the two ends.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace minkiso::fd {

template <typename T>
std::vector<T> derivative(std::span<const T> f, double h, bool periodic) {
  const std::size_t n = f.size();
  if (n < 5) throw std::invalid_argument("fd::derivative needs at least 5 samples");
  const double inv = 1.0 / (12.0 * h);
  std::vector<T> out(n);
  auto at = [&](std::ptrdiff_t i) -> const T& {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return f[static_cast<std::size_t>(((i % m) + m) % m)];
  };
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    if (periodic || (k >= 2 && k + 2 < n)) {
      out[k] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) * inv;
    } else if (k == 0) {
      out[k] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv;
    } else if (k == 1) {
      out[k] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv;
    } else if (k == n - 2) {
      out[k] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * inv;
    } else {
      out[k] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * inv;
    }
  }
  return out;
}

template <typename T>
std::vector<T> derivative(const std::vector<T>& f, double h, bool periodic) {
  return derivative(std::span<const T>(f), h, periodic);
}

}  // namespace minkiso::fd
