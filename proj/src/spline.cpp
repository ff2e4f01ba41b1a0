#include "minkiso/spline.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "minkiso/error.hpp"

namespace minkiso {

namespace {

// Solves a tridiagonal system in place (Thomas algorithm); sub[0] and sup[n-1] unused.
template <std::size_t D>
void solve_tridiagonal(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                       std::vector<std::array<double, D>>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    for (std::size_t c = 0; c < D; ++c) rhs[i][c] -= w * rhs[i - 1][c];
  }
  for (std::size_t c = 0; c < D; ++c) rhs[n - 1][c] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    for (std::size_t c = 0; c < D; ++c) rhs[i][c] = (rhs[i][c] - sup[i] * rhs[i + 1][c]) / diag[i];
  }
}

}  // namespace

template <std::size_t D>
CubicSpline<D>::CubicSpline(std::vector<double> knots, std::vector<Value> values, bool periodic)
    : t_(std::move(knots)), y_(std::move(values)), periodic_(periodic) {
  const std::size_t n = t_.size();
  if (n != y_.size()) throw Error(ErrorKind::InvalidArgument, "spline knots/values size mismatch");
  if (n < (periodic ? 4u : 2u)) throw Error(ErrorKind::TooFewPoints, "too few spline knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(t_[i] > t_[i - 1])) throw Error(ErrorKind::InvalidArgument, "spline knots must increase");
  }
  m_.assign(n, Value{});
  if (n == 2) return;

  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = t_[i + 1] - t_[i];
  auto slope = [&](std::size_t i) {
    Value s{};
    for (std::size_t c = 0; c < D; ++c) s[c] = (y_[i + 1][c] - y_[i][c]) / h[i];
    return s;
  };

  if (!periodic_) {
    const std::size_t m = n - 2;
    std::vector<double> sub(m), diag(m), sup(m);
    std::vector<Value> rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = k + 1;
      sub[k] = h[i - 1];
      diag[k] = 2.0 * (h[i - 1] + h[i]);
      sup[k] = h[i];
      const Value a = slope(i), b = slope(i - 1);
      for (std::size_t c = 0; c < D; ++c) rhs[k][c] = 6.0 * (a[c] - b[c]);
    }
    solve_tridiagonal<D>(sub, diag, sup, rhs);
    for (std::size_t k = 0; k < m; ++k) m_[k + 1] = rhs[k];
    return;
  }

  // Periodic: unknowns M_0..M_{m-1}, m = n-1, cyclic tridiagonal solved by Sherman-Morrison.
  const std::size_t m = n - 1;
  std::vector<double> sub(m), diag(m), sup(m);
  std::vector<Value> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t ip = (i + m - 1) % m;
    sub[i] = h[ip];
    diag[i] = 2.0 * (h[ip] + h[i]);
    sup[i] = h[i];
    const Value a = slope(i), b = slope(ip);
    for (std::size_t c = 0; c < D; ++c) rhs[i][c] = 6.0 * (a[c] - b[c]);
  }
  const double alpha = sup[m - 1];  // A[m-1][0]
  const double beta = sub[0];       // A[0][m-1]
  const double gamma = -diag[0];
  std::vector<double> d2 = diag;
  d2[0] -= gamma;
  d2[m - 1] -= alpha * beta / gamma;
  std::vector<Value> x = rhs;
  solve_tridiagonal<D>(sub, d2, sup, x);
  std::vector<std::array<double, 1>> u(m, {0.0});
  u[0][0] = gamma;
  u[m - 1][0] = alpha;
  solve_tridiagonal<1>(sub, d2, sup, u);
  const double denom = 1.0 + u[0][0] + beta * u[m - 1][0] / gamma;
  for (std::size_t c = 0; c < D; ++c) {
    const double fact = (x[0][c] + beta * x[m - 1][c] / gamma) / denom;
    for (std::size_t i = 0; i < m; ++i) m_[i][c] = x[i][c] - fact * u[i][0];
  }
  m_[m] = m_[0];
}

template <std::size_t D>
std::size_t CubicSpline<D>::segment(double& t) const {
  if (periodic_) {
    const double span = t_.back() - t_.front();
    t = t_.front() + std::fmod(t - t_.front(), span);
    if (t < t_.front()) t += span;
  }
  if (t <= t_.front()) return 0;
  if (t >= t_.back()) return t_.size() - 2;
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  return static_cast<std::size_t>(it - t_.begin()) - 1;
}

template <std::size_t D>
typename CubicSpline<D>::Value CubicSpline<D>::eval(double t, int order) const {
  const std::size_t k = segment(t);
  const double h = t_[k + 1] - t_[k];
  const double a = (t_[k + 1] - t) / h;
  const double b = (t - t_[k]) / h;
  Value out{};
  for (std::size_t c = 0; c < D; ++c) {
    const double y0 = y_[k][c], y1 = y_[k + 1][c], m0 = m_[k][c], m1 = m_[k + 1][c];
    switch (order) {
      case 0:
        out[c] = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        break;
      case 1:
        out[c] = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        break;
      default:
        out[c] = a * m0 + b * m1;
        break;
    }
  }
  return out;
}

template class CubicSpline<1>;
template class CubicSpline<2>;
template class CubicSpline<3>;

ArclengthSamples uniform_arclength_params(const std::vector<double>& knots,
                                          const std::function<double(double)>& speed,
                                          std::size_t n_out, bool closed) {
  using Quad = boost::math::quadrature::gauss<double, 10>;
  if (knots.size() < 2) throw Error(ErrorKind::TooFewPoints, "need at least two knots");
  if (n_out < 2) throw Error(ErrorKind::InvalidArgument, "n_out must be >= 2");

  const std::size_t nseg = knots.size() - 1;
  std::vector<double> cum(knots.size(), 0.0);
  for (std::size_t k = 0; k < nseg; ++k) {
    cum[k + 1] = cum[k] + Quad::integrate(speed, knots[k], knots[k + 1]);
  }
  const double total = cum.back();
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidArgument, "curve has zero length");

  ArclengthSamples out;
  out.length = total;
  out.params.resize(n_out);
  const double ds = closed ? total / static_cast<double>(n_out) : total / static_cast<double>(n_out - 1);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double target = ds * static_cast<double>(j);
    if (!closed && j + 1 == n_out) {
      out.params[j] = knots.back();
      continue;
    }
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cum.begin() - 1, 0));
    k = std::min(k, nseg - 1);
    double lo = knots[k], hi = knots[k + 1];
    const double seg_len = cum[k + 1] - cum[k];
    double t = lo + (hi - lo) * (seg_len > 0.0 ? (target - cum[k]) / seg_len : 0.0);
    for (int iter = 0; iter < 40; ++iter) {
      const double g = cum[k] + Quad::integrate(speed, knots[k], t) - target;
      if (std::abs(g) <= 1e-15 * total) break;
      if (g > 0.0) hi = t; else lo = t;
      const double sp = speed(t);
      double next = sp > 0.0 ? t - g / sp : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-16 * (std::abs(t) + 1.0)) {
        t = next;
        break;
      }
      t = next;
    }
    out.params[j] = t;
  }
  return out;
}

}  // namespace minkiso
