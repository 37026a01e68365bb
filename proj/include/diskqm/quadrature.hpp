#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "diskqm/common.hpp"

namespace diskqm {

// Node counts for the three quadratures used throughout. The angular rule is
// the uniform periodic rule (spectrally accurate for smooth periodic
// integrands); the radial and path rules are Gauss-Legendre. workers > 1
// spreads disk/time nodes over threads; results are reduced in a fixed order,
// so the value is identical for any worker count.
struct Quadrature {
  int n_r = 64;
  int n_theta = 128;
  int n_path = 64;  // panels of the composite path rule
  int workers = 1;

  Quadrature scaled(double factor) const {
    Quadrature q = *this;
    q.n_r = static_cast<int>(n_r * factor);
    q.n_theta = static_cast<int>(n_theta * factor);
    q.n_path = static_cast<int>(n_path * factor);
    return q;
  }
};

namespace detail {

inline std::pair<std::vector<double>, std::vector<double>> compute_gauss_legendre(int n) {
  std::vector<double> nodes(static_cast<size_t>(n)), weights(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(x) and P'_n(x)
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = -p1 / pp;
      x += dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[static_cast<size_t>(k)] = x;
    weights[static_cast<size_t>(k)] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return {nodes, weights};
}

// Cached nodes/weights on [-1, 1].
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace detail

// integral over the unit disk of density(x, y) dx dy, in polar coordinates:
// Gauss-Legendre in r on [0,1] with the area weight r, uniform rule in theta.
inline double integrate_disk(const std::function<double(Vec2)>& density, const Quadrature& q) {
  const auto& [nodes, weights] = detail::gauss_legendre(q.n_r);
  const double dtheta = kTwoPi / q.n_theta;
  std::vector<double> ct(static_cast<size_t>(q.n_theta)), st(static_cast<size_t>(q.n_theta));
  for (int j = 0; j < q.n_theta; ++j) {
    ct[static_cast<size_t>(j)] = std::cos(dtheta * j);
    st[static_cast<size_t>(j)] = std::sin(dtheta * j);
  }
  auto ring = [&](int i) {
    const double r = 0.5 * (nodes[static_cast<size_t>(i)] + 1.0);
    const double wr = 0.5 * weights[static_cast<size_t>(i)] * r * dtheta;
    double s = 0.0;
    for (int j = 0; j < q.n_theta; ++j)
      s += density({r * ct[static_cast<size_t>(j)], r * st[static_cast<size_t>(j)]});
    return wr * s;
  };
  return parallel_sum(q.n_r, ring, q.workers);
}

// integral of fn over [a, b] by composite Gauss-Legendre: `panels` panels of a
// fixed 4-point rule.
inline double integrate_1d(const std::function<double(double)>& fn, double a, double b,
                           int panels, int workers = 1) {
  const auto& [nodes, weights] = detail::gauss_legendre(4);
  const double h = (b - a) / panels;
  auto panel = [&](int p) {
    const double lo = a + h * p;
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i)
      s += weights[i] * fn(lo + 0.5 * h * (nodes[i] + 1.0));
    return 0.5 * h * s;
  };
  return parallel_sum(panels, panel, workers);
}

}  // namespace diskqm
