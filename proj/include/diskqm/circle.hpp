#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "diskqm/common.hpp"
#include "diskqm/geometry.hpp"
#include "diskqm/quadrature.hpp"

namespace diskqm {

namespace detail {

struct WordLiftGrid {
  MapWord word;
  std::vector<double> values;  // phi~ at theta_j = 2 pi j / N, j = 0..N
  int N = 1024;

  double raw_angle(double theta) const {
    const Vec2 q = eval(word, {std::cos(theta), std::sin(theta)});
    return std::atan2(q.y, q.x);  // principal value in (-pi, pi]
  }

  // Continue the lift from (theta0, phi0) to theta1. Steps larger than pi/2
  // are resolved by local bisection; for the smooth boundary maps produced by
  // valid words a couple of levels suffice.
  double continue_to(double theta0, double phi0, double theta1, int depth = 0) const {
    const double a = raw_angle(theta1);
    const double d = std::remainder(a - phi0, kTwoPi);
    if (std::fabs(d) <= 0.5 * kPi || depth > 24) {
      if (depth > 24)
        throw std::runtime_error("boundary lift unwrapping failed to resolve a jump");
      return phi0 + d;
    }
    const double mid = 0.5 * (theta0 + theta1);
    const double phi_mid = continue_to(theta0, phi0, mid, depth + 1);
    return continue_to(mid, phi_mid, theta1, depth + 1);
  }

  double operator()(double theta) const {
    double k = std::floor(theta / kTwoPi);
    double t0 = theta - kTwoPi * k;
    if (t0 >= kTwoPi) {
      t0 -= kTwoPi;
      k += 1.0;
    }
    const double h = kTwoPi / N;
    int j = static_cast<int>(t0 / h);
    if (j >= N) j = N - 1;
    const double frac = t0 / h - j;
    const double ref = values[static_cast<size_t>(j)] +
                       frac * (values[static_cast<size_t>(j) + 1] - values[static_cast<size_t>(j)]);
    const double a = raw_angle(t0);
    const double val = a + kTwoPi * std::round((ref - a) / kTwoPi);
    return val + kTwoPi * k;
  }
};

}  // namespace detail

// Monotone lift phi~ of an orientation-preserving circle diffeomorphism:
// phi~(theta + 2 pi) = phi~(theta) + 2 pi. Either the boundary restriction of
// a MapWord (with an explicit branch) or an explicit formula.
class CircleLift {
 public:
  double operator()(double theta) const { return fn_(theta); }
  const std::string& label() const { return label_; }

  // Wrap an explicit lift formula; checks 2 pi-equivariance on samples and
  // strict monotonicity on a 512-point grid.
  static CircleLift from_function(std::function<double(double)> fn, std::string label) {
    for (int i = 0; i < 32; ++i) {
      const double th = -kTwoPi + 4.0 * kTwoPi * i / 31.0;
      if (std::fabs(fn(th + kTwoPi) - fn(th) - kTwoPi) > 1e-9)
        throw PreconditionError("lift is not 2pi-equivariant: " + label);
    }
    check_monotone(fn, label);
    CircleLift l;
    l.fn_ = std::move(fn);
    l.label_ = std::move(label);
    return l;
  }

  static CircleLift unchecked(std::function<double(double)> fn, std::string label) {
    CircleLift l;
    l.fn_ = std::move(fn);
    l.label_ = std::move(label);
    return l;
  }

  static void check_monotone(const std::function<double(double)>& fn, const std::string& label) {
    double prev = fn(0.0);
    for (int j = 1; j <= 512; ++j) {
      const double cur = fn(kTwoPi * j / 512.0);
      if (!(cur > prev))
        throw PreconditionError("lift is not strictly increasing: " + label);
      prev = cur;
    }
  }

 private:
  std::function<double(double)> fn_;
  std::string label_;
};

inline CircleLift rotation_lift(double alpha) {
  return CircleLift::unchecked([alpha](double th) { return th + alpha; },
                               "rot(" + std::to_string(alpha) + ")");
}

// Lift of the boundary restriction of a word, unwrapped continuously from
// theta = 0 with phi~(0) in [0, 2 pi) + 2 pi * branch.
inline CircleLift boundary_lift(const MapWord& map, int branch = 0) {
  for (int j = 0; j < 64; ++j) {
    const double th = kTwoPi * j / 64.0;
    const Vec2 q = eval(map, {std::cos(th), std::sin(th)});
    if (std::fabs(q.norm() - 1.0) > boundary_tolerance(map))
      throw PreconditionError("map does not preserve the boundary circle");
  }
  auto grid = std::make_shared<detail::WordLiftGrid>();
  grid->word = map;
  grid->values.resize(static_cast<size_t>(grid->N) + 1);
  double phi = grid->raw_angle(0.0);
  if (phi < 0.0) phi += kTwoPi;  // normalize into [0, 2 pi), branch 0
  phi += kTwoPi * branch;
  grid->values[0] = phi;
  const double h = kTwoPi / grid->N;
  for (int j = 1; j <= grid->N; ++j)
    grid->values[static_cast<size_t>(j)] =
        grid->continue_to(h * (j - 1), grid->values[static_cast<size_t>(j) - 1], h * j);
  if (std::fabs(grid->values.back() - grid->values.front() - kTwoPi) > 1e-6)
    throw std::runtime_error("boundary lift does not have degree one");
  for (int j = 0; j < grid->N; ++j)
    if (!(grid->values[static_cast<size_t>(j) + 1] > grid->values[static_cast<size_t>(j)]))
      throw PreconditionError("boundary map is not strictly monotone (broken generator?)");
  auto fn = [grid](double th) { return (*grid)(th); };
  return CircleLift::unchecked(std::move(fn), "lift:" + map.label);
}

inline CircleLift compose(const CircleLift& a, const CircleLift& b) {
  return CircleLift::unchecked([a, b](double th) { return a(b(th)); },
                               a.label() + "*" + b.label());
}

inline CircleLift iterate(const CircleLift& lift, int n) {
  return CircleLift::unchecked(
      [lift, n](double th) {
        for (int i = 0; i < n; ++i) th = lift(th);
        return th;
      },
      lift.label() + "^" + std::to_string(n));
}

// Poincare translation number estimate phi~^n(0) / (2 pi n). The error bound
// 1/n comes from |phi~^n(0) - 2 pi n rot~| <= 2 pi.
inline QmEstimate translation_number(const CircleLift& lift, int n) {
  double x = 0.0;
  for (int i = 0; i < n; ++i) x = lift(x);
  QmEstimate e;
  e.value = x / (kTwoPi * n);
  e.error_bound = 1.0 / n;
  e.meta.n = n;
  e.meta.note = "translation number, orbit length " + std::to_string(n);
  return e;
}

// f(phi~) = (1/4 pi^2) int_0^{2 pi} (phi~(theta) - theta) d theta, by the
// uniform periodic rule with n_theta nodes.
inline double mean_displacement(const CircleLift& lift, const Quadrature& q) {
  double s = 0.0;
  for (int j = 0; j < q.n_theta; ++j) {
    const double th = kTwoPi * j / q.n_theta;
    s += lift(th) - th;
  }
  return s * (kTwoPi / q.n_theta) / (4.0 * kPi * kPi);
}

// Translation number reduced mod 1; independent of the branch choice.
inline double rotation_number_mod1(const CircleLift& lift, int n) {
  return mod1(translation_number(lift, n).value);
}

}  // namespace diskqm
