#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>

#include "diskqm/common.hpp"
#include "diskqm/geometry.hpp"
#include "diskqm/quadrature.hpp"

namespace diskqm {

// eta = a dx + b dy with d(eta) = dx ^ dy. The canonical choice is
// lambda = (x dy - y dx)/2; the built-in alternatives add an exact
// differential dF, which keeps d(eta) = omega exactly.
struct PrimitiveOneForm {
  std::function<double(Vec2)> a;
  std::function<double(Vec2)> b;
  std::string label;

  Covector at(Vec2 p) const { return {a(p), b(p)}; }
};

inline PrimitiveOneForm lambda_form() {
  PrimitiveOneForm f;
  f.a = [](Vec2 p) { return -0.5 * p.y; };
  f.b = [](Vec2 p) { return 0.5 * p.x; };
  f.label = "lambda";
  return f;
}

// lambda + d(c x y) = (-y/2 + c y) dx + (x/2 + c x) dy
inline PrimitiveOneForm lambda_plus_dxy(double c) {
  PrimitiveOneForm f;
  f.a = [c](Vec2 p) { return -0.5 * p.y + c * p.y; };
  f.b = [c](Vec2 p) { return 0.5 * p.x + c * p.x; };
  f.label = "lambda+d(" + std::to_string(c) + "xy)";
  return f;
}

// lambda + d(c x^2) = (-y/2 + 2 c x) dx + (x/2) dy
inline PrimitiveOneForm lambda_plus_dx2(double c) {
  PrimitiveOneForm f;
  f.a = [c](Vec2 p) { return -0.5 * p.y + 2.0 * c * p.x; };
  f.b = [](Vec2 p) { return 0.5 * p.x; };
  f.label = "lambda+d(" + std::to_string(c) + "x^2)";
  return f;
}

// Central-difference residual of d(eta) = omega at random interior points.
inline double deta_minus_omega_residual(const PrimitiveOneForm& eta, int samples = 200,
                                        std::uint64_t seed = 7u) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = 0.9 * std::sqrt(unif(rng));
    const double th = kTwoPi * unif(rng);
    const Vec2 p{r * std::cos(th), r * std::sin(th)};
    const double db_dx = (eta.b({p.x + h, p.y}) - eta.b({p.x - h, p.y})) / (2.0 * h);
    const double da_dy = (eta.a({p.x, p.y + h}) - eta.a({p.x, p.y - h})) / (2.0 * h);
    worst = std::max(worst, std::fabs(db_dx - da_dy - 1.0));
  }
  return worst;
}

// Smooth path gamma : [0,1] -> D from an interior anchor gamma(0) to a
// boundary point gamma(1), with an analytic derivative.
struct DiskPath {
  std::function<Vec2(double)> gamma;
  std::function<Vec2(double)> dgamma;
  Vec2 anchor;
  std::string label;
};

// t -> (t, 0): origin to (1, 0) along the x-axis.
inline DiskPath radial_path() {
  DiskPath p;
  p.gamma = [](double t) { return Vec2{t, 0.0}; };
  p.dgamma = [](double) { return Vec2{1.0, 0.0}; };
  p.anchor = {0.0, 0.0};
  p.label = "radial";
  return p;
}

// Radial path rotated by beta: same anchor, different boundary endpoint.
inline DiskPath rotated_radial_path(double beta) {
  DiskPath p;
  p.gamma = [beta](double t) { return Vec2{t * std::cos(beta), t * std::sin(beta)}; };
  p.dgamma = [beta](double) { return Vec2{std::cos(beta), std::sin(beta)}; };
  p.anchor = {0.0, 0.0};
  p.label = "radial@" + std::to_string(beta);
  return p;
}

// Spiral with the same endpoints as the radial path: t -> t e^{i c t (1-t)}.
inline DiskPath curved_path(double c = 1.2) {
  DiskPath p;
  p.gamma = [c](double t) {
    const double a = c * t * (1.0 - t);
    return Vec2{t * std::cos(a), t * std::sin(a)};
  };
  p.dgamma = [c](double t) {
    const double a = c * t * (1.0 - t);
    const double da = c * (1.0 - 2.0 * t);
    return Vec2{std::cos(a) - t * std::sin(a) * da, std::sin(a) + t * std::cos(a) * da};
  };
  p.anchor = {0.0, 0.0};
  p.label = "curved";
  return p;
}

// Straight segment from an interior anchor to the boundary point in the
// direction of `towards` (unit vector). Supports basepoint-generalized sigma.
inline DiskPath anchored_path(Vec2 anchor, double towards_angle) {
  const Vec2 e{std::cos(towards_angle), std::sin(towards_angle)};
  // find t_end with |anchor + t e| = 1
  const double b = anchor.dot(e);
  const double c0 = anchor.norm2() - 1.0;
  const double t_end = -b + std::sqrt(b * b - c0);
  DiskPath p;
  p.gamma = [anchor, e, t_end](double t) { return anchor + (t * t_end) * e; };
  p.dgamma = [e, t_end](double) { return t_end * e; };
  p.anchor = anchor;
  p.label = "anchored";
  return p;
}

// (g^* eta)_p = J^T eta_{g(p)} with J the word Jacobian at p.
inline Covector pullback_at(const MapWord& g, const PrimitiveOneForm& eta, Vec2 p) {
  const auto [q, J] = eval_with_jacobian(g, p);
  return J.apply_transpose(eta.at(q));
}

// Coefficient of u ^ v against dx ^ dy.
inline double wedge_density(Covector u, Covector v) { return u.x * v.y - u.y * v.x; }

// int_gamma field . dgamma by composite Gauss-Legendre with n_path panels.
inline double integrate_path(const std::function<Covector(Vec2)>& field, const DiskPath& path,
                             const Quadrature& q) {
  return integrate_1d(
      [&](double t) { return field(path.gamma(t)).dot(path.dgamma(t)); }, 0.0, 1.0, q.n_path,
      1);
}

}  // namespace diskqm
