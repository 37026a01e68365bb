#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "diskqm/common.hpp"
#include "diskqm/profile.hpp"

namespace diskqm {

// Time-dependent Hamiltonian H(t, x, y) on [0,1] x D. The induced vector
// field follows the convention i_X omega = dH with omega = dx ^ dy, i.e.
// X = (dH/dy, -dH/dx). H must be spatially constant on the boundary circle
// for every t (equivalently: X is tangent to the boundary).
//
// hess returns (Hxx, Hxy, Hyy); when absent, the field Jacobian falls back to
// central differences of the analytic gradient.
struct TimeDependentHamiltonian {
  std::function<double(double, double, double)> value;
  std::function<Vec2(double, double, double)> grad;
  std::function<std::array<double, 3>(double, double, double)> hess;
  bool origin_fixing = false;     // X(t, o) = 0 for all t
  bool boundary_identity = false; // X(t, .) = 0 on the boundary circle
  std::string label;
  std::map<std::string, double> params;

  Vec2 field(double t, Vec2 p) const {
    const Vec2 g = grad(t, p.x, p.y);
    return {g.y, -g.x};
  }

  // DX = [[Hxy, Hyy], [-Hxx, -Hxy]]
  Mat2 field_jacobian(double t, Vec2 p) const {
    std::array<double, 3> h;
    if (hess) {
      h = hess(t, p.x, p.y);
    } else {
      const double step = 1e-5;
      const Vec2 gxp = grad(t, p.x + step, p.y), gxm = grad(t, p.x - step, p.y);
      const Vec2 gyp = grad(t, p.x, p.y + step), gym = grad(t, p.x, p.y - step);
      h = {(gxp.x - gxm.x) / (2 * step),
           0.5 * ((gxp.y - gxm.y) + (gyp.x - gym.x)) / (2 * step),
           (gyp.y - gym.y) / (2 * step)};
    }
    return {h[1], h[2], -h[0], -h[1]};
  }
};

using HamiltonianPtr = std::shared_ptr<const TimeDependentHamiltonian>;

// ---- built-in Hamiltonians -------------------------------------------------

// H = -a (x^2+y^2)/2; time-1 flow is the rigid rotation by a.
inline HamiltonianPtr rotation_hamiltonian(double a) {
  TimeDependentHamiltonian h;
  h.value = [a](double, double x, double y) { return -0.5 * a * (x * x + y * y); };
  h.grad = [a](double, double x, double y) { return Vec2{-a * x, -a * y}; };
  h.hess = [a](double, double, double) { return std::array<double, 3>{-a, 0.0, -a}; };
  h.origin_fixing = true;
  h.label = "rotation";
  h.params = {{"a", a}};
  return std::make_shared<const TimeDependentHamiltonian>(std::move(h));
}

// H = a (1-r^2)^2 / 4; vanishes to second order on the boundary, so the flow
// is the identity there. Time-1 flow equals the twist with profile a(1-r^2).
inline HamiltonianPtr radial_bump_hamiltonian(double a) {
  TimeDependentHamiltonian h;
  h.value = [a](double, double x, double y) {
    const double v = 1.0 - x * x - y * y;
    return 0.25 * a * v * v;
  };
  h.grad = [a](double, double x, double y) {
    const double v = 1.0 - x * x - y * y;
    return Vec2{-a * x * v, -a * y * v};
  };
  h.hess = [a](double, double x, double y) {
    const double v = 1.0 - x * x - y * y;
    return std::array<double, 3>{-a * v + 2 * a * x * x, 2 * a * x * y, -a * v + 2 * a * y * y};
  };
  h.origin_fixing = true;
  h.boundary_identity = true;
  h.label = "radial_bump";
  h.params = {{"a", a}};
  return std::make_shared<const TimeDependentHamiltonian>(std::move(h));
}

// H = -a r^2/2 + b c(t) (1-r^2) x^2 with c(t) = 1 (autonomous) or
// 1 + sin(2 pi t)/2. Fixes the origin, rotates the boundary, and is not
// rotationally symmetric.
inline HamiltonianPtr nonsym_hamiltonian(double a, double b, bool time_dependent = false) {
  auto c = [time_dependent](double t) { return time_dependent ? 1.0 + 0.5 * std::sin(kTwoPi * t) : 1.0; };
  TimeDependentHamiltonian h;
  h.value = [a, b, c](double t, double x, double y) {
    const double u = x * x + y * y;
    return -0.5 * a * u + b * c(t) * (1.0 - u) * x * x;
  };
  h.grad = [a, b, c](double t, double x, double y) {
    const double B = b * c(t);
    const double u = x * x + y * y;
    return Vec2{-a * x + B * 2.0 * x * (1.0 - u - x * x), -a * y - 2.0 * B * y * x * x};
  };
  h.hess = [a, b, c](double t, double x, double y) {
    const double B = b * c(t);
    return std::array<double, 3>{-a + B * (2.0 - 12.0 * x * x - 2.0 * y * y), -4.0 * B * x * y,
                                 -a - 2.0 * B * x * x};
  };
  h.origin_fixing = true;
  h.label = time_dependent ? "nonsym_td" : "nonsym";
  h.params = {{"a", a}, {"b", b}};
  return std::make_shared<const TimeDependentHamiltonian>(std::move(h));
}

// H = a (1-r^2) x: constant (zero) on the boundary but the field does NOT
// vanish at the origin. Used to exercise the anchor-not-fixed error paths.
inline HamiltonianPtr offcenter_hamiltonian(double a) {
  TimeDependentHamiltonian h;
  h.value = [a](double, double x, double y) { return a * (1.0 - x * x - y * y) * x; };
  h.grad = [a](double, double x, double y) {
    return Vec2{a * (1.0 - 3.0 * x * x - y * y), -2.0 * a * x * y};
  };
  h.hess = [a](double, double x, double y) {
    return std::array<double, 3>{-6.0 * a * x, -2.0 * a * y, -2.0 * a * x};
  };
  h.label = "offcenter";
  h.params = {{"a", a}};
  return std::make_shared<const TimeDependentHamiltonian>(std::move(h));
}

// H = a (1-r^2)^2 x^2: an element of the origin-fixing relative group that is
// not rotationally symmetric (identity on the boundary, fixes the origin).
inline HamiltonianPtr rel_nonsym_hamiltonian(double a) {
  TimeDependentHamiltonian h;
  h.value = [a](double, double x, double y) {
    const double v = 1.0 - x * x - y * y;
    return a * v * v * x * x;
  };
  h.grad = [a](double, double x, double y) {
    const double v = 1.0 - x * x - y * y;
    return Vec2{2.0 * a * x * v * (v - 2.0 * x * x), -4.0 * a * y * x * x * v};
  };
  h.hess = [a](double, double x, double y) {
    const double v = 1.0 - x * x - y * y;
    const double x2 = x * x;
    return std::array<double, 3>{2.0 * a * (v * v - 10.0 * x2 * v + 4.0 * x2 * x2),
                                 -8.0 * a * x * y * (v - x2), -4.0 * a * x2 * (v - 2.0 * y * y)};
  };
  h.origin_fixing = true;
  h.boundary_identity = true;
  h.label = "rel_nonsym";
  h.params = {{"a", a}};
  return std::make_shared<const TimeDependentHamiltonian>(std::move(h));
}

// H = a (1-r^2)^2 |p-A|^2 |p-B|^2: identity on the boundary, fixes the two
// interior anchors A and B. Supports the basepoint-generalized sigma tests.
inline HamiltonianPtr two_anchor_hamiltonian(double a, Vec2 A, Vec2 B) {
  TimeDependentHamiltonian h;
  h.value = [a, A, B](double, double x, double y) {
    const double v = 1.0 - x * x - y * y;
    const Vec2 p{x, y};
    return a * v * v * (p - A).norm2() * (p - B).norm2();
  };
  h.grad = [a, A, B](double, double x, double y) {
    const double v = 1.0 - x * x - y * y;
    const Vec2 p{x, y};
    const double pa = (p - A).norm2(), pb = (p - B).norm2();
    const Vec2 gv{-4.0 * v * x, -4.0 * v * y};
    const Vec2 gw = 2.0 * pb * (p - A) + 2.0 * pa * (p - B);
    return a * (pa * pb * gv + v * v * gw);
  };
  h.origin_fixing = false;  // unless an anchor is the origin; callers decide
  h.boundary_identity = true;
  h.label = "two_anchor";
  h.params = {{"a", a}, {"ax", A.x}, {"ay", A.y}, {"bx", B.x}, {"by", B.y}};
  return std::make_shared<const TimeDependentHamiltonian>(std::move(h));
}

// Generating Hamiltonian of the twist path g_t = (r, theta + t s f(r)):
// H(r) = -s int_0^r u f(u) du, so that X = s f(r) d/dtheta.
inline HamiltonianPtr twist_hamiltonian(double s, const RadialProfile& profile) {
  RadialProfile prof = profile;
  TimeDependentHamiltonian h;
  h.value = [s, prof](double, double x, double y) {
    return -s * prof.integral_r_f(std::sqrt(x * x + y * y));
  };
  h.grad = [s, prof](double, double x, double y) {
    const double f = prof.f(std::sqrt(x * x + y * y));
    return Vec2{-s * f * x, -s * f * y};
  };
  h.hess = [s, prof](double, double x, double y) {
    const double r = std::sqrt(x * x + y * y);
    const double f = prof.f(r), fpr = prof.fprime_over_r(r);
    return std::array<double, 3>{-s * (f + x * x * fpr), -s * x * y * fpr,
                                 -s * (f + y * y * fpr)};
  };
  h.origin_fixing = true;
  h.boundary_identity = (std::fabs(s * prof.f(1.0)) < 1e-15);
  h.label = "twist:" + prof.label;
  h.params = {{"s", s}};
  return std::make_shared<const TimeDependentHamiltonian>(std::move(h));
}

// ---- flow integration ------------------------------------------------------

// Time-1 RK4 flow of X (or of the reversed field when inverted: the flow of
// -X(1-t, .), which is the inverse map).
inline Vec2 rk4_flow(const TimeDependentHamiltonian& h, Vec2 p, int steps, bool inverted = false) {
  auto f = [&](double t, Vec2 q) -> Vec2 {
    return inverted ? -1.0 * h.field(1.0 - t, q) : h.field(t, q);
  };
  const double dt = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    const Vec2 k1 = f(t, p);
    const Vec2 k2 = f(t + 0.5 * dt, p + 0.5 * dt * k1);
    const Vec2 k3 = f(t + 0.5 * dt, p + 0.5 * dt * k2);
    const Vec2 k4 = f(t + dt, p + dt * k3);
    p += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
  }
  return p;
}

// Flow together with the tangent map, integrating dJ/dt = DX(t, x(t)) J on
// the same RK4 grid.
inline std::pair<Vec2, Mat2> rk4_flow_with_jacobian(const TimeDependentHamiltonian& h, Vec2 p,
                                                    int steps, bool inverted = false) {
  auto f = [&](double t, Vec2 q) -> Vec2 {
    return inverted ? -1.0 * h.field(1.0 - t, q) : h.field(t, q);
  };
  auto df = [&](double t, Vec2 q) -> Mat2 {
    return inverted ? h.field_jacobian(1.0 - t, q) * -1.0 : h.field_jacobian(t, q);
  };
  Mat2 J = Mat2::identity();
  const double dt = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    const Vec2 k1 = f(t, p);
    const Mat2 K1 = df(t, p) * J;
    const Vec2 p2 = p + 0.5 * dt * k1;
    const Vec2 k2 = f(t + 0.5 * dt, p2);
    const Mat2 K2 = df(t + 0.5 * dt, p2) * (J + K1 * (0.5 * dt));
    const Vec2 p3 = p + 0.5 * dt * k2;
    const Vec2 k3 = f(t + 0.5 * dt, p3);
    const Mat2 K3 = df(t + 0.5 * dt, p3) * (J + K2 * (0.5 * dt));
    const Vec2 p4 = p + dt * k3;
    const Vec2 k4 = f(t + dt, p4);
    const Mat2 K4 = df(t + dt, p4) * (J + K3 * dt);
    p += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
    J = J + (K1 + (K2 + K3) * 2.0 + K4) * (dt / 6.0);
  }
  return {p, J};
}

// Track the boundary angle under the flow: dTheta/dt equals the tangential
// speed of X at (cos Theta, sin Theta). Gives the canonical lift value of the
// boundary circle path started at theta0.
inline double boundary_angle_flow(const TimeDependentHamiltonian& h, double theta0, int steps) {
  auto f = [&](double t, double th) {
    const Vec2 X = h.field(t, {std::cos(th), std::sin(th)});
    return X.dot({-std::sin(th), std::cos(th)});
  };
  double th = theta0;
  const double dt = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    const double k1 = f(t, th);
    const double k2 = f(t + 0.5 * dt, th + 0.5 * dt * k1);
    const double k3 = f(t + 0.5 * dt, th + 0.5 * dt * k2);
    const double k4 = f(t + dt, th + dt * k3);
    th += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
  }
  return th;
}

// Spot checks of the declared structure; used by flow-map construction and by
// the validation report.
inline double boundary_constancy_residual(const TimeDependentHamiltonian& h, int t_samples = 9,
                                          int theta_samples = 16) {
  double worst = 0.0;
  for (int i = 0; i < t_samples; ++i) {
    const double t = static_cast<double>(i) / (t_samples - 1);
    const double ref = h.value(t, 1.0, 0.0);
    for (int j = 0; j < theta_samples; ++j) {
      const double th = kTwoPi * j / theta_samples;
      worst = std::max(worst, std::fabs(h.value(t, std::cos(th), std::sin(th)) - ref));
    }
  }
  return worst;
}

inline double origin_field_residual(const TimeDependentHamiltonian& h, int t_samples = 17) {
  double worst = 0.0;
  for (int i = 0; i < t_samples; ++i) {
    const double t = static_cast<double>(i) / (t_samples - 1);
    worst = std::max(worst, h.field(t, {0.0, 0.0}).norm());
  }
  return worst;
}

inline double boundary_field_residual(const TimeDependentHamiltonian& h, int t_samples = 9,
                                      int theta_samples = 16) {
  double worst = 0.0;
  for (int i = 0; i < t_samples; ++i) {
    const double t = static_cast<double>(i) / (t_samples - 1);
    for (int j = 0; j < theta_samples; ++j) {
      const double th = kTwoPi * j / theta_samples;
      worst = std::max(worst, h.field(t, {std::cos(th), std::sin(th)}).norm());
    }
  }
  return worst;
}

}  // namespace diskqm
