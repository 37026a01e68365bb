#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>

#include "diskqm/circle.hpp"
#include "diskqm/common.hpp"
#include "diskqm/forms.hpp"
#include "diskqm/geometry.hpp"
#include "diskqm/hamiltonian.hpp"
#include "diskqm/quadrature.hpp"
#include "diskqm/quasimorphism.hpp"

namespace diskqm {

// The time-1 flow of a Hamiltonian as a one-letter word (RK4 + variational
// Jacobian). Errors if the Hamiltonian is not boundary-constant.
inline MapWord flow_endpoint(HamiltonianPtr h, int steps) { return flow_word(std::move(h), steps); }

// A path g_t in the group with g_0 = id, carrying its generating Hamiltonian
// (i_{X_t} omega = dH_t), the endpoint word for g_1 (exact letters for the
// analytic kinds) and the canonical boundary lift with phi~_0 = id. An
// isotopy is an explicit representative of a universal-cover element.
struct Isotopy {
  enum class Kind { rotation, twist, hamiltonian, product };

  Kind kind = Kind::rotation;
  double alpha = 0.0;            // rotation: g_t = R_{t alpha}
  double s = 0.0;                // twist: g_t = Twist(t s, profile)
  RadialProfile profile;
  HamiltonianPtr gen_h;          // generating Hamiltonian (all non-product kinds)
  int steps = 256;               // flow / inverse-flow RK4 steps
  std::shared_ptr<const Isotopy> lhs, rhs;  // product: t -> lhs_t o rhs_t
  MapWord endpoint;
  std::string label;

  bool origin_fixing() const {
    switch (kind) {
      case Kind::rotation:
      case Kind::twist:
        return true;
      case Kind::hamiltonian:
        return gen_h->origin_fixing;
      case Kind::product:
        return lhs->origin_fixing() && rhs->origin_fixing();
    }
    return false;
  }

  // Value of the generating Hamiltonian of the path at time t. For products
  // this is H_t + K_t o (g_t)^{-1}, the Hamiltonian of X_t + (g_t)_* Y_t.
  double gen_value(double t, Vec2 p) const {
    if (kind != Kind::product) return gen_h->value(t, p.x, p.y);
    return lhs->gen_value(t, p) + rhs->gen_value(t, lhs->inverse_time_t(t, p));
  }

  // (g_t)^{-1}(p): closed form for the analytic kinds, backward RK4 for the
  // hamiltonian kind. Nested products are not representable.
  Vec2 inverse_time_t(double t, Vec2 p) const {
    switch (kind) {
      case Kind::rotation:
        return Mat2::rotation(-t * alpha).apply(p);
      case Kind::twist: {
        const double r = p.norm();
        if (r == 0.0) return p;
        return Mat2::rotation(-t * s * profile.f(r)).apply(p);
      }
      case Kind::hamiltonian: {
        if (t == 0.0) return p;
        const int n = std::max(16, steps / 4);
        const double dt = t / n;
        auto f = [&](double tau, Vec2 q) { return -1.0 * gen_h->field(t - tau, q); };
        for (int i = 0; i < n; ++i) {
          const double tau = i * dt;
          const Vec2 k1 = f(tau, p);
          const Vec2 k2 = f(tau + 0.5 * dt, p + 0.5 * dt * k1);
          const Vec2 k3 = f(tau + 0.5 * dt, p + 0.5 * dt * k2);
          const Vec2 k4 = f(tau + dt, p + dt * k3);
          p += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
        }
        return p;
      }
      case Kind::product:
        throw PreconditionError("unsupported combination: nested product isotopies");
    }
    return p;
  }

  // Lift of the boundary path continued from the identity at t = 0; this is
  // where the universal-cover branch bookkeeping happens.
  CircleLift canonical_lift() const {
    switch (kind) {
      case Kind::rotation:
        return rotation_lift(alpha);
      case Kind::twist:
        return rotation_lift(s * profile.f(1.0));
      case Kind::hamiltonian: {
        const double theta1 = boundary_angle_flow(*gen_h, 0.0, std::max(256, steps));
        const CircleLift base = boundary_lift(endpoint, 0);
        const int branch = static_cast<int>(std::lround((theta1 - base(0.0)) / kTwoPi));
        return branch == 0 ? base : boundary_lift(endpoint, branch);
      }
      case Kind::product:
        return compose(lhs->canonical_lift(), rhs->canonical_lift());
    }
    return rotation_lift(0.0);
  }
};

inline Isotopy rotation_path(double alpha) {
  Isotopy iso;
  iso.kind = Isotopy::Kind::rotation;
  iso.alpha = alpha;
  iso.gen_h = rotation_hamiltonian(alpha);
  iso.endpoint = rotation_word(alpha);
  iso.label = "rotation_path(" + std::to_string(alpha) + ")";
  return iso;
}

inline Isotopy twist_path(double s, RadialProfile profile) {
  Isotopy iso;
  iso.kind = Isotopy::Kind::twist;
  iso.s = s;
  iso.profile = profile;
  iso.gen_h = twist_hamiltonian(s, profile);
  iso.endpoint = twist_word(s, std::move(profile));
  iso.label = "twist_path(" + std::to_string(s) + "," + iso.profile.label + ")";
  return iso;
}

inline Isotopy hamiltonian_path(HamiltonianPtr h, int steps) {
  Isotopy iso;
  iso.kind = Isotopy::Kind::hamiltonian;
  iso.gen_h = h;
  iso.steps = steps;
  iso.endpoint = flow_word(std::move(h), steps);
  iso.label = "hamiltonian_path(" + iso.gen_h->label + ")";
  return iso;
}

// t -> a_t o b_t. Same-kind commuting paths merge into an analytic kind; the
// general case keeps the pair and evaluates the product Hamiltonian
// H_t + K_t o (a_t)^{-1} on demand. Products of products are rejected.
inline Isotopy product_isotopy(const Isotopy& a, const Isotopy& b) {
  if (a.kind == Isotopy::Kind::product || b.kind == Isotopy::Kind::product)
    throw PreconditionError("unsupported combination: nested product isotopies");
  if (a.kind == Isotopy::Kind::rotation && b.kind == Isotopy::Kind::rotation)
    return rotation_path(a.alpha + b.alpha);
  if (a.kind == Isotopy::Kind::twist && b.kind == Isotopy::Kind::twist &&
      a.profile.polynomial() && b.profile.polynomial() && a.profile.coeffs == b.profile.coeffs)
    return twist_path(a.s + b.s, a.profile);
  Isotopy iso;
  iso.kind = Isotopy::Kind::product;
  iso.lhs = std::make_shared<const Isotopy>(a);
  iso.rhs = std::make_shared<const Isotopy>(b);
  iso.endpoint = compose(a.endpoint, b.endpoint);
  iso.label = "(" + a.label + ")*(" + b.label + ")";
  return iso;
}

// R([g_t]) = int_0^1 ( int_D f_{X_t} omega ) dt with f_{X_t} the Hamiltonian
// of X_t normalized to vanish on the boundary. The boundary value is read at
// (1,0) and cross-checked at (0,1).
inline double r_functional(const Isotopy& iso, const Quadrature& q, int t_steps) {
  Quadrature inner = q;
  inner.workers = 1;
  auto node = [&](double t) {
    const double b0 = iso.gen_value(t, {1.0, 0.0});
    const double b1 = iso.gen_value(t, {0.0, 1.0});
    if (std::fabs(b0 - b1) > 1e-7)
      throw std::runtime_error("generating Hamiltonian is not constant on the boundary");
    return integrate_disk([&](Vec2 p) { return iso.gen_value(t, p) - b0; }, inner);
  };
  return integrate_1d(node, 0.0, 1.0, t_steps, q.workers);
}

// S(g_t) = int_0^1 f_t(gamma(1)) dt with f_t(o) = 0, i.e.
// int_0^1 (H_t(gamma(1)) - H_t(o)) dt. Only the boundary endpoint of gamma
// enters; a second endpoint cross-checks the gamma-independence.
inline double s_functional(const Isotopy& iso, const DiskPath& path, const Quadrature& q,
                           int t_steps) {
  if (!iso.origin_fixing())
    throw PreconditionError("s_functional requires an origin-fixing isotopy");
  if (path.anchor.norm() > 1e-12)
    throw PreconditionError("s_functional paths are anchored at the origin");
  const Vec2 end = path.gamma(1.0);
  const Vec2 alt{std::cos(2.0), std::sin(2.0)};
  const Vec2 origin{0.0, 0.0};
  const double val = integrate_1d(
      [&](double t) { return iso.gen_value(t, end) - iso.gen_value(t, origin); }, 0.0, 1.0,
      t_steps, q.workers);
  const double val_alt = integrate_1d(
      [&](double t) { return iso.gen_value(t, alt) - iso.gen_value(t, origin); }, 0.0, 1.0,
      t_steps, q.workers);
  if (std::fabs(val - val_alt) > 1e-8)
    throw std::runtime_error("S gamma-independence cross-check failed");
  return val;
}

// One verified identity: |lhs - rhs| against an explicit bound, with the
// bound decomposition spelled out for the reports.
struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string detail;

  static IdentityReport make(std::string name, double lhs, double rhs, double bound,
                             std::string detail = "", bool mod_one = false) {
    IdentityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = mod_one ? mod1_dist(lhs - rhs) : std::fabs(lhs - rhs);
    r.bound = bound;
    r.pass = r.residual <= bound;
    r.detail = std::move(detail);
    return r;
  }
};

// tau_lambda(g_1) + 2 R = pi^2 f(phi~_1): exact identity, quadrature-only
// tolerance.
inline IdentityReport verify_lemma_tau_R(const Isotopy& iso, const Quadrature& q, int t_steps,
                                         double tol = 1e-6) {
  const double lhs = tau(lambda_form(), iso.endpoint, q) + 2.0 * r_functional(iso, q, t_steps);
  const double rhs = kPi * kPi * mean_displacement(iso.canonical_lift(), q);
  return IdentityReport::make("tau + 2R = pi^2 f(phi~1) [" + iso.label + "]", lhs, rhs, tol,
                              "exact identity; bound = quadrature " + std::to_string(tol));
}

// sigma_{lambda,gamma}(g_1) - S = phi~_1(0)/2 with gamma the x-axis path:
// exact identity, quadrature-only tolerance.
inline IdentityReport verify_lemma_sigma_S(const Isotopy& iso, const Quadrature& q, int t_steps,
                                           double tol = 1e-6) {
  const DiskPath gamma = radial_path();
  const double lhs =
      sigma(lambda_form(), gamma, iso.endpoint, q) - s_functional(iso, gamma, q, t_steps);
  const double rhs = 0.5 * iso.canonical_lift()(0.0);
  return IdentityReport::make("sigma - S = phi~1(0)/2 [" + iso.label + "]", lhs, rhs, tol,
                              "exact identity; bound = quadrature " + std::to_string(tol));
}

// tau_bar(g_1) + 2 R = pi^2 rot~(phi~_1), with homogenization and orbit
// error bounds.
inline IdentityReport verify_thm_main1(const Isotopy& iso, int k_max, const Quadrature& q,
                                       int t_steps, int n_rot = 1024, double tol = 1e-4) {
  const QmEstimate tau_bar = homogenize(tau_functional(lambda_form(), q), iso.endpoint, k_max);
  const double lhs = tau_bar.value + 2.0 * r_functional(iso, q, t_steps);
  const QmEstimate rot = translation_number(iso.canonical_lift(), n_rot);
  const double rhs = kPi * kPi * rot.value;
  const double bound = tau_bar.error_bound + kPi * kPi * rot.error_bound + tol;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "bound = D^/n %.3e + pi^2/n_rot %.3e + quad %.1e",
                tau_bar.error_bound, kPi * kPi * rot.error_bound, tol);
  return IdentityReport::make("tau_bar + 2R = pi^2 rot~ [" + iso.label + "]", lhs, rhs, bound,
                              detail);
}

// sigma_bar(g_1) - S = pi rot~(phi~_1).
inline IdentityReport verify_thm_main2(const Isotopy& iso, int k_max, const Quadrature& q,
                                       int t_steps, int n_rot = 1024, double tol = 1e-4) {
  if (!iso.origin_fixing())
    throw PreconditionError("verify_thm_main2 requires an origin-fixing isotopy");
  const QmEstimate sigma_bar =
      homogenize(sigma_functional(lambda_form(), radial_path(), q), iso.endpoint, k_max);
  const double lhs = sigma_bar.value - s_functional(iso, radial_path(), q, t_steps);
  const QmEstimate rot = translation_number(iso.canonical_lift(), n_rot);
  const double rhs = kPi * rot.value;
  const double bound = sigma_bar.error_bound + kPi * rot.error_bound + tol;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "bound = D^/n %.3e + pi/n_rot %.3e + quad %.1e",
                sigma_bar.error_bound, kPi * rot.error_bound, tol);
  return IdentityReport::make("sigma_bar - S = pi rot~ [" + iso.label + "]", lhs, rhs, bound,
                              detail);
}

inline bool endpoint_is_identity(const Isotopy& iso, double tol = 1e-6) {
  for (int i = 0; i < 32; ++i) {
    const double r = std::sqrt((i + 0.5) / 32.0);
    const double th = kTwoPi * (7.0 * i) / 32.0;
    const Vec2 p{r * std::cos(th), r * std::sin(th)};
    if ((eval(iso.endpoint, p) - p).norm() > tol) return false;
  }
  return true;
}

// Loops: 2R/pi^2 must be an integer (descent of R mod Z). Non-loops: the
// mod-1 identity frac(tau_bar/pi^2) + frac(2R/pi^2) = rot (mod 1).
inline IdentityReport verify_thm_mod1(const Isotopy& iso, int k_max, const Quadrature& q,
                                      int t_steps, int n_rot = 1024, double tol = 1e-4) {
  const double two_r = 2.0 * r_functional(iso, q, t_steps) / (kPi * kPi);
  if (endpoint_is_identity(iso)) {
    const double nearest = std::round(two_r);
    return IdentityReport::make("2R/pi^2 integer on loop [" + iso.label + "]", two_r, nearest,
                                1e-6, "loop descent; bound = quadrature 1e-6");
  }
  const QmEstimate tau_bar = homogenize(tau_functional(lambda_form(), q), iso.endpoint, k_max);
  const double rot = rotation_number_mod1(boundary_lift(iso.endpoint, 0), n_rot);
  const double bound = tau_bar.error_bound / (kPi * kPi) + 1.0 / n_rot + tol;
  return IdentityReport::make("tau_bar/pi^2 + 2R/pi^2 = rot (mod 1) [" + iso.label + "]",
                              tau_bar.value / (kPi * kPi) + two_r, rot, bound,
                              "mod-1 distance; D^/(pi^2 n) + 1/n_rot + quad", true);
}

// S(a_t b_t) = S(a_t) + S(b_t); exact, so the tolerance covers quadrature
// plus (for flow-backed products) the backward-flow integration error.
inline IdentityReport s_is_homomorphism(const Isotopy& a, const Isotopy& b, const Quadrature& q,
                                        int t_steps, double tol = 1e-6) {
  const Isotopy prod = product_isotopy(a, b);
  const DiskPath gamma = radial_path();
  const double lhs = s_functional(prod, gamma, q, t_steps);
  const double rhs = s_functional(a, gamma, q, t_steps) + s_functional(b, gamma, q, t_steps);
  return IdentityReport::make("S(ab) = S(a) + S(b) [" + prod.label + "]", lhs, rhs, tol,
                              "exact identity; quadrature + product-flow tolerance");
}

}  // namespace diskqm
