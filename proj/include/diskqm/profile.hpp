#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "diskqm/common.hpp"
#include "diskqm/quadrature.hpp"

namespace diskqm {

// Radial profile f : [0,1] -> R of an angular twist (r,theta) -> (r, theta + s f(r)).
// The preferred representation is a polynomial in u = r^2, which keeps f smooth
// at the origin (f'(0) = 0 automatically) and gives exact derivatives and the
// exact moment integral needed by the twist Hamiltonian. Arbitrary callables
// are accepted as a fallback; they must satisfy fprime(0) = 0.
struct RadialProfile {
  std::vector<double> coeffs;  // f(r) = sum_k coeffs[k] * (r^2)^k, when non-empty
  std::function<double(double)> f_fn;
  std::function<double(double)> fprime_fn;
  std::string label;

  bool polynomial() const { return !coeffs.empty(); }

  double f(double r) const {
    if (!polynomial()) return f_fn(r);
    const double u = r * r;
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) acc = acc * u + coeffs[k];
    return acc;
  }

  double fprime(double r) const {
    if (!polynomial()) return fprime_fn(r);
    return 2.0 * r * dPdu(r * r);
  }

  // f'(r)/r, which stays finite at r = 0; the twist Jacobian needs it there.
  double fprime_over_r(double r) const {
    if (polynomial()) return 2.0 * dPdu(r * r);
    const double rr = (r < 1e-9) ? 1e-9 : r;
    return fprime_fn(rr) / rr;
  }

  // int_0^r u f(u) du; closed form for polynomial profiles, 32-point
  // Gauss-Legendre otherwise. This is the radial moment generating the twist
  // Hamiltonian H(r) = -s * integral_r_f(r).
  double integral_r_f(double r) const;
};

inline RadialProfile profile_from_coeffs(std::vector<double> c, std::string label) {
  RadialProfile p;
  p.coeffs = std::move(c);
  p.label = std::move(label);
  return p;
}

// f(r) = r^2; f(1) = 1, so the boundary rotates by s.
inline RadialProfile r2_profile() { return profile_from_coeffs({0.0, 1.0}, "r2"); }

// f(r) = (1 - r^2)^2; f(1) = 0 and the gradient vanishes on the boundary,
// so the twist is the identity on a neighborhood-free sense of the boundary
// circle itself (an element of G_rel).
inline RadialProfile bump_profile() { return profile_from_coeffs({1.0, -2.0, 1.0}, "bump"); }

inline double RadialProfile::integral_r_f(double r) const {
  if (polynomial()) {
    // int_0^r u f(u) du = 1/2 int_0^{r^2} P(w) dw with P the poly in w = u^2.
    const double u = r * r;
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) acc = acc * u + coeffs[k] / static_cast<double>(k + 1);
    return 0.5 * u * acc;
  }
  const auto& [nodes, weights] = detail::gauss_legendre(32);
  double s = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const double u = 0.5 * r * (nodes[i] + 1.0);
    s += weights[i] * u * f(u);
  }
  return 0.5 * r * s;
}

}  // namespace diskqm
