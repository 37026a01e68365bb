#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "diskqm/common.hpp"
#include "diskqm/hamiltonian.hpp"
#include "diskqm/profile.hpp"

namespace diskqm {

enum class Tri { yes, no, unknown };

inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::yes && b == Tri::yes) return Tri::yes;
  return Tri::unknown;
}

// ---- generators -------------------------------------------------------------

struct RigidRotation {
  double alpha = 0.0;
};

// (r, theta) -> (r, theta + s f(r)); exactly area-preserving.
struct TwistMap {
  double s = 0.0;
  RadialProfile profile;
};

// Time-1 flow of a Hamiltonian vector field, by RK4 with `steps` steps; the
// Jacobian comes from the variational equation on the same grid. The inverse
// letter integrates the time-reversed negated field.
struct HamiltonianFlow {
  HamiltonianPtr hamiltonian;
  int steps = 256;
};

using Generator = std::variant<RigidRotation, TwistMap, HamiltonianFlow>;
using GeneratorPtr = std::shared_ptr<const Generator>;

struct Letter {
  GeneratorPtr gen;
  bool inverted = false;
};

namespace detail {

inline Vec2 letter_eval(const Letter& L, Vec2 p) {
  if (const auto* rot = std::get_if<RigidRotation>(L.gen.get())) {
    const double a = L.inverted ? -rot->alpha : rot->alpha;
    return Mat2::rotation(a).apply(p);
  }
  if (const auto* tw = std::get_if<TwistMap>(L.gen.get())) {
    const double s = L.inverted ? -tw->s : tw->s;
    const double r = p.norm();
    if (r == 0.0) return p;
    return Mat2::rotation(s * tw->profile.f(r)).apply(p);
  }
  const auto& fl = std::get<HamiltonianFlow>(*L.gen);
  return rk4_flow(*fl.hamiltonian, p, fl.steps, L.inverted);
}

inline std::pair<Vec2, Mat2> letter_eval_jac(const Letter& L, Vec2 p) {
  if (const auto* rot = std::get_if<RigidRotation>(L.gen.get())) {
    const double a = L.inverted ? -rot->alpha : rot->alpha;
    const Mat2 R = Mat2::rotation(a);
    return {R.apply(p), R};
  }
  if (const auto* tw = std::get_if<TwistMap>(L.gen.get())) {
    const double s = L.inverted ? -tw->s : tw->s;
    const double r = p.norm();
    const Mat2 R = Mat2::rotation(s * tw->profile.f(r));
    if (r == 0.0) return {p, R};
    // D(R(s f(r)) p) = R (I + c J p p^T), c = s f'(r)/r, J = rotation by pi/2;
    // det(I + c J p p^T) = 1 identically.
    const double c = s * tw->profile.fprime_over_r(r);
    const Mat2 shear{1.0 - c * p.x * p.y, -c * p.y * p.y, c * p.x * p.x, 1.0 + c * p.x * p.y};
    return {R.apply(p), R * shear};
  }
  const auto& fl = std::get<HamiltonianFlow>(*L.gen);
  return rk4_flow_with_jacobian(*fl.hamiltonian, p, fl.steps, L.inverted);
}

inline bool letter_has_flow(const Letter& L) {
  return std::holds_alternative<HamiltonianFlow>(*L.gen);
}

inline Tri letter_fixes_origin(const Letter& L) {
  if (const auto* fl = std::get_if<HamiltonianFlow>(L.gen.get()))
    return fl->hamiltonian->origin_fixing ? Tri::yes : Tri::unknown;
  return Tri::yes;
}

inline Tri letter_boundary_identity(const Letter& L) {
  if (const auto* rot = std::get_if<RigidRotation>(L.gen.get()))
    return rot->alpha == 0.0 ? Tri::yes : Tri::no;
  if (const auto* tw = std::get_if<TwistMap>(L.gen.get()))
    return std::fabs(tw->s * tw->profile.f(1.0)) < 1e-15 ? Tri::yes : Tri::no;
  const auto& fl = std::get<HamiltonianFlow>(*L.gen);
  return fl.hamiltonian->boundary_identity ? Tri::yes : Tri::unknown;
}

}  // namespace detail

// ---- words ------------------------------------------------------------------

// A disk symplectomorphism as a composition word of generators. letters[0] is
// the outermost map: evaluation applies letters right-to-left. Words are
// immutable value types; eval/jacobian are pure.
struct MapWord {
  std::vector<Letter> letters;
  Tri fixes_origin = Tri::yes;       // identity word fixes everything
  Tri boundary_identity = Tri::yes;
  std::string label;

  static MapWord identity() { return MapWord{}; }

  static MapWord from_letters(std::vector<Letter> ls, std::string label = "") {
    MapWord w;
    w.letters = std::move(ls);
    w.label = std::move(label);
    for (const Letter& L : w.letters) {
      w.fixes_origin = tri_and(w.fixes_origin, detail::letter_fixes_origin(L));
      w.boundary_identity = tri_and(w.boundary_identity, detail::letter_boundary_identity(L));
    }
    return w;
  }

  bool has_flow_letter() const {
    for (const Letter& L : letters)
      if (detail::letter_has_flow(L)) return true;
    return false;
  }

  int flow_letter_count() const {
    int n = 0;
    for (const Letter& L : letters)
      if (detail::letter_has_flow(L)) ++n;
    return n;
  }
};

inline MapWord rotation_word(double alpha) {
  return MapWord::from_letters({{std::make_shared<const Generator>(RigidRotation{alpha}), false}},
                               "rotation");
}

inline MapWord twist_word(double s, RadialProfile profile) {
  std::string label = "twist:" + profile.label;
  return MapWord::from_letters(
      {{std::make_shared<const Generator>(TwistMap{s, std::move(profile)}), false}}, label);
}

// Wraps the time-1 flow of H as a one-letter word. Errors if H is not
// spatially constant on the boundary (the field would not be tangent).
inline MapWord flow_word(HamiltonianPtr h, int steps) {
  if (steps < 16) throw PreconditionError("flow steps must be >= 16");
  const double res = boundary_constancy_residual(*h);
  if (res > 1e-8)
    throw PreconditionError("hamiltonian is not spatially constant on the boundary (residual " +
                            std::to_string(res) + ")");
  if (h->origin_fixing && origin_field_residual(*h) > 1e-10)
    throw PreconditionError("hamiltonian declared origin-fixing but the field does not vanish at the origin");
  std::string label = "flow:" + h->label;
  return MapWord::from_letters(
      {{std::make_shared<const Generator>(HamiltonianFlow{std::move(h), steps}), false}}, label);
}

namespace detail {
inline void check_domain(Vec2 p) {
  if (p.norm2() > 1.0 + 2.0 * kDomainSlack)
    throw std::domain_error("point outside the closed unit disk");
}
}  // namespace detail

inline Vec2 eval(const MapWord& w, Vec2 p) {
  detail::check_domain(p);
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) p = detail::letter_eval(*it, p);
  return p;
}

// One traversal computing the image point and the chain-rule Jacobian, each
// letter's Jacobian taken at the correct intermediate point.
inline std::pair<Vec2, Mat2> eval_with_jacobian(const MapWord& w, Vec2 p) {
  detail::check_domain(p);
  Mat2 J = Mat2::identity();
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    auto [q, Jl] = detail::letter_eval_jac(*it, p);
    J = Jl * J;
    p = q;
  }
  return {p, J};
}

inline Mat2 jacobian(const MapWord& w, Vec2 p) { return eval_with_jacobian(w, p).second; }

inline MapWord compose(const MapWord& a, const MapWord& b) {
  MapWord w;
  w.letters.reserve(a.letters.size() + b.letters.size());
  w.letters.insert(w.letters.end(), a.letters.begin(), a.letters.end());
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  w.fixes_origin = tri_and(a.fixes_origin, b.fixes_origin);
  w.boundary_identity = tri_and(a.boundary_identity, b.boundary_identity);
  return w;
}

inline MapWord inverse(const MapWord& g) {
  MapWord w;
  w.letters.reserve(g.letters.size());
  for (auto it = g.letters.rbegin(); it != g.letters.rend(); ++it)
    w.letters.push_back({it->gen, !it->inverted});
  w.fixes_origin = g.fixes_origin;
  w.boundary_identity = g.boundary_identity;
  return w;
}

// n-fold composition word (inverse word repeated for negative n).
inline MapWord power(const MapWord& g, long n) {
  if (n == 0) return MapWord::identity();
  const MapWord base = n > 0 ? g : inverse(g);
  const size_t reps = static_cast<size_t>(n > 0 ? n : -n);
  MapWord w;
  w.letters.reserve(reps * base.letters.size());
  for (size_t i = 0; i < reps; ++i)
    w.letters.insert(w.letters.end(), base.letters.begin(), base.letters.end());
  w.fixes_origin = g.fixes_origin;
  w.boundary_identity = g.boundary_identity;
  return w;
}

// ---- validation ---------------------------------------------------------------

struct ValidationReport {
  double max_det_residual = 0.0;       // max |det J - 1| over interior samples
  double max_boundary_escape = 0.0;    // max | ||eval(p)|| - 1 | over boundary samples
  double origin_displacement = 0.0;    // ||eval(o)|| when fixes_origin is claimed
  double max_boundary_identity_displacement = 0.0;  // when boundary_identity is claimed
  int interior_samples = 0;
  int boundary_samples = 0;
  double det_tolerance = 0.0;
  double boundary_tolerance = 0.0;

  bool symplectic_ok() const { return max_det_residual <= det_tolerance; }
  bool boundary_ok() const { return max_boundary_escape <= boundary_tolerance; }
  bool ok() const {
    return symplectic_ok() && boundary_ok() && origin_displacement <= kOriginTol &&
           max_boundary_identity_displacement <= boundary_tolerance;
  }
};

// det J drifts additively with the number of flow letters; closed-form
// letters are exact up to roundoff.
inline double symplectic_tolerance(const MapWord& w) {
  const int nf = w.flow_letter_count();
  return nf > 0 ? kEpsSympFlow * nf : kEpsSympClosed;
}

inline double boundary_tolerance(const MapWord& w) {
  const int nf = w.flow_letter_count();
  return nf > 0 ? kBoundaryTolFlow * nf : kBoundaryTolClosed;
}

inline ValidationReport validate(const MapWord& w, int samples) {
  ValidationReport rep;
  rep.interior_samples = samples;
  rep.boundary_samples = 256;
  rep.det_tolerance = symplectic_tolerance(w);
  rep.boundary_tolerance = boundary_tolerance(w);
  std::mt19937_64 rng(0x5ca1ab1eULL);  // fixed seed: reports are reproducible
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < samples; ++i) {
    const double r = std::sqrt(unif(rng));
    const double th = kTwoPi * unif(rng);
    const auto [q, J] = eval_with_jacobian(w, {r * std::cos(th), r * std::sin(th)});
    (void)q;
    rep.max_det_residual = std::max(rep.max_det_residual, std::fabs(J.det() - 1.0));
  }
  for (int j = 0; j < rep.boundary_samples; ++j) {
    const double th = kTwoPi * j / rep.boundary_samples;
    const Vec2 p{std::cos(th), std::sin(th)};
    const Vec2 q = eval(w, p);
    rep.max_boundary_escape = std::max(rep.max_boundary_escape, std::fabs(q.norm() - 1.0));
    if (w.boundary_identity == Tri::yes)
      rep.max_boundary_identity_displacement =
          std::max(rep.max_boundary_identity_displacement, (q - p).norm());
  }
  if (w.fixes_origin == Tri::yes) rep.origin_displacement = eval(w, {0.0, 0.0}).norm();
  return rep;
}

// Cheap symplecticity gate used by the functionals; det check only, so it
// stays a small fraction of one quadrature pass even on long words.
inline void require_symplectic(const MapWord& w, int samples = 12) {
  const double tol = symplectic_tolerance(w);
  std::mt19937_64 rng(0x5ca1ab1eULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = std::sqrt(unif(rng));
    const double th = kTwoPi * unif(rng);
    const Mat2 J = eval_with_jacobian(w, {r * std::cos(th), r * std::sin(th)}).second;
    worst = std::max(worst, std::fabs(J.det() - 1.0));
  }
  if (worst > tol)
    throw PreconditionError("map failed symplectic validation: max |det J - 1| = " +
                            std::to_string(worst));
}

}  // namespace diskqm
