#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "diskqm/circle.hpp"
#include "diskqm/common.hpp"
#include "diskqm/forms.hpp"
#include "diskqm/geometry.hpp"
#include "diskqm/quadrature.hpp"

namespace diskqm {

// tau_eta(g) = int_D g^*eta ^ eta. Not a homomorphism, not eta-independent;
// both defects disappear under homogenization.
inline double tau(const PrimitiveOneForm& eta, const MapWord& g, const Quadrature& q) {
  require_symplectic(g);
  return integrate_disk(
      [&](Vec2 p) { return wedge_density(pullback_at(g, eta, p), eta.at(p)); }, q);
}

namespace detail {
inline void require_fixes_anchor(const MapWord& g, Vec2 anchor) {
  const Vec2 image = eval(g, anchor);
  if ((image - anchor).norm() > 1e-9)
    throw PreconditionError("map does not fix the path anchor (required for sigma/flux)");
}
}  // namespace detail

// sigma_{eta,gamma}(g) = int_gamma g^*eta - eta, defined on the stabilizer of
// the path anchor.
inline double sigma(const PrimitiveOneForm& eta, const DiskPath& path, const MapWord& g,
                    const Quadrature& q) {
  require_symplectic(g);
  detail::require_fixes_anchor(g, path.anchor);
  return integrate_path(
      [&](Vec2 p) { return pullback_at(g, eta, p) - eta.at(p); }, path, q);
}

// Calabi invariant on boundary-identity words: tau_lambda, cross-checked
// against one alternative primitive (eta-independence holds exactly on G_rel).
inline double calabi(const MapWord& g, const Quadrature& q) {
  if (g.boundary_identity != Tri::yes)
    throw PreconditionError("calabi requires boundary_identity = yes");
  const double v = tau(lambda_form(), g, q);
  const double v_alt = tau(lambda_plus_dxy(0.4), g, q);
  if (std::fabs(v - v_alt) > 1e-6)
    throw std::runtime_error("calabi eta-independence check failed: |" + std::to_string(v) +
                             " - " + std::to_string(v_alt) + "| > 1e-6");
  return v;
}

// Real-valued flux on origin-fixing boundary-identity words, cross-checked
// against an alternative (eta, gamma) pair.
inline double flux(const MapWord& g, const DiskPath& path, const Quadrature& q) {
  if (g.boundary_identity != Tri::yes)
    throw PreconditionError("flux requires boundary_identity = yes");
  const double v = sigma(lambda_form(), path, g, q);
  const DiskPath alt_path = anchored_path(path.anchor, 2.1);
  const double v_alt = sigma(lambda_plus_dx2(0.3), alt_path, g, q);
  if (std::fabs(v - v_alt) > 1e-6)
    throw std::runtime_error("flux (eta, gamma)-independence check failed");
  return v;
}

using MapFunctional = std::function<double(const MapWord&)>;

inline MapFunctional tau_functional(PrimitiveOneForm eta, Quadrature q) {
  return [eta, q](const MapWord& g) { return tau(eta, g, q); };
}

inline MapFunctional sigma_functional(PrimitiveOneForm eta, DiskPath path, Quadrature q) {
  return [eta, path, q](const MapWord& g) { return sigma(eta, path, g, q); };
}

// Homogenization along powers 2^k: value = base(g^n)/n at n = 2^k_max.
// The defect estimate D^ is the maximum coboundary observed over the power
// pairs (g^{2^k}, g^{2^k}) encountered during the run; by telescoping, these
// are exactly the defects that control |base(g^n)/n - limit| <= D/n. D^ is a
// sample maximum, i.e. an under-estimate of the true defect sup.
inline QmEstimate homogenize(const MapFunctional& base, const MapWord& g, int k_max) {
  std::vector<double> raw(static_cast<size_t>(k_max) + 1);
  MapWord w = g;
  for (int k = 0; k <= k_max; ++k) {
    raw[static_cast<size_t>(k)] = base(w);
    if (k < k_max) w = compose(w, w);
  }
  QmEstimate e;
  const long n = 1L << k_max;
  double defect = 0.0;
  e.meta.sequence.resize(static_cast<size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    e.meta.sequence[static_cast<size_t>(k)] = raw[static_cast<size_t>(k)] / (1L << k);
    if (k < k_max)
      defect = std::max(defect,
                        std::fabs(raw[static_cast<size_t>(k) + 1] - 2.0 * raw[static_cast<size_t>(k)]));
  }
  e.value = raw[static_cast<size_t>(k_max)] / n;
  e.meta.n = n;
  e.meta.defect_estimate = defect;
  e.error_bound = defect / n;
  e.meta.note = "homogenized over powers 2^k, k <= " + std::to_string(k_max) +
                "; heuristic bound D^/n from sampled power defects";
  return e;
}

// Homogenization of the mean displacement along lift iterates; converges to
// the translation number.
inline QmEstimate homogenize_lift(const CircleLift& lift, int k_max, const Quadrature& q) {
  std::vector<double> raw(static_cast<size_t>(k_max) + 1);
  CircleLift cur = lift;
  for (int k = 0; k <= k_max; ++k) {
    raw[static_cast<size_t>(k)] = 4.0 * kPi * kPi * mean_displacement(cur, q);
    if (k < k_max) cur = compose(cur, cur);
  }
  QmEstimate e;
  const long n = 1L << k_max;
  double defect = 0.0;
  e.meta.sequence.resize(static_cast<size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    e.meta.sequence[static_cast<size_t>(k)] =
        raw[static_cast<size_t>(k)] / (1L << k) / (4.0 * kPi * kPi);
    if (k < k_max)
      defect = std::max(defect,
                        std::fabs(raw[static_cast<size_t>(k) + 1] - 2.0 * raw[static_cast<size_t>(k)]));
  }
  e.value = raw[static_cast<size_t>(k_max)] / n / (4.0 * kPi * kPi);
  e.meta.n = n;
  e.meta.defect_estimate = defect / (4.0 * kPi * kPi);
  e.error_bound = e.meta.defect_estimate / n;
  e.meta.note = "homogenized mean displacement (value normalized to rotation units)";
  return e;
}

// delta base(g, h) = base(g) + base(h) - base(gh).
inline double coboundary(const MapFunctional& base, const MapWord& g, const MapWord& h) {
  return base(g) + base(h) - base(compose(g, h));
}

// Seeded, reproducible battery of words and test pairs.
struct GroupSample {
  std::vector<MapWord> words;
  std::vector<std::pair<int, int>> pairs;  // indices into words
  std::uint64_t seed = 0;
};

struct GroupSampleOptions {
  int count = 12;
  int max_letters = 3;
  bool include_flows = false;  // adds nonsym Hamiltonian-flow letters
  int flow_steps = 32;
  bool boundary_identity_only = false;  // bump twists / relative flows only
};

inline GroupSample make_group_sample(std::uint64_t seed, const GroupSampleOptions& opt = {}) {
  GroupSample sample;
  sample.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto rand_in = [&](double lo, double hi) { return lo + (hi - lo) * unif(rng); };
  for (int i = 0; i < opt.count; ++i) {
    std::uniform_int_distribution<int> len_dist(1, opt.max_letters);
    const int len = len_dist(rng);
    MapWord w = MapWord::identity();
    bool used_flow = false;
    for (int l = 0; l < len; ++l) {
      const double pick = unif(rng);
      MapWord letter;
      if (opt.boundary_identity_only) {
        if (opt.include_flows && !used_flow && pick < 0.3) {
          letter = flow_word(rel_nonsym_hamiltonian(rand_in(0.2, 0.6)), opt.flow_steps);
          used_flow = true;
        } else {
          letter = twist_word(rand_in(-1.0, 1.0), bump_profile());
        }
      } else if (opt.include_flows && !used_flow && pick < 0.35) {
        letter = flow_word(nonsym_hamiltonian(rand_in(0.3, 0.9), rand_in(0.2, 0.5), true),
                           opt.flow_steps);
        used_flow = true;
      } else if (pick < 0.6) {
        letter = twist_word(rand_in(-1.0, 1.0), unif(rng) < 0.5 ? r2_profile() : bump_profile());
      } else {
        letter = rotation_word(rand_in(-kPi, kPi));
      }
      if (unif(rng) < 0.25) letter = inverse(letter);
      w = compose(w, letter);
    }
    w.label = "sample" + std::to_string(i);
    sample.words.push_back(std::move(w));
  }
  std::uniform_int_distribution<int> idx(0, opt.count - 1);
  for (int k = 0; k < opt.count; ++k) sample.pairs.emplace_back(idx(rng), idx(rng));
  return sample;
}

// Max sampled coboundary over the pair list: an under-estimate of the true
// defect sup, reported as such.
inline double defect_estimate(const MapFunctional& base, const GroupSample& sample) {
  double worst = 0.0;
  for (const auto& [i, j] : sample.pairs)
    worst = std::max(worst, std::fabs(coboundary(base, sample.words[static_cast<size_t>(i)],
                                                 sample.words[static_cast<size_t>(j)])));
  return worst;
}

// Theorem "tau-bar minus pi sigma-bar is a homomorphism" witness value on an
// origin-fixing word.
inline QmEstimate hom_difference(const MapWord& g, int k_max, const Quadrature& q) {
  detail::require_fixes_anchor(g, {0.0, 0.0});
  const QmEstimate t = homogenize(tau_functional(lambda_form(), q), g, k_max);
  const QmEstimate s = homogenize(sigma_functional(lambda_form(), radial_path(), q), g, k_max);
  QmEstimate e;
  e.value = t.value - kPi * s.value;
  e.error_bound = t.error_bound + kPi * s.error_bound;
  e.meta.n = t.meta.n;
  e.meta.defect_estimate = t.meta.defect_estimate + kPi * s.meta.defect_estimate;
  e.meta.note = "tau_bar - pi sigma_bar";
  return e;
}

// (frac(tau_bar / pi^2), rotation number mod 1): the two mod-1 reductions in
// the rotation-number identity. The R-side reduction lives with the isotopy
// functionals.
inline std::pair<double, double> mod1_reductions(const MapWord& g, int k_max, const Quadrature& q,
                                                 int n_rot = 1024) {
  const QmEstimate t = homogenize(tau_functional(lambda_form(), q), g, k_max);
  const double rot = rotation_number_mod1(boundary_lift(g, 0), n_rot);
  return {mod1(t.value / (kPi * kPi)), rot};
}

}  // namespace diskqm
