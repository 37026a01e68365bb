#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace diskqm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

// Default tolerances. CLI flags can override the ones that matter at runtime.
inline constexpr double kEpsGeom = 1e-12;        // disk-membership slack for closed-form maps
inline constexpr double kEpsSympClosed = 1e-8;   // |det J - 1| for closed-form letters
inline constexpr double kEpsSympFlow = 1e-6;     // |det J - 1| per flow letter
inline constexpr double kBoundaryTolClosed = 1e-9;
inline constexpr double kBoundaryTolFlow = 1e-6;
inline constexpr double kOriginTol = 1e-9;
// Evaluating a word at a point that a previous flow letter produced can sit
// slightly outside the unit circle; the domain check allows for that drift.
inline constexpr double kDomainSlack = 1e-7;

// Violated operation precondition (e.g. Calabi invariant on a map that is not
// the identity on the boundary). The CLI maps this to exit code 3.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed map/isotopy spec input. The CLI maps this to exit code 2.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

using Point = Vec2;
using Covector = Vec2;

struct Mat2 {
  // row-major: [m00 m01; m10 m11]
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 rotation(double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {c, -s, s, c};
  }
  double det() const { return m00 * m11 - m01 * m10; }
  Mat2 operator*(const Mat2& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  Mat2 operator+(const Mat2& o) const {
    return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
  }
  Mat2 operator*(double s) const { return {m00 * s, m01 * s, m10 * s, m11 * s}; }
  Vec2 apply(Vec2 v) const { return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y}; }
  Vec2 apply_transpose(Vec2 v) const { return {m00 * v.x + m10 * v.y, m01 * v.x + m11 * v.y}; }
  Mat2 transpose() const { return {m00, m10, m01, m11}; }
};

// Value of a (quasi-)morphism together with a model-level error bound.
// Identities between estimates are asserted within the sum of the
// participating error bounds plus an explicit quadrature tolerance.
struct QmEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  struct Meta {
    long n = 1;                    // power used (2^k_max) or iteration count
    double defect_estimate = 0.0;  // sampled defect D^ (an under-estimate of the true sup)
    std::vector<double> sequence;  // k -> base(g^{2^k}) / 2^k, for convergence display
    std::string note;
  } meta;
};

inline double mod1(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;  // guard against floor rounding at integers
  return f;
}

// Distance from x to the nearest integer.
inline double mod1_dist(double x) { return std::fabs(x - std::round(x)); }

// Reduce an angle to [0, 2pi).
inline double principal_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Deterministic sum of item(0..n-1): partial results are stored per item and
// reduced in index order, so the value does not depend on the worker count.
inline double parallel_sum(int n, const std::function<double(int)>& item, int workers = 1) {
  std::vector<double> parts(static_cast<size_t>(n), 0.0);
  if (workers <= 1 || n < 2 * workers) {
    for (int i = 0; i < n; ++i) parts[static_cast<size_t>(i)] = item(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (int i = w; i < n; i += workers) parts[static_cast<size_t>(i)] = item(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  double s = 0.0;
  for (double p : parts) s += p;
  return s;
}

}  // namespace diskqm
