#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <type_traits>

namespace esr {

/// Forward-mode dual number with up to kMaxLanes derivative lanes, of which
/// the first `n` are active. T may itself be a Dual for mixed second derivatives.
inline constexpr int kMaxLanes = 16;

template <typename T>
struct Dual {
  T v{};
  std::array<T, kMaxLanes> d{};
  int n = 0;

  Dual() = default;
  explicit Dual(T value) : v(value) {}
  explicit Dual(double value)
    requires(!std::is_same_v<T, double>)
      : v(value) {}
  static Dual variable(T value, int lane, int lanes) {
    Dual r(value);
    r.n = lanes;
    r.d[lane] = T(1.0);
    return r;
  }
};

inline double scalar(double v) { return v; }
template <typename T>
double scalar(const Dual<T>& a) { return scalar(a.v); }

inline bool is_zero(double v) { return v == 0.0; }
template <typename T>
bool is_zero(const Dual<T>& a) {
  if (!is_zero(a.v)) return false;
  for (int i = 0; i < a.n; ++i) {
    if (!is_zero(a.d[i])) return false;
  }
  return true;
}

// Scalar primitives shared by the plain and dual evaluators so values agree bitwise.
inline double powabs(double a, double b) { return std::pow(std::fabs(a), b); }
inline double absval(double a) { return std::fabs(a); }
inline double logabs(double a) { return std::log(std::fabs(a)); }
inline double signum(double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); }

template <typename T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r(a.v + b.v);
  r.n = a.n > b.n ? a.n : b.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

template <typename T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r(a.v - b.v);
  r.n = a.n > b.n ? a.n : b.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

template <typename T>
Dual<T> operator-(const Dual<T>& a) {
  Dual<T> r(-a.v);
  r.n = a.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = -a.d[i];
  return r;
}

template <typename T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r(a.v * b.v);
  r.n = a.n > b.n ? a.n : b.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

template <typename T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r(a.v / b.v);
  r.n = a.n > b.n ? a.n : b.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
  return r;
}

template <typename T>
Dual<T> absval(const Dual<T>& a) {
  Dual<T> r(absval(a.v));
  r.n = a.n;
  const double s = signum(scalar(a.v));
  for (int i = 0; i < r.n; ++i) r.d[i] = s * a.d[i];
  return r;
}

template <typename T>
Dual<T> logabs(const Dual<T>& a) {
  Dual<T> r(logabs(a.v));
  r.n = a.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] / a.v;
  return r;
}

template <typename T>
Dual<T> operator*(double s, const Dual<T>& a) {
  Dual<T> r(s * a.v);
  r.n = a.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = s * a.d[i];
  return r;
}


/// |a|^b. At a = 0 the a-derivative is 0 for b > 1 and undefined otherwise;
/// the b-derivative is 0 for b > 0. Lanes on which an argument does not
/// depend contribute nothing, so an undefined partial does not leak into them.
template <typename T>
Dual<T> powabs(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r(powabs(a.v, b.v));
  r.n = a.n > b.n ? a.n : b.n;
  const double av = scalar(a.v), bv = scalar(b.v);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  T ca, cb;
  if (av == 0.0) {
    ca = T(bv > 1.0 ? 0.0 : nan);
    cb = T(bv > 0.0 ? 0.0 : nan);
  } else {
    // d|a|^b/da = b |a|^(b-1) sign(a) = b |a|^b / a
    ca = b.v * r.v / a.v;
    cb = r.v * logabs(a.v);
  }
  for (int i = 0; i < r.n; ++i) {
    T di{};
    if (!is_zero(a.d[i])) di = di + ca * a.d[i];
    if (!is_zero(b.d[i])) di = di + cb * b.d[i];
    r.d[i] = di;
  }
  return r;
}

}  // namespace esr
