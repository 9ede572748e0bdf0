#ifndef ISOPHOTE_TAYLOR_HPP
#define ISOPHOTE_TAYLOR_HPP

// Truncated univariate Taylor series f(t0 + h) = sum_k c[k] h^k, k < N.
// Arithmetic and elementary functions propagate coefficients exactly
// (Taylor-mode differentiation), so evaluating a symbolic tree at a series
// argument yields all derivatives along a curve up to order N-1.

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstddef>

namespace isophote {

template <std::size_t N>
struct Taylor {
  static_assert(N >= 1);
  std::array<double, N> c{};

  Taylor() = default;
  Taylor(double value) { c[0] = value; }  // NOLINT: implicit promotion of constants

  static Taylor variable(double t0) {
    Taylor r(t0);
    if constexpr (N > 1) r.c[1] = 1.0;
    return r;
  }

  double value() const { return c[0]; }

  /// k-th derivative at the expansion point.
  double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return c[k] * f;
  }

  Taylor& operator+=(const Taylor& o) {
    for (std::size_t k = 0; k < N; ++k) c[k] += o.c[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (std::size_t k = 0; k < N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

  Taylor operator-() const {
    Taylor r;
    for (std::size_t k = 0; k < N; ++k) r.c[k] = -c[k];
    return r;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (std::size_t k = 0; k < N; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
      r.c[k] = s;
    }
    return r;
  }

  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (std::size_t k = 0; k < N; ++k) {
      double s = a.c[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
      r.c[k] = s / b.c[0];
    }
    return r;
  }

  friend bool operator==(const Taylor& a, const Taylor& b) { return a.c == b.c; }
  friend bool operator<(const Taylor& a, const Taylor& b) { return a.c[0] < b.c[0]; }
  friend bool operator>(const Taylor& a, const Taylor& b) { return a.c[0] > b.c[0]; }
};

/// d/dt of the series. The top coefficient becomes zero (one order is lost).
template <std::size_t N>
Taylor<N> differentiate(const Taylor<N>& a) {
  Taylor<N> r;
  for (std::size_t k = 0; k + 1 < N; ++k) r.c[k] = static_cast<double>(k + 1) * a.c[k + 1];
  return r;
}

template <std::size_t N>
Taylor<N> exp(const Taylor<N>& a) {
  Taylor<N> r;
  r.c[0] = std::exp(a.c[0]);
  for (std::size_t k = 1; k < N; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * r.c[k - j];
    r.c[k] = s / static_cast<double>(k);
  }
  return r;
}

template <std::size_t N>
Taylor<N> log(const Taylor<N>& a) {
  Taylor<N> r;
  r.c[0] = std::log(a.c[0]);
  for (std::size_t k = 1; k < N; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j < k; ++j) s += static_cast<double>(j) * r.c[j] * a.c[k - j];
    r.c[k] = (a.c[k] - s / static_cast<double>(k)) / a.c[0];
  }
  return r;
}

template <std::size_t N>
Taylor<N> sqrt(const Taylor<N>& a) {
  Taylor<N> r;
  r.c[0] = std::sqrt(a.c[0]);
  for (std::size_t k = 1; k < N; ++k) {
    double s = a.c[k];
    for (std::size_t j = 1; j < k; ++j) s -= r.c[j] * r.c[k - j];
    r.c[k] = s / (2.0 * r.c[0]);
  }
  return r;
}

namespace detail {

// Coupled recurrences for (sin, cos) when sign = -1 and (sinh, cosh) when +1.
template <std::size_t N>
void trig_pair(const Taylor<N>& a, double sign, Taylor<N>& s, Taylor<N>& co) {
  if (sign < 0.0) {
    s.c[0] = std::sin(a.c[0]);
    co.c[0] = std::cos(a.c[0]);
  } else {
    s.c[0] = std::sinh(a.c[0]);
    co.c[0] = std::cosh(a.c[0]);
  }
  for (std::size_t k = 1; k < N; ++k) {
    double ss = 0.0;
    double cs = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const double ja = static_cast<double>(j) * a.c[j];
      ss += ja * co.c[k - j];
      cs += ja * s.c[k - j];
    }
    s.c[k] = ss / static_cast<double>(k);
    co.c[k] = sign * cs / static_cast<double>(k);
  }
}

}  // namespace detail

template <std::size_t N>
Taylor<N> sin(const Taylor<N>& a) {
  Taylor<N> s, c;
  detail::trig_pair(a, -1.0, s, c);
  return s;
}
template <std::size_t N>
Taylor<N> cos(const Taylor<N>& a) {
  Taylor<N> s, c;
  detail::trig_pair(a, -1.0, s, c);
  return c;
}
template <std::size_t N>
Taylor<N> tan(const Taylor<N>& a) {
  Taylor<N> s, c;
  detail::trig_pair(a, -1.0, s, c);
  return s / c;
}
template <std::size_t N>
Taylor<N> sinh(const Taylor<N>& a) {
  Taylor<N> s, c;
  detail::trig_pair(a, 1.0, s, c);
  return s;
}
template <std::size_t N>
Taylor<N> cosh(const Taylor<N>& a) {
  Taylor<N> s, c;
  detail::trig_pair(a, 1.0, s, c);
  return c;
}
template <std::size_t N>
Taylor<N> tanh(const Taylor<N>& a) {
  Taylor<N> s, c;
  detail::trig_pair(a, 1.0, s, c);
  return s / c;
}
template <std::size_t N>
Taylor<N> abs(const Taylor<N>& a) {
  return a.c[0] < 0.0 ? -a : a;
}

inline double value_of(double x) { return x; }
template <std::size_t N>
double value_of(const Taylor<N>& x) {
  return x.c[0];
}

/// Default series length used along curves: enough orders for the torsion
/// derivative (four arclength derivatives) with margin.
using Jet = Taylor<8>;

}  // namespace isophote

namespace Eigen {

template <std::size_t N>
struct NumTraits<isophote::Taylor<N>> : NumTraits<double> {
  using Real = isophote::Taylor<N>;
  using NonInteger = isophote::Taylor<N>;
  using Nested = isophote::Taylor<N>;
  using Literal = isophote::Taylor<N>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = static_cast<int>(N),
    AddCost = static_cast<int>(N),
    MulCost = static_cast<int>(N * N),
  };
};

}  // namespace Eigen

#endif  // ISOPHOTE_TAYLOR_HPP
