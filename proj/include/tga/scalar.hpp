#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <vector>

namespace tga {

using Complex = std::complex<double>;
using Index = std::size_t;

/// Coefficient field of a space: real or complex doubles.
template <class T>
concept FieldScalar = std::same_as<T, double> || std::same_as<T, Complex>;

template <FieldScalar T>
inline constexpr bool is_complex_v = std::same_as<T, Complex>;

/// A point of the space given by its coefficients (x_n^*(f))_n.
template <FieldScalar T>
using CoeffVec = std::vector<T>;

/// Enumeration-based oracles are exponential in the dimension; this is the hard cap.
inline constexpr std::size_t kMaxDim = 12;

inline double modulus(double x) { return x < 0 ? -x : x; }
inline double modulus(const Complex& z) { return std::abs(z); }

/// x / |x| for x != 0, and 1 for x == 0.
template <FieldScalar T>
T unit_phase(const T& x) {
  const double r = modulus(x);
  return r == 0.0 ? T(1.0) : x / r;
}

template <FieldScalar T>
bool is_finite(const T& x) {
  if constexpr (is_complex_v<T>) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  } else {
    return std::isfinite(x);
  }
}

}  // namespace tga
