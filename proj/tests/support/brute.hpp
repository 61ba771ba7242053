#pragma once

// Test-side reference computations. Nothing here calls into the library's
// oracle, greedy or norm code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace brute {

using Vec = std::vector<double>;
using Norm = std::function<double(const Vec&)>;

inline Norm lp(double p, Vec w = {}) {
  return [p, w](const Vec& v) {
    auto wt = [&](std::size_t i) { return w.empty() ? 1.0 : w[i]; };
    if (std::isinf(p)) {
      double m = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, wt(i) * std::abs(v[i]));
      return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += wt(i) * std::pow(std::abs(v[i]), p);
    return std::pow(s, 1.0 / p);
  };
}

inline Norm lorentz(Vec w) {
  return [w](const Vec& v) {
    Vec a(v.size());
    std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
    std::sort(a.begin(), a.end(), std::greater<>());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i];
    return s;
  };
}

/// Indices of the m largest |f_n|, smaller index first on ties, via a
/// stable sort.
inline std::vector<std::size_t> greedy_set(const Vec& f, std::size_t m) {
  std::vector<std::size_t> idx(f.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(f[a]) > std::abs(f[b]); });
  idx.resize(std::min(m, f.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline Vec residual(const Vec& f, const std::vector<std::size_t>& A) {
  Vec r = f;
  for (auto n : A) r[n] = 0.0;
  return r;
}

/// min over a of ||f - sum_{j in B} a_j x_j|| by a shrinking grid scan around f_B.
inline double fit(const Norm& norm, const Vec& f, const std::vector<std::size_t>& B, int points = 21,
                  int zooms = 30) {
  if (B.empty()) return norm(f);
  double scale = 0.0;
  for (double x : f) scale = std::max(scale, std::abs(x));
  Vec center(B.size());
  for (std::size_t i = 0; i < B.size(); ++i) center[i] = f[B[i]];
  double half = 2.0 * scale + 1.0;
  double best = std::numeric_limits<double>::infinity();
  Vec v = f;
  for (int z = 0; z < zooms; ++z) {
    Vec best_a = center;
    std::vector<int> digit(B.size(), 0);
    const double step = 2.0 * half / (points - 1);
    for (;;) {
      for (std::size_t i = 0; i < B.size(); ++i) v[B[i]] = f[B[i]] - (center[i] - half + step * digit[i]);
      const double val = norm(v);
      if (val < best) {
        best = val;
        for (std::size_t i = 0; i < B.size(); ++i) best_a[i] = center[i] - half + step * digit[i];
      }
      std::size_t i = 0;
      while (i < B.size() && ++digit[i] == points) digit[i++] = 0;
      if (i == B.size()) break;
    }
    center = best_a;
    half = 2.0 * step;
  }
  return best;
}

/// sigma_m(f) over all supports of size exactly min(m, d).
inline double sigma(const Norm& norm, const Vec& f, std::size_t m, int points = 21, int zooms = 30) {
  const std::size_t d = f.size();
  m = std::min(m, d);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
    std::vector<std::size_t> B;
    for (std::size_t n = 0; n < d; ++n) {
      if ((mask >> n) & 1u) B.push_back(n);
    }
    best = std::min(best, fit(norm, f, B, points, zooms));
  }
  return best;
}

/// sigma_m for lattice norms: the best support keeps its own coefficients.
inline double sigma_lattice(const Norm& norm, const Vec& f, std::size_t m) {
  const std::size_t d = f.size();
  m = std::min(m, d);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
    Vec r = f;
    for (std::size_t n = 0; n < d; ++n) {
      if ((mask >> n) & 1u) r[n] = 0.0;
    }
    best = std::min(best, norm(r));
  }
  return best;
}

/// Vectors with a mix of generic Gaussian entries, ties and zeros.
inline std::vector<Vec> random_vectors(std::size_t dim, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> small(-2, 2);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vec f(dim);
    const bool ties = i % 4 == 3;
    for (auto& x : f) x = ties ? small(rng) : g(rng);
    out.push_back(f);
  }
  return out;
}

/// Every vector with entries from alphabet.
inline std::vector<Vec> grid(std::size_t dim, const Vec& alphabet) {
  std::vector<Vec> out;
  std::vector<std::size_t> digit(dim, 0);
  for (;;) {
    Vec f(dim);
    for (std::size_t i = 0; i < dim; ++i) f[i] = alphabet[digit[i]];
    out.push_back(f);
    std::size_t i = 0;
    while (i < dim && ++digit[i] == alphabet.size()) digit[i++] = 0;
    if (i == dim) break;
  }
  return out;
}

}  // namespace brute
