#pragma once

// One-dimensional and coordinatewise minimizers for convex objectives of the
// form a -> ||f - sum_{j in B} a_j e_j||. Internal to the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "tga/scalar.hpp"
#include "tga/sets.hpp"

namespace tga::detail {

struct LineMin {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a convex phi on [lo, hi]. When the minimizer sits
/// on an edge of the bracket the bracket is widened on that side and the search
/// is repeated, so an undersized bracket only costs time.
template <class Phi>
LineMin golden_section(Phi&& phi, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  LineMin best{lo, phi(lo)};
  auto consider = [&](double x, double v) {
    if (v < best.value) best = {x, v};
  };
  consider(hi, phi(hi));

  for (int widen = 0; widen < 40; ++widen) {
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = phi(c), fd = phi(d);
    const double fmid = phi(0.5 * (lo + hi));
    consider(c, fc);
    consider(d, fd);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = phi(c);
        consider(c, fc);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = phi(d);
        consider(d, fd);
      }
    }
    const double width = hi - lo;
    if (!(best.value < fmid)) break;
    if (best.x - lo <= 2 * tol) {
      hi = lo + tol;
      lo -= 2 * width;
      consider(lo, phi(lo));
    } else if (hi - best.x <= 2 * tol) {
      lo = hi - tol;
      hi += 2 * width;
      consider(hi, phi(hi));
    } else {
      break;
    }
  }
  return best;
}

struct PlaneMin {
  Complex x;
  double value = 0.0;
};

/// Nelder-Mead on (Re, Im) starting from x0 with an initial simplex of size step.
template <class Phi>
PlaneMin nelder_mead_2d(Phi&& phi, Complex x0, double step, double tol, int max_iter = 500) {
  std::array<Complex, 3> p{x0, x0 + Complex(step, 0.0), x0 + Complex(0.0, step)};
  std::array<double, 3> v{phi(p[0]), phi(p[1]), phi(p[2])};
  auto order = [&] {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2 - i; ++j) {
        if (v[j + 1] < v[j]) {
          std::swap(v[j], v[j + 1]);
          std::swap(p[j], p[j + 1]);
        }
      }
    }
  };
  for (int it = 0; it < max_iter; ++it) {
    order();
    const double diam = std::max(std::abs(p[1] - p[0]), std::abs(p[2] - p[0]));
    if (diam < tol) break;
    const Complex centroid = 0.5 * (p[0] + p[1]);
    const Complex xr = centroid + (centroid - p[2]);
    const double vr = phi(xr);
    if (vr < v[0]) {
      const Complex xe = centroid + 2.0 * (centroid - p[2]);
      const double ve = phi(xe);
      if (ve < vr) {
        p[2] = xe;
        v[2] = ve;
      } else {
        p[2] = xr;
        v[2] = vr;
      }
    } else if (vr < v[1]) {
      p[2] = xr;
      v[2] = vr;
    } else {
      const Complex xc = centroid + 0.5 * (p[2] - centroid);
      const double vc = phi(xc);
      if (vc < v[2]) {
        p[2] = xc;
        v[2] = vc;
      } else {
        for (int i = 1; i < 3; ++i) {
          p[i] = p[0] + 0.5 * (p[i] - p[0]);
          v[i] = phi(p[i]);
        }
      }
    }
  }
  order();
  return {p[0], v[0]};
}

template <FieldScalar T>
struct DescentResult {
  std::vector<T> coeffs;
  double value = 0.0;
  int passes = 0;
  bool converged = true;
};

/// Cyclic coordinate descent on a -> norm(f - sum_{i} a_i e_{B_i}) from a = 0.
/// radii[i] brackets coordinate i. A pass that stalls is followed by one line
/// search along the residual direction f_B - a, which moves all coordinates at
/// once and escapes the kinks of max-type norms.
template <FieldScalar T, class Norm>
DescentResult<T> coordinate_descent(Norm&& norm, std::span<const T> f, const SupportSet& B,
                                    std::span<const double> radii, double tol, int max_passes) {
  const std::size_t k = B.size();
  const auto& idx = B.indices();
  DescentResult<T> out;
  out.coeffs.assign(k, T(0.0));
  std::vector<T> r(f.begin(), f.end());
  std::vector<T> trial(r);
  double value = norm(std::span<const T>(r));

  auto line_value = [&](Index j, T aj) {
    trial[j] = f[j] - aj;
    const double v = norm(std::span<const T>(trial));
    trial[j] = r[j];
    return v;
  };

  auto residual_step = [&]() {
    // phi(s): a -> a + s (f_B - a), i.e. r_B -> (1 - s) r_B.
    auto phi = [&](double s) {
      for (std::size_t i = 0; i < k; ++i) trial[idx[i]] = (1.0 - s) * r[idx[i]];
      const double v = norm(std::span<const T>(trial));
      for (std::size_t i = 0; i < k; ++i) trial[idx[i]] = r[idx[i]];
      return v;
    };
    const LineMin best = golden_section(phi, -1.0, 2.0, tol);
    if (best.value < value) {
      for (std::size_t i = 0; i < k; ++i) {
        const Index j = idx[i];
        const T d = r[j];
        out.coeffs[i] += best.x * d;
        r[j] = f[j] - out.coeffs[i];
        trial[j] = r[j];
      }
      const double fresh = norm(std::span<const T>(r));
      const double gain = value - fresh;
      value = fresh;
      return gain;
    }
    return 0.0;
  };

  out.converged = false;
  for (int pass = 1; pass <= max_passes; ++pass) {
    out.passes = pass;
    const double start = value;
    for (std::size_t i = 0; i < k; ++i) {
      const Index j = idx[i];
      if constexpr (is_complex_v<T>) {
        auto phi = [&](Complex z) { return line_value(j, z); };
        const PlaneMin pm = nelder_mead_2d(phi, out.coeffs[i], std::max(radii[i] / 4.0, 1e-3), tol);
        if (pm.value < value) {
          out.coeffs[i] = pm.x;
          r[j] = f[j] - pm.x;
          trial[j] = r[j];
          value = pm.value;
        }
      } else {
        auto phi = [&](double x) { return line_value(j, x); };
        const LineMin lm = golden_section(phi, -radii[i], radii[i], tol);
        if (lm.value < value) {
          out.coeffs[i] = lm.x;
          r[j] = f[j] - lm.x;
          trial[j] = r[j];
          value = lm.value;
        }
      }
    }
    if (start - value < tol) {
      if (residual_step() < tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.value = value;
  return out;
}

}  // namespace tga::detail
