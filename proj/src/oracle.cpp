#include "tga/oracle.hpp"

#include <limits>
#include <string>

#include "detail/minimize.hpp"
#include "tga/errors.hpp"
#include "tga/greedy.hpp"
#include "tga/parallel.hpp"

namespace tga {

namespace {

template <FieldScalar T>
void check_vector(const SpaceSpec& space, const CoeffVec<T>& f) {
  if (f.size() != space.dim()) {
    throw InvalidArgument("vector has length " + std::to_string(f.size()) + ", space dimension is " +
                          std::to_string(space.dim()));
  }
  for (const T& x : f) {
    if (!is_finite(x)) throw InvalidArgument("non-finite coefficient");
  }
}

bool use_fastpath(const SpaceSpec& space, OracleMethod method) {
  const bool available = space.norm().flags().is_separable_fastpath;
  switch (method) {
    case OracleMethod::fastpath:
      if (!available) {
        throw InvalidArgument("norm " + space.descriptor() + " has no separable fast path");
      }
      return true;
    case OracleMethod::generic:
      return false;
    case OracleMethod::automatic:
      return available;
  }
  return false;
}

template <FieldScalar T>
CoeffFit<T> fit_support(const SpaceSpec& space, const CoeffVec<T>& f, const SupportSet& B,
                        bool fast, const OracleOptions& opts) {
  CoeffFit<T> fit;
  if (fast || B.empty()) {
    CoeffVec<T> r = f;
    for (Index j : B) {
      fit.coeffs.push_back(f[j]);
      r[j] = T(0.0);
    }
    fit.value = space.norm()(std::span<const T>(r));
    return fit;
  }
  const double fnorm = space.norm()(std::span<const T>(f));
  std::vector<double> radii;
  for (Index j : B) radii.push_back(fnorm * space.dual_norm(j) + modulus(f[j]) + 1.0);
  auto eval = [&](std::span<const T> v) { return space.norm()(v); };
  auto res = detail::coordinate_descent<T>(eval, std::span<const T>(f), B, radii, opts.tol_inner,
                                           opts.max_passes);
  fit.coeffs = std::move(res.coeffs);
  fit.value = res.value;
  fit.passes = res.passes;
  fit.converged = res.converged;
  return fit;
}

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::size_t slot = 0;
  bool all_converged = true;
};

}  // namespace

template <FieldScalar T>
CoeffVec<T> reconstruct(std::size_t dim, const SupportSet& B, const std::vector<T>& coeffs) {
  if (coeffs.size() != B.size()) throw InvalidArgument("coefficient count does not match the support");
  B.validate(dim);
  CoeffVec<T> out(dim, T(0.0));
  for (std::size_t i = 0; i < coeffs.size(); ++i) out[B.indices()[i]] = coeffs[i];
  return out;
}

template <FieldScalar T>
CoeffFit<T> minimize_coeffs(const SpaceSpec& space, const CoeffVec<T>& f, const SupportSet& B,
                            const OracleOptions& opts) {
  check_vector(space, f);
  B.validate(space.dim());
  return fit_support(space, f, B, use_fastpath(space, opts.method), opts);
}

template <FieldScalar T>
ApproxResult<T> sigma_m(const SpaceSpec& space, const CoeffVec<T>& f, std::size_t m,
                        const OracleOptions& opts) {
  check_vector(space, f);
  if (m > space.dim()) throw InvalidArgument("m exceeds the dimension");
  const bool fast = use_fastpath(space, opts.method);
  ApproxResult<T> out;
  if (m == 0) {
    out.value = space.norm()(std::span<const T>(f));
    return out;
  }
  if (m >= support_of(f).size()) {
    out.value = 0.0;
    out.support = greedy_set(f, m);
    for (Index j : out.support) out.coeffs.push_back(f[j]);
    return out;
  }
  const auto supports = subsets_of_size(space.dim(), m);
  std::vector<CoeffFit<T>> fits(supports.size());
  parallel_chunks(supports.size(), opts.workers, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      fits[i] = fit_support(space, f, SupportSet::from_mask(supports[i]), fast, opts);
    }
  });
  Best best;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    best.all_converged = best.all_converged && fits[i].converged;
    if (fits[i].value < best.value) best = {fits[i].value, i, best.all_converged};
  }
  out.value = best.value;
  out.support = SupportSet::from_mask(supports[best.slot]);
  out.coeffs = std::move(fits[best.slot].coeffs);
  out.converged = best.all_converged;
  return out;
}

template <FieldScalar T>
ApproxResult<T> d_m(const SpaceSpec& space, const CoeffVec<T>& f, std::size_t m,
                    const OracleOptions& opts) {
  check_vector(space, f);
  if (m > space.dim()) throw InvalidArgument("m exceeds the dimension");
  ApproxResult<T> out;
  out.value = space.norm()(std::span<const T>(f));
  out.coeffs = {T(0.0)};
  if (m == 0) return out;
  const double fnorm = out.value;

  std::vector<std::uint32_t> supports;
  for (std::size_t k = 1; k <= m; ++k) {
    const auto s = subsets_of_size(space.dim(), k);
    supports.insert(supports.end(), s.begin(), s.end());
  }
  std::vector<std::pair<double, T>> fits(supports.size());
  parallel_chunks(supports.size(), opts.workers, [&](std::size_t begin, std::size_t end, unsigned) {
    CoeffVec<T> trial(f.size());
    for (std::size_t i = begin; i < end; ++i) {
      const SupportSet A = SupportSet::from_mask(supports[i]);
      double radius = 1.0;
      for (Index j : A) radius = std::max(radius, modulus(f[j]) + fnorm * space.dual_norm(j) + 1.0);
      auto phi = [&](T alpha) {
        trial = f;
        for (Index j : A) trial[j] -= alpha;
        return space.norm()(std::span<const T>(trial));
      };
      if constexpr (is_complex_v<T>) {
        const auto pm = detail::nelder_mead_2d(phi, Complex(0.0), radius / 4.0, opts.tol_inner);
        fits[i] = {pm.value, pm.x};
      } else {
        const auto lm = detail::golden_section(phi, -radius, radius, opts.tol_inner);
        fits[i] = {lm.value, lm.x};
      }
    }
  });
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (fits[i].first < out.value) {
      out.value = fits[i].first;
      out.support = SupportSet::from_mask(supports[i]);
      out.coeffs = {fits[i].second};
    }
  }
  return out;
}

#define TGA_INSTANTIATE(T)                                                                        \
  template CoeffVec<T> reconstruct<T>(std::size_t, const SupportSet&, const std::vector<T>&);    \
  template CoeffFit<T> minimize_coeffs<T>(const SpaceSpec&, const CoeffVec<T>&, const SupportSet&, \
                                          const OracleOptions&);                                  \
  template ApproxResult<T> sigma_m<T>(const SpaceSpec&, const CoeffVec<T>&, std::size_t,          \
                                      const OracleOptions&);                                      \
  template ApproxResult<T> d_m<T>(const SpaceSpec&, const CoeffVec<T>&, std::size_t,              \
                                  const OracleOptions&);

TGA_INSTANTIATE(double)
TGA_INSTANTIATE(Complex)

}  // namespace tga
