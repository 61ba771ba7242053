#include "tga/greedy.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "tga/errors.hpp"

namespace tga {

template <FieldScalar T>
std::vector<Index> greedy_ordering(const CoeffVec<T>& f) {
  std::vector<Index> rho(f.size());
  std::iota(rho.begin(), rho.end(), Index{0});
  // Stable: equal moduli keep increasing index order.
  std::stable_sort(rho.begin(), rho.end(),
                   [&](Index a, Index b) { return modulus(f[a]) > modulus(f[b]); });
  return rho;
}

template <FieldScalar T>
SupportSet greedy_set(const CoeffVec<T>& f, std::size_t m) {
  const auto rho = greedy_ordering(f);
  m = std::min(m, rho.size());
  return SupportSet(std::vector<Index>(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(m)));
}

template <FieldScalar T>
CoeffVec<T> greedy_sum(const CoeffVec<T>& f, std::size_t m) {
  return project(f, greedy_set(f, m));
}

template <FieldScalar T>
CoeffVec<T> project(const CoeffVec<T>& f, const SupportSet& A) {
  A.validate(f.size());
  CoeffVec<T> out(f.size(), T(0.0));
  for (Index n : A) out[n] = f[n];
  return out;
}

template <FieldScalar T>
CoeffVec<T> indicator(std::size_t dim, const SignVec<T>& eps) {
  eps.validate();
  eps.support.validate(dim);
  CoeffVec<T> out(dim, T(0.0));
  const auto& idx = eps.support.indices();
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = eps.values[i];
  return out;
}

template <FieldScalar T>
std::vector<GapResidual> gap_greedy_residual_norms(const SpaceSpec& space, const CoeffVec<T>& f,
                                                   std::span<const std::size_t> gaps,
                                                   const OracleOptions& opts) {
  if (f.size() != space.dim()) throw InvalidArgument("vector length does not match the space");
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] < 1 || gaps[i] > space.dim()) {
      throw InvalidArgument("gap entry " + std::to_string(gaps[i]) + " outside [1, dim]");
    }
    if (i > 0 && gaps[i] <= gaps[i - 1]) throw InvalidArgument("gap sequence must be strictly increasing");
  }
  const auto rho = greedy_ordering(f);
  std::vector<GapResidual> out;
  CoeffVec<T> residual = f;
  std::size_t removed = 0;
  for (std::size_t n : gaps) {
    // Same ordering sampled at n: the greedy sums are prefix sums of rho.
    while (removed < n) residual[rho[removed++]] = T(0.0);
    out.push_back({n, norm_eval(space, residual), sigma_m(space, f, n, opts).value});
  }
  return out;
}

#define TGA_INSTANTIATE(T)                                                                  \
  template std::vector<Index> greedy_ordering<T>(const CoeffVec<T>&);                      \
  template SupportSet greedy_set<T>(const CoeffVec<T>&, std::size_t);                      \
  template CoeffVec<T> greedy_sum<T>(const CoeffVec<T>&, std::size_t);                     \
  template CoeffVec<T> project<T>(const CoeffVec<T>&, const SupportSet&);                  \
  template CoeffVec<T> indicator<T>(std::size_t, const SignVec<T>&);                       \
  template std::vector<GapResidual> gap_greedy_residual_norms<T>(                          \
      const SpaceSpec&, const CoeffVec<T>&, std::span<const std::size_t>, const OracleOptions&);

TGA_INSTANTIATE(double)
TGA_INSTANTIATE(Complex)

}  // namespace tga
