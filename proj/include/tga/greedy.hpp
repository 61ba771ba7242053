#pragma once

#include <span>
#include <vector>

#include "tga/oracle.hpp"
#include "tga/scalar.hpp"
#include "tga/sets.hpp"
#include "tga/space.hpp"

namespace tga {

/// Natural greedy ordering rho: all d indices, by decreasing modulus, ties
/// broken by the smaller index. Indices outside supp(f) come last in
/// increasing order, so every prefix is a valid greedy set.
template <FieldScalar T>
std::vector<Index> greedy_ordering(const CoeffVec<T>& f);

/// A_m(f) = {rho(1), ..., rho(m)}; m beyond dim is clamped.
template <FieldScalar T>
SupportSet greedy_set(const CoeffVec<T>& f, std::size_t m);

/// G_m(f) = P_{A_m(f)} f.
template <FieldScalar T>
CoeffVec<T> greedy_sum(const CoeffVec<T>& f, std::size_t m);

/// Coordinate projection P_A(f).
template <FieldScalar T>
CoeffVec<T> project(const CoeffVec<T>& f, const SupportSet& A);

/// 1_{eps A} in F^dim. Throws InvalidArgument if a sign is not unimodular or
/// an index is out of range.
template <FieldScalar T>
CoeffVec<T> indicator(std::size_t dim, const SignVec<T>& eps);

/// 1_A.
template <FieldScalar T>
CoeffVec<T> indicator(std::size_t dim, const SupportSet& A) {
  return indicator<T>(dim, SignVec<T>::ones(A));
}

struct GapResidual {
  std::size_t n = 0;
  double residual_norm = 0.0;
  double sigma_n = 0.0;
};

/// ||f - G_n(f)|| and sigma_n(f) for each n of a strictly increasing gap
/// sequence with entries in [1, dim].
template <FieldScalar T>
std::vector<GapResidual> gap_greedy_residual_norms(const SpaceSpec& space, const CoeffVec<T>& f,
                                                   std::span<const std::size_t> gaps,
                                                   const OracleOptions& opts = {});

}  // namespace tga
