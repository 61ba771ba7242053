#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "tga/scalar.hpp"

namespace tga {

/// Sorted, duplicate-free set of basis indices. Dimensions are capped at
/// kMaxDim, so the set also has an exact bitmask representation.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(std::initializer_list<Index> indices);
  explicit SupportSet(std::vector<Index> indices);

  static SupportSet from_mask(std::uint32_t mask);
  static SupportSet range(std::size_t dim);

  const std::vector<Index>& indices() const { return indices_; }
  std::uint32_t mask() const { return mask_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(Index n) const { return n < 32 && ((mask_ >> n) & 1u) != 0; }

  /// Throws InvalidArgument unless every index is below dim.
  void validate(std::size_t dim) const;

  SupportSet unite(const SupportSet& other) const;
  SupportSet minus(const SupportSet& other) const;
  SupportSet intersect(const SupportSet& other) const;
  bool disjoint(const SupportSet& other) const { return (mask_ & other.mask_) == 0; }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  friend bool operator==(const SupportSet& a, const SupportSet& b) { return a.mask_ == b.mask_; }

 private:
  std::vector<Index> indices_;
  std::uint32_t mask_ = 0;
};

/// supp(v) = {n : v_n != 0}.
template <FieldScalar T>
SupportSet support_of(const CoeffVec<T>& v) {
  std::uint32_t mask = 0;
  for (Index n = 0; n < v.size(); ++n) {
    if (v[n] != T(0.0)) mask |= 1u << n;
  }
  return SupportSet::from_mask(mask);
}

/// max_n |v_n|, the sup norm of the coefficient sequence.
template <FieldScalar T>
double sup_norm(const CoeffVec<T>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, modulus(x));
  return m;
}

/// Unimodular scalars attached to the indices of a support set (the signs of
/// a signed indicator sum). values[i] belongs to support.indices()[i].
template <FieldScalar T>
struct SignVec {
  SupportSet support;
  std::vector<T> values;

  /// The constant-one signs on a set.
  static SignVec ones(const SupportSet& set) {
    return SignVec{set, std::vector<T>(set.size(), T(1.0))};
  }

  /// Throws InvalidArgument on a size mismatch or a non-unimodular entry.
  void validate() const;

  T at(Index n) const;

  friend bool operator==(const SignVec&, const SignVec&) = default;
};

/// All supports of exactly k indices in {0..dim-1}, in increasing mask order.
std::vector<std::uint32_t> subsets_of_size(std::size_t dim, std::size_t k);

}  // namespace tga
