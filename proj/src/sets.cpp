#include "tga/sets.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "tga/errors.hpp"

namespace tga {

SupportSet::SupportSet(std::initializer_list<Index> indices)
    : SupportSet(std::vector<Index>(indices)) {}

SupportSet::SupportSet(std::vector<Index> indices) {
  for (Index n : indices) {
    if (n >= kMaxDim) {
      throw InvalidArgument("support index " + std::to_string(n) + " exceeds the dimension cap");
    }
    mask_ |= 1u << n;
  }
  indices_ = from_mask(mask_).indices_;
}

SupportSet SupportSet::from_mask(std::uint32_t mask) {
  SupportSet s;
  s.mask_ = mask;
  s.indices_.reserve(static_cast<std::size_t>(std::popcount(mask)));
  for (Index n = 0; mask >> n; ++n) {
    if ((mask >> n) & 1u) s.indices_.push_back(n);
  }
  return s;
}

SupportSet SupportSet::range(std::size_t dim) {
  return from_mask(dim >= 32 ? ~0u : ((1u << dim) - 1u));
}

void SupportSet::validate(std::size_t dim) const {
  if (!indices_.empty() && indices_.back() >= dim) {
    throw InvalidArgument("support index " + std::to_string(indices_.back()) +
                          " out of range for dimension " + std::to_string(dim));
  }
}

SupportSet SupportSet::unite(const SupportSet& other) const { return from_mask(mask_ | other.mask_); }
SupportSet SupportSet::minus(const SupportSet& other) const { return from_mask(mask_ & ~other.mask_); }
SupportSet SupportSet::intersect(const SupportSet& other) const {
  return from_mask(mask_ & other.mask_);
}

template <FieldScalar T>
void SignVec<T>::validate() const {
  if (values.size() != support.size()) {
    throw InvalidArgument("sign vector has " + std::to_string(values.size()) + " entries for a set of " +
                          std::to_string(support.size()));
  }
  for (const T& s : values) {
    if (std::abs(modulus(s) - 1.0) > 1e-12) {
      throw InvalidArgument("sign entry is not unimodular");
    }
  }
}

template <FieldScalar T>
T SignVec<T>::at(Index n) const {
  const auto& idx = support.indices();
  const auto it = std::lower_bound(idx.begin(), idx.end(), n);
  if (it == idx.end() || *it != n) throw InvalidArgument("sign requested outside its support");
  return values[static_cast<std::size_t>(it - idx.begin())];
}

template struct SignVec<double>;
template struct SignVec<Complex>;

std::vector<std::uint32_t> subsets_of_size(std::size_t dim, std::size_t k) {
  std::vector<std::uint32_t> out;
  if (k > dim) return out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  const std::uint32_t limit = 1u << dim;
  std::uint32_t s = (1u << k) - 1u;
  while (s < limit) {
    out.push_back(s);
    // Gosper's hack: next integer with the same popcount.
    const std::uint32_t c = s & (~s + 1u);
    const std::uint32_t r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

}  // namespace tga
