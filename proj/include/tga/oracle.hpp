#pragma once

#include <vector>

#include "tga/scalar.hpp"
#include "tga/sets.hpp"
#include "tga/space.hpp"

namespace tga {

enum class OracleMethod {
  automatic,  ///< fast path when the norm allows it, generic otherwise
  generic,    ///< coordinate descent for every support
  fastpath,   ///< a_j = f_j; requires NormFlags::is_separable_fastpath
};

struct OracleOptions {
  OracleMethod method = OracleMethod::automatic;
  /// A descent pass improving the value by less than this ends the search.
  double tol_inner = 1e-10;
  int max_passes = 200;
  /// Supports are enumerated on this many threads; results do not depend on it.
  unsigned workers = 1;
};

template <FieldScalar T>
struct CoeffFit {
  std::vector<T> coeffs;  ///< aligned with the support's indices
  double value = 0.0;
  int passes = 0;
  bool converged = true;
};

/// Best approximation found by an oracle. For d_m, coeffs holds the single alpha.
template <FieldScalar T>
struct ApproxResult {
  double value = 0.0;
  SupportSet support;
  std::vector<T> coeffs;
  bool converged = true;
};

/// Minimizes the convex map a -> ||f - sum_{j in B} a_j x_j||. Generic path:
/// cyclic coordinate descent with a golden-section line search per coordinate
/// (a 2-D Nelder-Mead step per coordinate in complex mode), each pass closed by
/// a line search along the residual direction f_B - a. A pass limit hit is
/// reported through converged = false.
template <FieldScalar T>
CoeffFit<T> minimize_coeffs(const SpaceSpec& space, const CoeffVec<T>& f, const SupportSet& B,
                            const OracleOptions& opts = {});

/// sigma_m(f) = inf{||f - sum_{j in B} a_j x_j|| : |B| <= m} by enumeration of
/// all supports of size min(m, dim). Exactly 0 when m >= |supp(f)|.
template <FieldScalar T>
ApproxResult<T> sigma_m(const SpaceSpec& space, const CoeffVec<T>& f, std::size_t m,
                        const OracleOptions& opts = {});

/// D_m(f) = inf{||f - alpha 1_A|| : |A| <= m, alpha in F}.
template <FieldScalar T>
ApproxResult<T> d_m(const SpaceSpec& space, const CoeffVec<T>& f, std::size_t m,
                    const OracleOptions& opts = {});

/// sum_{j in B} a_j x_j as a vector of F^dim.
template <FieldScalar T>
CoeffVec<T> reconstruct(std::size_t dim, const SupportSet& B, const std::vector<T>& coeffs);

}  // namespace tga
