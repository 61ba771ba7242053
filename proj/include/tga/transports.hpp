#pragma once

#include <string>
#include <vector>

#include "tga/oracle.hpp"
#include "tga/space.hpp"
#include "tga/witness.hpp"

namespace tga {

/// A ratio must exceed 1 by more than this to count as a violation of a
/// constant-one inequality.
inline constexpr double kClaimTol = 1e-9;

enum class TransportStatus {
  transported,   ///< the target witness violates its inequality
  no_violation,  ///< the source ratio was not above 1; nothing to transport
  failed,        ///< the construction ran out of room (gamma exhausted, no free index, ...)
  chain_broken,  ///< the source violates but no link of its inequality chain does
};

std::string_view to_string(TransportStatus status);

struct TransportOptions {
  double gamma = 1.0;
  /// Halve gamma until the transported ratio exceeds 1 + (r - 1) / 2.
  bool auto_shrink = true;
  double gamma_floor = 1e-6;
  OracleOptions oracle;
};

template <FieldScalar T>
struct Transported {
  TransportStatus status = TransportStatus::failed;
  ConstantKind kind = ConstantKind::C_g_m1;
  Witness<T> witness;
  double source_ratio = 0.0;
  double ratio = 0.0;
  std::string route;
};

/// h = f + eps_n x_n + (1 + gamma) eta_k x_k from a two-point SLC witness
/// (|A| = |B| = 1). {k} is the greedy set of h of size one, and
/// ||h - G_1 h|| / sigma_1(h) >= ||f + eps_n x_n|| / ||f + (1 + gamma) eta_k x_k||.
template <FieldScalar T>
Transported<T> transport_slc_to_greedy(const SpaceSpec& space, const Witness<T>& slc,
                                       const TransportOptions& opts = {});

/// g = f + alpha x_j with alpha = 2 (sup|f| + 1) from a single-suppression
/// witness (K_s_single). {j} is the greedy set of g of size one and the C_g_m1
/// ratio of g is at least the suppression ratio.
template <FieldScalar T>
Transported<T> transport_uncond_to_greedy(const SpaceSpec& space, const Witness<T>& suppression,
                                          const OracleOptions& opts = {});

/// One link of an inequality chain: a basic instance (a two-point Delta_slc or
/// a K_s_single witness) together with its ratio.
template <FieldScalar T>
struct ChainLink {
  ConstantKind kind = ConstantKind::K_s_single;
  Witness<T> witness;
  double ratio = 0.0;
  std::string label;
};

/// Breaks a witness of one of C_g, C_g_m1, K_s, K_s_single, Delta_slc, Q_star,
/// Q_star_singleton into basic links whose ratios bound the source ratio:
/// if every link ratio is at most 1, so is the source ratio. Greedy witnesses
/// go through the greedy set A, the best support B and t = min_A |f_n|:
///
///   ||f - G_m f|| <= max over signs of ||u + t 1_{s(B\A)}||        (convexity)
///                 <= ||u + t 1_{eta(A\B)}||                          (SLC, scaled by t)
///                 <= max_T ||g' - P_T g'||,  g' = P_{B^c}(f - p)     (convexity)
///                 <= ||f - p|| = sigma_m(f)                          (suppression of B)
///
/// with u the part of f outside A and B. Multi-point SLC instances swap one
/// index of A for one of B at a time and then add the remaining B indices one
/// by one; suppressions remove one index at a time.
template <FieldScalar T>
std::vector<ChainLink<T>> basic_links(const SpaceSpec& space, ConstantKind kind, const Witness<T>& w,
                                      const OracleOptions& opts = {});

/// The link with the largest ratio, first on ties. nullopt for an empty chain.
template <FieldScalar T>
std::optional<ChainLink<T>> worst_link(const std::vector<ChainLink<T>>& links);

/// Carries any violating witness of the kinds above to a C_g_m1 violation:
/// reduce to the worst basic link, then apply the SLC or suppression transport.
template <FieldScalar T>
Transported<T> transport_to_greedy_m1(const SpaceSpec& space, ConstantKind kind, const Witness<T>& w,
                                      const TransportOptions& opts = {});

/// Chain of Q_star_singleton instances whose ratios bound a Q_star ratio:
/// each index of A is traded for one of B in turn, and the last trade also
/// carries the rest of y. Empty when A is empty.
template <FieldScalar T>
std::vector<ChainLink<T>> singleton_links(const SpaceSpec& space, const Witness<T>& q_star);

}  // namespace tga
