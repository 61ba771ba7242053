#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tga/oracle.hpp"
#include "tga/scalar.hpp"
#include "tga/space.hpp"
#include "tga/witness.hpp"

namespace tga {

enum class GridLevel {
  off,
  coarse,  ///< coefficients in {0, +-1, +-1/2}
  fine,    ///< coefficients in {0, +-1, +-1/2, +-1/4}
};

std::string_view to_string(GridLevel level);
std::optional<GridLevel> parse_grid_level(std::string_view name);

/// Coefficient values of the grid, zero first.
std::vector<double> grid_alphabet(GridLevel level);

/// Seed of sample `index` in stream `stream`; a pure function of its arguments.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

struct Budget {
  GridLevel grid = GridLevel::coarse;
  std::size_t samples = 1000;
  std::size_t hillclimb_rounds = 200;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  OracleOptions oracle;
  /// The grid phase is skipped above either cap.
  std::size_t max_grid_dim = 6;
  std::size_t max_grid_instances = 20'000'000;
  /// Kinds that call the sigma_m oracle on a non-separable norm cost one
  /// minimization per support; their grid is capped separately.
  std::size_t max_generic_oracle_grid_instances = 20'000;
};

/// A sup-ratio estimate. value is attained by witness, so it is a certified
/// lower bound for the true constant.
template <FieldScalar T>
struct ConstantEstimate {
  ConstantKind kind = ConstantKind::C_g;
  double value = 0.0;
  Witness<T> witness;
  std::size_t samples_used = 0;
  std::size_t degenerate_skipped = 0;
  /// Phases that ran and the phase that produced the witness, e.g. "grid:coarse+random+hillclimb;best=grid".
  std::string strategy;
  std::string bound_direction = "lower";

  friend bool operator==(const ConstantEstimate&, const ConstantEstimate&) = default;
};

/// Estimates one constant. Phases run in a fixed order: trivial instances,
/// exhaustive grid, seeded random instances, hill climbing from the best
/// instance. A later phase replaces the witness only on a strict increase, and
/// within a phase ties go to the lowest sample index, so the result depends on
/// (space, kind, budget minus workers) only. Requires dim >= 2.
template <FieldScalar T>
ConstantEstimate<T> estimate(const SpaceSpec& space, ConstantKind kind, const Budget& budget);

/// C_g, or C_g_m1 when m1_only.
template <FieldScalar T>
ConstantEstimate<T> estimate_greedy_constant(const SpaceSpec& space, const Budget& budget,
                                             bool m1_only = false);
/// C_qg over all m, or over m = 1 only.
template <FieldScalar T>
ConstantEstimate<T> estimate_quasi_greedy(const SpaceSpec& space, const Budget& budget, bool m1_only = false);
/// sup ||f - G_n f|| / sigma_n(f) over n in a strictly increasing gap sequence
/// (kind C_g, witness m in gaps).
template <FieldScalar T>
ConstantEstimate<T> estimate_gap_constant(const SpaceSpec& space, std::span<const std::size_t> gaps,
                                          const Budget& budget);
/// K_s, or K_s_single when single_only. K_s includes the single-index family.
template <FieldScalar T>
ConstantEstimate<T> estimate_suppression(const SpaceSpec& space, const Budget& budget,
                                         bool single_only = false);
/// Delta_s when signed_sets, Delta_d otherwise. Exhaustive over all set pairs
/// whenever the sign patterns fit the grid cap.
template <FieldScalar T>
ConstantEstimate<T> estimate_democracy(const SpaceSpec& space, const Budget& budget, bool signed_sets);
template <FieldScalar T>
ConstantEstimate<T> estimate_slc(const SpaceSpec& space, const Budget& budget);
/// Includes the singleton family through the embedding A = {n}, y' = y + eta_k x_k.
template <FieldScalar T>
ConstantEstimate<T> estimate_q_star(const SpaceSpec& space, const Budget& budget);
template <FieldScalar T>
ConstantEstimate<T> estimate_q_star_singleton(const SpaceSpec& space, const Budget& budget);

/// count admissible instances of a kind from the estimator's random
/// generator; instance i depends only on (seed, kind, i).
template <FieldScalar T>
std::vector<Witness<T>> random_instances(const SpaceSpec& space, ConstantKind kind, std::size_t count,
                                         std::uint64_t seed);

/// The Q_star instance carrying a Q_star_singleton witness: A = {n}, y' = y + eta_k x_k.
template <FieldScalar T>
Witness<T> embed_singleton_in_q_star(const Witness<T>& singleton);

}  // namespace tga
