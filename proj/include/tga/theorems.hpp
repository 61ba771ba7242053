#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "tga/constants.hpp"
#include "tga/report.hpp"
#include "tga/transports.hpp"

namespace tga {

/// Gap between a constant-one claim and numerical noise: an estimate counts
/// as exceeding 1 only above 1 + kExceedDelta.
inline constexpr double kExceedDelta = 1e-6;

enum class VerdictStatus {
  holds_on_budget,
  violated,          ///< a replayable witness contradicts the claim
  transport_failed,  ///< a needed construction could not be completed; needs attention
};

std::string_view to_string(VerdictStatus status);

struct Verdict {
  std::string claim_id;
  VerdictStatus status = VerdictStatus::holds_on_budget;
  Json detail = Json::object();
  /// Set for violated and transport_failed verdicts.
  std::optional<Json> witness;
  std::string message;

  bool holds() const { return status == VerdictStatus::holds_on_budget; }
};

Json verdict_to_json(const Verdict& v);

/// Estimates shared by the checks of one (space, budget); each kind is
/// computed once. Thread-safe.
template <FieldScalar T>
class EstimateCache {
 public:
  EstimateCache(const SpaceSpec& space, Budget budget) : space_(space), budget_(budget) {}

  const SpaceSpec& space() const { return space_; }
  const Budget& budget() const { return budget_; }
  const ConstantEstimate<T>& get(ConstantKind kind);
  /// ||f - G_1 f|| / ||f|| over the budget.
  const ConstantEstimate<T>& quasi_greedy_m1();

 private:
  const SpaceSpec& space_;
  Budget budget_;
  std::mutex mu_;
  std::map<ConstantKind, std::unique_ptr<ConstantEstimate<T>>> cache_;
  std::unique_ptr<ConstantEstimate<T>> qg1_;
};

/// K_s_single <= 1 iff K_s <= 1, on the budget.
template <FieldScalar T>
Verdict check_prop_1un(EstimateCache<T>& cache);

/// G_1-quasi-greedy constant <= 1 iff C_qg <= 1, plus exact coefficient
/// equality G_m f = G_{m-1} f + G_1(f - G_{m-1} f) on sampled vectors.
template <FieldScalar T>
Verdict check_quasi_greedy_induction(EstimateCache<T>& cache, std::size_t chain_samples = 500);

/// ||P_B f + t 1_{eps A}|| <= K ||f|| for t <= min_A |f_n|, eps the phases of f
/// on A. Each instance is bounded by an extracted suppression instance; A = {m}
/// with K_s = 1 is the constant-one special case.
template <FieldScalar T>
Verdict check_cor1(EstimateCache<T>& cache);

/// ||f|| <= ||f - P_n f + t eta_k x_k|| for t >= sup|f|, n in supp f, k off supp f.
/// Each instance is bounded by an extracted two-point SLC instance.
template <FieldScalar T>
Verdict check_corsym(EstimateCache<T>& cache);

/// Q_star_singleton <= 1 iff Q_star <= 1; singleton witnesses are embedded
/// into Q_star and replayed, Q_star witnesses are traded down to singletons.
template <FieldScalar T>
Verdict check_theorem_1sym(EstimateCache<T>& cache);

/// Both directions of the equivalence between Q_star = 1 and K_s = Delta = 1:
/// embeddings of suppression and SLC witnesses into Q_star, and link-by-link
/// factorization of sampled singleton instances.
template <FieldScalar T>
Verdict check_prop_tech(EstimateCache<T>& cache);

/// Joint verdict over C_g_m1, C_g, K_s, Delta_slc, Q_star, Q_star_singleton:
/// either all are 1 on the budget, or every exceeding witness transports to a
/// C_g_m1 violation.
template <FieldScalar T>
Verdict check_theorem_main(EstimateCache<T>& cache, const TransportOptions& transport = {});

/// Constant-one greediness restricted to m in gaps, against check_theorem_main.
template <FieldScalar T>
Verdict check_gap_corollary(EstimateCache<T>& cache, std::span<const std::size_t> gaps,
                            const TransportOptions& transport = {});

/// Suite names: 1un, qg, cor1, corsym, 1sym, tech, main, gaps.
template <FieldScalar T>
Verdict run_suite(EstimateCache<T>& cache, std::string_view suite, std::span<const std::size_t> gaps = {});

}  // namespace tga
