#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tga/scalar.hpp"

namespace tga {

enum class NormFamily { lp, weighted_lp, lorentz, custom };

struct NormFlags {
  /// The canonical basis is 1-unconditional for this norm (lattice norm).
  bool is_unconditional = false;
  /// sigma_m may keep the own coefficients a_j = f_j (separable lattice norms).
  bool is_separable_fastpath = false;
};

/// A norm on F^d, either one of the built-in families or a user evaluator.
///
///   lp(p)              (sum |v_n|^p)^(1/p), p = inf is the max norm
///   weighted_lp(p, w)  (sum w_n |v_n|^p)^(1/p), p = inf gives max w_n |v_n|
///   lorentz(w)         sum_k w_k v*_k with v* the decreasing rearrangement of |v|
///
/// Evaluation is const and thread-safe.
class NormModel {
 public:
  using RealEvaluator = std::function<double(std::span<const double>)>;
  using ComplexEvaluator = std::function<double(std::span<const Complex>)>;

  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static NormModel lp(double p);
  static NormModel weighted_lp(double p, std::vector<double> weights);
  static NormModel lorentz(std::vector<double> weights);
  /// A plugin norm. Without a complex evaluator the norm is real-only.
  static NormModel custom(std::string name, RealEvaluator real, ComplexEvaluator complex = {},
                          NormFlags flags = {});

  NormFamily family() const { return family_; }
  double p() const { return p_; }
  const std::vector<double>& weights() const { return weights_; }
  NormFlags flags() const { return flags_; }
  const std::string& name() const { return name_; }
  bool supports_complex() const { return family_ != NormFamily::custom || bool(complex_); }

  /// Dimension fixed by the weights, if any.
  std::optional<std::size_t> intrinsic_dim() const;

  /// Canonical descriptor string, e.g. "lp:2", "wlp:1:1,2", "lorentz:2,1", "plugin:name".
  std::string descriptor() const;

  double operator()(std::span<const double> v) const;
  double operator()(std::span<const Complex> v) const;

 private:
  NormModel() = default;
  template <FieldScalar T>
  double eval_builtin(std::span<const T> v) const;

  NormFamily family_ = NormFamily::lp;
  double p_ = 2.0;
  std::vector<double> weights_;
  NormFlags flags_;
  std::string name_;
  RealEvaluator real_;
  ComplexEvaluator complex_;
};

struct ScalarMode {
  enum class Field { real, complex };
  Field field = Field::real;
  /// Unimodular scalars are drawn from the k-th roots of unity in complex mode.
  int k_roots = 2;

  static ScalarMode real() { return {}; }
  static ScalarMode complex(int k_roots) { return {Field::complex, k_roots}; }
  bool is_complex() const { return field == Field::complex; }
  friend bool operator==(const ScalarMode&, const ScalarMode&) = default;
};

/// F^d with the canonical basis and a norm. Immutable once constructed; the
/// coordinate functional norms ||x_n^*|| are computed at construction.
class SpaceSpec {
 public:
  /// Validates dim, weights and scalar mode; plugin norms additionally pass the
  /// norm-axiom sampler. Throws SpaceError.
  SpaceSpec(std::size_t dim, NormModel norm, ScalarMode mode = {});

  std::size_t dim() const { return dim_; }
  const NormModel& norm() const { return *norm_; }
  const ScalarMode& mode() const { return mode_; }
  std::string descriptor() const { return norm_->descriptor(); }

  /// Cached ||x_n^*||.
  double dual_norm(Index n) const { return dual_norms_.at(n); }

  /// Unimodular scalars available for signs: {1, -1} or the k-th roots of unity.
  template <FieldScalar T>
  std::vector<T> unit_scalars() const;

 private:
  std::size_t dim_;
  std::shared_ptr<const NormModel> norm_;
  ScalarMode mode_;
  std::vector<double> dual_norms_;
};

/// ||v||. Throws InvalidArgument on a dimension mismatch or a non-finite entry.
template <FieldScalar T>
double norm_eval(const SpaceSpec& space, std::span<const T> v);

template <FieldScalar T>
double norm_eval(const SpaceSpec& space, const CoeffVec<T>& v) {
  return norm_eval(space, std::span<const T>(v));
}

/// ||x_n^*|| = sup{|v_n| : ||v|| <= 1}. Closed form for the built-in families.
double dual_coord_norm(const SpaceSpec& space, Index n);

/// ||x_n^*|| through 1 / min_a ||e_n - sum_{j != n} a_j e_j||, valid for any norm.
double dual_coord_norm_numerical(const SpaceSpec& space, Index n);

struct SeminormalizationBounds {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// c1 = min_n min(||x_n||, ||x_n^*||), c2 = max_n max(||x_n||, ||x_n^*||).
/// Throws SpaceError unless 0 < c1 <= c2 < inf.
SeminormalizationBounds seminormalization_audit(const SpaceSpec& space);

struct NormAxiomReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_homogeneity_error = 0.0;
  double worst_triangle_excess = 0.0;
  std::string first_violation;
  bool ok() const { return violations == 0; }
};

/// Checks nonnegativity, definiteness, absolute homogeneity and the triangle
/// inequality on sampled (u, v, lambda).
NormAxiomReport audit_norm_axioms(std::size_t dim, const NormModel& norm, ScalarMode mode,
                                  std::size_t samples, std::uint64_t seed, double tol = 1e-12);

/// Parses the space mini-grammar: lp:<p>, wl1:<w,...>, wlp:<p>:<w,...>,
/// lorentz:<w,...>, plugin:<name>. p accepts "inf". Throws SpaceError.
NormModel parse_norm(const std::string& descriptor);

/// Named plugin norms available to parse_norm("plugin:<name>").
void register_plugin(const std::string& name, std::function<NormModel()> factory);
std::vector<std::string> plugin_names();

}  // namespace tga
