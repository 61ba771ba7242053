#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tga/oracle.hpp"
#include "tga/scalar.hpp"
#include "tga/sets.hpp"
#include "tga/space.hpp"

namespace tga {

enum class ConstantKind {
  C_g,               ///< ||f - G_m f|| / sigma_m(f)
  C_g_m1,            ///< the same with m = 1
  C_qg,              ///< ||f - G_m f|| / ||f||
  K_s,               ///< ||f - P_A f|| / ||f||
  K_s_single,        ///< the same with |A| = 1
  Delta_d,           ///< ||1_A|| / ||1_B||, |A| <= |B|
  Delta_s,           ///< ||1_{eps A}|| / ||1_{eta B}||, |A| <= |B|
  Delta_slc,         ///< ||f + 1_{eps A}|| / ||f + 1_{eta B}||
  Q_star,            ///< ||f + 1_{eps A}|| / ||f + y||
  Q_star_singleton,  ///< ||f + eps_n x_n|| / ||f + eta_k x_k + y||
};

inline constexpr ConstantKind kAllKinds[] = {
    ConstantKind::C_g,     ConstantKind::C_g_m1,  ConstantKind::C_qg,      ConstantKind::K_s,
    ConstantKind::K_s_single, ConstantKind::Delta_d, ConstantKind::Delta_s, ConstantKind::Delta_slc,
    ConstantKind::Q_star,  ConstantKind::Q_star_singleton};

std::string_view to_string(ConstantKind kind);
/// Accepts the canonical names ("C_g", "K_s_single", ...) and the CLI
/// shorthands Cg, Cg1, Cqg, Ks, Ks1, Deltad, Deltas, Delta, Q, Q1.
std::optional<ConstantKind> parse_kind(std::string_view name);

/// A concrete instance realizing a ratio. Which fields are meaningful depends
/// on the kind:
///
///   C_g, C_g_m1, C_qg   f, m (y and B hold the best m-term approximant for C_g)
///   K_s, K_s_single     f, A (the suppressed set)
///   Delta_d, Delta_s    A, eps, B, eta
///   Delta_slc           f, A, eps, B, eta
///   Q_star              f, y, A, eps; B = {n : |y_n| = 1}
///   Q_star_singleton    f, y, A = {n}, eps, B = {k}, eta
///
/// eps[i] is the sign of A.indices()[i]; likewise eta for B. t, gamma and alpha
/// record the parameters of the constructions that produced the instance.
template <FieldScalar T>
struct Witness {
  CoeffVec<T> f;
  std::optional<CoeffVec<T>> y;
  SupportSet A;
  SupportSet B;
  std::vector<T> eps;
  std::vector<T> eta;
  std::size_t m = 0;
  double t = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;

  SignVec<T> eps_signs() const { return {A, eps}; }
  SignVec<T> eta_signs() const { return {B, eta}; }

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct RatioParts {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio() const { return numerator / denominator; }
};

/// Denominators below this make an instance uninformative; it is skipped.
inline constexpr double kDegenerateDenominator = 1e-12;

/// Evaluates the two norms of an instance. Returns nullopt when the
/// denominator is degenerate. Does not check admissibility.
template <FieldScalar T>
std::optional<RatioParts> evaluate_instance(const SpaceSpec& space, ConstantKind kind,
                                            const Witness<T>& w, const OracleOptions& opts = {});

/// Ratio of a witness; throws InvalidArgument if it is inadmissible or degenerate.
template <FieldScalar T>
double replay_ratio(const SpaceSpec& space, ConstantKind kind, const Witness<T>& w,
                    const OracleOptions& opts = {});

/// Checks every precondition of the kind's definition (cardinalities,
/// disjointness, sup-norm bounds, exact modulus-one set for Q_star, ...).
/// Returns a description of the first violation, or nullopt.
template <FieldScalar T>
std::optional<std::string> admissibility_violation(const SpaceSpec& space, ConstantKind kind,
                                                   const Witness<T>& w);

/// {n in supp(y) : |y_n| = 1}, with modulus one tested to 1e-12.
template <FieldScalar T>
SupportSet modulus_one_set(const CoeffVec<T>& y);

inline constexpr double kUnitTol = 1e-12;

}  // namespace tga
