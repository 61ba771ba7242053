#include "tga/witness.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "tga/errors.hpp"
#include "tga/greedy.hpp"

namespace tga {

namespace {

constexpr std::array<std::pair<ConstantKind, std::string_view>, 10> kNames{{
    {ConstantKind::C_g, "C_g"},
    {ConstantKind::C_g_m1, "C_g_m1"},
    {ConstantKind::C_qg, "C_qg"},
    {ConstantKind::K_s, "K_s"},
    {ConstantKind::K_s_single, "K_s_single"},
    {ConstantKind::Delta_d, "Delta_d"},
    {ConstantKind::Delta_s, "Delta_s"},
    {ConstantKind::Delta_slc, "Delta_slc"},
    {ConstantKind::Q_star, "Q_star"},
    {ConstantKind::Q_star_singleton, "Q_star_singleton"},
}};

constexpr std::array<std::pair<std::string_view, ConstantKind>, 10> kShort{{
    {"Cg", ConstantKind::C_g},
    {"Cg1", ConstantKind::C_g_m1},
    {"Cqg", ConstantKind::C_qg},
    {"Ks", ConstantKind::K_s},
    {"Ks1", ConstantKind::K_s_single},
    {"Deltad", ConstantKind::Delta_d},
    {"Deltas", ConstantKind::Delta_s},
    {"Delta", ConstantKind::Delta_slc},
    {"Q", ConstantKind::Q_star},
    {"Q1", ConstantKind::Q_star_singleton},
}};

template <FieldScalar T>
CoeffVec<T> plus_signed(CoeffVec<T> v, const SupportSet& set, const std::vector<T>& signs) {
  for (std::size_t i = 0; i < set.size(); ++i) v[set.indices()[i]] += signs[i];
  return v;
}

template <FieldScalar T>
bool unimodular(const std::vector<T>& signs) {
  for (const T& s : signs) {
    if (std::abs(modulus(s) - 1.0) > kUnitTol) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(ConstantKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<ConstantKind> parse_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  for (const auto& [n, k] : kShort) {
    if (n == name) return k;
  }
  return std::nullopt;
}

template <FieldScalar T>
SupportSet modulus_one_set(const CoeffVec<T>& y) {
  std::uint32_t mask = 0;
  for (Index n = 0; n < y.size(); ++n) {
    if (y[n] != T(0.0) && std::abs(modulus(y[n]) - 1.0) <= kUnitTol) mask |= 1u << n;
  }
  return SupportSet::from_mask(mask);
}

template <FieldScalar T>
std::optional<RatioParts> evaluate_instance(const SpaceSpec& space, ConstantKind kind,
                                            const Witness<T>& w, const OracleOptions& opts) {
  const std::size_t d = space.dim();
  const auto& norm = space.norm();
  auto nrm = [&](const CoeffVec<T>& v) { return norm(std::span<const T>(v)); };
  RatioParts parts;
  switch (kind) {
    case ConstantKind::C_g:
    case ConstantKind::C_g_m1:
    case ConstantKind::C_qg: {
      CoeffVec<T> residual = w.f;
      for (Index n : greedy_set(w.f, w.m)) residual[n] = T(0.0);
      parts.numerator = nrm(residual);
      parts.denominator = kind == ConstantKind::C_qg ? nrm(w.f) : sigma_m(space, w.f, w.m, opts).value;
      break;
    }
    case ConstantKind::K_s:
    case ConstantKind::K_s_single: {
      CoeffVec<T> residual = w.f;
      for (Index n : w.A) residual[n] = T(0.0);
      parts.numerator = nrm(residual);
      parts.denominator = nrm(w.f);
      break;
    }
    case ConstantKind::Delta_d:
    case ConstantKind::Delta_s:
      parts.numerator = nrm(plus_signed(CoeffVec<T>(d, T(0.0)), w.A, w.eps));
      parts.denominator = nrm(plus_signed(CoeffVec<T>(d, T(0.0)), w.B, w.eta));
      break;
    case ConstantKind::Delta_slc:
      parts.numerator = nrm(plus_signed(w.f, w.A, w.eps));
      parts.denominator = nrm(plus_signed(w.f, w.B, w.eta));
      break;
    case ConstantKind::Q_star: {
      parts.numerator = nrm(plus_signed(w.f, w.A, w.eps));
      CoeffVec<T> fy = w.f;
      if (w.y) {
        for (Index n = 0; n < d; ++n) fy[n] += (*w.y)[n];
      }
      parts.denominator = nrm(fy);
      break;
    }
    case ConstantKind::Q_star_singleton: {
      parts.numerator = nrm(plus_signed(w.f, w.A, w.eps));
      CoeffVec<T> den = plus_signed(w.f, w.B, w.eta);
      if (w.y) {
        for (Index n = 0; n < d; ++n) den[n] += (*w.y)[n];
      }
      parts.denominator = nrm(den);
      break;
    }
  }
  if (!(parts.denominator >= kDegenerateDenominator)) return std::nullopt;
  return parts;
}

template <FieldScalar T>
std::optional<std::string> admissibility_violation(const SpaceSpec& space, ConstantKind kind,
                                                   const Witness<T>& w) {
  const std::size_t d = space.dim();
  const bool uses_f = kind != ConstantKind::Delta_d && kind != ConstantKind::Delta_s;
  if (uses_f && w.f.size() != d) return "f has the wrong length";
  if (w.y && w.y->size() != d) return "y has the wrong length";
  if (!w.A.empty() && w.A.indices().back() >= d) return "A leaves the index range";
  if (!w.B.empty() && w.B.indices().back() >= d) return "B leaves the index range";
  for (const T& x : w.f) {
    if (!is_finite(x)) return "f has a non-finite entry";
  }

  const bool signed_sets = kind == ConstantKind::Delta_d || kind == ConstantKind::Delta_s ||
                           kind == ConstantKind::Delta_slc || kind == ConstantKind::Q_star ||
                           kind == ConstantKind::Q_star_singleton;
  if (signed_sets) {
    if (w.eps.size() != w.A.size()) return "eps does not match A";
    if (!unimodular(w.eps)) return "eps is not unimodular";
  }
  const bool signed_b = kind == ConstantKind::Delta_d || kind == ConstantKind::Delta_s ||
                        kind == ConstantKind::Delta_slc || kind == ConstantKind::Q_star_singleton;
  if (signed_b) {
    if (w.eta.size() != w.B.size()) return "eta does not match B";
    if (!unimodular(w.eta)) return "eta is not unimodular";
  }

  switch (kind) {
    case ConstantKind::C_g:
    case ConstantKind::C_qg:
      if (w.m > d) return "m exceeds the dimension";
      break;
    case ConstantKind::C_g_m1:
      if (w.m != 1) return "C_g_m1 requires m = 1";
      break;
    case ConstantKind::K_s:
      break;
    case ConstantKind::K_s_single:
      if (w.A.size() != 1) return "K_s_single requires |A| = 1";
      break;
    case ConstantKind::Delta_d:
      for (const T& s : w.eps) {
        if (s != T(1.0)) return "Delta_d requires eps = 1";
      }
      for (const T& s : w.eta) {
        if (s != T(1.0)) return "Delta_d requires eta = 1";
      }
      [[fallthrough]];
    case ConstantKind::Delta_s:
      if (w.A.size() > w.B.size()) return "|A| > |B|";
      break;
    case ConstantKind::Delta_slc: {
      if (sup_norm(w.f) > 1.0) return "sup norm of f exceeds 1";
      if (w.A.size() > w.B.size()) return "|A| > |B|";
      if (!w.A.disjoint(w.B)) return "A and B intersect";
      if (!support_of(w.f).disjoint(w.A.unite(w.B))) return "supp(f) meets A or B";
      break;
    }
    case ConstantKind::Q_star: {
      if (sup_norm(w.f) > 1.0) return "sup norm of f exceeds 1";
      const CoeffVec<T> y = w.y.value_or(CoeffVec<T>(d, T(0.0)));
      const SupportSet B = modulus_one_set(y);
      if (!(B == w.B)) return "B is not the modulus-one set of y";
      if (w.A.size() > B.size()) return "|A| > |B|";
      const SupportSet sy = support_of(y);
      if (!support_of(w.f).disjoint(sy)) return "supp(f) meets supp(y)";
      if (!support_of(w.f).unite(sy).disjoint(w.A)) return "supp(f + y) meets A";
      break;
    }
    case ConstantKind::Q_star_singleton: {
      if (sup_norm(w.f) > 1.0) return "sup norm of f exceeds 1";
      if (w.A.size() != 1 || w.B.size() != 1) return "singleton instance needs |A| = |B| = 1";
      if (w.A == w.B) return "n and k must differ";
      const CoeffVec<T> y = w.y.value_or(CoeffVec<T>(d, T(0.0)));
      const SupportSet sy = support_of(y);
      if (!support_of(w.f).disjoint(sy)) return "supp(f) meets supp(y)";
      if (!support_of(w.f).unite(sy).disjoint(w.A.unite(w.B))) return "supp(f + y) meets {n, k}";
      break;
    }
  }
  return std::nullopt;
}

template <FieldScalar T>
double replay_ratio(const SpaceSpec& space, ConstantKind kind, const Witness<T>& w,
                    const OracleOptions& opts) {
  if (auto bad = admissibility_violation(space, kind, w)) {
    throw InvalidArgument("inadmissible " + std::string(to_string(kind)) + " witness: " + *bad);
  }
  const auto parts = evaluate_instance(space, kind, w, opts);
  if (!parts) throw InvalidArgument("degenerate witness: zero denominator");
  return parts->ratio();
}

#define TGA_INSTANTIATE(T)                                                                        \
  template SupportSet modulus_one_set<T>(const CoeffVec<T>&);                                     \
  template std::optional<RatioParts> evaluate_instance<T>(const SpaceSpec&, ConstantKind,          \
                                                          const Witness<T>&, const OracleOptions&); \
  template std::optional<std::string> admissibility_violation<T>(const SpaceSpec&, ConstantKind,    \
                                                                 const Witness<T>&);               \
  template double replay_ratio<T>(const SpaceSpec&, ConstantKind, const Witness<T>&,               \
                                  const OracleOptions&);

TGA_INSTANTIATE(double)
TGA_INSTANTIATE(Complex)

}  // namespace tga
