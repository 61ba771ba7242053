#include "tga/transports.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "tga/errors.hpp"
#include "tga/greedy.hpp"

namespace tga {

std::string_view to_string(TransportStatus status) {
  switch (status) {
    case TransportStatus::transported:
      return "transported";
    case TransportStatus::no_violation:
      return "no_violation";
    case TransportStatus::failed:
      return "failed";
    case TransportStatus::chain_broken:
      return "chain_broken";
  }
  return "?";
}

namespace {

template <FieldScalar T>
double ratio_of(const SpaceSpec& space, ConstantKind kind, const Witness<T>& w, const OracleOptions& opts) {
  if (auto bad = admissibility_violation(space, kind, w)) {
    throw std::logic_error("inadmissible " + std::string(to_string(kind)) + " instance: " + *bad);
  }
  const auto parts = evaluate_instance(space, kind, w, opts);
  return parts ? parts->ratio() : 0.0;
}

template <FieldScalar T>
ChainLink<T> two_point(const SpaceSpec& space, CoeffVec<T> base, Index n, T eps, Index k, T eta,
                       std::string label) {
  ChainLink<T> link;
  link.kind = ConstantKind::Delta_slc;
  link.witness.f = std::move(base);
  link.witness.A = SupportSet{n};
  link.witness.eps = {eps};
  link.witness.B = SupportSet{k};
  link.witness.eta = {eta};
  link.ratio = ratio_of(space, link.kind, link.witness, OracleOptions{});
  link.label = std::move(label);
  return link;
}

template <FieldScalar T>
ChainLink<T> single_suppression(const SpaceSpec& space, CoeffVec<T> f, Index j, std::string label) {
  ChainLink<T> link;
  link.kind = ConstantKind::K_s_single;
  link.witness.f = std::move(f);
  link.witness.A = SupportSet{j};
  link.ratio = ratio_of(space, link.kind, link.witness, OracleOptions{});
  link.label = std::move(label);
  return link;
}

template <FieldScalar T>
void append(std::vector<ChainLink<T>>& out, std::vector<ChainLink<T>> more) {
  for (auto& l : more) out.push_back(std::move(l));
}

/// ||f - P_A f|| <= ||f|| one index at a time.
template <FieldScalar T>
std::vector<ChainLink<T>> suppression_links(const SpaceSpec& space, CoeffVec<T> f, const SupportSet& A,
                                            const std::string& label) {
  std::vector<ChainLink<T>> out;
  for (Index j : A) {
    if (space.norm()(std::span<const T>(f)) == 0.0) break;
    out.push_back(single_suppression(space, f, j, label + ":remove " + std::to_string(j)));
    f[j] = T(0.0);
  }
  return out;
}

/// ||f + 1_{eps A}|| <= ||f + 1_{eta B}||: swap A's indices for B's in order,
/// then add the rest of B.
template <FieldScalar T>
std::vector<ChainLink<T>> slc_links(const SpaceSpec& space, const Witness<T>& w, const std::string& label) {
  std::vector<ChainLink<T>> out;
  CoeffVec<T> v = w.f;
  for (std::size_t i = 0; i < w.A.size(); ++i) v[w.A.indices()[i]] = w.eps[i];
  for (std::size_t i = 0; i < w.B.size(); ++i) {
    const Index b = w.B.indices()[i];
    if (i < w.A.size()) {
      const Index a = w.A.indices()[i];
      CoeffVec<T> base = v;
      base[a] = T(0.0);
      out.push_back(two_point(space, base, a, w.eps[i], b, w.eta[i],
                              label + ":swap " + std::to_string(a) + "->" + std::to_string(b)));
      v = std::move(base);
      v[b] = w.eta[i];
    } else {
      v[b] = w.eta[i];
      out.push_back(single_suppression(space, v, b, label + ":add " + std::to_string(b)));
    }
  }
  return out;
}

template <FieldScalar T>
std::vector<ChainLink<T>> greedy_links(const SpaceSpec& space, const Witness<T>& w, const OracleOptions& opts) {
  const std::size_t d = space.dim();
  const CoeffVec<T>& f = w.f;
  const SupportSet A = greedy_set(f, w.m);
  if (w.m == 0 || support_of(f).size() <= w.m) return {};
  auto inner = opts;
  inner.workers = 1;
  const auto best = sigma_m(space, f, w.m, inner);
  const SupportSet& B = best.support;
  const CoeffVec<T> p = reconstruct(d, B, best.coeffs);

  double t = std::numeric_limits<double>::infinity();
  for (Index n : A) t = std::min(t, modulus(f[n]));
  CoeffVec<T> u(d, T(0.0));
  const SupportSet AB = A.unite(B);
  for (Index n = 0; n < d; ++n) {
    if (!AB.contains(n)) u[n] = f[n];
  }
  const SupportSet b_minus_a = B.minus(A);
  const SupportSet a_minus_b = A.minus(B);

  std::vector<ChainLink<T>> out;

  // Scaled SLC link, with the worst sign pattern on B \ A.
  {
    Witness<T> slc;
    slc.f = u;
    for (auto& x : slc.f) x /= t;
    slc.A = b_minus_a;
    slc.B = a_minus_b;
    for (Index n : a_minus_b) slc.eta.push_back(unit_phase(f[n]));
    double top = -1.0;
    const std::size_t k = b_minus_a.size();
    for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
      std::vector<T> eps;
      CoeffVec<T> v = slc.f;
      for (std::size_t i = 0; i < k; ++i) {
        const Index n = b_minus_a.indices()[i];
        const T s = ((pattern >> i) & 1u) ? -unit_phase(f[n]) : unit_phase(f[n]);
        eps.push_back(s);
        v[n] = s;
      }
      const double val = space.norm()(std::span<const T>(v));
      if (val > top) top = val, slc.eps = eps;
    }
    append(out, slc_links(space, slc, "slc"));
  }

  // Convexity extraction on B^c.
  CoeffVec<T> g = f;
  for (Index n = 0; n < d; ++n) g[n] -= p[n];
  CoeffVec<T> g_out = g;
  for (Index n : B) g_out[n] = T(0.0);
  {
    double top = -1.0;
    SupportSet worst;
    const std::size_t k = a_minus_b.size();
    for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
      std::vector<Index> removed;
      for (std::size_t i = 0; i < k; ++i) {
        if ((pattern >> i) & 1u) removed.push_back(a_minus_b.indices()[i]);
      }
      CoeffVec<T> v = g_out;
      for (Index n : removed) v[n] = T(0.0);
      const double val = space.norm()(std::span<const T>(v));
      if (val > top) top = val, worst = SupportSet(removed);
    }
    append(out, suppression_links(space, g_out, worst, "extract"));
  }

  append(out, suppression_links(space, g, B, "best"));
  return out;
}

}  // namespace

template <FieldScalar T>
std::optional<ChainLink<T>> worst_link(const std::vector<ChainLink<T>>& links) {
  std::optional<ChainLink<T>> best;
  for (const auto& l : links) {
    if (!best || l.ratio > best->ratio) best = l;
  }
  return best;
}

template <FieldScalar T>
std::vector<ChainLink<T>> basic_links(const SpaceSpec& space, ConstantKind kind, const Witness<T>& w,
                                      const OracleOptions& opts) {
  if (auto bad = admissibility_violation(space, kind, w)) {
    throw InvalidArgument("inadmissible " + std::string(to_string(kind)) + " witness: " + *bad);
  }
  switch (kind) {
    case ConstantKind::C_g:
    case ConstantKind::C_g_m1:
      return greedy_links(space, w, opts);
    case ConstantKind::K_s:
    case ConstantKind::K_s_single:
      return suppression_links(space, w.f, w.A, "suppress");
    case ConstantKind::Delta_slc:
      return slc_links(space, w, "slc");
    case ConstantKind::Q_star: {
      const CoeffVec<T> y = w.y.value_or(CoeffVec<T>(w.f.size(), T(0.0)));
      Witness<T> slc;
      slc.f = w.f;
      slc.A = w.A;
      slc.eps = w.eps;
      slc.B = w.B;
      for (Index n : w.B) slc.eta.push_back(y[n]);
      auto out = slc_links(space, slc, "slc");
      CoeffVec<T> fy = w.f;
      for (Index n = 0; n < fy.size(); ++n) fy[n] += y[n];
      append(out, suppression_links(space, fy, support_of(y).minus(w.B), "drop_y"));
      return out;
    }
    case ConstantKind::Q_star_singleton: {
      const Index n = w.A.indices()[0], k = w.B.indices()[0];
      std::vector<ChainLink<T>> out;
      out.push_back(two_point(space, w.f, n, w.eps[0], k, w.eta[0], "slc"));
      CoeffVec<T> full = w.f;
      full[k] = w.eta[0];
      const CoeffVec<T> y = w.y.value_or(CoeffVec<T>(w.f.size(), T(0.0)));
      for (Index i = 0; i < full.size(); ++i) full[i] += y[i];
      append(out, suppression_links(space, full, support_of(y), "drop_y"));
      return out;
    }
    case ConstantKind::C_qg:
    case ConstantKind::Delta_d:
    case ConstantKind::Delta_s:
      break;
  }
  throw InvalidArgument(std::string(to_string(kind)) + " has no chain reduction");
}

template <FieldScalar T>
Transported<T> transport_slc_to_greedy(const SpaceSpec& space, const Witness<T>& slc,
                                       const TransportOptions& opts) {
  if (slc.A.size() != 1 || slc.B.size() != 1) {
    throw InvalidArgument("the SLC transport needs a two-point witness");
  }
  Transported<T> out;
  out.route = "slc->greedy";
  out.source_ratio = ratio_of(space, ConstantKind::Delta_slc, slc, opts.oracle);
  const double r = out.source_ratio;
  const Index n = slc.A.indices()[0], k = slc.B.indices()[0];
  const double target = opts.auto_shrink ? 1.0 + (r - 1.0) / 2.0 : 1.0 + kClaimTol;

  auto build = [&](double gamma) {
    Witness<T> h;
    h.f = slc.f;
    h.f[n] = slc.eps[0];
    h.f[k] = (1.0 + gamma) * slc.eta[0];
    h.m = 1;
    h.gamma = gamma;
    return h;
  };

  double gamma = opts.gamma;
  for (;;) {
    out.witness = build(gamma);
    out.ratio = ratio_of(space, ConstantKind::C_g_m1, out.witness, opts.oracle);
    if (r <= 1.0 + kClaimTol) {
      out.status = TransportStatus::no_violation;
      break;
    }
    if (out.ratio > target) {
      out.status = TransportStatus::transported;
      break;
    }
    gamma /= 2.0;
    if (!opts.auto_shrink || gamma < opts.gamma_floor) {
      out.status = TransportStatus::failed;
      break;
    }
  }
  auto inner = opts.oracle;
  inner.workers = 1;
  const auto best = sigma_m(space, out.witness.f, 1, inner);
  out.witness.B = best.support;
  out.witness.y = reconstruct(space.dim(), best.support, best.coeffs);
  return out;
}

template <FieldScalar T>
Transported<T> transport_uncond_to_greedy(const SpaceSpec& space, const Witness<T>& suppression,
                                          const OracleOptions& opts) {
  if (suppression.A.size() != 1) throw InvalidArgument("the suppression transport needs |A| = 1");
  Transported<T> out;
  out.route = "suppression->greedy";
  out.source_ratio = ratio_of(space, ConstantKind::K_s_single, suppression, opts);
  const Index j = suppression.A.indices()[0];
  const double alpha = 2.0 * (sup_norm(suppression.f) + 1.0);
  out.witness.f = suppression.f;
  out.witness.f[j] += alpha;
  out.witness.m = 1;
  out.witness.alpha = alpha;
  out.ratio = ratio_of(space, ConstantKind::C_g_m1, out.witness, opts);
  if (out.source_ratio <= 1.0 + kClaimTol) {
    out.status = TransportStatus::no_violation;
  } else {
    out.status = out.ratio >= out.source_ratio - kClaimTol && out.ratio > 1.0 + kClaimTol
                     ? TransportStatus::transported
                     : TransportStatus::failed;
  }
  auto inner = opts;
  inner.workers = 1;
  const auto best = sigma_m(space, out.witness.f, 1, inner);
  out.witness.B = best.support;
  out.witness.y = reconstruct(space.dim(), best.support, best.coeffs);
  return out;
}

template <FieldScalar T>
Transported<T> transport_to_greedy_m1(const SpaceSpec& space, ConstantKind kind, const Witness<T>& w,
                                      const TransportOptions& opts) {
  Transported<T> out;
  out.source_ratio = ratio_of(space, kind, w, opts.oracle);
  if (kind == ConstantKind::C_g_m1 || (kind == ConstantKind::C_g && w.m == 1)) {
    out.witness = w;
    out.ratio = out.source_ratio;
    out.route = "identity";
    out.status = out.ratio > 1.0 + kClaimTol ? TransportStatus::transported : TransportStatus::no_violation;
    return out;
  }
  if (out.source_ratio <= 1.0 + kClaimTol) {
    out.status = TransportStatus::no_violation;
    out.route = "none";
    return out;
  }
  const auto link = worst_link(basic_links(space, kind, w, opts.oracle));
  if (!link || link->ratio <= 1.0 + kClaimTol) {
    out.status = TransportStatus::chain_broken;
    out.route = "chain";
    if (link) out.witness = link->witness, out.ratio = link->ratio;
    return out;
  }
  auto next = link->kind == ConstantKind::Delta_slc ? transport_slc_to_greedy(space, link->witness, opts)
                                                    : transport_uncond_to_greedy(space, link->witness, opts.oracle);
  next.route = "chain[" + link->label + "]->" + next.route;
  next.source_ratio = out.source_ratio;
  return next;
}

template <FieldScalar T>
std::vector<ChainLink<T>> singleton_links(const SpaceSpec& space, const Witness<T>& q) {
  if (auto bad = admissibility_violation(space, ConstantKind::Q_star, q)) {
    throw InvalidArgument("inadmissible Q_star witness: " + *bad);
  }
  const std::size_t d = space.dim();
  const CoeffVec<T> y = q.y.value_or(CoeffVec<T>(d, T(0.0)));
  const std::size_t k = q.A.size();
  std::vector<ChainLink<T>> out;
  CoeffVec<T> v = q.f;
  for (std::size_t i = 0; i < k; ++i) v[q.A.indices()[i]] = q.eps[i];
  const SupportSet traded(std::vector<Index>(q.B.indices().begin(), q.B.indices().begin() + static_cast<std::ptrdiff_t>(k)));
  for (std::size_t i = 0; i < k; ++i) {
    const Index n = q.A.indices()[i];
    const Index m = q.B.indices()[i];
    ChainLink<T> link;
    link.kind = ConstantKind::Q_star_singleton;
    link.witness.f = v;
    link.witness.f[n] = T(0.0);
    CoeffVec<T> rest(d, T(0.0));
    if (i + 1 == k) {
      for (Index j = 0; j < d; ++j) {
        if (!traded.contains(j)) rest[j] = y[j];
      }
    }
    link.witness.y = rest;
    link.witness.A = SupportSet{n};
    link.witness.eps = {q.eps[i]};
    link.witness.B = SupportSet{m};
    link.witness.eta = {y[m]};
    link.ratio = ratio_of(space, link.kind, link.witness, OracleOptions{});
    link.label = "trade " + std::to_string(n) + "->" + std::to_string(m);
    out.push_back(std::move(link));
    v[n] = T(0.0);
    v[m] = y[m];
  }
  return out;
}

#define TGA_INSTANTIATE(T)                                                                               \
  template Transported<T> transport_slc_to_greedy<T>(const SpaceSpec&, const Witness<T>&,                \
                                                     const TransportOptions&);                           \
  template Transported<T> transport_uncond_to_greedy<T>(const SpaceSpec&, const Witness<T>&,             \
                                                        const OracleOptions&);                           \
  template std::vector<ChainLink<T>> basic_links<T>(const SpaceSpec&, ConstantKind, const Witness<T>&,   \
                                                    const OracleOptions&);                               \
  template std::optional<ChainLink<T>> worst_link<T>(const std::vector<ChainLink<T>>&);                  \
  template Transported<T> transport_to_greedy_m1<T>(const SpaceSpec&, ConstantKind, const Witness<T>&,   \
                                                    const TransportOptions&);                            \
  template std::vector<ChainLink<T>> singleton_links<T>(const SpaceSpec&, const Witness<T>&);

TGA_INSTANTIATE(double)
TGA_INSTANTIATE(Complex)

}  // namespace tga
