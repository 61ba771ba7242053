#include "tga/constants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>

#include "tga/errors.hpp"
#include "tga/greedy.hpp"
#include "tga/parallel.hpp"

namespace tga {

std::string_view to_string(GridLevel level) {
  switch (level) {
    case GridLevel::off:
      return "off";
    case GridLevel::coarse:
      return "coarse";
    case GridLevel::fine:
      return "fine";
  }
  return "?";
}

std::optional<GridLevel> parse_grid_level(std::string_view name) {
  if (name == "off") return GridLevel::off;
  if (name == "coarse") return GridLevel::coarse;
  if (name == "fine") return GridLevel::fine;
  return std::nullopt;
}

std::vector<double> grid_alphabet(GridLevel level) {
  if (level == GridLevel::off) return {};
  if (level == GridLevel::fine) return {0.0, 1.0, -1.0, 0.5, -0.5, 0.25, -0.25};
  return {0.0, 1.0, -1.0, 0.5, -0.5};
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t s = seed;
  for (std::uint64_t x : {stream, index}) {
    s += 0x9e3779b97f4a7c15ULL ^ x;
    s = (s ^ (s >> 30)) * 0xbf58476d1ce4e5b9ULL;
    s = (s ^ (s >> 27)) * 0x94d049bb133111ebULL;
    s ^= s >> 31;
  }
  return s;
}

namespace {

using Rng = std::mt19937_64;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum Phase : std::uint64_t { kRandomPhase = 1, kHillPhase = 2 };

Rng make_rng(std::uint64_t seed, ConstantKind kind, std::uint64_t phase, std::uint64_t index) {
  std::uint64_t s = splitmix(seed);
  s = splitmix(s ^ (static_cast<std::uint64_t>(kind) + 1) * 0x1000193ULL);
  s = splitmix(s ^ phase);
  s = splitmix(s ^ index);
  return Rng(s);
}

std::vector<double> alphabet(GridLevel level) { return grid_alphabet(level); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }
std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
double gauss(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

/// A scalar of modulus r with a random phase (sign in the real case).
template <FieldScalar T>
T with_random_phase(double r, Rng& rng) {
  if constexpr (is_complex_v<T>) {
    return std::polar(r, uniform(rng, 0.0, 2.0 * std::numbers::pi));
  } else {
    return coin(rng, 0.5) ? r : -r;
  }
}

template <FieldScalar T>
T clamp_modulus(T x, double cap) {
  const double r = modulus(x);
  return r > cap ? x * (cap / r) : x;
}

/// Unbounded coefficients with zeros and exact modulus ties mixed in.
template <FieldScalar T>
CoeffVec<T> random_free_vector(std::size_t d, Rng& rng) {
  CoeffVec<T> f(d, T(0.0));
  for (std::size_t i = 0; i < d; ++i) {
    if (coin(rng, 0.2)) continue;
    if (i > 0 && coin(rng, 0.25)) {
      f[i] = with_random_phase<T>(modulus(f[pick(rng, i)]), rng);
    } else {
      f[i] = with_random_phase<T>(std::abs(gauss(rng)), rng);
    }
  }
  return f;
}

/// A coefficient of modulus at most 1, hitting modulus exactly 1 now and then.
template <FieldScalar T>
T random_bounded(Rng& rng) {
  if (coin(rng, 0.15)) return with_random_phase<T>(1.0, rng);
  return with_random_phase<T>(std::min(1.0, std::abs(0.6 * gauss(rng))), rng);
}

/// A modulus in (0, 1) or (1, 4], away from 1.
double off_unit_modulus(Rng& rng) {
  for (;;) {
    const double r = uniform(rng, 0.0, 4.0);
    if (r > 1e-3 && std::abs(r - 1.0) > 1e-3) return r;
  }
}

template <FieldScalar T>
T random_sign(const std::vector<T>& signs, Rng& rng) {
  return signs[pick(rng, signs.size())];
}

template <FieldScalar T>
T perturbed(T x, double scale, Rng& rng) {
  if constexpr (is_complex_v<T>) {
    return x + Complex(scale * gauss(rng), scale * gauss(rng));
  } else {
    return x + scale * gauss(rng);
  }
}

/// Everything the search driver needs to know about one kind.
template <FieldScalar T>
struct Family {
  ConstantKind kind{};
  std::vector<std::size_t> radices;
  std::function<std::optional<Witness<T>>(std::span<const std::size_t>)> decode;
  std::function<Witness<T>(Rng&)> random;
  std::function<Witness<T>(const Witness<T>&, Rng&, double)> perturb;
  std::vector<Witness<T>> trivial;
  bool expensive = false;
};

/// Rebuilds eps and eta from per-index sign tables.
template <FieldScalar T>
void assign_signs(Witness<T>& w, const std::vector<T>& sign_at) {
  w.eps.clear();
  w.eta.clear();
  for (Index n : w.A) w.eps.push_back(sign_at[n]);
  for (Index n : w.B) w.eta.push_back(sign_at[n]);
}

template <FieldScalar T>
std::vector<T> sign_table(const Witness<T>& w, std::size_t d) {
  std::vector<T> s(d, T(1.0));
  for (std::size_t i = 0; i < w.A.size(); ++i) s[w.A.indices()[i]] = w.eps[i];
  for (std::size_t i = 0; i < w.B.size(); ++i) s[w.B.indices()[i]] = w.eta[i];
  return s;
}

// ---------------------------------------------------------------- families

template <FieldScalar T>
Family<T> greedy_family(const SpaceSpec& space, ConstantKind kind, GridLevel level,
                        std::vector<std::size_t> ms) {
  const std::size_t d = space.dim();
  const auto F = alphabet(level);

  Family<T> fam;
  fam.kind = kind;
  fam.expensive = kind != ConstantKind::C_qg && !space.norm().flags().is_separable_fastpath;
  fam.radices.assign(d, F.size());
  fam.radices.push_back(ms.size());
  fam.decode = [=](std::span<const std::size_t> digits) -> std::optional<Witness<T>> {
    Witness<T> w;
    w.f.resize(d);
    bool zero = true;
    for (std::size_t i = 0; i < d; ++i) {
      w.f[i] = T(F[digits[i]]);
      zero = zero && digits[i] == 0;
    }
    if (zero) return std::nullopt;
    w.m = ms[digits[d]];
    return w;
  };
  fam.random = [=](Rng& rng) {
    Witness<T> w;
    do {
      w.f = random_free_vector<T>(d, rng);
    } while (sup_norm(w.f) == 0.0);
    w.m = ms[pick(rng, ms.size())];
    return w;
  };
  fam.perturb = [=](const Witness<T>& base, Rng& rng, double step) {
    Witness<T> w = base;
    if (ms.size() > 1 && coin(rng, 0.1)) {
      w.m = ms[pick(rng, ms.size())];
    } else {
      const std::size_t i = pick(rng, d);
      w.f[i] = perturbed(w.f[i], step * std::max(sup_norm(w.f), 1e-3), rng);
    }
    return w;
  };
  Witness<T> t;
  if (kind == ConstantKind::C_qg) {
    t.f.assign(d, T(0.0));
    t.f[0] = T(1.0);
    t.m = ms.front();
    if (t.m > 0) t.f[1] = T(1.0);
  } else {
    t.f.assign(d, T(1.0));
    t.m = ms.front();
  }
  fam.trivial = {t};
  return fam;
}

std::vector<std::size_t> m_range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> ms;
  for (std::size_t m = lo; m <= hi; ++m) ms.push_back(m);
  return ms;
}

template <FieldScalar T>
Family<T> suppression_family(const SpaceSpec& space, bool single, GridLevel level) {
  const std::size_t d = space.dim();
  const auto F = alphabet(level);
  const std::size_t nz = F.size() - 1;

  Family<T> fam;
  fam.kind = single ? ConstantKind::K_s_single : ConstantKind::K_s;
  if (single) {
    fam.radices.assign(d, F.size());
    fam.radices.push_back(d);
  } else {
    fam.radices.assign(d, 1 + 2 * nz);
  }
  fam.decode = [=](std::span<const std::size_t> digits) -> std::optional<Witness<T>> {
    Witness<T> w;
    w.f.assign(d, T(0.0));
    bool zero = true;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t s = digits[i];
      if (s == 0) continue;
      zero = false;
      if (single) {
        w.f[i] = T(F[s]);
      } else {
        w.f[i] = T(F[1 + (s - 1) % nz]);
        if (s > nz) w.A = w.A.unite(SupportSet{i});
      }
    }
    if (zero) return std::nullopt;
    if (single) w.A = SupportSet{digits[d]};
    return w;
  };
  fam.random = [=](Rng& rng) {
    Witness<T> w;
    do {
      w.f = random_free_vector<T>(d, rng);
    } while (sup_norm(w.f) == 0.0);
    if (single) {
      w.A = SupportSet{pick(rng, d)};
    } else {
      std::uint32_t mask = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (coin(rng, 0.5)) mask |= 1u << i;
      }
      w.A = SupportSet::from_mask(mask);
    }
    return w;
  };
  fam.perturb = [=](const Witness<T>& base, Rng& rng, double step) {
    Witness<T> w = base;
    if (coin(rng, 0.15)) {
      const Index n = pick(rng, d);
      w.A = single ? SupportSet{n} : SupportSet::from_mask(w.A.mask() ^ (1u << n));
    } else {
      const std::size_t i = pick(rng, d);
      w.f[i] = perturbed(w.f[i], step * std::max(sup_norm(w.f), 1e-3), rng);
    }
    return w;
  };
  Witness<T> t;
  t.f.assign(d, T(0.0));
  t.f[0] = T(1.0);
  if (single) t.A = SupportSet{1};
  fam.trivial = {t};
  return fam;
}

template <FieldScalar T>
Family<T> slc_family(const SpaceSpec& space, GridLevel level) {
  const std::size_t d = space.dim();
  const auto F = alphabet(level);
  const auto S = space.unit_scalars<T>();
  const std::size_t nz = F.size() - 1;
  const std::size_t ns = S.size();

  Family<T> fam;
  fam.kind = ConstantKind::Delta_slc;
  // 0 | f value | A with sign | B with sign
  fam.radices.assign(d, 1 + nz + 2 * ns);
  fam.decode = [=](std::span<const std::size_t> digits) -> std::optional<Witness<T>> {
    Witness<T> w;
    w.f.assign(d, T(0.0));
    std::vector<T> sign_at(d, T(1.0));
    std::uint32_t a = 0, b = 0;
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t s = digits[i];
      if (s == 0) continue;
      if (s <= nz) {
        w.f[i] = T(F[s]);
        continue;
      }
      s -= nz + 1;
      sign_at[i] = S[s % ns];
      (s < ns ? a : b) |= 1u << i;
    }
    w.A = SupportSet::from_mask(a);
    w.B = SupportSet::from_mask(b);
    if (w.A.size() > w.B.size()) return std::nullopt;
    assign_signs(w, sign_at);
    return w;
  };
  fam.random = [=](Rng& rng) {
    Witness<T> w;
    w.f.assign(d, T(0.0));
    std::vector<T> sign_at(d, T(1.0));
    std::uint32_t a = 0, b = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const double u = uniform(rng, 0.0, 1.0);
      sign_at[i] = random_sign(S, rng);
      if (u < 0.2) continue;
      if (u < 0.6) {
        w.f[i] = random_bounded<T>(rng);
      } else if (u < 0.8) {
        a |= 1u << i;
      } else {
        b |= 1u << i;
      }
    }
    if (std::popcount(a) > std::popcount(b)) std::swap(a, b);
    w.A = SupportSet::from_mask(a);
    w.B = SupportSet::from_mask(b);
    assign_signs(w, sign_at);
    return w;
  };
  fam.perturb = [=](const Witness<T>& base, Rng& rng, double step) {
    Witness<T> w = base;
    const SupportSet used = w.A.unite(w.B);
    if (!used.empty() && coin(rng, 0.2)) {
      auto sign_at = sign_table(w, d);
      sign_at[used.indices()[pick(rng, used.size())]] = random_sign(S, rng);
      assign_signs(w, sign_at);
      return w;
    }
    const SupportSet free = SupportSet::range(d).minus(used);
    if (free.empty()) return w;
    const Index i = free.indices()[pick(rng, free.size())];
    w.f[i] = clamp_modulus(perturbed(w.f[i], step, rng), 1.0);
    return w;
  };
  Witness<T> t;
  t.f.assign(d, T(0.0));
  t.f[0] = T(1.0);
  fam.trivial = {t};
  return fam;
}

template <FieldScalar T>
Family<T> q_star_family(const SpaceSpec& space, GridLevel level) {
  const std::size_t d = space.dim();
  const auto F = alphabet(level);
  const auto S = space.unit_scalars<T>();
  const std::vector<double> off = {0.5, -0.5, 2.0, -2.0};
  const std::size_t nz = F.size() - 1;
  const std::size_t ns = S.size();

  Family<T> fam;
  fam.kind = ConstantKind::Q_star;
  // 0 | f value | A with sign | y on B with sign | y off B
  fam.radices.assign(d, 1 + nz + 2 * ns + off.size());
  fam.decode = [=](std::span<const std::size_t> digits) -> std::optional<Witness<T>> {
    Witness<T> w;
    w.f.assign(d, T(0.0));
    CoeffVec<T> y(d, T(0.0));
    std::vector<T> sign_at(d, T(1.0));
    std::uint32_t a = 0;
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t s = digits[i];
      if (s == 0) continue;
      if (s <= nz) {
        w.f[i] = T(F[s]);
        continue;
      }
      s -= nz + 1;
      if (s < ns) {
        a |= 1u << i;
        sign_at[i] = S[s];
      } else if (s < 2 * ns) {
        y[i] = S[s - ns];
      } else {
        y[i] = T(off[s - 2 * ns]);
      }
    }
    w.A = SupportSet::from_mask(a);
    w.B = modulus_one_set(y);
    if (w.A.size() > w.B.size()) return std::nullopt;
    w.y = std::move(y);
    assign_signs(w, sign_at);
    return w;
  };
  fam.random = [=](Rng& rng) {
    Witness<T> w;
    w.f.assign(d, T(0.0));
    CoeffVec<T> y(d, T(0.0));
    std::vector<T> sign_at(d, T(1.0));
    std::vector<Index> a_list, b_list;
    for (std::size_t i = 0; i < d; ++i) {
      const double u = uniform(rng, 0.0, 1.0);
      if (u < 0.15) continue;
      if (u < 0.45) {
        w.f[i] = random_bounded<T>(rng);
      } else if (u < 0.65) {
        a_list.push_back(i);
        sign_at[i] = random_sign(S, rng);
      } else if (u < 0.85) {
        b_list.push_back(i);
        y[i] = random_sign(S, rng);
      } else {
        y[i] = with_random_phase<T>(off_unit_modulus(rng), rng);
      }
    }
    while (a_list.size() > b_list.size()) {
      const Index n = a_list.back();
      a_list.pop_back();
      b_list.push_back(n);
      y[n] = random_sign(S, rng);
    }
    w.A = SupportSet(a_list);
    w.B = modulus_one_set(y);
    w.y = std::move(y);
    assign_signs(w, sign_at);
    return w;
  };
  fam.perturb = [=](const Witness<T>& base, Rng& rng, double step) {
    Witness<T> w = base;
    CoeffVec<T>& y = *w.y;
    const double u = uniform(rng, 0.0, 1.0);
    if (u < 0.2 && !w.A.empty()) {
      w.eps[pick(rng, w.eps.size())] = random_sign(S, rng);
      return w;
    }
    const SupportSet off_b = support_of(y).minus(w.B);
    if (u < 0.45 && !off_b.empty()) {
      const Index i = off_b.indices()[pick(rng, off_b.size())];
      const T next = perturbed(y[i], step * std::max(1.0, modulus(y[i])), rng);
      const double r = modulus(next);
      if (r > 1e-6 && std::abs(r - 1.0) > 1e-6) y[i] = next;
      return w;
    }
    if (u < 0.55 && !w.B.empty()) {
      const Index i = w.B.indices()[pick(rng, w.B.size())];
      y[i] = random_sign(S, rng);
      return w;
    }
    const SupportSet free = SupportSet::range(d).minus(w.A.unite(support_of(y)));
    if (free.empty()) return w;
    const Index i = free.indices()[pick(rng, free.size())];
    w.f[i] = clamp_modulus(perturbed(w.f[i], step, rng), 1.0);
    return w;
  };
  Witness<T> t;
  t.f.assign(d, T(0.0));
  t.f[0] = T(1.0);
  t.y = CoeffVec<T>(d, T(0.0));
  fam.trivial = {t};
  return fam;
}

template <FieldScalar T>
Family<T> q_singleton_family(const SpaceSpec& space, GridLevel level) {
  const std::size_t d = space.dim();
  const auto F = alphabet(level);
  const auto S = space.unit_scalars<T>();
  const std::vector<double> yv = {0.5, -0.5, 1.0, -1.0, 2.0, -2.0};
  const std::size_t nz = F.size() - 1;
  const std::size_t ns = S.size();

  Family<T> fam;
  fam.kind = ConstantKind::Q_star_singleton;
  // ordered pair (n, k), eps, eta, then the other d - 2 indices: 0 | f value | y value
  fam.radices = {d * (d - 1), ns, ns};
  fam.radices.insert(fam.radices.end(), d - 2, 1 + nz + yv.size());
  auto make = [=](Index n, Index k, T eps, T eta) {
    Witness<T> w;
    w.f.assign(d, T(0.0));
    w.y = CoeffVec<T>(d, T(0.0));
    w.A = SupportSet{n};
    w.B = SupportSet{k};
    w.eps = {eps};
    w.eta = {eta};
    return w;
  };
  auto others = [=](Index n, Index k) {
    std::vector<Index> rest;
    for (Index i = 0; i < d; ++i) {
      if (i != n && i != k) rest.push_back(i);
    }
    return rest;
  };
  fam.decode = [=](std::span<const std::size_t> digits) -> std::optional<Witness<T>> {
    const Index n = digits[0] / (d - 1);
    Index k = digits[0] % (d - 1);
    if (k >= n) ++k;
    Witness<T> w = make(n, k, S[digits[1]], S[digits[2]]);
    const auto rest = others(n, k);
    for (std::size_t r = 0; r < rest.size(); ++r) {
      const std::size_t s = digits[3 + r];
      if (s == 0) continue;
      if (s <= nz) {
        w.f[rest[r]] = T(F[s]);
      } else {
        (*w.y)[rest[r]] = T(yv[s - nz - 1]);
      }
    }
    return w;
  };
  fam.random = [=](Rng& rng) {
    const Index n = pick(rng, d);
    Index k = pick(rng, d - 1);
    if (k >= n) ++k;
    Witness<T> w = make(n, k, random_sign(S, rng), random_sign(S, rng));
    for (Index i : others(n, k)) {
      const double u = uniform(rng, 0.0, 1.0);
      if (u < 0.2) continue;
      if (u < 0.6) {
        w.f[i] = random_bounded<T>(rng);
      } else {
        (*w.y)[i] = with_random_phase<T>(coin(rng, 0.3) ? 1.0 : off_unit_modulus(rng), rng);
      }
    }
    return w;
  };
  fam.perturb = [=](const Witness<T>& base, Rng& rng, double step) {
    Witness<T> w = base;
    const double u = uniform(rng, 0.0, 1.0);
    if (u < 0.1) {
      w.eps = {random_sign(S, rng)};
      return w;
    }
    if (u < 0.2) {
      w.eta = {random_sign(S, rng)};
      return w;
    }
    CoeffVec<T>& y = *w.y;
    const auto rest = others(w.A.indices()[0], w.B.indices()[0]);
    if (rest.empty()) return w;
    const Index i = rest[pick(rng, rest.size())];
    if (y[i] != T(0.0)) {
      y[i] = perturbed(y[i], step * std::max(1.0, modulus(y[i])), rng);
    } else {
      w.f[i] = clamp_modulus(perturbed(w.f[i], step, rng), 1.0);
    }
    return w;
  };
  for (Index n = 0; n < d; ++n) {
    for (Index k = 0; k < d; ++k) {
      if (n != k) fam.trivial.push_back(make(n, k, T(1.0), T(1.0)));
    }
  }
  return fam;
}

// ------------------------------------------------------------------ driver

template <FieldScalar T>
struct Candidate {
  double ratio = -std::numeric_limits<double>::infinity();
  Witness<T> witness;
  bool found = false;
};

template <FieldScalar T>
struct Tally {
  Candidate<T> best;
  std::size_t samples = 0;
  std::size_t degenerate = 0;

  void offer(double ratio, const Witness<T>& w) {
    if (!best.found || ratio > best.ratio) best = {ratio, w, true};
  }
  void absorb(const Tally& other) {
    samples += other.samples;
    degenerate += other.degenerate;
    if (other.best.found) offer(other.best.ratio, other.best.witness);
  }
};

template <FieldScalar T>
class Search {
 public:
  Search(const SpaceSpec& space, const Budget& budget, Family<T> fam)
      : space_(space), budget_(budget), fam_(std::move(fam)) {
    opts_ = budget.oracle;
    opts_.workers = 1;
  }

  ConstantEstimate<T> run() {
    Tally<T> total;
    std::string phases = "trivial";
    std::string best_phase = "trivial";
    auto merge = [&](const Tally<T>& t, const char* name) {
      const bool better = t.best.found && (!total.best.found || t.best.ratio > total.best.ratio);
      total.absorb(t);
      if (better) best_phase = name;
    };

    Tally<T> trivial;
    for (const auto& w : fam_.trivial) score(w, trivial);
    merge(trivial, "trivial");

    if (auto grid = grid_phase()) {
      phases += "+grid:" + std::string(to_string(budget_.grid));
      merge(*grid, "grid");
    }
    if (budget_.samples > 0) {
      phases += "+random";
      merge(random_phase(), "random");
    }
    if (budget_.hillclimb_rounds > 0 && total.best.found) {
      phases += "+hillclimb";
      merge(hill_phase(total.best), "hillclimb");
    }
    if (!total.best.found) throw Error("no admissible instance for " + std::string(to_string(fam_.kind)));

    ConstantEstimate<T> est;
    est.kind = fam_.kind;
    est.value = total.best.ratio;
    est.witness = total.best.witness;
    est.samples_used = total.samples;
    est.degenerate_skipped = total.degenerate;
    est.strategy = phases + ";best=" + best_phase;
    return est;
  }

 private:
  void score(const Witness<T>& w, Tally<T>& tally) const {
    if (auto bad = admissibility_violation(space_, fam_.kind, w)) {
      throw std::logic_error("generator produced an inadmissible " + std::string(to_string(fam_.kind)) +
                             " instance: " + *bad);
    }
    ++tally.samples;
    const auto parts = evaluate_instance(space_, fam_.kind, w, opts_);
    if (!parts) {
      ++tally.degenerate;
      return;
    }
    tally.offer(parts->ratio(), w);
  }

  std::optional<Tally<T>> grid_phase() const {
    if (budget_.grid == GridLevel::off || fam_.radices.empty()) return std::nullopt;
    if (space_.dim() > budget_.max_grid_dim) return std::nullopt;
    const std::size_t cap =
        fam_.expensive ? budget_.max_generic_oracle_grid_instances : budget_.max_grid_instances;
    std::size_t total = 1;
    for (std::size_t r : fam_.radices) {
      if (total > cap / std::max<std::size_t>(r, 1)) return std::nullopt;
      total *= r;
    }
    std::vector<Tally<T>> parts(std::max(1u, budget_.workers));
    parallel_chunks(total, budget_.workers, [&](std::size_t begin, std::size_t end, unsigned worker) {
      std::vector<std::size_t> digits(fam_.radices.size());
      for (std::size_t idx = begin; idx < end; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = 0; i < digits.size(); ++i) {
          digits[i] = rest % fam_.radices[i];
          rest /= fam_.radices[i];
        }
        if (auto w = fam_.decode(digits)) score(*w, parts[worker]);
      }
    });
    Tally<T> out;
    for (const auto& p : parts) out.absorb(p);
    return out;
  }

  Tally<T> random_phase() const {
    std::vector<Tally<T>> parts(std::max(1u, budget_.workers));
    parallel_chunks(budget_.samples, budget_.workers, [&](std::size_t begin, std::size_t end, unsigned worker) {
      for (std::size_t idx = begin; idx < end; ++idx) {
        Rng rng = make_rng(budget_.seed, fam_.kind, kRandomPhase, idx);
        score(fam_.random(rng), parts[worker]);
      }
    });
    Tally<T> out;
    for (const auto& p : parts) out.absorb(p);
    return out;
  }

  Tally<T> hill_phase(const Candidate<T>& start) const {
    Rng rng = make_rng(budget_.seed, fam_.kind, kHillPhase, 0);
    Tally<T> out;
    Candidate<T> current = start;
    const double rounds = static_cast<double>(budget_.hillclimb_rounds);
    for (std::size_t r = 0; r < budget_.hillclimb_rounds; ++r) {
      const double step = 0.5 * (1.0 - static_cast<double>(r) / rounds) + 0.02;
      const Witness<T> next = fam_.perturb(current.witness, rng, step);
      Tally<T> one;
      score(next, one);
      out.samples += one.samples;
      out.degenerate += one.degenerate;
      if (one.best.found && one.best.ratio > current.ratio) {
        current = one.best;
        out.offer(current.ratio, current.witness);
      }
    }
    return out;
  }

  const SpaceSpec& space_;
  Budget budget_;
  Family<T> fam_;
  OracleOptions opts_;
};

void require_dim(const SpaceSpec& space) {
  if (space.dim() < 2) throw InvalidArgument("constant estimates need dim >= 2");
}

/// Adopts other's witness when it is strictly better and sums the counters.
template <FieldScalar T>
void dominate(ConstantEstimate<T>& est, const ConstantEstimate<T>& other, const Witness<T>& as_witness,
              const std::string& label) {
  est.samples_used += other.samples_used;
  est.degenerate_skipped += other.degenerate_skipped;
  est.strategy += "+" + label;
  if (other.value > est.value) {
    est.value = other.value;
    est.witness = as_witness;
    est.strategy += ";best=" + label;
  }
}

template <FieldScalar T>
void fill_best_approximant(const SpaceSpec& space, const Budget& budget, ConstantEstimate<T>& est) {
  auto opts = budget.oracle;
  opts.workers = 1;
  const auto best = sigma_m(space, est.witness.f, est.witness.m, opts);
  est.witness.B = best.support;
  est.witness.y = reconstruct(space.dim(), best.support, best.coeffs);
}

void validate_gaps(std::span<const std::size_t> gaps, std::size_t dim) {
  if (gaps.empty()) throw InvalidArgument("gap sequence is empty");
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] < 1 || gaps[i] > dim) throw InvalidArgument("gap entries must lie in [1, dim]");
    if (i > 0 && gaps[i] <= gaps[i - 1]) throw InvalidArgument("gap sequence must be strictly increasing");
  }
}

}  // namespace

template <FieldScalar T>
Witness<T> embed_singleton_in_q_star(const Witness<T>& s) {
  Witness<T> w;
  w.f = s.f;
  CoeffVec<T> y = s.y.value_or(CoeffVec<T>(s.f.size(), T(0.0)));
  y[s.B.indices().at(0)] += s.eta.at(0);
  w.A = s.A;
  w.eps = s.eps;
  w.B = modulus_one_set(y);
  w.y = std::move(y);
  return w;
}

template <FieldScalar T>
ConstantEstimate<T> estimate_greedy_constant(const SpaceSpec& space, const Budget& budget, bool m1_only) {
  require_dim(space);
  const auto kind = m1_only ? ConstantKind::C_g_m1 : ConstantKind::C_g;
  const auto ms = m1_only ? m_range(1, 1) : m_range(1, space.dim() - 1);
  auto est = Search<T>(space, budget, greedy_family<T>(space, kind, budget.grid, ms)).run();
  fill_best_approximant(space, budget, est);
  return est;
}

template <FieldScalar T>
ConstantEstimate<T> estimate_gap_constant(const SpaceSpec& space, std::span<const std::size_t> gaps,
                                          const Budget& budget) {
  require_dim(space);
  validate_gaps(gaps, space.dim());
  if (gaps.front() >= space.dim()) throw InvalidArgument("gap constant needs an entry below dim");
  const std::vector<std::size_t> ms(gaps.begin(), gaps.end());
  auto est = Search<T>(space, budget, greedy_family<T>(space, ConstantKind::C_g, budget.grid, ms)).run();
  fill_best_approximant(space, budget, est);
  return est;
}

template <FieldScalar T>
ConstantEstimate<T> estimate_quasi_greedy(const SpaceSpec& space, const Budget& budget, bool m1_only) {
  require_dim(space);
  const auto ms = m1_only ? m_range(1, 1) : m_range(0, space.dim() - 1);
  return Search<T>(space, budget, greedy_family<T>(space, ConstantKind::C_qg, budget.grid, ms)).run();
}

template <FieldScalar T>
ConstantEstimate<T> estimate_suppression(const SpaceSpec& space, const Budget& budget, bool single_only) {
  require_dim(space);
  auto single = Search<T>(space, budget, suppression_family<T>(space, true, budget.grid)).run();
  if (single_only) return single;
  auto est = Search<T>(space, budget, suppression_family<T>(space, false, budget.grid)).run();
  dominate(est, single, single.witness, "single");
  return est;
}

template <FieldScalar T>
ConstantEstimate<T> estimate_democracy(const SpaceSpec& space, const Budget& budget, bool signed_sets) {
  require_dim(space);
  const std::size_t d = space.dim();
  const auto S = signed_sets ? space.unit_scalars<T>() : std::vector<T>{T(1.0)};
  const std::size_t radix = 1 + S.size();
  const auto kind = signed_sets ? ConstantKind::Delta_s : ConstantKind::Delta_d;

  ConstantEstimate<T> est;
  est.kind = kind;

  std::size_t patterns = 1;
  bool exhaustive = true;
  for (std::size_t i = 0; i < d; ++i) {
    if (patterns > budget.max_grid_instances / radix) {
      exhaustive = false;
      break;
    }
    patterns *= radix;
  }

  auto decode = [&](std::size_t idx, SupportSet& set, std::vector<T>& signs) {
    std::uint32_t mask = 0;
    std::vector<T> by_index(d, T(1.0));
    for (std::size_t i = 0; i < d; ++i, idx /= radix) {
      const std::size_t s = idx % radix;
      if (s == 0) continue;
      mask |= 1u << i;
      by_index[i] = S[s - 1];
    }
    set = SupportSet::from_mask(mask);
    signs.clear();
    for (Index n : set) signs.push_back(by_index[n]);
  };

  if (exhaustive) {
    // Largest and smallest indicator norm for each cardinality; the supremum
    // pairs a largest numerator with a smallest denominator of no smaller size.
    struct Extreme {
      double hi = -1.0, lo = std::numeric_limits<double>::infinity();
      std::size_t hi_at = 0, lo_at = 0;
    };
    std::vector<std::vector<Extreme>> parts(std::max(1u, budget.workers), std::vector<Extreme>(d + 1));
    parallel_chunks(patterns, budget.workers, [&](std::size_t begin, std::size_t end, unsigned worker) {
      SupportSet set;
      std::vector<T> signs;
      for (std::size_t idx = begin; idx < end; ++idx) {
        decode(idx, set, signs);
        const double v = space.norm()(std::span<const T>(indicator<T>(d, SignVec<T>{set, signs})));
        auto& e = parts[worker][set.size()];
        if (v > e.hi) e.hi = v, e.hi_at = idx;
        if (v < e.lo) e.lo = v, e.lo_at = idx;
      }
    });
    std::vector<Extreme> ext(d + 1);
    for (const auto& p : parts) {
      for (std::size_t c = 0; c <= d; ++c) {
        if (p[c].hi > ext[c].hi) ext[c].hi = p[c].hi, ext[c].hi_at = p[c].hi_at;
        if (p[c].lo < ext[c].lo) ext[c].lo = p[c].lo, ext[c].lo_at = p[c].lo_at;
      }
    }
    double best = -1.0;
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t a = 0; a <= d; ++a) {
      for (std::size_t b = std::max<std::size_t>(a, 1); b <= d; ++b) {
        const double r = ext[a].hi / ext[b].lo;
        if (r > best) best = r, best_a = ext[a].hi_at, best_b = ext[b].lo_at;
      }
    }
    est.value = best;
    decode(best_a, est.witness.A, est.witness.eps);
    decode(best_b, est.witness.B, est.witness.eta);
    est.samples_used = patterns;
    est.strategy = "exhaustive";
    return est;
  }

  Tally<T> tally;
  auto offer = [&](Witness<T> w) {
    ++tally.samples;
    const auto parts = evaluate_instance(space, kind, w);
    if (!parts) {
      ++tally.degenerate;
      return;
    }
    tally.offer(parts->ratio(), w);
  };
  Witness<T> t;
  t.A = t.B = SupportSet{0};
  t.eps = t.eta = {T(1.0)};
  offer(t);
  for (std::size_t idx = 0; idx < budget.samples; ++idx) {
    Rng rng = make_rng(budget.seed, kind, kRandomPhase, idx);
    const std::size_t nb = 1 + pick(rng, d);
    const std::size_t na = pick(rng, nb + 1);
    auto draw = [&](std::size_t k, SupportSet& set, std::vector<T>& signs) {
      std::vector<Index> all(d);
      for (Index i = 0; i < d; ++i) all[i] = i;
      std::shuffle(all.begin(), all.end(), rng);
      set = SupportSet(std::vector<Index>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k)));
      signs.clear();
      for (std::size_t i = 0; i < k; ++i) signs.push_back(random_sign(S, rng));
    };
    Witness<T> w;
    draw(na, w.A, w.eps);
    draw(nb, w.B, w.eta);
    offer(w);
  }
  est.value = tally.best.ratio;
  est.witness = tally.best.witness;
  est.samples_used = tally.samples;
  est.degenerate_skipped = tally.degenerate;
  est.strategy = "random";
  if (signed_sets) {
    const auto plain = estimate_democracy<T>(space, budget, false);
    dominate(est, plain, plain.witness, "unsigned");
  }
  return est;
}

template <FieldScalar T>
ConstantEstimate<T> estimate_slc(const SpaceSpec& space, const Budget& budget) {
  require_dim(space);
  return Search<T>(space, budget, slc_family<T>(space, budget.grid)).run();
}

template <FieldScalar T>
ConstantEstimate<T> estimate_q_star_singleton(const SpaceSpec& space, const Budget& budget) {
  require_dim(space);
  return Search<T>(space, budget, q_singleton_family<T>(space, budget.grid)).run();
}

template <FieldScalar T>
ConstantEstimate<T> estimate_q_star(const SpaceSpec& space, const Budget& budget) {
  require_dim(space);
  auto est = Search<T>(space, budget, q_star_family<T>(space, budget.grid)).run();
  const auto single = estimate_q_star_singleton<T>(space, budget);
  dominate(est, single, embed_singleton_in_q_star(single.witness), "singleton");
  return est;
}

template <FieldScalar T>
std::vector<Witness<T>> random_instances(const SpaceSpec& space, ConstantKind kind, std::size_t count,
                                         std::uint64_t seed) {
  require_dim(space);
  Family<T> fam;
  switch (kind) {
    case ConstantKind::C_g:
      fam = greedy_family<T>(space, kind, GridLevel::coarse, m_range(1, space.dim() - 1));
      break;
    case ConstantKind::C_g_m1:
      fam = greedy_family<T>(space, kind, GridLevel::coarse, m_range(1, 1));
      break;
    case ConstantKind::C_qg:
      fam = greedy_family<T>(space, kind, GridLevel::coarse, m_range(0, space.dim() - 1));
      break;
    case ConstantKind::K_s:
    case ConstantKind::K_s_single:
      fam = suppression_family<T>(space, kind == ConstantKind::K_s_single, GridLevel::coarse);
      break;
    case ConstantKind::Delta_slc:
      fam = slc_family<T>(space, GridLevel::coarse);
      break;
    case ConstantKind::Q_star:
      fam = q_star_family<T>(space, GridLevel::coarse);
      break;
    case ConstantKind::Q_star_singleton:
      fam = q_singleton_family<T>(space, GridLevel::coarse);
      break;
    case ConstantKind::Delta_d:
    case ConstantKind::Delta_s:
      throw InvalidArgument("democracy instances are enumerated, not sampled");
  }
  std::vector<Witness<T>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = make_rng(seed, kind, kRandomPhase, i);
    out.push_back(fam.random(rng));
  }
  return out;
}

template <FieldScalar T>
ConstantEstimate<T> estimate(const SpaceSpec& space, ConstantKind kind, const Budget& budget) {
  switch (kind) {
    case ConstantKind::C_g:
      return estimate_greedy_constant<T>(space, budget, false);
    case ConstantKind::C_g_m1:
      return estimate_greedy_constant<T>(space, budget, true);
    case ConstantKind::C_qg:
      return estimate_quasi_greedy<T>(space, budget, false);
    case ConstantKind::K_s:
      return estimate_suppression<T>(space, budget, false);
    case ConstantKind::K_s_single:
      return estimate_suppression<T>(space, budget, true);
    case ConstantKind::Delta_d:
      return estimate_democracy<T>(space, budget, false);
    case ConstantKind::Delta_s:
      return estimate_democracy<T>(space, budget, true);
    case ConstantKind::Delta_slc:
      return estimate_slc<T>(space, budget);
    case ConstantKind::Q_star:
      return estimate_q_star<T>(space, budget);
    case ConstantKind::Q_star_singleton:
      return estimate_q_star_singleton<T>(space, budget);
  }
  throw InvalidArgument("unknown constant kind");
}

#define TGA_INSTANTIATE(T)                                                                           \
  template std::vector<Witness<T>> random_instances<T>(const SpaceSpec&, ConstantKind, std::size_t,  \
                                                       std::uint64_t);                               \
  template Witness<T> embed_singleton_in_q_star<T>(const Witness<T>&);                               \
  template ConstantEstimate<T> estimate<T>(const SpaceSpec&, ConstantKind, const Budget&);           \
  template ConstantEstimate<T> estimate_greedy_constant<T>(const SpaceSpec&, const Budget&, bool);   \
  template ConstantEstimate<T> estimate_quasi_greedy<T>(const SpaceSpec&, const Budget&, bool);      \
  template ConstantEstimate<T> estimate_gap_constant<T>(const SpaceSpec&, std::span<const std::size_t>, \
                                                        const Budget&);                              \
  template ConstantEstimate<T> estimate_suppression<T>(const SpaceSpec&, const Budget&, bool);       \
  template ConstantEstimate<T> estimate_democracy<T>(const SpaceSpec&, const Budget&, bool);         \
  template ConstantEstimate<T> estimate_slc<T>(const SpaceSpec&, const Budget&);                     \
  template ConstantEstimate<T> estimate_q_star<T>(const SpaceSpec&, const Budget&);                  \
  template ConstantEstimate<T> estimate_q_star_singleton<T>(const SpaceSpec&, const Budget&);

TGA_INSTANTIATE(double)
TGA_INSTANTIATE(Complex)

}  // namespace tga
