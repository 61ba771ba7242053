#include "tga/space.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "detail/minimize.hpp"
#include "tga/errors.hpp"

namespace tga {

namespace {

std::string format_number(double x) {
  if (std::isinf(x)) return "inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string join_numbers(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_number(xs[i]);
  }
  return out;
}

double parse_number(std::string_view s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return NormModel::kInf;
  double x = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw SpaceError("cannot parse number '" + std::string(s) + "'");
  }
  return x;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::size_t stop = comma == std::string_view::npos ? s.size() : comma;
    out.push_back(parse_number(s.substr(start, stop - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void check_p(double p) {
  if (!(p >= 1.0)) throw SpaceError("p must lie in [1, inf], got " + format_number(p));
}

void check_weights(const std::vector<double>& w) {
  if (w.empty()) throw SpaceError("weight list is empty");
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) throw SpaceError("weights must be positive and finite");
  }
}

template <FieldScalar T>
double lp_value(std::span<const T> v, double p, const double* w) {
  auto weight = [&](std::size_t i) { return w ? w[i] : 1.0; };
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += weight(i) * modulus(v[i]);
    return s;
  }
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, weight(i) * modulus(v[i]));
    return m;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double a = modulus(v[i]);
      s += weight(i) * a * a;
    }
    return std::sqrt(s);
  }
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, modulus(v[i]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < v.size(); ++i) s += weight(i) * modulus(v[i]);
    return s;
  }
  const int k = static_cast<int>(p);
  if (k == p && k <= 8) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double a = modulus(v[i]) / m;
      double t = a;
      for (int j = 1; j < k; ++j) t *= a;
      s += weight(i) * t;
    }
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) s += weight(i) * std::pow(modulus(v[i]) / m, p);
  }
  return m * std::pow(s, 1.0 / p);
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, std::function<NormModel()>>& registry() {
  static std::map<std::string, std::function<NormModel()>> r = [] {
    std::map<std::string, std::function<NormModel()>> init;
    // ||v||_inf + |sum_n v_n| / 2: a norm whose canonical basis is not
    // 1-suppression unconditional.
    init["sup_half_sum"] = [] {
      return NormModel::custom(
          "sup_half_sum",
          [](std::span<const double> v) {
            double m = 0.0, s = 0.0;
            for (double x : v) {
              m = std::max(m, std::abs(x));
              s += x;
            }
            return m + std::abs(s) / 2.0;
          },
          [](std::span<const Complex> v) {
            double m = 0.0;
            Complex s = 0.0;
            for (const Complex& x : v) {
              m = std::max(m, std::abs(x));
              s += x;
            }
            return m + std::abs(s) / 2.0;
          });
    };
    return init;
  }();
  return r;
}

template <FieldScalar T>
double numerical_dual(const NormModel& norm, std::size_t dim, Index n) {
  std::vector<T> e(dim, T(0.0));
  e[n] = T(1.0);
  const double en = norm(std::span<const T>(e));
  if (dim == 1) return 1.0 / en;
  std::vector<Index> rest;
  std::vector<double> radii;
  for (Index j = 0; j < dim; ++j) {
    if (j == n) continue;
    rest.push_back(j);
    std::vector<T> ej(dim, T(0.0));
    ej[j] = T(1.0);
    radii.push_back(2.0 + 2.0 * en / norm(std::span<const T>(ej)));
  }
  auto eval = [&](std::span<const T> v) { return norm(v); };
  const auto res = detail::coordinate_descent<T>(eval, std::span<const T>(e), SupportSet(rest),
                                                 radii, 1e-13, 500);
  return 1.0 / res.value;
}

double closed_form_dual(const NormModel& norm, Index n) {
  switch (norm.family()) {
    case NormFamily::lp:
      return 1.0;
    case NormFamily::weighted_lp: {
      const double w = norm.weights()[n];
      return std::isinf(norm.p()) ? 1.0 / w : std::pow(w, -1.0 / norm.p());
    }
    case NormFamily::lorentz:
      return 1.0 / norm.weights().front();
    case NormFamily::custom:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

template <FieldScalar T>
T random_scalar(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  if constexpr (is_complex_v<T>) {
    return {g(rng), g(rng)};
  } else {
    return g(rng);
  }
}

template <FieldScalar T>
NormAxiomReport audit_axioms_impl(std::size_t dim, const NormModel& norm, std::size_t samples,
                                  std::uint64_t seed, double tol) {
  NormAxiomReport rep;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(0.7);
  auto draw = [&] {
    std::vector<T> v(dim, T(0.0));
    for (auto& x : v) {
      if (keep(rng)) x = random_scalar<T>(rng, 1.0);
    }
    return v;
  };
  auto fail = [&](const std::string& what) {
    if (rep.violations++ == 0) rep.first_violation = what;
  };
  const std::vector<T> zero(dim, T(0.0));
  if (norm(std::span<const T>(zero)) != 0.0) fail("norm of zero is not zero");
  for (std::size_t s = 0; s < samples; ++s) {
    ++rep.samples;
    const auto u = draw();
    const auto v = draw();
    const T lambda = random_scalar<T>(rng, 2.0);
    const double nu = norm(std::span<const T>(u));
    const double nv = norm(std::span<const T>(v));
    if (!(nu >= 0.0) || !std::isfinite(nu)) fail("negative or non-finite norm");
    const bool u_zero = std::all_of(u.begin(), u.end(), [](const T& x) { return x == T(0.0); });
    if (!u_zero && !(nu > 0.0)) fail("nonzero vector with zero norm");

    std::vector<T> lu(u), uv(u);
    for (std::size_t i = 0; i < dim; ++i) {
      lu[i] *= lambda;
      uv[i] += v[i];
    }
    const double expected = modulus(lambda) * nu;
    const double hom_err = std::abs(norm(std::span<const T>(lu)) - expected) / std::max(1.0, expected);
    rep.worst_homogeneity_error = std::max(rep.worst_homogeneity_error, hom_err);
    if (hom_err > tol) fail("absolute homogeneity violated");

    const double excess = (norm(std::span<const T>(uv)) - nu - nv) / std::max(1.0, nu + nv);
    rep.worst_triangle_excess = std::max(rep.worst_triangle_excess, excess);
    if (excess > tol) fail("triangle inequality violated");
  }
  return rep;
}

}  // namespace

NormModel NormModel::lp(double p) {
  check_p(p);
  NormModel m;
  m.family_ = NormFamily::lp;
  m.p_ = p;
  m.flags_ = {true, true};
  return m;
}

NormModel NormModel::weighted_lp(double p, std::vector<double> weights) {
  check_p(p);
  check_weights(weights);
  NormModel m;
  m.family_ = NormFamily::weighted_lp;
  m.p_ = p;
  m.weights_ = std::move(weights);
  m.flags_ = {true, true};
  return m;
}

NormModel NormModel::lorentz(std::vector<double> weights) {
  check_weights(weights);
  if (!std::is_sorted(weights.begin(), weights.end(), std::greater<>())) {
    throw SpaceError("Lorentz weights must be non-increasing");
  }
  NormModel m;
  m.family_ = NormFamily::lorentz;
  m.p_ = 1.0;
  m.weights_ = std::move(weights);
  m.flags_ = {true, false};
  return m;
}

NormModel NormModel::custom(std::string name, RealEvaluator real, ComplexEvaluator complex,
                            NormFlags flags) {
  if (!real) throw SpaceError("custom norm '" + name + "' has no evaluator");
  NormModel m;
  m.family_ = NormFamily::custom;
  m.name_ = std::move(name);
  m.real_ = std::move(real);
  m.complex_ = std::move(complex);
  m.flags_ = flags;
  return m;
}

std::optional<std::size_t> NormModel::intrinsic_dim() const {
  if (family_ == NormFamily::weighted_lp || family_ == NormFamily::lorentz) return weights_.size();
  return std::nullopt;
}

std::string NormModel::descriptor() const {
  switch (family_) {
    case NormFamily::lp:
      return "lp:" + format_number(p_);
    case NormFamily::weighted_lp:
      if (p_ == 1.0) return "wl1:" + join_numbers(weights_);
      return "wlp:" + format_number(p_) + ":" + join_numbers(weights_);
    case NormFamily::lorentz:
      return "lorentz:" + join_numbers(weights_);
    case NormFamily::custom:
      return "plugin:" + name_;
  }
  return {};
}

template <FieldScalar T>
double NormModel::eval_builtin(std::span<const T> v) const {
  switch (family_) {
    case NormFamily::lp:
      return lp_value(v, p_, nullptr);
    case NormFamily::weighted_lp:
      if (v.size() != weights_.size()) throw InvalidArgument("vector length does not match the weights");
      return lp_value(v, p_, weights_.data());
    case NormFamily::lorentz: {
      if (v.size() != weights_.size()) throw InvalidArgument("vector length does not match the weights");
      std::array<double, kMaxDim> mags{};
      const std::size_t d = v.size();
      for (std::size_t i = 0; i < d; ++i) mags[i] = modulus(v[i]);
      std::sort(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(d), std::greater<>());
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += weights_[i] * mags[i];
      return s;
    }
    case NormFamily::custom:
      break;
  }
  return 0.0;
}

double NormModel::operator()(std::span<const double> v) const {
  if (family_ == NormFamily::custom) return real_(v);
  return eval_builtin(v);
}

double NormModel::operator()(std::span<const Complex> v) const {
  if (family_ == NormFamily::custom) {
    if (!complex_) throw SpaceError("norm '" + name_ + "' has no complex evaluator");
    return complex_(v);
  }
  return eval_builtin(v);
}

SpaceSpec::SpaceSpec(std::size_t dim, NormModel norm, ScalarMode mode)
    : dim_(dim), norm_(std::make_shared<const NormModel>(std::move(norm))), mode_(mode) {
  if (dim_ < 1 || dim_ > kMaxDim) {
    throw SpaceError("dimension must lie in [1, " + std::to_string(kMaxDim) + "], got " +
                     std::to_string(dim_));
  }
  if (auto d = norm_->intrinsic_dim(); d && *d != dim_) {
    throw SpaceError("norm " + norm_->descriptor() + " has " + std::to_string(*d) +
                     " weights but the space has dimension " + std::to_string(dim_));
  }
  if (mode_.is_complex()) {
    if (mode_.k_roots < 2) throw SpaceError("complex mode needs k_roots >= 2");
    if (!norm_->supports_complex()) throw SpaceError("norm has no complex evaluator");
  }
  if (norm_->family() == NormFamily::custom) {
    const auto rep = mode_.is_complex()
                         ? audit_axioms_impl<Complex>(dim_, *norm_, 200, 0x5eed, 1e-9)
                         : audit_axioms_impl<double>(dim_, *norm_, 200, 0x5eed, 1e-9);
    if (!rep.ok()) {
      throw SpaceError("plugin norm " + norm_->name() + " fails the norm axioms: " +
                       rep.first_violation);
    }
  }
  dual_norms_.resize(dim_);
  for (Index n = 0; n < dim_; ++n) {
    const double closed = closed_form_dual(*norm_, n);
    if (!std::isnan(closed)) {
      dual_norms_[n] = closed;
    } else {
      dual_norms_[n] = mode_.is_complex() ? numerical_dual<Complex>(*norm_, dim_, n)
                                          : numerical_dual<double>(*norm_, dim_, n);
    }
  }
}

template <FieldScalar T>
std::vector<T> SpaceSpec::unit_scalars() const {
  if constexpr (is_complex_v<T>) {
    const int k = mode_.is_complex() ? mode_.k_roots : 2;
    std::vector<Complex> out;
    for (int j = 0; j < k; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / k;
      // Snap the exact roots so that 1, -1, i, -i carry no rounding noise.
      Complex z = std::polar(1.0, theta);
      if (4 * j % k == 0) {
        const int quarter = 4 * j / k;
        z = quarter == 0 ? Complex(1, 0) : quarter == 1 ? Complex(0, 1) : quarter == 2 ? Complex(-1, 0) : Complex(0, -1);
      }
      out.push_back(z);
    }
    return out;
  } else {
    return {1.0, -1.0};
  }
}

template std::vector<double> SpaceSpec::unit_scalars<double>() const;
template std::vector<Complex> SpaceSpec::unit_scalars<Complex>() const;

template <FieldScalar T>
double norm_eval(const SpaceSpec& space, std::span<const T> v) {
  if (v.size() != space.dim()) {
    throw InvalidArgument("vector has length " + std::to_string(v.size()) + ", space dimension is " +
                          std::to_string(space.dim()));
  }
  for (const T& x : v) {
    if (!is_finite(x)) throw InvalidArgument("non-finite coefficient");
  }
  return space.norm()(v);
}

template double norm_eval<double>(const SpaceSpec&, std::span<const double>);
template double norm_eval<Complex>(const SpaceSpec&, std::span<const Complex>);

double dual_coord_norm(const SpaceSpec& space, Index n) {
  if (n >= space.dim()) throw InvalidArgument("coordinate index out of range");
  return space.dual_norm(n);
}

double dual_coord_norm_numerical(const SpaceSpec& space, Index n) {
  if (n >= space.dim()) throw InvalidArgument("coordinate index out of range");
  return space.mode().is_complex() ? numerical_dual<Complex>(space.norm(), space.dim(), n)
                                   : numerical_dual<double>(space.norm(), space.dim(), n);
}

SeminormalizationBounds seminormalization_audit(const SpaceSpec& space) {
  SeminormalizationBounds b{NormModel::kInf, 0.0};
  for (Index n = 0; n < space.dim(); ++n) {
    std::vector<double> e(space.dim(), 0.0);
    e[n] = 1.0;
    const double xn = norm_eval(space, e);
    const double xs = dual_coord_norm(space, n);
    b.c1 = std::min({b.c1, xn, xs});
    b.c2 = std::max({b.c2, xn, xs});
  }
  if (!(b.c1 > 0.0) || !std::isfinite(b.c2) || b.c1 > b.c2) {
    throw SpaceError("basis is not semi-normalized");
  }
  return b;
}

NormAxiomReport audit_norm_axioms(std::size_t dim, const NormModel& norm, ScalarMode mode,
                                  std::size_t samples, std::uint64_t seed, double tol) {
  return mode.is_complex() ? audit_axioms_impl<Complex>(dim, norm, samples, seed, tol)
                           : audit_axioms_impl<double>(dim, norm, samples, seed, tol);
}

NormModel parse_norm(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string::npos) throw SpaceError("space descriptor '" + descriptor + "' has no ':'");
  const std::string head = descriptor.substr(0, colon);
  const std::string_view rest = std::string_view(descriptor).substr(colon + 1);
  if (head == "lp") return NormModel::lp(parse_number(rest));
  if (head == "wl1") return NormModel::weighted_lp(1.0, parse_list(rest));
  if (head == "wlp") {
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw SpaceError("wlp descriptor needs wlp:<p>:<weights>");
    return NormModel::weighted_lp(parse_number(rest.substr(0, c2)), parse_list(rest.substr(c2 + 1)));
  }
  if (head == "lorentz") return NormModel::lorentz(parse_list(rest));
  if (head == "plugin") {
    std::lock_guard lock(registry_mutex());
    const auto it = registry().find(std::string(rest));
    if (it == registry().end()) throw SpaceError("unknown plugin norm '" + std::string(rest) + "'");
    return it->second();
  }
  throw SpaceError("unknown space family '" + head + "'");
}

void register_plugin(const std::string& name, std::function<NormModel()> factory) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(factory);
}

std::vector<std::string> plugin_names() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

}  // namespace tga
