#include "tga/report.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "tga/errors.hpp"

namespace tga {

Json scalar_to_json(double x) { return x; }
Json scalar_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

template <>
double scalar_from_json<double>(const Json& j) {
  if (!j.is_number()) throw InvalidArgument("expected a real scalar");
  return j.get<double>();
}

template <>
Complex scalar_from_json<Complex>(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("expected a complex scalar [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

template <FieldScalar T>
Json vec_to_json(const std::vector<T>& v) {
  Json out = Json::array();
  for (const T& x : v) out.push_back(scalar_to_json(x));
  return out;
}

template <FieldScalar T>
std::vector<T> vec_from_json(const Json& j) {
  std::vector<T> out;
  for (const auto& x : j) out.push_back(scalar_from_json<T>(x));
  return out;
}

Json set_to_json(const SupportSet& s) { return s.indices(); }
SupportSet set_from_json(const Json& j) { return SupportSet(j.get<std::vector<Index>>()); }

}  // namespace

template <FieldScalar T>
Json witness_to_json(const Witness<T>& w) {
  Json j;
  j["f"] = vec_to_json(w.f);
  j["y"] = w.y ? vec_to_json(*w.y) : Json(nullptr);
  j["A"] = set_to_json(w.A);
  j["B"] = set_to_json(w.B);
  j["eps"] = vec_to_json(w.eps);
  j["eta"] = vec_to_json(w.eta);
  j["m"] = w.m;
  j["t"] = w.t;
  j["gamma"] = w.gamma;
  j["alpha"] = w.alpha;
  return j;
}

template <FieldScalar T>
Witness<T> witness_from_json(const Json& j) {
  Witness<T> w;
  w.f = vec_from_json<T>(j.at("f"));
  if (!j.at("y").is_null()) w.y = vec_from_json<T>(j.at("y"));
  w.A = set_from_json(j.at("A"));
  w.B = set_from_json(j.at("B"));
  w.eps = vec_from_json<T>(j.at("eps"));
  w.eta = vec_from_json<T>(j.at("eta"));
  w.m = j.at("m").get<std::size_t>();
  w.t = j.at("t").get<double>();
  w.gamma = j.at("gamma").get<double>();
  w.alpha = j.at("alpha").get<double>();
  return w;
}

template <FieldScalar T>
Json estimate_to_json(const ConstantEstimate<T>& e) {
  Json j;
  j["kind"] = std::string(to_string(e.kind));
  j["value"] = e.value;
  j["bound_direction"] = e.bound_direction;
  j["witness"] = witness_to_json(e.witness);
  j["samples_used"] = e.samples_used;
  j["degenerate_skipped"] = e.degenerate_skipped;
  j["strategy"] = e.strategy;
  return j;
}

template <FieldScalar T>
ConstantEstimate<T> estimate_from_json(const Json& j) {
  ConstantEstimate<T> e;
  const auto kind = parse_kind(j.at("kind").get<std::string>());
  if (!kind) throw InvalidArgument("unknown constant kind " + j.at("kind").dump());
  e.kind = *kind;
  e.value = j.at("value").get<double>();
  e.bound_direction = j.at("bound_direction").get<std::string>();
  e.witness = witness_from_json<T>(j.at("witness"));
  e.samples_used = j.at("samples_used").get<std::size_t>();
  e.degenerate_skipped = j.at("degenerate_skipped").get<std::size_t>();
  e.strategy = j.at("strategy").get<std::string>();
  return e;
}

template <FieldScalar T>
Json space_estimates_to_json(const SpaceEstimates<T>& r) {
  Json j;
  j["space"] = r.space;
  j["dim"] = r.dim;
  j["seed"] = r.seed;
  j["estimates"] = Json::array();
  for (const auto& e : r.estimates) j["estimates"].push_back(estimate_to_json(e));
  return j;
}

template <FieldScalar T>
SpaceEstimates<T> space_estimates_from_json(const Json& j) {
  SpaceEstimates<T> r;
  r.space = j.at("space").get<std::string>();
  r.dim = j.at("dim").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& e : j.at("estimates")) r.estimates.push_back(estimate_from_json<T>(e));
  return r;
}

Json make_report(const ReportHeader& header, const Json& config, const Json& results) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["header"] = {{"tool", header.tool},
                 {"version", header.version},
                 {"timestamp", header.timestamp},
                 {"wall_time_s", header.wall_time_s}};
  j["config"] = config;
  j["results"] = results;
  return j;
}

template <FieldScalar T>
std::string estimates_to_csv(const std::vector<SpaceEstimates<T>>& results) {
  std::ostringstream out;
  out.precision(17);
  out << "space,dim,seed,kind,value,bound_direction,samples_used,degenerate_skipped,strategy\n";
  for (const auto& r : results) {
    for (const auto& e : r.estimates) {
      out << '"' << r.space << "\"," << r.dim << ',' << r.seed << ',' << to_string(e.kind) << ','
          << e.value << ',' << e.bound_direction << ',' << e.samples_used << ',' << e.degenerate_skipped
          << ",\"" << e.strategy << "\"\n";
    }
  }
  return out.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

#define TGA_INSTANTIATE(T)                                                                   \
  template Json witness_to_json<T>(const Witness<T>&);                                      \
  template Witness<T> witness_from_json<T>(const Json&);                                    \
  template Json estimate_to_json<T>(const ConstantEstimate<T>&);                            \
  template ConstantEstimate<T> estimate_from_json<T>(const Json&);                          \
  template Json space_estimates_to_json<T>(const SpaceEstimates<T>&);                       \
  template SpaceEstimates<T> space_estimates_from_json<T>(const Json&);                     \
  template std::string estimates_to_csv<T>(const std::vector<SpaceEstimates<T>>&);

TGA_INSTANTIATE(double)
TGA_INSTANTIATE(Complex)

}  // namespace tga
