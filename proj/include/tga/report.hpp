#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "tga/constants.hpp"
#include "tga/witness.hpp"

namespace tga {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Reals are numbers; complex scalars are [re, im] pairs.
Json scalar_to_json(double x);
Json scalar_to_json(const Complex& z);
template <FieldScalar T>
T scalar_from_json(const Json& j);

template <FieldScalar T>
Json witness_to_json(const Witness<T>& w);
template <FieldScalar T>
Witness<T> witness_from_json(const Json& j);

template <FieldScalar T>
Json estimate_to_json(const ConstantEstimate<T>& e);
template <FieldScalar T>
ConstantEstimate<T> estimate_from_json(const Json& j);

/// Estimates of one (space, dim) pair.
template <FieldScalar T>
struct SpaceEstimates {
  std::string space;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<ConstantEstimate<T>> estimates;

  friend bool operator==(const SpaceEstimates&, const SpaceEstimates&) = default;
};

template <FieldScalar T>
Json space_estimates_to_json(const SpaceEstimates<T>& r);
template <FieldScalar T>
SpaceEstimates<T> space_estimates_from_json(const Json& j);

struct ReportHeader {
  std::string tool = "tga";
  std::string version;
  std::string timestamp;
  double wall_time_s = 0.0;
};

/// {schema_version, header, config, results}. Everything that may differ
/// between two runs of the same configuration lives in header.
Json make_report(const ReportHeader& header, const Json& config, const Json& results);

/// One CSV row per estimate, witnesses omitted.
template <FieldScalar T>
std::string estimates_to_csv(const std::vector<SpaceEstimates<T>>& results);

/// UTC time as 2024-01-31T12:00:00Z.
std::string utc_timestamp();

}  // namespace tga
