#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/mechanisms.hpp"

#include <json.hpp>

#include <string>

namespace fairmatch {

using Json = nlohmann::ordered_json;

/// Errors name the offending field; all throw std::invalid_argument.
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& inst);
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

Json hospital_pref_to_json(const HospitalPrefModel& model, const Instance& inst);

Json matching_to_json(const Matching& m, const Instance& inst);
Json matrix_to_json(const AllocationMatrix& P);
Json trace_to_json(const RoundTrace& trace, const Instance& inst);
/// {matchings:[{weight, map}], marginals, trace?}
Json allocation_to_json(const MatchingDistribution& md, const Instance& inst, const RoundTrace* trace = nullptr);
std::string serialize_allocation(const MatchingDistribution& md, const Instance& inst, const RoundTrace* trace = nullptr);

/// Reads "matchings" when present, otherwise BvN-decomposes "marginals".
MatchingDistribution allocation_from_json(const Json& j, const Instance& inst);
MatchingDistribution parse_allocation(const std::string& text, const Instance& inst);

/// JSON array of rows (rational strings or integers) or whitespace-separated text rows.
AllocationMatrix parse_matrix(const std::string& text);

std::string format_matrix(const AllocationMatrix& P);

}  // namespace fairmatch
