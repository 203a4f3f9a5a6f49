#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acw/harness.hpp"

namespace acw {

/// Exhaustive (exact) control for cyclic ambients up to the limit, candidate
/// lower bound otherwise.
ControlEstimate best_control(const FiniteSet& a, std::int64_t exhaustive_limit);

InequalityReport eval_inequality(const std::string& spec_id, const Instance& instance, std::int64_t exhaustive_limit);

nlohmann::json instance_inputs(const Instance& instance, const std::vector<std::string>& names);

}  // namespace acw
