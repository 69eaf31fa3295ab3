#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlsb/criteria.hpp"
#include "nlsb/scenario_io.hpp"

namespace nlsb {

struct SweepRow {
    std::size_t index = 0;
    std::vector<double> parameters;  // one value per axis, in axis order
    std::string status = "ok";       // "ok" or the error code that stopped this point
    std::vector<CriterionVerdict> verdicts;
    std::optional<double> T_I;
    std::optional<double> T_V;
};

/// Axis indices of a flat point index; the first axis varies slowest.
std::vector<std::size_t> unflatten(const SweepSpec& spec, std::size_t index);

/// Evaluates every point of the cartesian product on up to `workers` threads.
/// Rows come back in index order whatever the worker count. Throws
/// CapExceeded when the product exceeds spec.max_points.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers = 1);

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace nlsb
