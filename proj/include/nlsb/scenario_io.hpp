#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nlsb/model.hpp"

namespace nlsb {

// INI-style text:
//
//   [grid]      L = 20   n = 1024
//   [params]    nu = -1  mu = 2
//   [potential] kind = quadratic  alpha = 0.5
//   [ic]        x0, p0, sigma, beta
//   [solver]    dt, t_end, blowup_threshold, record_stride
//
// One key per line; `section.key = value` outside a section is accepted as
// well. `#` starts a comment. Unknown sections or keys, duplicates and
// malformed numbers raise ParseError with "<source>:<line>: " in the message.

struct SweepAxis {
    std::string path;  // params.nu, params.mu, ic.p0, ic.x0, ic.beta, ic.sigma, potential.alpha
    std::vector<double> values;
};

struct SweepSpec {
    Scenario base;
    std::vector<SweepAxis> axes;
    std::size_t max_points = 10000;

    std::size_t point_count() const;  // saturates at SIZE_MAX
};

Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

/// A scenario plus a [sweep] section of `path = v1, v2, ...` or
/// `path = linspace(a, b, n)` lines and an optional `max_points = N`.
SweepSpec parse_sweep(std::string_view text, const std::string& source = "<sweep>");
SweepSpec load_sweep(const std::filesystem::path& path);

/// Sets one sweepable parameter. Throws ParseError for an unknown path and
/// InvalidPotential when alpha is swept on the free potential.
void apply_parameter(Scenario& scenario, const std::string& path, double value);

/// Two whitespace- or comma-separated columns (real, imag), one sample per
/// line, exactly grid.size() lines. Not renormalized.
WaveFunction load_raw_state(const std::filesystem::path& path, const GridSpec& grid);

std::string read_text_file(const std::filesystem::path& path);

nlohmann::json to_json(const Scenario& scenario);

}  // namespace nlsb
