// nlsb: blow-up criteria, simulations, verification and sweeps for the 1D NLS.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlsb/criteria.hpp"
#include "nlsb/error.hpp"
#include "nlsb/scenario_io.hpp"
#include "nlsb/solver.hpp"
#include "nlsb/spectral.hpp"
#include "nlsb/sweep.hpp"
#include "nlsb/verify.hpp"

namespace fs = std::filesystem;
using namespace nlsb;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInvalidInput = 2, kNumericalFailure = 4, kIo = 5, kCap = 6 };

struct Options {
    std::string input;
    std::string out;
    std::string format = "both";
    unsigned workers = 1;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<double> threshold;
    std::string raw_ic;
    std::optional<std::size_t> max_points;
};

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return kIo;
        case ErrorCode::CapExceeded: return kCap;
        case ErrorCode::NonFinite: return kNumericalFailure;
        default: return kInvalidInput;
    }
}

bool wants_json(const Options& o) { return o.format == "json" || o.format == "both"; }
bool wants_csv(const Options& o) { return o.format == "csv" || o.format == "both"; }

void apply_overrides(Scenario& sc, const Options& o) {
    if (o.dt) sc.solver.dt = *o.dt;
    if (o.t_end) sc.solver.t_end = *o.t_end;
    if (o.threshold) sc.solver.blowup_threshold = *o.threshold;
    sc.validate();
}

fs::path output_dir(const Options& o, const std::string& fallback_name) {
    if (!o.out.empty()) return o.out;
    const char* root = std::getenv("NLSB_OUTPUT_ROOT");
    return fs::path(root && *root ? root : "nlsb-out") / fallback_name;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::Io, "cannot create output directory " + dir.string());
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "-"; }

void print_table(std::ostream& os, const SharpnessReport& r) {
    os << "criterion          applicable  fired  direction  clause      T_future              T_past\n";
    for (const auto& v : r.verdicts) {
        std::string id = to_string(v.criterion_id);
        id.resize(19, ' ');
        std::string app = v.applicability.applicable ? "yes" : "no";
        app.resize(12, ' ');
        std::string fired = v.applicability.applicable ? (v.fired ? "yes" : "no") : "-";
        fired.resize(7, ' ');
        std::string dir = to_string(v.direction);
        dir.resize(11, ' ');
        std::string clause = v.sub_condition.empty() ? "-" : v.sub_condition;
        clause.resize(12, ' ');
        std::string tf = opt(v.time_bound_future);
        tf.resize(22, ' ');
        os << id << app << fired << dir << clause << tf << opt(v.time_bound_past) << "\n";
    }
    os << "T_I = " << opt(r.T_I) << "  T_V = " << opt(r.T_V) << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
}

int cmd_criteria(const Options& o) {
    Scenario sc = load_scenario(o.input);
    apply_overrides(sc, o);
    const auto report = sharpness_compare(sc);
    const auto j = to_json(report);
    if (o.format != "json") {
        print_table(std::cout, report);
        std::cout << "\n";
    }
    std::cout << dump(j);
    if (!o.out.empty()) {
        ensure_dir(o.out);
        write_file(fs::path(o.out) / "criteria.json", dump(j));
    }
    return kOk;
}

int cmd_simulate(const Options& o) {
    Scenario sc = load_scenario(o.input);
    apply_overrides(sc, o);
    const fs::path dir = output_dir(o, fs::path(o.input).stem().string());
    ensure_dir(dir);

    const auto start = std::chrono::steady_clock::now();
    const RunResult run = o.raw_ic.empty() ? simulate(sc) : simulate(sc, load_raw_state(o.raw_ic, sc.grid));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (wants_csv(o)) {
        std::string csv = std::string(kRecordCsvHeader) + "\n";
        for (const auto& r : run.records) csv += to_csv_row(r) + "\n";
        write_file(dir / "records.csv", csv);
    }
    nlohmann::json term = {{"kind", termination_name(run.termination)}};
    if (const auto* b = std::get_if<BlowupDetected>(&run.termination)) {
        term["t_detect"] = b->t_detect;
        term["grad_norm"] = b->grad_norm;
    } else if (const auto* f = std::get_if<NumericalFailure>(&run.termination)) {
        term["t"] = f->t;
        term["reason"] = f->reason;
    }
    nlohmann::json manifest;
    manifest["scenario"] = to_json(sc);
    manifest["termination"] = term;
    manifest["wall_time"] = wall;
    manifest["grid"] = {{"L", sc.grid.half_width()}, {"n", sc.grid.size()}, {"dx", sc.grid.dx()}};
    manifest["fingerprint"] = run.fingerprint;
    manifest["blowup_threshold"] = run.blowup_threshold;
    manifest["initial_grad_norm"] = run.initial_grad_norm;
    manifest["records"] = run.records.size();
    manifest["raw_ic"] = o.raw_ic.empty() ? nlohmann::json(nullptr) : nlohmann::json(o.raw_ic);
    manifest["warnings"] = run.warnings;
    manifest["library_versions"] = {{"fftw", fftw_version_string()},
                                    {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                          std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                          std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                                    {"cli11", CLI11_VERSION}};
    if (wants_json(o)) write_file(dir / "manifest.json", dump(manifest));

    std::cout << termination_name(run.termination);
    if (const auto* b = std::get_if<BlowupDetected>(&run.termination)) std::cout << " at t = " << format_double(b->t_detect);
    std::cout << ", " << run.records.size() << " records -> " << dir.string() << "\n";
    for (const auto& w : run.warnings) std::cerr << "warning: " << w << "\n";
    return std::holds_alternative<NumericalFailure>(run.termination) ? kNumericalFailure : kOk;
}

int cmd_verify(const Options& o) {
    Scenario sc = load_scenario(o.input);
    apply_overrides(sc, o);
    std::optional<WaveFunction> raw;
    if (!o.raw_ic.empty()) raw = load_raw_state(o.raw_ic, sc.grid);
    const auto report = run_verify(sc, raw);
    std::cout << "termination: " << report.termination << "\n";
    for (const auto& c : report.checks) {
        std::string status = to_string(c.status);
        status.resize(6, ' ');
        std::cout << status << c.name;
        if (c.status == CheckStatus::Pass || c.status == CheckStatus::Fail) {
            std::cout << "  measured " << format_double(c.measured) << " (limit " << format_double(c.tolerance) << ")";
        }
        if (!c.detail.empty()) std::cout << "  " << c.detail;
        std::cout << "\n";
    }
    std::cout << (report.passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
    if (!o.out.empty()) {
        ensure_dir(o.out);
        write_file(fs::path(o.out) / "verify.json", dump(to_json(report)));
    }
    return report.passed() ? kOk : kVerifyFailed;
}

int cmd_sweep(const Options& o) {
    SweepSpec spec = load_sweep(o.input);
    if (o.max_points) spec.max_points = *o.max_points;
    apply_overrides(spec.base, o);
    const auto rows = run_sweep(spec, o.workers);
    const fs::path dir = output_dir(o, fs::path(o.input).stem().string());
    ensure_dir(dir);
    if (wants_csv(o)) write_file(dir / "sweep.csv", sweep_csv(spec, rows));
    if (wants_json(o)) write_file(dir / "sweep.json", dump(sweep_json(spec, rows)));
    std::cout << rows.size() << " points -> " << dir.string() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blow-up criteria laboratory for the 1D nonlinear Schroedinger equation"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool solver_flags) {
        sub->add_option("--out", o.out, "Output directory");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "both"}));
        if (solver_flags) {
            sub->add_option("--dt", o.dt, "Override solver.dt");
            sub->add_option("--t-end", o.t_end, "Override solver.t_end");
            sub->add_option("--threshold", o.threshold, "Override solver.blowup_threshold");
        }
    };

    auto* criteria = app.add_subcommand("criteria", "Evaluate every blow-up criterion for a scenario");
    criteria->add_option("scenario", o.input, "Scenario file")->required();
    add_common(criteria, true);

    auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the scenario and write records.csv and manifest.json");
    simulate_cmd->add_option("scenario", o.input, "Scenario file")->required();
    simulate_cmd->add_option("--raw-ic", o.raw_ic, "Two-column (re, im) initial samples replacing the Gaussian");
    add_common(simulate_cmd, true);

    auto* verify = app.add_subcommand("verify", "Run the invariant battery on a scenario");
    verify->add_option("scenario", o.input, "Scenario file")->required();
    verify->add_option("--raw-ic", o.raw_ic, "Two-column (re, im) initial samples replacing the Gaussian");
    add_common(verify, true);

    auto* sweep = app.add_subcommand("sweep", "Criterion map over a parameter grid");
    sweep->add_option("sweep", o.input, "Sweep file")->required();
    sweep->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--max-points", o.max_points, "Cap on the number of grid points");
    add_common(sweep, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (*criteria) return cmd_criteria(o);
        if (*simulate_cmd) return cmd_simulate(o);
        if (*verify) return cmd_verify(o);
        if (*sweep) return cmd_sweep(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    return kOk;
}
