#include "nlsb/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "nlsb/error.hpp"

namespace nlsb {

namespace {

SweepRow evaluate_point(const SweepSpec& spec, std::size_t index) {
    SweepRow row;
    row.index = index;
    const auto idx = unflatten(spec, index);
    Scenario sc = spec.base;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) row.parameters.push_back(spec.axes[a].values[idx[a]]);
    try {
        for (std::size_t a = 0; a < spec.axes.size(); ++a) apply_parameter(sc, spec.axes[a].path, row.parameters[a]);
        sc.params.validate();
        if (!(sc.ic.sigma > 0.0)) throw Error(ErrorCode::InvalidWidth, "sigma must be positive");
        const auto report = sharpness_compare(sc);
        row.verdicts = report.verdicts;
        row.T_I = report.T_I;
        row.T_V = report.T_V;
    } catch (const Error& e) {
        row.status = std::string(to_string(e.code()));
    }
    return row;
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

std::vector<std::size_t> unflatten(const SweepSpec& spec, std::size_t index) {
    std::vector<std::size_t> idx(spec.axes.size());
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
        const std::size_t k = spec.axes[a].values.size();
        idx[a] = index % k;
        index /= k;
    }
    return idx;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers) {
    const std::size_t total = spec.point_count();
    if (total > spec.max_points) {
        throw Error(ErrorCode::CapExceeded, "sweep has " + std::to_string(total) + " points, cap is " +
                                                std::to_string(spec.max_points));
    }
    std::vector<SweepRow> rows(total);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            try {
                rows[i] = evaluate_point(spec, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
    if (n == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    std::string out = "index";
    for (const auto& axis : spec.axes) out += "," + axis.path;
    out += ",status";
    for (auto id : kAllCriteria) out += "," + to_string(id);
    out += ",T_I,T_V\n";
    for (const auto& row : rows) {
        out += std::to_string(row.index);
        for (double v : row.parameters) out += "," + format_double(v);
        out += "," + row.status;
        for (auto id : kAllCriteria) {
            std::string flag = "NA";
            for (const auto& v : row.verdicts) {
                if (v.criterion_id == id && v.applicability.applicable) flag = v.fired ? "1" : "0";
            }
            out += "," + flag;
        }
        out += "," + cell(row.T_I) + "," + cell(row.T_V) + "\n";
    }
    return out;
}

nlohmann::json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    nlohmann::json j;
    j["base"] = to_json(spec.base);
    j["axes"] = nlohmann::json::array();
    for (const auto& axis : spec.axes) j["axes"].push_back({{"path", axis.path}, {"values", axis.values}});
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r;
        r["index"] = row.index;
        nlohmann::json params = nlohmann::json::object();
        for (std::size_t a = 0; a < spec.axes.size(); ++a) params[spec.axes[a].path] = row.parameters[a];
        r["parameters"] = params;
        r["status"] = row.status;
        r["verdicts"] = nlohmann::json::array();
        for (const auto& v : row.verdicts) r["verdicts"].push_back(to_json(v));
        r["T_I"] = row.T_I ? nlohmann::json(*row.T_I) : nlohmann::json(nullptr);
        r["T_V"] = row.T_V ? nlohmann::json(*row.T_V) : nlohmann::json(nullptr);
        j["rows"].push_back(std::move(r));
    }
    return j;
}

}  // namespace nlsb
