#include "nlsb/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "nlsb/error.hpp"

namespace nlsb {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

struct Document {
    std::string source;
    // section -> key -> entry, kept sorted for deterministic diagnostics
    std::map<std::string, std::map<std::string, Entry>> sections;
    std::map<std::string, int> section_lines;

    [[noreturn]] void fail(int line, const std::string& what) const {
        throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
    }
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

Document tokenize(std::string_view text, const std::string& source) {
    Document doc;
    doc.source = source;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') doc.fail(line_no, "unterminated section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (current.empty()) doc.fail(line_no, "empty section name");
            if (doc.section_lines.count(current)) doc.fail(line_no, "duplicate section [" + current + "]");
            doc.section_lines[current] = line_no;
            doc.sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) doc.fail(line_no, "expected `key = value`");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) doc.fail(line_no, "missing key");
        if (value.empty()) doc.fail(line_no, "missing value for `" + key + "`");
        std::string section = current;
        if (section.empty() || (section != "sweep" && key.find('.') != std::string::npos)) {
            const auto dot = key.find('.');
            if (dot == std::string::npos) doc.fail(line_no, "key `" + key + "` outside any section");
            if (!current.empty()) doc.fail(line_no, "dotted key `" + key + "` inside section [" + current + "]");
            section = key.substr(0, dot);
            key = key.substr(dot + 1);
            if (!doc.section_lines.count(section)) doc.section_lines[section] = line_no;
        }
        auto& keys = doc.sections[section];
        if (keys.count(key)) doc.fail(line_no, "duplicate key `" + section + "." + key + "`");
        keys[key] = Entry{value, line_no};
        if (end == text.size()) break;
    }
    return doc;
}

double parse_number(const Document& doc, const std::string& name, const Entry& e) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) doc.fail(e.line, "`" + name + "`: expected a decimal number, got `" + e.value + "`");
    if (!std::isfinite(v)) doc.fail(e.line, "`" + name + "`: value must be finite");
    return v;
}

std::size_t parse_count(const Document& doc, const std::string& name, const Entry& e) {
    unsigned long long v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) doc.fail(e.line, "`" + name + "`: expected a non-negative integer, got `" + e.value + "`");
    return static_cast<std::size_t>(v);
}

class Section {
public:
    Section(const Document& doc, std::string name, std::vector<std::string> allowed)
        : doc_(doc), name_(std::move(name)) {
        auto it = doc.sections.find(name_);
        if (it == doc.sections.end()) return;
        present_ = true;
        keys_ = &it->second;
        for (const auto& [key, entry] : *keys_) {
            bool ok = false;
            for (const auto& a : allowed) ok = ok || a == key;
            if (!ok) doc.fail(entry.line, "unknown key `" + key + "` in section [" + name_ + "]");
        }
    }

    bool present() const { return present_; }

    void require() const {
        if (!present_) throw Error(ErrorCode::ParseError, doc_.source + ": missing section [" + name_ + "]");
    }

    const Entry* find(const std::string& key) const {
        if (!keys_) return nullptr;
        auto it = keys_->find(key);
        return it == keys_->end() ? nullptr : &it->second;
    }

    double number(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) {
            const int line = present_ ? doc_.section_lines.at(name_) : 0;
            doc_.fail(line, "missing key `" + name_ + "." + key + "`");
        }
        return parse_number(doc_, name_ + "." + key, *e);
    }

    double number_or(const std::string& key, double fallback) const {
        return find(key) ? number(key) : fallback;
    }

    std::optional<double> optional_number(const std::string& key) const {
        if (!find(key)) return std::nullopt;
        return number(key);
    }

    std::size_t count(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) doc_.fail(present_ ? doc_.section_lines.at(name_) : 0, "missing key `" + name_ + "." + key + "`");
        return parse_count(doc_, name_ + "." + key, *e);
    }

    int line_of(const std::string& key) const {
        const Entry* e = find(key);
        return e ? e->line : (present_ ? doc_.section_lines.at(name_) : 0);
    }

private:
    const Document& doc_;
    std::string name_;
    bool present_ = false;
    const std::map<std::string, Entry>* keys_ = nullptr;
};

// Re-raises validation errors from the model with the offending line attached.
template <class F>
auto at_line(const Document& doc, int line, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        throw Error(e.code(), doc.source + ":" + std::to_string(line) + ": " + e.what());
    }
}

Scenario interpret(const Document& doc, bool allow_sweep) {
    for (const auto& [name, keys] : doc.sections) {
        static const char* kKnown[] = {"grid", "params", "potential", "ic", "solver"};
        bool ok = allow_sweep && name == "sweep";
        for (const char* k : kKnown) ok = ok || name == k;
        if (!ok) doc.fail(doc.section_lines.at(name), "unknown section [" + name + "]");
    }

    Section grid(doc, "grid", {"L", "n"});
    Section params(doc, "params", {"nu", "mu"});
    Section potential(doc, "potential", {"kind", "alpha"});
    Section ic(doc, "ic", {"x0", "p0", "sigma", "beta"});
    Section solver(doc, "solver", {"dt", "t_end", "blowup_threshold", "record_stride"});
    grid.require();
    params.require();
    potential.require();
    ic.require();

    Scenario sc;
    const double L = grid.number("L");
    const std::size_t n = grid.count("n");
    sc.grid = at_line(doc, grid.line_of("n"), [&] { return GridSpec(L, n); });

    sc.params.nu = params.number("nu");
    sc.params.mu = params.number("mu");
    at_line(doc, params.line_of("mu"), [&] { sc.params.validate(); return 0; });

    const Entry* kind = potential.find("kind");
    if (!kind) doc.fail(doc.section_lines.at("potential"), "missing key `potential.kind`");
    if (kind->value == "free") {
        if (potential.find("alpha")) doc.fail(potential.line_of("alpha"), "`potential.alpha` is not allowed for kind = free");
        sc.potential = Potential::free();
    } else if (kind->value == "stark" || kind->value == "quadratic") {
        const double alpha = potential.number("alpha");
        sc.potential = at_line(doc, potential.line_of("alpha"), [&] {
            return kind->value == "stark" ? Potential::stark(alpha) : Potential::quadratic(alpha);
        });
    } else {
        doc.fail(kind->line, "`potential.kind` must be free, stark or quadratic, got `" + kind->value + "`");
    }

    sc.ic.x0 = ic.number_or("x0", 0.0);
    sc.ic.p0 = ic.number_or("p0", 0.0);
    sc.ic.sigma = ic.number("sigma");
    sc.ic.beta = ic.number_or("beta", 0.0);
    if (!(sc.ic.sigma > 0.0)) {
        throw Error(ErrorCode::InvalidWidth,
                    doc.source + ":" + std::to_string(ic.line_of("sigma")) + ": sigma must be positive");
    }

    sc.solver.dt = solver.number_or("dt", sc.solver.dt);
    sc.solver.t_end = solver.number_or("t_end", sc.solver.t_end);
    sc.solver.blowup_threshold = solver.optional_number("blowup_threshold");
    if (solver.find("record_stride")) sc.solver.record_stride = solver.count("record_stride");
    at_line(doc, solver.present() ? doc.section_lines.at("solver") : 0, [&] { sc.validate(); return 0; });
    return sc;
}

const char* kSweepPaths[] = {"params.nu", "params.mu", "ic.p0", "ic.x0", "ic.beta", "ic.sigma", "potential.alpha"};

std::vector<double> parse_axis_values(const Document& doc, const std::string& path, const Entry& e) {
    std::string_view v = e.value;
    std::vector<double> out;
    if (v.rfind("linspace", 0) == 0) {
        auto open = v.find('(');
        auto close = v.rfind(')');
        if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
            !trim(v.substr(close + 1)).empty()) {
            doc.fail(e.line, "`" + path + "`: malformed linspace(a, b, n)");
        }
        std::vector<std::string> parts;
        std::string inner(v.substr(open + 1, close - open - 1));
        std::stringstream ss(inner);
        for (std::string part; std::getline(ss, part, ',');) parts.emplace_back(trim(part));
        if (parts.size() != 3) doc.fail(e.line, "`" + path + "`: linspace takes three arguments");
        const double a = parse_number(doc, path, Entry{parts[0], e.line});
        const double b = parse_number(doc, path, Entry{parts[1], e.line});
        const std::size_t n = parse_count(doc, path, Entry{parts[2], e.line});
        if (n == 0) doc.fail(e.line, "`" + path + "`: linspace needs at least one point");
        if (n == 1) return {a};
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n - 1);
            out.push_back(i + 1 == n ? b : a + (b - a) * t);
        }
        return out;
    }
    std::stringstream ss{std::string(v)};
    for (std::string part; std::getline(ss, part, ',');) {
        out.push_back(parse_number(doc, path, Entry{std::string(trim(part)), e.line}));
    }
    if (out.empty()) doc.fail(e.line, "`" + path + "`: no values");
    return out;
}

}  // namespace

std::size_t SweepSpec::point_count() const {
    std::size_t total = 1;
    for (const auto& axis : axes) {
        const std::size_t k = axis.values.size();
        if (k != 0 && total > std::numeric_limits<std::size_t>::max() / k) return std::numeric_limits<std::size_t>::max();
        total *= k;
    }
    return total;
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
    return interpret(tokenize(text, source), false);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_text_file(path), path.string()); }

SweepSpec parse_sweep(std::string_view text, const std::string& source) {
    const Document doc = tokenize(text, source);
    SweepSpec spec;
    spec.base = interpret(doc, true);
    auto it = doc.sections.find("sweep");
    if (it == doc.sections.end()) throw Error(ErrorCode::ParseError, source + ": missing section [sweep]");

    // Axes keep file order, which fixes the row order of the output.
    std::vector<std::pair<int, SweepAxis>> axes;
    for (const auto& [key, entry] : it->second) {
        if (key == "max_points") {
            spec.max_points = parse_count(doc, "sweep.max_points", entry);
            if (spec.max_points == 0) doc.fail(entry.line, "`sweep.max_points` must be positive");
            continue;
        }
        bool known = false;
        for (const char* p : kSweepPaths) known = known || key == p;
        if (!known) doc.fail(entry.line, "unknown sweep parameter `" + key + "`");
        if (key == "potential.alpha" && spec.base.potential.is_free()) {
            doc.fail(entry.line, "cannot sweep potential.alpha on the free potential");
        }
        axes.push_back({entry.line, SweepAxis{key, parse_axis_values(doc, key, entry)}});
    }
    if (axes.empty()) doc.fail(doc.section_lines.at("sweep"), "[sweep] declares no axes");
    std::sort(axes.begin(), axes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [line, axis] : axes) spec.axes.push_back(std::move(axis));
    return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) { return parse_sweep(read_text_file(path), path.string()); }

void apply_parameter(Scenario& sc, const std::string& path, double value) {
    if (path == "params.nu") {
        sc.params.nu = value;
    } else if (path == "params.mu") {
        sc.params.mu = value;
    } else if (path == "ic.p0") {
        sc.ic.p0 = value;
    } else if (path == "ic.x0") {
        sc.ic.x0 = value;
    } else if (path == "ic.beta") {
        sc.ic.beta = value;
    } else if (path == "ic.sigma") {
        sc.ic.sigma = value;
    } else if (path == "potential.alpha") {
        if (sc.potential.is_free()) throw Error(ErrorCode::InvalidPotential, "free potential has no alpha");
        sc.potential = sc.potential.is_stark() ? Potential::stark(value) : Potential::quadratic(value);
    } else {
        throw Error(ErrorCode::ParseError, "unknown parameter path `" + path + "`");
    }
}

WaveFunction load_raw_state(const std::filesystem::path& path, const GridSpec& grid) {
    const std::string text = read_text_file(path);
    std::vector<Complex> values;
    values.reserve(grid.size());
    std::istringstream in(text);
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        for (auto& ch : line) {
            if (ch == ',' || ch == '\t' || ch == '\r') ch = ' ';
        }
        std::string_view rest = trim(line);
        if (rest.empty()) continue;
        double parts[2];
        int got = 0;
        while (!rest.empty()) {
            const auto space = rest.find(' ');
            const std::string_view tok = rest.substr(0, space);
            if (got == 2) got = 3;
            if (got < 2) {
                auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), parts[got]);
                if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                    throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": bad number `" +
                                                           std::string(tok) + "`");
                }
                ++got;
            }
            rest = space == std::string_view::npos ? std::string_view{} : trim(rest.substr(space));
        }
        if (got != 2) {
            throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected two columns");
        }
        values.emplace_back(parts[0], parts[1]);
    }
    if (values.size() != grid.size()) {
        throw Error(ErrorCode::ParseError, path.string() + ": expected " + std::to_string(grid.size()) + " samples, got " +
                                               std::to_string(values.size()));
    }
    return WaveFunction(grid, std::move(values));
}

nlohmann::json to_json(const Scenario& sc) {
    nlohmann::json j;
    j["grid"] = {{"L", sc.grid.half_width()}, {"n", sc.grid.size()}};
    j["params"] = {{"nu", sc.params.nu}, {"mu", sc.params.mu}};
    j["potential"] = {{"kind", sc.potential.name()}};
    if (!sc.potential.is_free()) j["potential"]["alpha"] = sc.potential.alpha();
    j["ic"] = {{"x0", sc.ic.x0}, {"p0", sc.ic.p0}, {"sigma", sc.ic.sigma}, {"beta", sc.ic.beta}};
    j["solver"] = {{"dt", sc.solver.dt},
                   {"t_end", sc.solver.t_end},
                   {"blowup_threshold", sc.solver.blowup_threshold ? nlohmann::json(*sc.solver.blowup_threshold)
                                                                   : nlohmann::json(nullptr)},
                   {"record_stride", sc.solver.record_stride}};
    return j;
}

}  // namespace nlsb
