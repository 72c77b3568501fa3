#include "lps/experiments.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace lps::cli {
namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

const std::string& Params::text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw config_error(key, "missing parameter '" + key + "'");
    return it->second;
}

double Params::number(const std::string& key) const {
    double v = 0.0;
    if (!parse_double(text(key), v) || !std::isfinite(v))
        throw config_error(key, "parameter '" + key + "' is not a finite number: '" + text(key) + "'");
    return v;
}

double Params::positive(const std::string& key) const {
    const double v = number(key);
    if (!(v > 0.0)) throw config_error(key, "parameter '" + key + "' must be positive");
    return v;
}

int Params::integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw config_error(key, "parameter '" + key + "' must be an integer");
    return static_cast<int>(v);
}

std::vector<double> Params::numbers(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(text(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        if (!parse_double(item, v) || !std::isfinite(v))
            throw config_error(key, "parameter '" + key + "' has a malformed list entry '" + trim(item) + "'");
        out.push_back(v);
    }
    if (out.empty()) throw config_error(key, "parameter '" + key + "' is an empty list");
    return out;
}

bool Report::at_most(const std::string& name, double value, double tolerance) {
    const bool ok = value <= tolerance;  // NaN fails
    checks_.push_back({name, value, tolerance, "<=", ok});
    return ok;
}

bool Report::at_least(const std::string& name, double value, double bound) {
    const bool ok = value >= bound;
    checks_.push_back({name, value, bound, ">=", ok});
    return ok;
}

bool Report::holds(const std::string& name, bool ok) {
    checks_.push_back({name, ok ? 1.0 : 0.0, 1.0, "==", ok});
    return ok;
}

void Report::csv_header(std::vector<std::string> columns) { header_ = std::move(columns); }

void Report::csv_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(format_number(v));
    csv_row_text(cells);
}

void Report::csv_row_text(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    rows_.push_back(std::move(line));
}

void Report::plot(const std::string& series, double x, double value) {
    plot_rows_.push_back(series + ',' + format_number(x) + ',' + format_number(value));
}

const Check* Report::find_check(const std::string& name) const {
    for (const Check& c : checks_)
        if (c.name == name) return &c;
    return nullptr;
}

bool Report::pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

std::string Report::csv() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
    if (!header_.empty()) out += '\n';
    for (const std::string& r : rows_) out += r + '\n';
    return out;
}

std::string Report::plot_csv() const {
    if (plot_rows_.empty()) return {};
    std::string out = "series,x,value\n";
    for (const std::string& r : plot_rows_) out += r + '\n';
    return out;
}

const std::vector<Experiment>& registry() {
    static const std::vector<Experiment> all = [] {
        std::vector<Experiment> v;
        detail::register_kernel_experiments(v);
        detail::register_frac_experiments(v);
        detail::register_lpfun_experiments(v);
        detail::register_banach_experiments(v);
        detail::register_meta_experiments(v);
        return v;
    }();
    return all;
}

const Experiment* find_experiment(const std::string& name) {
    for (const Experiment& e : registry())
        if (e.name == name) return &e;
    return nullptr;
}

std::map<std::string, std::string> read_config(const std::string& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(path, tree);
    } catch (const pt::ini_parser_error& e) {
        throw config_error("line " + std::to_string(e.line()), "cannot parse config '" + path + "': " + e.message() + " (line " +
                                   std::to_string(e.line()) + ")");
    }
    std::map<std::string, std::string> out;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            // key outside any section
            throw config_error(section, "key '" + section + "' must live inside a [section]");
        }
        for (const auto& [key, value] : body) out[section + "." + key] = value.data();
    }
    return out;
}

Params resolve(const Experiment& ex, const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> values;
    for (const ParamSpec& p : ex.params) values[p.key] = p.value;
    for (const auto& [key, value] : overrides) {
        if (key == "run.seed" || key == "run.experiment") continue;
        if (!values.count(key))
            throw config_error(key, "unknown parameter '" + key + "' for experiment '" + ex.name + "'");
        values[key] = value;
    }
    Params params(values);
    for (const auto& [key, value] : values) {
        if (key.rfind("tolerance.", 0) == 0) params.positive(key);
        // field sampling: at least 8 points per unit length
        if (key.size() > 5 && key.compare(key.size() - 5, 5, ".step") == 0 && params.positive(key) > 0.125)
            throw config_error(key, "parameter '" + key + "' must be <= 1/8 (8 points per unit length)");
    }
    return params;
}

nlohmann::json error_object(const std::string& kind, const std::string& message, const std::string& key,
                            double estimate) {
    nlohmann::json e = {{"kind", kind}, {"message", message}};
    if (!key.empty()) e["key"] = key;
    if (kind == "convergence") e["estimate"] = estimate;
    return {{"error", e}};
}

RunResult run_experiment(const Experiment& ex, const Params& params, std::uint64_t seed) {
    RunResult r;
    nlohmann::json parameters(params.all());
    parameters["run.seed"] = std::to_string(seed);
    r.summary = {{"experiment", ex.name}, {"parameters", parameters}, {"seed", seed}};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ex.run(params, seed, r.report);
    } catch (const config_error& e) {
        r.exit_code = exit_config;
        r.summary.update(error_object("config", e.what(), e.key()));
    } catch (const precondition_error& e) {
        r.exit_code = exit_config;
        r.summary.update(error_object("precondition", e.what()));
    } catch (const convergence_error& e) {
        r.exit_code = exit_nonconvergence;
        r.summary.update(error_object("convergence", e.what(), {}, e.estimate()));
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::json checks = nlohmann::json::object();
    for (const Check& c : r.report.checks())
        checks[c.name] = {{"value", c.value}, {"relation", c.relation}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    r.summary["metrics"] = r.report.metrics();
    r.summary["checks"] = checks;
    const bool ok = r.exit_code == exit_pass && r.report.pass();
    if (r.exit_code == exit_pass && !ok) r.exit_code = exit_tolerance;
    r.summary["pass"] = ok;
    r.summary["runtime_seconds"] = elapsed;
    r.csv = r.report.csv();
    r.plot_csv = r.report.plot_csv();
    return r;
}

std::string canonical_summary(const nlohmann::json& summary) {
    nlohmann::json copy = summary;
    copy.erase("runtime_seconds");
    return copy.dump(2);
}

void write_outputs(const RunResult& r, const std::string& dir, const std::string& name) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto put = [](const fs::path& p, const std::string& text) {
        std::ofstream os(p, std::ios::binary);
        if (!os) throw config_error("--out", "cannot write '" + p.string() + "'");
        os << text;
    };
    put(fs::path(dir) / (name + ".json"), r.summary.dump(2) + "\n");
    put(fs::path(dir) / (name + ".csv"), r.csv);
    if (!r.plot_csv.empty()) put(fs::path(dir) / (name + "_plot.csv"), r.plot_csv);
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Littlewood-Paley semigroup experiments"};
    std::string experiment, config, out = "results";
    std::uint64_t seed = 1;
    bool list = false;
    app.add_option("--experiment,-e", experiment, "experiment name");
    app.add_option("--config,-c", config, "INI file overriding experiment parameters");
    app.add_option("--out,-o", out, "output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed,-s", seed, "random seed")->capture_default_str();
    app.add_flag("--list", list, "list experiments and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_config;
    }

    if (list) {
        for (const Experiment& e : registry()) std::cout << e.name << "  " << e.summary << "\n";
        return exit_pass;
    }

    auto fail = [&](const nlohmann::json& err) {
        std::cerr << err.dump(2) << "\n";
        return exit_config;
    };

    std::map<std::string, std::string> overrides;
    try {
        if (!config.empty()) overrides = read_config(config);
    } catch (const config_error& e) {
        return fail(error_object("config", e.what(), e.key()));
    }
    if (experiment.empty() && overrides.count("run.experiment")) experiment = overrides["run.experiment"];
    if (experiment.empty()) return fail(error_object("config", "no experiment given (--experiment)", "run.experiment"));
    const Experiment* ex = find_experiment(experiment);
    if (!ex) return fail(error_object("config", "unknown experiment '" + experiment + "'", "run.experiment"));

    if (seed_opt->count() == 0 && overrides.count("run.seed")) {
        try {
            Params p({{"run.seed", overrides["run.seed"]}});
            const int s = p.integer("run.seed");
            if (s < 0) throw config_error("run.seed", "parameter 'run.seed' must be non-negative");
            seed = static_cast<std::uint64_t>(s);
        } catch (const config_error& e) {
            return fail(error_object("config", e.what(), e.key()));
        }
    }

    Params params({});
    try {
        params = resolve(*ex, overrides);
    } catch (const config_error& e) {
        return fail(error_object("config", e.what(), e.key()));
    }

    RunResult r = run_experiment(*ex, params, seed);
    try {
        write_outputs(r, out, ex->name);
    } catch (const std::exception& e) {
        return fail(error_object("config", e.what(), "--out"));
    }
    if (r.summary.contains("error")) std::cerr << nlohmann::json{{"error", r.summary["error"]}}.dump(2) << "\n";
    std::cout << ex->name << ": " << (r.summary["pass"].get<bool>() ? "pass" : "FAIL") << " (exit " << r.exit_code
              << ", " << out << "/" << ex->name << ".json)\n";
    return r.exit_code;
}

}  // namespace lps::cli
