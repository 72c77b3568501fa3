#pragma once

// Named experiments behind the command-line runner and the acceptance
// binary. Each experiment declares its parameters with defaults; a flat
// INI file ("[section] key = value") may override them.

#include "lps/error.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace lps::cli {

enum ExitCode { exit_pass = 0, exit_tolerance = 1, exit_config = 2, exit_nonconvergence = 3 };

class config_error : public precondition_error {
public:
    config_error(std::string key, const std::string& what) : precondition_error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct ParamSpec {
    std::string key;    // "section.name"
    std::string value;  // default
    std::string help;
};

/// Resolved parameters ("section.name" -> text); typed accessors throw
/// config_error naming the key on malformed values.
class Params {
public:
    explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    const std::string& text(const std::string& key) const;
    double number(const std::string& key) const;
    double positive(const std::string& key) const;
    int integer(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;
    const std::map<std::string, std::string>& all() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    std::string relation;  // "<=", ">=", "=="
    bool pass = false;
};

class Report {
public:
    void metric(const std::string& name, nlohmann::json value) { metrics_[name] = std::move(value); }
    /// value <= tolerance
    bool at_most(const std::string& name, double value, double tolerance);
    /// value >= bound
    bool at_least(const std::string& name, double value, double bound);
    bool holds(const std::string& name, bool ok);

    void csv_header(std::vector<std::string> columns);
    void csv_row(const std::vector<double>& values);
    void csv_row_text(const std::vector<std::string>& cells);
    void plot(const std::string& series, double x, double value);

    const nlohmann::json& metrics() const { return metrics_; }
    const std::vector<Check>& checks() const { return checks_; }
    const Check* find_check(const std::string& name) const;
    bool pass() const;
    std::string csv() const;
    std::string plot_csv() const;

private:
    nlohmann::json metrics_ = nlohmann::json::object();
    std::vector<Check> checks_;
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
    std::vector<std::string> plot_rows_;
};

struct Experiment {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
    std::function<void(const Params&, std::uint64_t seed, Report&)> run;
};

const std::vector<Experiment>& registry();
const Experiment* find_experiment(const std::string& name);

/// Flat "section.key" -> value map from an INI file; config_error on
/// unreadable or malformed files.
std::map<std::string, std::string> read_config(const std::string& path);

/// Defaults overridden by `overrides`. Unknown keys, non-positive
/// tolerances and field steps coarser than 1/8 are config errors.
Params resolve(const Experiment& ex, const std::map<std::string, std::string>& overrides);

struct RunResult {
    int exit_code = exit_pass;
    nlohmann::json summary;
    std::string csv;
    std::string plot_csv;
    Report report;
};

RunResult run_experiment(const Experiment& ex, const Params& params, std::uint64_t seed);

/// Error object for failures before or during a run.
nlohmann::json error_object(const std::string& kind, const std::string& message, const std::string& key = {},
                            double estimate = 0.0);

/// Summary JSON text without runtime_seconds, for byte comparisons.
std::string canonical_summary(const nlohmann::json& summary);

/// <dir>/<name>.json, <name>.csv and, when present, <name>_plot.csv.
void write_outputs(const RunResult& r, const std::string& dir, const std::string& name);

/// Whole command-line flow; returns the process exit code.
int main_entry(int argc, char** argv);

namespace detail {
void register_kernel_experiments(std::vector<Experiment>& out);
void register_frac_experiments(std::vector<Experiment>& out);
void register_lpfun_experiments(std::vector<Experiment>& out);
void register_banach_experiments(std::vector<Experiment>& out);
void register_meta_experiments(std::vector<Experiment>& out);
}  // namespace detail

}  // namespace lps::cli
