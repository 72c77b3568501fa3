#include <doctest.h>

#include "lps/experiments.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

using namespace lps::cli;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("lps_test_" + name);
    std::ofstream(p) << text;
    return p;
}

std::string config_key(const std::function<void()>& f) {
    try {
        f();
    } catch (const config_error& e) {
        return e.key();
    }
    return {};
}

int run_main(std::vector<std::string> args) {
    args.insert(args.begin(), "lps");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return main_entry(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("registry holds every experiment once") {
    std::set<std::string> names;
    for (const Experiment& e : registry()) {
        CHECK(names.insert(e.name).second);
        CHECK_FALSE(e.summary.empty());
    }
    for (const char* n : {"mehler_vs_series", "hille_hardy_vs_series", "markov_defect", "bound_certificates",
                          "weyl_eigen", "composition", "frac_routes", "polarization_hermite", "polarization_classical",
                          "subordination", "subordination_domination", "area_vs_g", "hardy", "covering", "maximal",
                          "local_global", "moduli", "martingale_identity", "lusin_probe", "determinism"})
        CHECK(find_experiment(n) != nullptr);
    CHECK(find_experiment("nope") == nullptr);
}

TEST_CASE("a cheap experiment runs and passes") {
    const Experiment& ex = *find_experiment("polarization_hermite");
    const RunResult r = run_experiment(ex, resolve(ex, {}), 1);
    CHECK(r.exit_code == exit_pass);
    CHECK(r.summary["pass"].get<bool>());
    CHECK(r.summary["parameters"]["run.seed"] == "1");
    CHECK(r.summary.contains("runtime_seconds"));
    CHECK(r.summary["checks"].contains("relative_gap"));
}

TEST_CASE("config errors name the offending key") {
    const Experiment& ex = *find_experiment("martingale_identity");
    CHECK(config_key([&] { resolve(ex, {{"martingale.bogus", "1"}}); }) == "martingale.bogus");
    CHECK(config_key([&] { resolve(ex, {{"tolerance.relative", "-1"}}); }) == "tolerance.relative");
    CHECK(config_key([&] { resolve(ex, {{"tolerance.relative", "abc"}}); }) == "tolerance.relative");
    const RunResult r = run_experiment(ex, resolve(ex, {{"martingale.count", "2.5"}}), 1);
    CHECK(r.exit_code == exit_config);
    CHECK(r.summary["error"]["key"] == "martingale.count");

    const Experiment& lg = *find_experiment("local_global");
    CHECK(config_key([&] { resolve(lg, {{"field.step", "0.2"}}); }) == "field.step");
    CHECK_NOTHROW(resolve(lg, {{"field.step", "0.125"}}));
}

TEST_CASE("INI files flatten to section.key") {
    const auto ok = temp_file("ok.ini", "[martingale]\ncount = 5\n[run]\nseed = 9\n");
    const auto m = read_config(ok.string());
    CHECK(m.at("martingale.count") == "5");
    CHECK(m.at("run.seed") == "9");
    const auto bad = temp_file("bad.ini", "[martingale]\ncount 5\n");
    CHECK(config_key([&] { read_config(bad.string()); }) == "line 2");
    fs::remove(ok);
    fs::remove(bad);
}

TEST_CASE("mehler experiment writes its table") {
    const Experiment& ex = *find_experiment("mehler_vs_series");
    const RunResult r = run_experiment(ex, resolve(ex, {}), 1);
    CHECK(r.csv.rfind("t,x,y,closed_form,series,rel_err", 0) == 0);
    const fs::path dir = fs::temp_directory_path() / "lps_test_out";
    write_outputs(r, dir.string(), ex.name);
    CHECK(fs::exists(dir / "mehler_vs_series.json"));
    CHECK(fs::exists(dir / "mehler_vs_series.csv"));
    fs::remove_all(dir);
}

TEST_CASE("summaries are identical across runs once timing is stripped") {
    const Experiment& ex = *find_experiment("lusin_probe");
    const Params p = resolve(ex, {});
    const RunResult a = run_experiment(ex, p, 5), b = run_experiment(ex, p, 5);
    CHECK(canonical_summary(a.summary) == canonical_summary(b.summary));
    CHECK(canonical_summary(a.summary).find("runtime_seconds") == std::string::npos);
}

TEST_CASE("main entry exit codes") {
    CHECK(run_main({"--list"}) == exit_pass);
    CHECK(run_main({"--experiment", "no_such_thing"}) == exit_config);
    const fs::path dir = fs::temp_directory_path() / "lps_test_main";
    const auto cfg = temp_file("main.ini", "[run]\nexperiment = martingale_identity\nseed = 4\n[tolerance]\nrelative = 1e-12\n");
    CHECK(run_main({"--config", cfg.string(), "--out", dir.string()}) == exit_pass);
    CHECK(fs::exists(dir / "martingale_identity.json"));
    const auto tight = temp_file("tight.ini", "[tolerance]\nrelative = 1e-300\n");
    CHECK(run_main({"-e", "martingale_identity", "-c", tight.string(), "-o", dir.string()}) == exit_tolerance);
    fs::remove_all(dir);
    fs::remove(cfg);
    fs::remove(tight);
}
