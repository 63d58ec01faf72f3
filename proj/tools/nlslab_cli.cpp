// Scenario-driven experiment runner. Exit codes:
//   0 all verdicts pass, 1 verdict failure, 2 config validation error,
//   3 numerical abort (NaN / resolution audit / step budget),
//   4 wrap-around guard violation.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <future>
#include <vector>

#include "nlslab/nlslab.hpp"

namespace {

struct SweepSpec {
    std::string key;
    std::vector<std::string> values;
};

SweepSpec parse_sweep(const std::string& raw) {
    auto eq = raw.find('=');
    if (eq == std::string::npos || eq == 0)
        throw nlslab::config_error("--sweep expects key=v1,v2,... got '" + raw + "'");
    SweepSpec s;
    s.key = raw.substr(0, eq);
    std::stringstream ss(raw.substr(eq + 1));
    std::string cell;
    while (std::getline(ss, cell, ',')) s.values.push_back(cell);
    if (s.values.empty()) throw nlslab::config_error("--sweep has no values");
    return s;
}

int classify_failure(const std::exception& e) {
    if (dynamic_cast<const nlslab::config_error*>(&e)) return 2;
    if (dynamic_cast<const nlslab::wraparound_error*>(&e)) return 4;
    if (dynamic_cast<const nlslab::error*>(&e)) return 3;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return 2;
    return 3;
}

int run_one(nlslab::Config cfg, const std::string& out_dir, bool quiet) {
    try {
        auto manifest = nlslab::run_scenario(cfg, out_dir, quiet);
        return manifest.all_pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return classify_failure(e);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlslab: pseudospectral NLS scattering experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir, sweep_raw;
    long seed = -1;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "execute a scenario config");
    run->add_option("config", config_path, "scenario config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (default from config or ./out/<scenario>)");
    run->add_option("--sweep", sweep_raw, "fan out over key=v1,v2,... one run per value");
    run->add_option("--seed", seed, "override the config seed");
    run->add_flag("--quiet", quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);

    try {
        nlslab::Config cfg = nlslab::Config::parse_file(config_path);
        if (seed >= 0) cfg.set("seed", std::to_string(seed));
        std::string base = !out_dir.empty() ? out_dir
                                            : cfg.get_string("output.dir", "out/" + cfg.get_string("scenario"));
        if (sweep_raw.empty()) return run_one(cfg, base, quiet);

        SweepSpec sweep = parse_sweep(sweep_raw);
        std::vector<std::future<int>> futs;
        for (const auto& v : sweep.values) {
            nlslab::Config c = cfg;
            c.set(sweep.key, v);
            std::string dir = base + "/sweep_" + v;
            futs.push_back(std::async(std::launch::async, run_one, std::move(c), dir, true));
        }
        int rc = 0;
        for (std::size_t i = 0; i < futs.size(); ++i) {
            int r = futs[i].get();
            std::printf("sweep %s=%s -> exit %d\n", sweep.key.c_str(), sweep.values[i].c_str(), r);
            rc = std::max(rc, r);
        }
        return rc;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return classify_failure(e);
    }
}
