#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mirror_margin/errors.hpp"
#include "mirror_margin/experiment.hpp"

namespace fs = std::filesystem;
using namespace mirror_margin;

namespace {

// Expand a glob of the simple form dir/prefix*suffix (single '*').
std::vector<std::string> expand_glob(const std::string& pattern) {
    fs::path p(pattern);
    fs::path dir = p.parent_path().empty() ? "." : p.parent_path();
    std::string name = p.filename().string();
    auto star = name.find('*');
    std::vector<std::string> out;
    if (star == std::string::npos) {
        if (fs::exists(p)) out.push_back(p.string());
        return out;
    }
    std::string prefix = name.substr(0, star);
    std::string suffix = name.substr(star + 1);
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string fn = entry.path().filename().string();
        if (fn.size() >= prefix.size() + suffix.size() && fn.rfind(prefix, 0) == 0 &&
            fn.compare(fn.size() - suffix.size(), suffix.size(), suffix) == 0)
            out.push_back(entry.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

ExperimentConfig load_with_overrides(const std::string& path, const std::string& out_override,
                                     bool no_plots, bool has_seed, std::uint64_t seed) {
    ExperimentConfig cfg = ExperimentConfig::load(path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (no_plots) cfg.plots = false;
    if (has_seed) {
        if (!cfg.has_generator)
            throw ContractViolation("--seed only applies to generator datasets");
        cfg.seed = seed;
    }
    return cfg;
}

std::size_t sweep_threads() {
    if (const char* env = std::getenv("MIRROR_MARGIN_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    std::size_t hw = std::thread::hardware_concurrency();
    return hw == 0 ? 2 : hw;
}

int run_sweep(const std::string& pattern, const std::string& out_root, bool no_plots,
              bool has_seed, std::uint64_t seed) {
    auto configs = expand_glob(pattern);
    if (configs.empty()) {
        std::cerr << "sweep matched no configs: " << pattern << "\n";
        return 2;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<int> worst{0};
    std::mutex io;
    auto worker = [&]() {
        for (;;) {
            std::size_t k = next.fetch_add(1);
            if (k >= configs.size()) return;
            const std::string& path = configs[k];
            int code;
            try {
                ExperimentConfig cfg =
                    load_with_overrides(path, "", no_plots, has_seed, seed);
                // per-run output directory keyed by the config stem
                fs::path base = out_root.empty() ? fs::path(cfg.out_dir) : fs::path(out_root);
                cfg.out_dir = (base / fs::path(path).stem()).string();
                code = cmd_run(cfg);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(io);
                std::cerr << path << ": " << e.what() << "\n";
                code = exit_code_for(e);
            }
            {
                std::lock_guard<std::mutex> lock(io);
                std::cout << "sweep " << path << " -> exit " << code << "\n";
            }
            int prev = worst.load();
            while (code > prev && !worst.compare_exchange_weak(prev, code)) {
            }
        }
    };
    std::size_t nthreads = std::min(sweep_threads(), configs.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return worst.load();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mirror descent implicit-bias experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir, sweep_pattern;
    bool no_plots = false;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("config", config_path, "experiment config JSON")->required();
        sub->add_option("--out", out_dir, "override output directory");
        sub->add_flag("--no-plots", no_plots, "skip SVG emission");
        return sub->add_option("--seed", seed, "override generator seed");
    };

    auto* run = app.add_subcommand("run", "flow + margin + artifact bundle");
    auto* run_seed = add_common(run, false);
    run->add_option("config", config_path, "experiment config JSON");
    run->add_option("--sweep", sweep_pattern, "glob of configs to fan out concurrently");

    auto* horizon = app.add_subcommand("horizon", "level-set probe + gauge extraction");
    auto* horizon_seed = add_common(horizon, true);

    auto* check = app.add_subcommand("check", "assumption validators");
    auto* check_seed = add_common(check, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (!sweep_pattern.empty())
                return run_sweep(sweep_pattern, out_dir, no_plots, run_seed->count() > 0, seed);
            if (config_path.empty()) {
                std::cerr << "run needs a config (or --sweep GLOB)\n";
                return 2;
            }
            return cmd_run(load_with_overrides(config_path, out_dir, no_plots,
                                               run_seed->count() > 0, seed));
        }
        if (horizon->parsed())
            return cmd_horizon(load_with_overrides(config_path, out_dir, no_plots,
                                                   horizon_seed->count() > 0, seed));
        if (check->parsed())
            return cmd_check(load_with_overrides(config_path, out_dir, no_plots,
                                                 check_seed->count() > 0, seed));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
