// freewill - non-stationary bandit experiments with an adaptive-temperature
// softmax agent and a decaying eps-greedy control.
//
// Subcommands: run, reproduce, sweep, verify.
// Exit codes: 0 ok, 2 config error, 3 I/O error, 4 verify failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freewill/config.hpp"
#include "freewill/errors.hpp"
#include "freewill/report.hpp"
#include "freewill/version.hpp"

namespace fs = std::filesystem;
using namespace freewill;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitVerify = 4;

// "0..9" or "3,7,11"; values offset by FREEWILL_SEED_BASE later.
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    const auto range = text.find("..");
    try {
        if (range != std::string::npos) {
            const std::uint64_t lo = std::stoull(text.substr(0, range));
            const std::uint64_t hi = std::stoull(text.substr(range + 2));
            if (hi < lo) throw ConfigError("--seeds: range end before start");
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
            return seeds;
        }
        std::size_t pos = 0;
        while (pos < text.size()) {
            const auto comma = text.find(',', pos);
            const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                                : comma - pos);
            seeds.push_back(std::stoull(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("--seeds: expected N..M or a comma list, got \"" + text + "\"");
    }
    if (seeds.empty()) throw ConfigError("--seeds: empty list");
    return seeds;
}

std::uint64_t seed_base_from_env() {
    const char* raw = std::getenv("FREEWILL_SEED_BASE");
    if (!raw || !*raw) return 0;
    try {
        return std::stoull(raw);
    } catch (const std::exception&) {
        throw ConfigError(std::string("FREEWILL_SEED_BASE: not an integer: ") + raw);
    }
}

void apply_seed_adjustments(RunConfig& cfg, const std::string& seeds_flag) {
    if (!seeds_flag.empty()) cfg.experiment.seeds = parse_seed_list(seeds_flag);
    const std::uint64_t base = seed_base_from_env();
    if (base != 0)
        for (std::uint64_t& s : cfg.experiment.seeds) s += base;
    cfg.validate();
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--override: expected KEY=VALUE, got \"" + ov + "\"");
        apply_override(cfg, ov.substr(0, eq), ov.substr(eq + 1));
    }
}

void run_and_report(const RunConfig& cfg, const fs::path& out_dir, int jobs) {
    const AggregateResult result = run_many(cfg.experiment, jobs);
    write_run_outputs(result, cfg, out_dir);
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, const std::string& seeds_flag,
            int jobs) {
    RunConfig cfg = load_config(config_path);
    apply_overrides(cfg, overrides);
    apply_seed_adjustments(cfg, seeds_flag);
    run_and_report(cfg, out_dir, jobs);
    return kExitOk;
}

int cmd_reproduce(const std::string& figure, const std::string& out_dir,
                  const std::vector<std::string>& overrides, const std::string& seeds_flag,
                  int jobs) {
    RunConfig cfg = preset_config(figure);
    apply_overrides(cfg, overrides);
    apply_seed_adjustments(cfg, seeds_flag);
    run_and_report(cfg, out_dir, jobs);
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values_text, const std::string& out_dir,
              const std::string& seeds_flag, int jobs) {
    if (!is_numeric_agent_key(param))
        throw ConfigError("sweep: --param must be a numeric freewill.* or baseline.* key, got \"" +
                          param + "\"");
    std::vector<std::string> values;
    std::size_t pos = 0;
    while (pos < values_text.size()) {
        const auto comma = values_text.find(',', pos);
        values.push_back(values_text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) throw ConfigError("sweep: --values is empty");

    const fs::path root = out_dir;
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IoError(root.string(), "cannot create output directory: " + ec.message());

    std::ofstream summary(root / "sweep_summary.csv", std::ios::binary | std::ios::trunc);
    if (!summary) throw IoError((root / "sweep_summary.csv").string(), "cannot open");
    summary << "param,value,freewill_mean_reward_last500,baseline_mean_reward_last500\n";

    for (const std::string& value : values) {
        RunConfig cfg = load_config(config_path);
        apply_override(cfg, param, value);
        apply_seed_adjustments(cfg, seeds_flag);

        const AggregateResult result = run_many(cfg.experiment, jobs);
        const fs::path sub = root / (param + "_" + value);
        write_run_outputs(result, cfg, sub);

        // final-500-step raw reward means across seeds
        const long total = cfg.experiment.total_steps;
        const long lo = std::max(0L, total - 500);
        double fw = 0.0, base = 0.0;
        long count = 0;
        for (const RunTrace& run : result.runs)
            for (long t = lo; t < total; ++t) {
                fw += run.freewill[static_cast<std::size_t>(t)].reward;
                base += run.baseline[static_cast<std::size_t>(t)].reward;
                ++count;
            }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g", fw / count, base / count);
        summary << param << ',' << value << ',' << buf << '\n';
    }
    if (!summary) throw IoError((root / "sweep_summary.csv").string(), "write failed");
    return kExitOk;
}

int cmd_verify(const std::string& out_dir) {
    const VerifyReport report = verify_manifest_dir(out_dir);
    if (report.ok) {
        std::cout << "verify: ok (" << out_dir << ")\n";
        return kExitOk;
    }
    for (const std::string& p : report.problems) std::cerr << "error: verify: " << p << '\n';
    return kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-stationary bandit experiments: adaptive-temperature softmax agent "
                 "vs. decaying eps-greedy control"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::simple);

    std::string config_path, out_dir = "out", seeds_flag, figure, param, values;
    std::vector<std::string> overrides;
    int jobs = 0;

    auto add_common = [&](CLI::App* sub, bool with_config) {
        if (with_config)
            sub->add_option("--config", config_path, "run config JSON")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seeds", seeds_flag, "seed list, N..M or comma separated");
        sub->add_option("--jobs", jobs, "max parallel runs (default: all cores)");
        sub->add_option("--override", overrides, "KEY=VALUE config override (repeatable)");
    };

    CLI::App* run = app.add_subcommand("run", "run a config and write reports");
    add_common(run, true);

    CLI::App* reproduce =
        app.add_subcommand("reproduce", "run a built-in preset (fourarm, fig3, fig4, fig5)");
    reproduce->add_option("figure", figure, "preset name")->required();
    add_common(reproduce, false);

    CLI::App* sweep = app.add_subcommand("sweep", "re-run a config across parameter values");
    add_common(sweep, true);
    sweep->add_option("--param", param, "numeric freewill.* or baseline.* key")->required();
    sweep->add_option("--values", values, "comma-separated values")->required();

    CLI::App* verify = app.add_subcommand("verify", "re-hash files listed in a manifest");
    verify->add_option("--out", out_dir, "directory holding manifest.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, overrides, seeds_flag, jobs);
        if (reproduce->parsed())
            return cmd_reproduce(figure, out_dir, overrides, seeds_flag, jobs);
        if (sweep->parsed())
            return cmd_sweep(config_path, param, values, out_dir, seeds_flag, jobs);
        if (verify->parsed()) return cmd_verify(out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << '\n';
        return kExitIo;
    } catch (const ManifestInconsistent& e) {
        std::cerr << "error: io: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
