#pragma once

#include <filesystem>
#include <string>

#include "freewill/experiment.hpp"

namespace freewill {

struct ReportOptions {
    int novelty_zoom = 250;  // steps shown in the novelty plot

    void validate() const;
};

// Full run description as read from / written to a JSON config file.
// Sections: schedule, agents.freewill, agents.baseline, experiment, report.
struct RunConfig {
    ExperimentConfig experiment;
    ReportOptions report;

    void validate() const;
};

// Parse and validate. Unknown keys are rejected; errors name the key.
RunConfig config_from_json(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical JSON echo (sorted keys, 2-space indent, trailing newline).
std::string config_to_json(const RunConfig& config);

// Applies one KEY=VALUE style override. Keys use the CLI spelling, e.g.
// "freewill.alpha", "baseline.eta", "experiment.total_steps",
// "report.novelty_zoom". Unknown keys or unparsable values throw ConfigError.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

// True for keys cmd_sweep may vary (numeric freewill.* / baseline.* fields).
bool is_numeric_agent_key(const std::string& key);

// Built-in presets: "fourarm", "fig3", "fig4", "fig5".
//   fourarm  4-arm schedule, Formula scores, Single state, Oracle trigger.
//   fig3     10-arm schedule, Code scores, Time state, Oracle trigger.
//   fig4     alias of the 4-arm configuration; its headline output is the
//            policy-divergence plot.
//   fig5     same run as fig3; its headline output is the novelty plot.
RunConfig preset_config(const std::string& name);

}  // namespace freewill
