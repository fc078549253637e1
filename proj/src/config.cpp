#include "freewill/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "freewill/errors.hpp"

namespace freewill {

using nlohmann::json;

namespace {

std::string variant_name(ScoreVariant v) {
    return v == ScoreVariant::Formula ? "formula" : "code";
}
std::string variant_name(TriggerVariant v) {
    return v == TriggerVariant::Endogenous ? "endogenous" : "oracle";
}
std::string variant_name(StateMode v) {
    return v == StateMode::Single ? "single" : "time";
}

ScoreVariant parse_score_variant(const std::string& s, const std::string& key) {
    if (s == "formula") return ScoreVariant::Formula;
    if (s == "code") return ScoreVariant::Code;
    throw ConfigError(key + ": expected \"formula\" or \"code\", got \"" + s + "\"");
}
TriggerVariant parse_trigger_variant(const std::string& s, const std::string& key) {
    if (s == "endogenous") return TriggerVariant::Endogenous;
    if (s == "oracle") return TriggerVariant::Oracle;
    throw ConfigError(key + ": expected \"endogenous\" or \"oracle\", got \"" + s + "\"");
}
StateMode parse_state_mode(const std::string& s, const std::string& key) {
    if (s == "single") return StateMode::Single;
    if (s == "time") return StateMode::Time;
    throw ConfigError(key + ": expected \"single\" or \"time\", got \"" + s + "\"");
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& prefix) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown config key: " + prefix + it.key());
}

double get_number(const json& obj, const std::string& name, const std::string& prefix,
                  double fallback) {
    if (!obj.contains(name)) return fallback;
    const json& v = obj.at(name);
    if (!v.is_number()) throw ConfigError(prefix + name + ": expected a number");
    return v.get<double>();
}

long get_integer(const json& obj, const std::string& name, const std::string& prefix,
                 long fallback) {
    if (!obj.contains(name)) return fallback;
    const json& v = obj.at(name);
    if (!v.is_number_integer()) throw ConfigError(prefix + name + ": expected an integer");
    return v.get<long>();
}

std::string get_string(const json& obj, const std::string& name, const std::string& prefix,
                       const std::string& fallback) {
    if (!obj.contains(name)) return fallback;
    const json& v = obj.at(name);
    if (!v.is_string()) throw ConfigError(prefix + name + ": expected a string");
    return v.get<std::string>();
}

FreeWillParams parse_freewill(const json& obj) {
    const std::string p = "agents.freewill.";
    reject_unknown_keys(obj,
                        {"alpha", "eta", "tau", "t_init", "t_min", "t_max", "gamma_inc",
                         "gamma_dec", "discount", "surprise_window", "eps_init",
                         "eps_decay", "eps_floor", "score_variant", "trigger_variant",
                         "state_mode"},
                        p);
    FreeWillParams f;
    f.alpha = get_number(obj, "alpha", p, f.alpha);
    f.eta = get_number(obj, "eta", p, f.eta);
    f.tau = get_number(obj, "tau", p, f.tau);
    f.t_init = get_number(obj, "t_init", p, f.t_init);
    f.t_min = get_number(obj, "t_min", p, f.t_min);
    f.t_max = get_number(obj, "t_max", p, f.t_max);
    f.gamma_inc = get_number(obj, "gamma_inc", p, f.gamma_inc);
    f.gamma_dec = get_number(obj, "gamma_dec", p, f.gamma_dec);
    f.discount = get_number(obj, "discount", p, f.discount);
    f.surprise_window = static_cast<int>(get_integer(obj, "surprise_window", p, f.surprise_window));
    f.eps_init = get_number(obj, "eps_init", p, f.eps_init);
    f.eps_decay = get_number(obj, "eps_decay", p, f.eps_decay);
    f.eps_floor = get_number(obj, "eps_floor", p, f.eps_floor);
    f.score_variant = parse_score_variant(
        get_string(obj, "score_variant", p, variant_name(f.score_variant)), p + "score_variant");
    f.trigger_variant = parse_trigger_variant(
        get_string(obj, "trigger_variant", p, variant_name(f.trigger_variant)),
        p + "trigger_variant");
    f.state_mode = parse_state_mode(
        get_string(obj, "state_mode", p, variant_name(f.state_mode)), p + "state_mode");
    return f;
}

BaselineParams parse_baseline(const json& obj) {
    const std::string p = "agents.baseline.";
    reject_unknown_keys(obj, {"eta", "discount", "eps_init", "eps_decay", "eps_floor"}, p);
    BaselineParams b;
    b.eta = get_number(obj, "eta", p, b.eta);
    b.discount = get_number(obj, "discount", p, b.discount);
    b.eps_init = get_number(obj, "eps_init", p, b.eps_init);
    b.eps_decay = get_number(obj, "eps_decay", p, b.eps_decay);
    b.eps_floor = get_number(obj, "eps_floor", p, b.eps_floor);
    return b;
}

PhaseSchedule parse_schedule(const json& arr) {
    if (!arr.is_array() || arr.empty())
        throw ConfigError("schedule: expected a non-empty array of phases");
    std::vector<Phase> phases;
    for (const json& item : arr) {
        if (!item.is_object()) throw ConfigError("schedule: each phase must be an object");
        reject_unknown_keys(item, {"start_step", "probs"}, "schedule.");
        if (!item.contains("start_step") || !item.contains("probs"))
            throw ConfigError("schedule: phases need start_step and probs");
        Phase ph;
        ph.start_step = item.at("start_step").get<long>();
        if (!item.at("probs").is_array())
            throw ConfigError("schedule.probs: expected an array of probabilities");
        for (const json& v : item.at("probs")) {
            if (!v.is_number()) throw ConfigError("schedule.probs: expected numbers");
            ph.arm_probs.push_back(v.get<double>());
        }
        phases.push_back(std::move(ph));
    }
    try {
        return PhaseSchedule(std::move(phases));
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
}

json config_to_json_value(const RunConfig& c) {
    json schedule = json::array();
    for (const Phase& ph : c.experiment.schedule.phases())
        schedule.push_back({{"start_step", ph.start_step}, {"probs", ph.arm_probs}});
    const FreeWillParams& f = c.experiment.freewill;
    const BaselineParams& b = c.experiment.baseline;
    return json{
        {"schedule", schedule},
        {"agents",
         {{"freewill",
           {{"alpha", f.alpha},
            {"eta", f.eta},
            {"tau", f.tau},
            {"t_init", f.t_init},
            {"t_min", f.t_min},
            {"t_max", f.t_max},
            {"gamma_inc", f.gamma_inc},
            {"gamma_dec", f.gamma_dec},
            {"discount", f.discount},
            {"surprise_window", f.surprise_window},
            {"eps_init", f.eps_init},
            {"eps_decay", f.eps_decay},
            {"eps_floor", f.eps_floor},
            {"score_variant", variant_name(f.score_variant)},
            {"trigger_variant", variant_name(f.trigger_variant)},
            {"state_mode", variant_name(f.state_mode)}}},
          {"baseline",
           {{"eta", b.eta},
            {"discount", b.discount},
            {"eps_init", b.eps_init},
            {"eps_decay", b.eps_decay},
            {"eps_floor", b.eps_floor}}}}},
        {"experiment",
         {{"total_steps", c.experiment.total_steps},
          {"seeds", c.experiment.seeds},
          {"metrics_window", c.experiment.metrics_window}}},
        {"report", {{"novelty_zoom", c.report.novelty_zoom}}},
    };
}

}  // namespace

void ReportOptions::validate() const {
    if (novelty_zoom < 1) throw InvalidInput("report.novelty_zoom must be >= 1");
}

void RunConfig::validate() const {
    try {
        experiment.validate();
        report.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
}

RunConfig config_from_json(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown_keys(root, {"schedule", "agents", "experiment", "report"}, "");
    if (!root.contains("schedule")) throw ConfigError("config: missing schedule");

    RunConfig cfg;
    cfg.experiment.schedule = parse_schedule(root.at("schedule"));

    if (root.contains("agents")) {
        const json& agents = root.at("agents");
        if (!agents.is_object()) throw ConfigError("agents: expected an object");
        reject_unknown_keys(agents, {"freewill", "baseline"}, "agents.");
        if (agents.contains("freewill")) cfg.experiment.freewill = parse_freewill(agents.at("freewill"));
        if (agents.contains("baseline")) cfg.experiment.baseline = parse_baseline(agents.at("baseline"));
    }
    if (root.contains("experiment")) {
        const json& exp = root.at("experiment");
        if (!exp.is_object()) throw ConfigError("experiment: expected an object");
        reject_unknown_keys(exp, {"total_steps", "seeds", "metrics_window"}, "experiment.");
        cfg.experiment.total_steps =
            get_integer(exp, "total_steps", "experiment.", cfg.experiment.total_steps);
        cfg.experiment.metrics_window = static_cast<int>(
            get_integer(exp, "metrics_window", "experiment.", cfg.experiment.metrics_window));
        if (exp.contains("seeds")) {
            if (!exp.at("seeds").is_array())
                throw ConfigError("experiment.seeds: expected an array");
            cfg.experiment.seeds.clear();
            for (const json& v : exp.at("seeds")) {
                if (!v.is_number_integer())
                    throw ConfigError("experiment.seeds: expected integers");
                cfg.experiment.seeds.push_back(v.get<std::uint64_t>());
            }
        }
    }
    if (root.contains("report")) {
        const json& rep = root.at("report");
        if (!rep.is_object()) throw ConfigError("report: expected an object");
        reject_unknown_keys(rep, {"novelty_zoom"}, "report.");
        cfg.report.novelty_zoom =
            static_cast<int>(get_integer(rep, "novelty_zoom", "report.", cfg.report.novelty_zoom));
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

std::string config_to_json(const RunConfig& config) {
    return config_to_json_value(config).dump(2) + "\n";
}

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
    json root = config_to_json_value(config);
    json* slot = nullptr;
    const auto dot = key.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override: key must look like section.field, got \"" + key + "\"");
    const std::string section = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    if (section == "freewill" || section == "baseline") {
        json& agent = root.at("agents").at(section);
        if (!agent.contains(field)) throw ConfigError("override: unknown key " + key);
        slot = &agent.at(field);
    } else if (section == "experiment" || section == "report") {
        if (field == "seeds") throw ConfigError("override: set seeds with --seeds");
        if (!root.at(section).contains(field))
            throw ConfigError("override: unknown key " + key);
        slot = &root.at(section).at(field);
    } else {
        throw ConfigError("override: unknown key " + key);
    }

    if (slot->is_string()) {
        *slot = value;
    } else {
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::exception&) {
            throw ConfigError("override " + key + ": cannot parse value \"" + value + "\"");
        }
        if (slot->is_number_integer() && !parsed.is_number_integer())
            throw ConfigError("override " + key + ": expected an integer");
        if (!parsed.is_number())
            throw ConfigError("override " + key + ": expected a number");
        *slot = parsed;
    }
    config = config_from_json(root.dump());
}

bool is_numeric_agent_key(const std::string& key) {
    static const std::set<std::string> numeric = {
        "freewill.alpha",     "freewill.eta",       "freewill.tau",
        "freewill.t_init",    "freewill.t_min",     "freewill.t_max",
        "freewill.gamma_inc", "freewill.gamma_dec", "freewill.discount",
        "freewill.surprise_window", "freewill.eps_init", "freewill.eps_decay",
        "freewill.eps_floor", "baseline.eta",       "baseline.discount",
        "baseline.eps_init",  "baseline.eps_decay", "baseline.eps_floor"};
    return numeric.count(key) > 0;
}

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    if (name == "fourarm" || name == "fig4") {
        cfg.experiment.schedule = preset_schedule_4arm();
        cfg.experiment.freewill.score_variant = ScoreVariant::Formula;
        cfg.experiment.freewill.state_mode = StateMode::Single;
    } else if (name == "fig3" || name == "fig5") {
        cfg.experiment.schedule = preset_schedule_10arm();
        cfg.experiment.freewill.score_variant = ScoreVariant::Code;
        cfg.experiment.freewill.state_mode = StateMode::Time;
    } else {
        throw ConfigError("unknown preset \"" + name +
                          "\" (expected fourarm, fig3, fig4 or fig5)");
    }
    cfg.experiment.freewill.trigger_variant = TriggerVariant::Oracle;
    cfg.validate();
    return cfg;
}

}  // namespace freewill
