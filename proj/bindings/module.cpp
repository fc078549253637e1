#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "freewill/agent.hpp"
#include "freewill/config.hpp"
#include "freewill/env.hpp"
#include "freewill/experiment.hpp"
#include "freewill/metrics.hpp"
#include "freewill/policy.hpp"
#include "freewill/report.hpp"
#include "freewill/rng.hpp"
#include "freewill/version.hpp"

namespace py = pybind11;
using namespace freewill;

namespace {

py::dict stats_dict(const SeriesStats& s) {
    py::dict d;
    d["mean"] = s.mean;
    d["std"] = s.stddev;
    return d;
}

py::dict pair_dict(const SeriesStats& fw, const SeriesStats& base) {
    py::dict d;
    d["freewill"] = stats_dict(fw);
    d["baseline"] = stats_dict(base);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Non-stationary bandit simulation: adaptive-temperature softmax agent "
              "with a count-based novelty bonus, plus a decaying eps-greedy control.";
    m.attr("__version__") = kVersion;

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<DivergenceUndefined>(m, "DivergenceUndefined", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &RngStream::next_u64)
        .def("next_double", &RngStream::next_double)
        .def("uniform_index", &RngStream::uniform_index, py::arg("n"))
        .def_property_readonly("seed", &RngStream::seed);

    py::class_<PolicyDistribution>(m, "PolicyDistribution")
        .def(py::init([](std::vector<double> probs) {
                 PolicyDistribution p{std::move(probs)};
                 p.validate();
                 return p;
             }),
             py::arg("probs"))
        .def_readonly("probs", &PolicyDistribution::probs)
        .def("__len__", &PolicyDistribution::size);

    m.def("softmax", [](const std::vector<double>& scores) { return softmax(scores).probs; },
          py::arg("scores"));
    m.def("sample_categorical",
          [](const std::vector<double>& probs, RngStream& rng) {
              return sample_categorical(PolicyDistribution{probs}, rng);
          },
          py::arg("probs"), py::arg("rng"));
    m.def("bernoulli", &bernoulli, py::arg("p"), py::arg("rng"));

    py::enum_<ScoreVariant>(m, "ScoreVariant")
        .value("FORMULA", ScoreVariant::Formula)
        .value("CODE", ScoreVariant::Code);
    py::enum_<TriggerVariant>(m, "TriggerVariant")
        .value("ENDOGENOUS", TriggerVariant::Endogenous)
        .value("ORACLE", TriggerVariant::Oracle);
    py::enum_<StateMode>(m, "StateMode")
        .value("SINGLE", StateMode::Single)
        .value("TIME", StateMode::Time);

    py::class_<FreeWillParams>(m, "FreeWillParams")
        .def(py::init<>())
        .def_readwrite("alpha", &FreeWillParams::alpha)
        .def_readwrite("eta", &FreeWillParams::eta)
        .def_readwrite("tau", &FreeWillParams::tau)
        .def_readwrite("t_init", &FreeWillParams::t_init)
        .def_readwrite("t_min", &FreeWillParams::t_min)
        .def_readwrite("t_max", &FreeWillParams::t_max)
        .def_readwrite("gamma_inc", &FreeWillParams::gamma_inc)
        .def_readwrite("gamma_dec", &FreeWillParams::gamma_dec)
        .def_readwrite("discount", &FreeWillParams::discount)
        .def_readwrite("surprise_window", &FreeWillParams::surprise_window)
        .def_readwrite("eps_init", &FreeWillParams::eps_init)
        .def_readwrite("eps_decay", &FreeWillParams::eps_decay)
        .def_readwrite("eps_floor", &FreeWillParams::eps_floor)
        .def_readwrite("score_variant", &FreeWillParams::score_variant)
        .def_readwrite("trigger_variant", &FreeWillParams::trigger_variant)
        .def_readwrite("state_mode", &FreeWillParams::state_mode);

    py::class_<BaselineParams>(m, "BaselineParams")
        .def(py::init<>())
        .def_readwrite("eta", &BaselineParams::eta)
        .def_readwrite("discount", &BaselineParams::discount)
        .def_readwrite("eps_init", &BaselineParams::eps_init)
        .def_readwrite("eps_decay", &BaselineParams::eps_decay)
        .def_readwrite("eps_floor", &BaselineParams::eps_floor);

    m.def("intrinsic_bonus", &intrinsic_bonus, py::arg("n"));
    m.def("action_scores", &action_scores, py::arg("q_row"), py::arg("n_row"),
          py::arg("temperature"), py::arg("alpha"), py::arg("variant"));
    m.def("surprise",
          [](double reward, const std::vector<double>& history) {
              return surprise(reward, std::deque<double>(history.begin(), history.end()));
          },
          py::arg("reward"), py::arg("history"));
    m.def("temperature_update", &temperature_update, py::arg("temperature"),
          py::arg("surprise_value"), py::arg("params"));
    m.def("psi_update", &psi_update, py::arg("psi_row"), py::arg("chosen"), py::arg("reward"),
          py::arg("bonus_row"), py::arg("params"));
    m.def("baseline_policy_distribution",
          [](const std::vector<double>& q_row, double eps) {
              return baseline_policy_distribution(q_row, eps).probs;
          },
          py::arg("q_row"), py::arg("eps"));

    py::class_<Phase>(m, "Phase")
        .def(py::init([](long start_step, std::vector<double> probs) {
                 return Phase{start_step, std::move(probs)};
             }),
             py::arg("start_step"), py::arg("probs"))
        .def_readonly("start_step", &Phase::start_step)
        .def_readonly("probs", &Phase::arm_probs);

    py::class_<PhaseSchedule>(m, "PhaseSchedule")
        .def(py::init<std::vector<Phase>>(), py::arg("phases"))
        .def("arm_count", &PhaseSchedule::arm_count)
        .def("probs_at", &PhaseSchedule::probs_at, py::arg("t"))
        .def("optimal_at", &PhaseSchedule::optimal_at, py::arg("t"))
        .def("change_steps", &PhaseSchedule::change_steps);

    m.def("preset_schedule_4arm", &preset_schedule_4arm);
    m.def("preset_schedule_10arm", &preset_schedule_10arm);

    py::class_<BanditEnv>(m, "BanditEnv")
        .def(py::init([](const PhaseSchedule& schedule, std::uint64_t seed) {
                 return BanditEnv(schedule, RngStream(seed));
             }),
             py::arg("schedule"), py::arg("seed"))
        .def("step", &BanditEnv::step, py::arg("action"))
        .def("active_probs", &BanditEnv::active_probs, py::arg("t"))
        .def("optimal_expected", &BanditEnv::optimal_expected, py::arg("t"))
        .def_property_readonly("clock", &BanditEnv::clock)
        .def_property_readonly("arm_count", &BanditEnv::arm_count);

    py::class_<Selection>(m, "Selection")
        .def_readonly("action", &Selection::action)
        .def_property_readonly("policy",
                               [](const Selection& s) { return s.policy.probs; });

    py::class_<FreeWillAgent>(m, "FreeWillAgent")
        .def(py::init<int, FreeWillParams>(), py::arg("num_arms"),
             py::arg("params") = FreeWillParams{})
        .def("select", &FreeWillAgent::select, py::arg("rng"))
        .def("observe", &FreeWillAgent::observe, py::arg("action"), py::arg("reward"),
             py::arg("change_signal") = false)
        .def_property_readonly("temperature", &FreeWillAgent::temperature)
        .def_property_readonly("eps", &FreeWillAgent::exploration_rate)
        .def_property_readonly(
            "last_policy", [](const FreeWillAgent& a) { return a.last_policy().probs; })
        .def_property_readonly("last_psi_chosen", &FreeWillAgent::last_psi_chosen)
        .def("visits", &FreeWillAgent::visits, py::arg("state"), py::arg("action"))
        .def("q_value", &FreeWillAgent::q_value, py::arg("state"), py::arg("action"))
        .def("psi_value", &FreeWillAgent::psi_value, py::arg("state"), py::arg("action"));

    py::class_<BaselineAgent>(m, "BaselineAgent")
        .def(py::init<int, BaselineParams>(), py::arg("num_arms"),
             py::arg("params") = BaselineParams{})
        .def("select", &BaselineAgent::select, py::arg("rng"))
        .def("observe", &BaselineAgent::observe, py::arg("action"), py::arg("reward"))
        .def_property_readonly("eps", &BaselineAgent::exploration_rate)
        .def_property_readonly(
            "last_policy", [](const BaselineAgent& a) { return a.last_policy().probs; })
        .def("q_value", &BaselineAgent::q_value, py::arg("state"), py::arg("action"));

    m.def("moving_average", &moving_average, py::arg("series"), py::arg("window"));
    m.def("entropy_bits",
          [](const std::vector<double>& p) {
              return shannon_entropy(PolicyDistribution{p}, EntropyBase::Bits);
          },
          py::arg("probs"));
    m.def("entropy_nats",
          [](const std::vector<double>& p) {
              return shannon_entropy(PolicyDistribution{p}, EntropyBase::Nats);
          },
          py::arg("probs"));
    m.def("kl_divergence",
          [](const std::vector<double>& p, const std::vector<double>& q) {
              return kl_divergence(PolicyDistribution{p}, PolicyDistribution{q});
          },
          py::arg("p"), py::arg("q"));
    m.def("novelty_series", &novelty_series, py::arg("actions"), py::arg("num_arms"));

    m.def("preset_config_json",
          [](const std::string& name) { return config_to_json(preset_config(name)); },
          py::arg("name"));

    m.def("run_experiment_json",
          [](const std::string& config_json, int jobs) {
              const RunConfig cfg = config_from_json(config_json);
              const AggregateResult result = run_many(cfg.experiment, jobs);
              py::dict out;
              out["seeds"] = cfg.experiment.seeds;
              out["rolling_reward"] =
                  pair_dict(result.freewill.rolling_reward, result.baseline.rolling_reward);
              out["entropy_bits"] =
                  pair_dict(result.freewill.entropy_bits, result.baseline.entropy_bits);
              out["entropy_nats"] =
                  pair_dict(result.freewill.entropy_nats, result.baseline.entropy_nats);
              out["kl"] = stats_dict(result.kl);
              out["novelty"] = pair_dict(result.freewill.novelty, result.baseline.novelty);
              out["regret"] = pair_dict(result.freewill.regret, result.baseline.regret);
              return out;
          },
          py::arg("config_json"), py::arg("jobs") = 1,
          "Run every seed in the config and return the aggregated metric series.");
}
