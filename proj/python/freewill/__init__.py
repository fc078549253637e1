"""Non-stationary bandit simulation.

An adaptive-temperature softmax agent with a count-based novelty bonus,
a decaying eps-greedy control agent, deterministic seeded experiment
runs, and aggregated metric series (rolling reward, policy entropy,
KL divergence, novelty, regret).
"""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, preset_config_json, run_experiment_json


def preset_config(name):
    """Return a built-in preset config ('fourarm', 'fig3', 'fig4', 'fig5') as a dict."""
    return _json.loads(preset_config_json(name))


def run_experiment(config, jobs=1):
    """Run a config (dict or JSON string) and return aggregated metric series."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return run_experiment_json(config, jobs)
