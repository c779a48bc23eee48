"""Multi-band cognitive radio network simulator."""

import json as _json

from ._core import (
    ConfigError,
    SimError,
    __version__,
    compute_bit_rate,
    compute_range,
    compute_reward,
    config_json,
    default_bands,
    events_csv,
    ldc_route,
    q_update,
)
from ._core import run as _run


def run(config=None, seed=None, audit=False):
    """Run one simulation. `config` is a dict, a JSON string or None for defaults."""
    if config is None:
        text = ""
    elif isinstance(config, str):
        text = config
    else:
        text = _json.dumps(config)
    return _run(text, seed, audit)


__all__ = [
    "ConfigError",
    "SimError",
    "__version__",
    "compute_bit_rate",
    "compute_range",
    "compute_reward",
    "config_json",
    "default_bands",
    "events_csv",
    "ldc_route",
    "q_update",
    "run",
]
