"""Python bindings for the reminisce photo-recall engine."""

import json
import os

from . import _core
from ._core import ActivationError, ManifestError, base_level_activation, rating_to_reward, update_utility

__all__ = [
    "ActivationError",
    "ManifestError",
    "base_level_activation",
    "estimate",
    "metrics",
    "network_summary",
    "rating_to_reward",
    "replay_utilities",
    "run_session",
    "run_sweep",
    "update_utility",
]


def _text(value):
    if value is None:
        return ""
    return value if isinstance(value, str) else json.dumps(value)


def network_summary(manifest):
    return json.loads(_core.network_summary(os.fspath(manifest)))


def run_session(manifest, seed=0, config=None, profile=None):
    """Run one session; `config` is a session config dict, `profile` a profile file path."""
    return json.loads(_core.run_session(os.fspath(manifest), seed, _text(config), os.fspath(profile or "")))


def replay_utilities(log):
    return json.loads(_core.replay_utilities(_text(log)))


def run_sweep(manifest, sessions=40, seed=0, profile=None, features=False, config=None):
    """Returns (summary dict, feature CSV text). The CSV is empty unless `features` is set."""
    result, csv = _core.run_sweep(os.fspath(manifest), sessions, seed, os.fspath(profile or ""), features, _text(config))
    return json.loads(result), csv


def estimate(features_csv, task="four_condition", mode="pooled", linear_only=False, folds=5, seed=0):
    return json.loads(_core.estimate(features_csv, task, mode, linear_only, folds, seed))


def metrics(labels, counts):
    """Accuracy and F-measure of a confusion matrix; rows are predicted, columns true."""
    return _core.metrics(list(labels), [list(row) for row in counts])
