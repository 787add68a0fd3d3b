"""Generalized moment retrieval toolkit: metrics, reward and synthetic data."""

import json

from . import _gmr
from ._gmr import ConfigError, InputError, iou

__version__ = _gmr.__version__

__all__ = [
    "ConfigError",
    "InputError",
    "evaluate",
    "iou",
    "oracle_predictions",
    "perturb",
    "run_cli",
    "score_answer",
    "synth_samples",
]


def _cfg(config):
    return json.dumps(config) if config else ""


def evaluate(samples, preds, config=None, threads=1):
    """Metric report as a dict, keyed like report.json."""
    return json.loads(_gmr.evaluate(json.dumps(samples), json.dumps(preds), _cfg(config), threads))


def score_answer(raw, ground_truth, duration_s, config=None):
    out = json.loads(_gmr.score_answer(raw, [tuple(g) for g in ground_truth], duration_s, _cfg(config)))
    out.pop("sample_id")
    return out


def synth_samples(n, max_moments=3, null_fraction=0.5, seed=0):
    return json.loads(_gmr.synth_samples(n, max_moments, null_fraction, seed))


def oracle_predictions(samples):
    return json.loads(_gmr.oracle_predictions(json.dumps(samples)))


def perturb(samples, config=None):
    return json.loads(_gmr.perturb(json.dumps(samples), _cfg(config)))


def run_cli(args):
    """Run the gmr command line in-process; returns the exit code."""
    return _gmr.run_cli([str(a) for a in args])
