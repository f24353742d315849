"""Mixtures of two multinomial logits: identifiability checks and learning."""

import json

from . import _core
from ._core import MnlmixError, query_offset, solve_polynomial

__all__ = [
    "MnlmixError",
    "counterexample",
    "counterexample_report",
    "discriminant_max",
    "identifiability_sweep",
    "identify",
    "lambda_threshold",
    "learn",
    "oracle",
    "query_offset",
    "random_instance",
    "sample",
    "sample_complexity",
    "solve_polynomial",
    "three_roots",
]


def _model(model):
    return model if isinstance(model, str) else json.dumps(model)


def random_instance(n, lam, seed):
    return json.loads(_core.random_instance(n, lam, seed))


def counterexample():
    return json.loads(_core.counterexample())


def oracle(model, slates=()):
    """Scaled choice values C_T for 1-based slates (all slates when empty)."""
    return json.loads(_core.oracle(_model(model), [list(s) for s in slates]))


def sample(model, slates, samples, seed):
    return json.loads(_core.sample(_model(model), [list(s) for s in slates], samples, seed))


def identify(model, exact=False):
    return json.loads(_core.identify(_model(model), exact))


def learn(model, mode="oracle", k=4, eps=0.05, samples=0, seed=0):
    return json.loads(_core.learn(_model(model), mode, k, eps, samples, seed))


def three_roots(exact=False):
    return json.loads(_core.three_roots(exact))


def counterexample_report(exact=False):
    return json.loads(_core.counterexample_report(exact))


def discriminant_max(lam, restarts, seed):
    return json.loads(_core.discriminant_max(lam, restarts, seed))


def lambda_threshold(grid, restarts, seed, refine=0):
    return json.loads(_core.lambda_threshold(list(grid), restarts, seed, refine))


def identifiability_sweep(n, lam, trials, seed):
    return json.loads(_core.identifiability_sweep(n, lam, trials, seed))


def sample_complexity(n, lam, eps, trials, seed, n0=10000, grid_points=10):
    return json.loads(_core.sample_complexity(n, lam, list(eps), trials, seed, n0, grid_points))
