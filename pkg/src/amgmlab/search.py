"""Randomized counterexample search for the open m >= 4 mean comparison.

Each trial draws a random PSD family from a mix of generator kinds, scores
the with/without-replacement gap, and optionally runs a greedy perturbation
descent that keeps changes only when they shrink the gap.  Trials use seeds
derived from (seed XOR trial index), so a run is deterministic, independent
of execution order, and a longer run with the same seed reproduces the
shorter run's trials exactly.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import densecore
from .amgm import MatrixFamily, wr_mean, wor_mean
from .checks import DEFAULT_EPS
from .densecore import matrix_to_text, random_psd, sym_eigen
from .norms import CATALOG, NormSpec, parse_norm
from .rng import derive

# Strict tolerance for certifying a violation before reporting it.
CERTIFY_EPS = 1e-12

HIST_EDGES = (-math.inf, -1e-8, 0.0, 1e-8, 1e-6, 1e-4, 1e-2, 1.0, math.inf)


@dataclass
class SearchConfig:
    m: int = 4
    n_values: tuple = (4, 5)
    d_values: tuple = (2, 3, 4)
    norms: tuple = tuple(spec.label() for spec in CATALOG)
    trials: int = 1000
    perturb_steps: int = 0
    seed: int = 0
    epsilon: float = DEFAULT_EPS

    def to_dict(self) -> dict:
        return {"m": self.m, "n_values": list(self.n_values),
                "d_values": list(self.d_values), "norms": list(self.norms),
                "trials": self.trials, "perturb_steps": self.perturb_steps,
                "seed": self.seed, "epsilon": self.epsilon}

    @classmethod
    def from_dict(cls, d: dict) -> "SearchConfig":
        cfg = cls()
        known = cfg.to_dict()
        for key, value in d.items():
            if key not in known:
                raise ValueError(f"unknown search config field {key!r}")
            if key in ("n_values", "d_values", "norms"):
                value = tuple(value)
            setattr(cfg, key, value)
        if cfg.m < 1 or cfg.trials < 0 or cfg.perturb_steps < 0:
            raise ValueError("invalid search config")
        for label in cfg.norms:
            parse_norm(label)
        return cfg


@dataclass
class SearchReport:
    config: SearchConfig
    trials: int
    best_gap: float  # relative gap of the worst instance found
    best_instance: dict
    gap_histogram: dict
    violation_found: bool
    seed: int
    best_family: MatrixFamily | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(), "trials": self.trials,
                "best_gap": self.best_gap, "best_instance": self.best_instance,
                "gap_histogram": self.gap_histogram,
                "violation_found": self.violation_found, "seed": self.seed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _hist_bucket(rel_gap: float) -> str:
    for lo, hi in zip(HIST_EDGES, HIST_EDGES[1:]):
        if lo <= rel_gap < hi:
            return f"[{lo:g}, {hi:g})"
    return f"[{HIST_EDGES[-2]:g}, inf)"


def _draw_member(rng, d: int) -> np.ndarray:
    """Generator mix tuned toward extreme spectra: 40% wishart, 30% Kaczmarz
    style projectors, 20% ill-conditioned rotated-diagonal, 10% near rank one.
    """
    u = rng.uniform()
    if u < 0.4:
        return random_psd(rng, d, "wishart")
    if u < 0.7:
        return random_psd(rng, d, "projector", rank=max(d - 1, 1))
    if u < 0.9:
        cond = 10.0 ** rng.uniform(0.0, 4.0)
        return random_psd(rng, d, "rotated-diagonal", cond=cond)
    v = np.array([rng.gaussian() for _ in range(d)])
    M = np.outer(v, v) + 1e-6 * random_psd(rng, d, "wishart")
    return 0.5 * (M + M.T)


def _clamp_psd(M: np.ndarray) -> np.ndarray:
    w, Q = sym_eigen(0.5 * (M + M.T))
    w = np.maximum(w, 0.0)
    R = (Q * w) @ Q.T
    return 0.5 * (R + R.T)


def _op_norm(M: np.ndarray) -> float:
    return float(densecore.fast_singular_values(M)[0])


def _rel_gap(members, m: int, spec: NormSpec) -> float:
    lhs = wr_mean(members, m, spec)
    rhs = wor_mean(members, m, spec)
    return (lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def run_trial(cfg: SearchConfig, index: int):
    """One seeded trial; returns (rel_gap, members, norm_label, n, d)."""
    rng = derive(cfg.seed, index)
    n = cfg.n_values[rng.randint(len(cfg.n_values))]
    d = cfg.d_values[rng.randint(len(cfg.d_values))]
    spec = parse_norm(cfg.norms[rng.randint(len(cfg.norms))])
    members = [_draw_member(rng, d) for _ in range(n)]
    best = _rel_gap(members, cfg.m, spec)

    scale = 1e-2
    streak = 0
    for _ in range(cfg.perturb_steps):
        j = rng.randint(n)
        E = rng.gaussian_matrix(d, d)
        E = 0.5 * (E + E.T)
        step = scale * max(_op_norm(members[j]), 1e-6)
        candidate = _clamp_psd(members[j] + step * E)
        trial_members = list(members)
        trial_members[j] = candidate
        g = _rel_gap(trial_members, cfg.m, spec)
        if g < best:
            best = g
            members = trial_members
            streak = 0
        else:
            streak += 1
            if streak >= 10:
                scale *= 0.5
                streak = 0
    return best, members, spec.label(), n, d


def search_counterexample(cfg: SearchConfig) -> SearchReport:
    if cfg.m > min(cfg.n_values):
        raise ValueError("m must not exceed the smallest family size")
    hist: dict = {}
    best_gap = math.inf
    best = None
    for i in range(cfg.trials):
        gap, members, norm_label, n, d = run_trial(cfg, i)
        bucket = _hist_bucket(gap)
        hist[bucket] = hist.get(bucket, 0) + 1
        if gap < best_gap:
            best_gap = gap
            best = (members, norm_label, n, d, i)

    if best is None:
        return SearchReport(cfg, 0, math.nan, {}, hist, False, cfg.seed)

    members, norm_label, n, d, trial_index = best
    spec = parse_norm(norm_label)
    violation = best_gap < -cfg.epsilon
    if violation:
        # Certify at the strict tolerance before claiming anything; the
        # means already use compensated summation.
        violation = _rel_gap(members, cfg.m, spec) < -CERTIFY_EPS
    family = MatrixFamily(members)
    instance = {
        "m": cfg.m, "n": n, "d": d, "norm": norm_label,
        "trial": trial_index, "rel_gap": best_gap,
        "members": [matrix_to_text(M) for M in members],
    }
    return SearchReport(cfg, cfg.trials, best_gap, instance, hist,
                        violation, cfg.seed, best_family=family)
