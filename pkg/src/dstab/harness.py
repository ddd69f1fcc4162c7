"""End-to-end check pipeline and the random-matrix experiment harness."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Optional

from .certifier import (CERTIFIED, FAILED_NECESSARY, FALSIFIED, INCONCLUSIVE,
                        NOT_STABLE, TestReport, step1_sufficient,
                        test_hierarchy)
from .falsifier import falsify, stable_seed
from .matrix import (DEFAULT_MINOR_CAP, Matrix, all_principal_minors,
                     is_positive_stable, necessary_filter)
from .recursion import build_tree

REPORT_SCHEMA = "dstab-report/1"


@dataclass
class RunConfig:
    """Options for a single end-to-end check."""

    test: str = "I"                  # "I", "II" or "both"
    depth: int | str = "auto"
    refine: bool = False
    permutations: int = 0
    falsify_trials: int = 0
    falsify_range: tuple[float, float] = (1e-3, 1e3)
    seed: int = 0
    minor_cap: int = DEFAULT_MINOR_CAP


def _depth_schedule(n: int, depth: int | str) -> list[int]:
    top = max(n - 2, 0)
    if depth == "auto":
        return list(range(top + 1))
    depth = int(depth)
    if not 0 <= depth <= top:
        raise ValueError(f"depth must be 'auto' or an integer in 0..{top}")
    return [depth]


def check_matrix(a: Matrix, cfg: RunConfig | None = None) -> TestReport:
    """Run the full verdict pipeline on one matrix.

    Cheap filters first: exact stability, then the P0+ necessary condition,
    then (optionally) the randomized falsifier, then the step-1 sufficient
    test and finally the depth/permutation schedule of the hierarchy.
    """
    cfg = cfg or RunConfig()
    if a.n == 1:
        if a.rows[0][0] > 0:
            return TestReport(CERTIFIED, test=cfg.test, depth=0,
                              detail="positive 1x1 matrix is trivially D-stable")
        return TestReport(NOT_STABLE, detail="nonpositive 1x1 matrix")
    if not is_positive_stable(a):
        return TestReport(NOT_STABLE, detail="matrix is not positive stable")
    minors = all_principal_minors(a, cap=cfg.minor_cap)
    if not necessary_filter(a, minors=minors):
        return TestReport(FAILED_NECESSARY,
                          detail="matrix is not a P0+-matrix")
    if cfg.falsify_trials > 0:
        lo, hi = cfg.falsify_range
        found = falsify(a, trials=cfg.falsify_trials, seed=cfg.seed,
                        lo=lo, hi=hi)
        if found is not None:
            return TestReport(FALSIFIED, counterexample=found,
                              detail="positive diagonal with nonpositive "
                                     "spectral margin")
    tree = build_tree(a, minors=minors)
    report = step1_sufficient(a, tree=tree)
    if report.verdict == CERTIFIED:
        return report
    last = report
    rng = random.Random(cfg.seed)
    perms: list[Optional[tuple[int, ...]]] = [None]
    for _ in range(cfg.permutations):
        p = list(range(1, a.n + 1))
        rng.shuffle(p)
        perms.append(tuple(p))
    for perm in perms:
        if perm is None:
            mat, mat_tree = a, tree
        else:
            mat = a.permuted(perm)
            mat_tree = build_tree(mat)
        for depth in _depth_schedule(a.n, cfg.depth):
            rep = test_hierarchy(mat, which=cfg.test, depth=depth,
                                 refine=cfg.refine, tree=mat_tree,
                                 check_preconditions=False)
            rep.permutation = perm
            if rep.verdict == CERTIFIED:
                return rep
            last = rep
    return last


# ---------------------------------------------------------------------------
# random stable matrices and the experiment loop


@dataclass(frozen=True)
class GeneratorStyle:
    """Parameters of the stable-matrix ensemble.

    Entries have two decimal places; the diagonal is positive and dominant
    in magnitude, with uniform off-diagonal noise.  Verdicts on this
    ensemble depend strongly on these parameters, so they are embedded in
    every experiment report.
    """

    diag_lo: float = 20.0
    diag_hi: float = 120.0
    noise: float = 25.0

    @staticmethod
    def parse(spec: str) -> "GeneratorStyle":
        """Parse "default" or comma-separated key=value overrides."""
        style = GeneratorStyle()
        if spec in ("", "default"):
            return style
        kwargs = {}
        for part in spec.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if key not in ("diag_lo", "diag_hi", "noise"):
                raise ValueError(f"unknown generator parameter {key!r}")
            kwargs[key] = float(value)
        return GeneratorStyle(**{**style.__dict__, **kwargs})

    def describe(self) -> str:
        return (f"diag_lo={self.diag_lo},diag_hi={self.diag_hi},"
                f"noise={self.noise}")


def _two_decimals(x: float) -> Fraction:
    return Fraction(f"{x:.2f}")


def random_stable_matrix(n: int, seed: int, style: GeneratorStyle | str = "default",
                         max_attempts: int = 10_000) -> Matrix:
    """Positive-stable matrix by rejection sampling.

    Deterministic in (n, seed, style); entries are exact rationals with at
    most two decimal places.
    """
    if isinstance(style, str):
        style = GeneratorStyle.parse(style)
    rng = random.Random(stable_seed("dstab-gen", n, seed))
    for _ in range(max_attempts):
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                if i == j:
                    row.append(_two_decimals(
                        rng.uniform(style.diag_lo, style.diag_hi)))
                else:
                    row.append(_two_decimals(
                        rng.uniform(-style.noise, style.noise)))
            rows.append(row)
        a = Matrix(rows)
        # stability is scale-invariant; test the integer multiple
        if is_positive_stable(a.scale(100)):
            return a
    raise RuntimeError("rejection budget exhausted while generating a "
                       "stable matrix")


@dataclass
class ExperimentStats:
    """Aggregated verdicts of a randomized experiment."""

    n: int
    trials: int
    seed: int
    generator: str
    test: str
    depth: int
    refine: bool
    counts: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def hit_rate(self) -> float:
        return self.counts.get(CERTIFIED, 0) / self.trials if self.trials else 0.0

    def wilson_interval(self, z: float = 1.96) -> tuple[float, float]:
        """Wilson score interval for the Certified rate."""
        if self.trials == 0:
            return (0.0, 0.0)
        p = self.hit_rate
        t = self.trials
        denom = 1 + z * z / t
        center = (p + z * z / (2 * t)) / denom
        half = z * sqrt(p * (1 - p) / t + z * z / (4 * t * t)) / denom
        return (max(center - half, 0.0), min(center + half, 1.0))

    def to_dict(self) -> dict:
        lo, hi = self.wilson_interval()
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "generator": self.generator,
            "test": self.test,
            "depth": self.depth,
            "refine": self.refine,
            "counts": dict(self.counts),
            "hit_rate": self.hit_rate,
            "hit_rate_wilson_95": [lo, hi],
            "wall_time_s": self.wall_time,
        }


def run_experiment(n: int, trials: int, seed: int = 0, test: str = "I",
                   depth: int | None = None, refine: bool = False,
                   style: GeneratorStyle | str = "default",
                   falsify_trials: int = 0) -> ExperimentStats:
    """Generate stable matrices and tally the certification verdicts.

    Each trial draws its matrix from a seed derived from (seed, trial), so
    results are reproducible and order-independent.
    """
    if isinstance(style, str):
        style = GeneratorStyle.parse(style)
    if depth is None:
        depth = max(n - 2, 0)
    counts = {CERTIFIED: 0, INCONCLUSIVE: 0, FAILED_NECESSARY: 0, FALSIFIED: 0}
    start = time.perf_counter()
    for t in range(trials):
        trial_seed = stable_seed(seed, t)
        # Every verdict below is invariant under positive scaling, and
        # integer entries make the exact arithmetic much cheaper.
        a = random_stable_matrix(n, trial_seed, style).scale(100)
        minors = all_principal_minors(a)
        if not necessary_filter(a, minors=minors):
            counts[FAILED_NECESSARY] += 1
            continue
        if falsify_trials > 0:
            if falsify(a, trials=falsify_trials, seed=trial_seed) is not None:
                counts[FALSIFIED] += 1
                continue
        rep = test_hierarchy(a, which=test, depth=depth, refine=refine,
                             tree=build_tree(a, minors=minors),
                             check_preconditions=False)
        counts[rep.verdict] += 1
    stats = ExperimentStats(n=n, trials=trials, seed=seed,
                            generator=style.describe(), test=test,
                            depth=depth, refine=refine, counts=counts,
                            wall_time=time.perf_counter() - start)
    return stats
