"""Randomized disproof of D-stability.

Samples positive diagonal scalings D and inspects the spectrum of D*A.  A
single sample with an eigenvalue real part <= 0 disproves D-stability;
absence of such a sample proves nothing.  Candidate counterexamples found
with the floating-point eigensolver are re-verified exactly (rational D,
Routh-Hurwitz) before being reported, so a returned counterexample is never
eigensolver noise.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from math import exp, log
from typing import Optional, Sequence

import numpy as np

from .matrix import Matrix, is_positive_stable, det_complex

GUARD_TOLERANCE = 1e-9


def stable_seed(*parts) -> int:
    """Mix arbitrary values into a 64-bit RNG seed.

    Unlike hash(), this is stable across processes (string hashing is
    randomized per interpreter run), so seeded runs reproduce exactly.
    """
    data = ":".join(repr(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")


@dataclass(frozen=True)
class DiagonalSample:
    """One positive diagonal, with provenance for reproducibility."""

    d: tuple[float, ...]
    seed: Optional[int] = None
    index: Optional[int] = None

    def to_dict(self) -> dict:
        out = {"d": list(self.d)}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.index is not None:
            out["index"] = self.index
        return out


@dataclass(frozen=True)
class Counterexample:
    """Witness of non-D-stability: D*A has an eigenvalue with Re <= 0."""

    sample: DiagonalSample
    eigenvalue: complex
    margin: float

    def to_dict(self) -> dict:
        return {
            "d": list(self.sample.d),
            "eigenvalue": {"re": self.eigenvalue.real, "im": self.eigenvalue.imag},
            "margin": self.margin,
            "sample": self.sample.to_dict(),
        }


def _np(a: Matrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in a.rows], dtype=float)


def johnson_F(a: Matrix, d: Sequence, exact: bool = False):
    """|det(A + i*D)|^2, the Johnson positivity functional.

    Float mode accepts any positive diagonal; exact mode interprets the
    entries as rationals and evaluates the complex determinant exactly.
    """
    if exact:
        diag = [x if isinstance(x, Fraction) else Fraction(x) for x in d]
        re, im = det_complex(a, diag)
        return re * re + im * im
    m = _np(a) + 1j * np.diag(np.asarray([float(x) for x in d]))
    return float(abs(np.linalg.det(m)) ** 2)


def spectral_margin(a: Matrix, d: Sequence) -> float:
    """Minimum eigenvalue real part of D*A (floating point)."""
    da = np.diag(np.asarray([float(x) for x in d])) @ _np(a)
    try:
        eig = np.linalg.eigvals(da)
    except np.linalg.LinAlgError:
        eig = np.linalg.eigvals(da + 1e-12 * np.eye(a.n))
    return float(eig.real.min())


def _offending_eigenvalue(a: Matrix, d: Sequence) -> complex:
    da = np.diag(np.asarray([float(x) for x in d])) @ _np(a)
    eig = np.linalg.eigvals(da)
    return complex(eig[int(eig.real.argmin())])


def _verify_exact(a: Matrix, d: Sequence) -> bool:
    """Exact confirmation that D*A is not positive stable."""
    diag = [Fraction(float(x)) for x in d]
    da = Matrix.diagonal(diag) @ a
    return not is_positive_stable(da)


def deterministic_probes(n: int) -> list[tuple[float, ...]]:
    """All-ones plus single-coordinate spikes at several magnitudes."""
    probes = [tuple(1.0 for _ in range(n))]
    for k in (-3, -1, 1, 3):
        scale = 10.0 ** k
        for i in range(n):
            probes.append(tuple(scale if j == i else 1.0 for j in range(n)))
    return probes


def falsify(a: Matrix, trials: int = 10_000, seed: int = 0,
            lo: float = 1e-3, hi: float = 1e3) -> Optional[Counterexample]:
    """Search for a positive diagonal witnessing non-D-stability.

    Deterministic probes run first, then per-coordinate log-uniform samples
    over [lo, hi].  Deterministic given (seed, trials, lo, hi).  Returns the
    first exactly verified counterexample, or None.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    n = a.n
    log_lo, log_hi = log(lo), log(hi)
    candidates = deterministic_probes(n)

    def check(d: tuple[float, ...], index: int) -> Optional[Counterexample]:
        margin = spectral_margin(a, d)
        if margin > GUARD_TOLERANCE:
            return None
        if not _verify_exact(a, d):
            return None
        sample = DiagonalSample(d, seed=seed, index=index)
        return Counterexample(sample, _offending_eigenvalue(a, d), margin)

    count = 0
    for d in candidates:
        if count >= trials:
            return None
        found = check(d, count)
        count += 1
        if found:
            return found
    while count < trials:
        rng = random.Random(stable_seed(seed, count))
        d = tuple(exp(log_lo + (log_hi - log_lo) * rng.random())
                  for _ in range(n))
        found = check(d, count)
        count += 1
        if found:
            return found
    return None
