"""Sufficient D-stability tests on the delete/zero expansion.

The certification surface consists of:

* the step-1 sufficient test on F(0,1) / G(0,1) coefficient signs,
* the branched ternary coefficient trees obtained by repeatedly collecting
  powers of the highest remaining variable, checked level by level with
  early stopping (Tests I and II),
* an optional per-variable quadratic-discriminant refinement for nodes in
  at most two variables,
* exact constant-coefficient primitives for the quadratic zero-location
  analysis of the second recursion step.

All verdicts returned here are sound: Certified is only produced from an
exact positivity certificate, never from sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .matrix import Matrix, is_positive_stable, necessary_filter
from .poly import IDENTICALLY_ZERO, NONNEG_STRICT, Poly
from .recursion import build_tree, fg_pair

CERTIFIED = "Certified"
INCONCLUSIVE = "Inconclusive"
NOT_STABLE = "NotStable"
FAILED_NECESSARY = "FailedNecessary"
FALSIFIED = "Falsified"

# branch certification statuses
_ZERO = "zero"
_STRICT = "strict"
_UNKNOWN = "unknown"


@dataclass
class NodeRecord:
    """Per-node outcome in a test report."""

    path: str            # ternary path, newest digit first ("" = seed)
    level: int
    poly: Poly
    sign_class: str
    status: str
    refinement: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "path": self.path,
            "level": self.level,
            "variables": len(self.poly.variables()),
            "poly": self.poly.render(),
            "sign_class": self.sign_class,
            "status": self.status,
        }
        if self.refinement is not None:
            out["refinement"] = {
                "variable": self.refinement["variable"],
                "leading": self.refinement["leading"].render(),
                "discriminant": self.refinement["discriminant"].render(),
            }
        return out


@dataclass
class TestReport:
    """Outcome of the certification pipeline for one matrix."""

    verdict: str
    test: Optional[str] = None          # "I", "II" or "both"
    depth: Optional[int] = None
    nodes: list[NodeRecord] = field(default_factory=list)
    counterexample: Optional[object] = None
    detail: Optional[str] = None
    permutation: Optional[tuple[int, ...]] = None

    def refinement_traces(self) -> list[dict]:
        return [rec.refinement for rec in self.nodes if rec.refinement]

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict}
        if self.test is not None:
            out["test"] = self.test
        if self.depth is not None:
            out["depth"] = self.depth
        if self.detail is not None:
            out["detail"] = self.detail
        if self.permutation is not None:
            out["permutation"] = list(self.permutation)
        if self.nodes:
            out["nodes"] = [rec.to_dict() for rec in self.nodes]
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_dict()
        return out


# ---------------------------------------------------------------------------
# seeds and coefficient trees


def seed_polys(a: Matrix, tree=None) -> tuple[Poly, Poly]:
    """(F(0,1), G(0,1)) from the depth-1 nodes of the delete/zero tree."""
    if a.n < 2:
        raise ValueError("seed polynomials need n >= 2")
    if tree is None:
        tree = build_tree(a)
    pair = fg_pair(tree["0"], tree["1"])
    return pair.F, pair.G


@dataclass
class CoeffTree:
    """Full ternary coefficient tree of a seed polynomial.

    Level j holds 3^j nodes keyed by ternary paths of length j; digit k of a
    child (1/2/3) selects the d^2 / d^1 / d^0 coefficient of its parent with
    respect to the variable processed at that level.  New digits are
    prepended, matching the subscript convention c_{k_i ... k_1}.
    """

    seed_name: str            # "F01" or "G01"
    n: int
    depth: int
    nodes: dict[str, Poly]

    def level(self, j: int) -> dict[str, Poly]:
        return {p: q for p, q in self.nodes.items() if len(p) == j}


def collect_variable(n: int, level: int) -> int:
    """Variable processed when expanding a node at the given level.

    The seed lives in d_1..d_{n-1}; level-j nodes live in d_1..d_{n-1-j}.
    """
    return n - 1 - level


def coeff_tree(a: Matrix, seed: str = "F01", depth: int = 0,
               tree=None) -> CoeffTree:
    n = a.n
    if not 0 <= depth <= n - 2:
        raise ValueError("depth must lie in 0..n-2")
    f01, g01 = seed_polys(a, tree=tree)
    root = {"F01": f01, "G01": g01}.get(seed)
    if root is None:
        raise ValueError("seed must be 'F01' or 'G01'")
    nodes = {"": root}
    frontier = {"": root}
    for j in range(depth):
        var = collect_variable(n, j)
        nxt = {}
        for path, poly in frontier.items():
            p0, p1, p2 = poly.collect(var)
            nxt["1" + path] = p2
            nxt["2" + path] = p1
            nxt["3" + path] = p0
        nodes.update(nxt)
        frontier = nxt
    return CoeffTree(seed, n, depth, nodes)


# ---------------------------------------------------------------------------
# positivity certificates


def quadratic_refine(p: Poly) -> Optional[dict]:
    """Per-variable quadratic-discriminant positivity certificate.

    Collecting p by one of its variables v gives p = a*v^2 + b*v + c with
    polynomial coefficients.  If a has strictly positive coefficients and
    the discriminant b^2 - 4ac has strictly negative coefficients, then p is
    positive for all real v and all positive remaining variables.  Returns
    the successful trace or None.
    """
    for v in sorted(p.variables(), reverse=True):
        c0, c1, c2 = p.collect(v)
        if c2.coeffwise_sign() != NONNEG_STRICT:
            continue
        disc = c1 * c1 - (c2 * c0).scale(4)
        if (-disc).coeffwise_sign() == NONNEG_STRICT:
            return {"variable": v, "leading": c2, "discriminant": disc}
    return None


def _certify_branch(poly: Poly, path: str, level: int, n: int, depth: int,
                    refine: bool, records: list[NodeRecord]) -> str:
    """Certify one branch of the coefficient tree, expanding as needed.

    Returns "zero" (identically zero), "strict" (provably positive on the
    open positive orthant) or "unknown".  A node is strict as soon as all
    its children are nonnegative with at least one strict, mirroring the
    quadratic reassembly with positive d.
    """
    sign = poly.coeffwise_sign()
    if sign == IDENTICALLY_ZERO:
        records.append(NodeRecord(path, level, poly, sign, _ZERO))
        return _ZERO
    if sign == NONNEG_STRICT:
        records.append(NodeRecord(path, level, poly, sign, _STRICT))
        return _STRICT
    if refine and len(poly.variables()) <= 2:
        trace = quadratic_refine(poly)
        if trace is not None:
            records.append(NodeRecord(path, level, poly, sign, _STRICT, trace))
            return _STRICT
    var = collect_variable(n, level)
    if level >= depth or var < 1:
        records.append(NodeRecord(path, level, poly, sign, _UNKNOWN))
        return _UNKNOWN
    c0, c1, c2 = poly.collect(var)
    statuses = [
        _certify_branch(c2, "1" + path, level + 1, n, depth, refine, records),
        _certify_branch(c1, "2" + path, level + 1, n, depth, refine, records),
        _certify_branch(c0, "3" + path, level + 1, n, depth, refine, records),
    ]
    if _UNKNOWN in statuses:
        status = _UNKNOWN
    elif _STRICT in statuses:
        status = _STRICT
    else:
        status = _ZERO
    records.append(NodeRecord(path, level, poly, sign, status))
    return status


def _run_single_test(a: Matrix, seed_name: str, depth: int, refine: bool,
                     tree=None) -> TestReport:
    f01, g01 = seed_polys(a, tree=tree)
    root = f01 if seed_name == "F01" else g01
    records: list[NodeRecord] = []
    status = _certify_branch(root, "", 0, a.n, depth, refine, records)
    records.sort(key=lambda r: (r.level, r.path))
    verdict = CERTIFIED if status == _STRICT else INCONCLUSIVE
    test = "I" if seed_name == "F01" else "II"
    return TestReport(verdict, test=test, depth=depth, nodes=records)


def test_hierarchy(a: Matrix, which: str = "I", depth: int | None = None,
                   refine: bool = False, tree=None,
                   check_preconditions: bool = True) -> TestReport:
    """Depth-limited sufficient test on the branched coefficient trees.

    ``which`` selects the seed: "I" (F(0,1)), "II" (G(0,1)) or "both".
    Certification is hierarchical with early stopping: a branch whose node
    polynomial certifies positive (by coefficient signs or, with ``refine``,
    by quadratic-discriminant analysis on nodes of at most two variables)
    is not expanded further.  Never returns a false Certified.
    """
    n = a.n
    if depth is None:
        depth = max(n - 2, 0)
    if not 0 <= depth <= max(n - 2, 0):
        raise ValueError("depth must lie in 0..n-2")
    if check_preconditions:
        if not is_positive_stable(a):
            return TestReport(NOT_STABLE, detail="matrix is not positive stable")
        if not necessary_filter(a):
            return TestReport(FAILED_NECESSARY,
                              detail="matrix is not a P0+-matrix")
    if tree is None:
        tree = build_tree(a)
    if which in ("I", "II"):
        return _run_single_test(a, "F01" if which == "I" else "G01",
                                depth, refine, tree=tree)
    if which != "both":
        raise ValueError("which must be 'I', 'II' or 'both'")
    rep1 = _run_single_test(a, "F01", depth, refine, tree=tree)
    if rep1.verdict == CERTIFIED:
        rep1.test = "both"
        return rep1
    rep2 = _run_single_test(a, "G01", depth, refine, tree=tree)
    rep2.test = "both"
    rep2.nodes = rep1.nodes + rep2.nodes
    return rep2


def step1_sufficient(a: Matrix, tree=None) -> TestReport:
    """Certify via coefficientwise positivity of F(0,1) or G(0,1)."""
    f01, g01 = seed_polys(a, tree=tree)
    for name, poly in (("I", f01), ("II", g01)):
        sign = poly.coeffwise_sign()
        if sign == NONNEG_STRICT:
            rec = NodeRecord("", 0, poly, sign, _STRICT)
            return TestReport(CERTIFIED, test=name, depth=0, nodes=[rec])
    recs = [NodeRecord("", 0, f01, f01.coeffwise_sign(), _UNKNOWN),
            NodeRecord("", 0, g01, g01.coeffwise_sign(), _UNKNOWN)]
    return TestReport(INCONCLUSIVE, test="both", depth=0, nodes=recs)


# ---------------------------------------------------------------------------
# constant-coefficient quadratic primitives (second recursion step)


@dataclass(frozen=True)
class Quadratic:
    """q(d) = a*d^2 + b*d + c with exact rational coefficients."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __call__(self, d: Fraction) -> Fraction:
        return self.a * d * d + self.b * d + self.c

    @property
    def discriminant(self) -> Fraction:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def vertex(self) -> Fraction:
        if self.a == 0:
            raise ValueError("linear polynomial has no vertex")
        return Fraction(-self.b) / (2 * self.a)

    @property
    def vertex_value(self) -> Fraction:
        return Fraction(-self.discriminant) / (4 * self.a)


def make_quadratic(a, b, c) -> Quadratic:
    return Quadratic(Fraction(a), Fraction(b), Fraction(c))


@dataclass(frozen=True)
class IntervalSet:
    """Union of at most two disjoint open intervals; None = +infinity."""

    intervals: tuple[tuple[Fraction, Optional[Fraction]], ...]

    def __post_init__(self):
        if len(self.intervals) > 2:
            raise ValueError("at most two intervals supported")
        for lo, hi in self.intervals:
            if hi is not None and hi <= lo:
                raise ValueError("empty or inverted interval")

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: Fraction) -> bool:
        for lo, hi in self.intervals:
            if x > lo and (hi is None or x < hi):
                return True
        return False

    def __repr__(self):
        if not self.intervals:
            return "IntervalSet(empty)"
        parts = [f"({lo}, {'+inf' if hi is None else hi})"
                 for lo, hi in self.intervals]
        return "IntervalSet(" + " U ".join(parts) + ")"


EMPTY_SET = IntervalSet(())
POSITIVE_AXIS = IntervalSet(((Fraction(0), None),))


def region_S(p00, q01, p11, q10) -> IntervalSet:
    """The admissible region S = (0, inf) intersected with
    {(-d*Q01 + P11) * (d*P00 + Q10) > 0}, for constant inputs.

    Both factors are linear with rational roots, so S is a union of at most
    two open intervals with rational endpoints.
    """
    p00, q01 = Fraction(p00), Fraction(q01)
    p11, q10 = Fraction(p11), Fraction(q10)

    if q01 == 0 and p00 == 0:
        # constant product
        return POSITIVE_AXIS if p11 * q10 > 0 else EMPTY_SET
    if q01 == 0:
        # product = P11 * (P00*d + Q10)
        if p11 == 0:
            return EMPTY_SET
        root = -q10 / p00
        return _halfline(root, positive_above=(p11 * p00 > 0))
    if p00 == 0:
        # product = Q10 * (-Q01*d + P11)
        if q10 == 0:
            return EMPTY_SET
        root = p11 / q01
        return _halfline(root, positive_above=(q10 * q01 < 0))
    r1 = p11 / q01
    r2 = -q10 / p00
    lead = -q01 * p00
    m, big = min(r1, r2), max(r1, r2)
    if lead > 0:
        # positive outside [m, M]
        if m == big:
            if m <= 0:
                return POSITIVE_AXIS
            return IntervalSet(((Fraction(0), m), (m, None)))
        pieces = []
        if m > 0:
            pieces.append((Fraction(0), m))
        pieces.append((max(big, Fraction(0)), None))
        return IntervalSet(tuple(pieces))
    # lead < 0: positive strictly between the roots
    lo = max(m, Fraction(0))
    if m == big or big <= lo:
        return EMPTY_SET
    return IntervalSet(((lo, big),))


def _halfline(root: Fraction, positive_above: bool) -> IntervalSet:
    if positive_above:
        return IntervalSet(((max(root, Fraction(0)), None),))
    if root <= 0:
        return EMPTY_SET
    return IntervalSet(((Fraction(0), root),))


def _cmp_sqrt(disc: Fraction, u: Fraction) -> int:
    """Sign of sqrt(disc) - u for disc >= 0, exactly."""
    if u < 0:
        return 1
    u2 = u * u
    if disc > u2:
        return 1
    if disc < u2:
        return -1
    return 0


def _cmp_root(a: Fraction, b: Fraction, disc: Fraction, sgn: int,
              t: Fraction) -> int:
    """Sign of (-b + sgn*sqrt(disc)) / (2a) - t, exactly (disc >= 0)."""
    u = 2 * a * t + b
    if sgn > 0:
        diff = _cmp_sqrt(disc, u)               # sign(sqrt(disc) - u)
    else:
        # sign(-sqrt(disc) - u) = -sign(sqrt(disc) + u)
        diff = -1 if u > 0 else -_cmp_sqrt(disc, -u)
    return diff if a > 0 else -diff


def _root_in_open(a: Fraction, b: Fraction, sgn: int,
                  lo: Fraction, hi: Optional[Fraction], disc: Fraction) -> bool:
    """Is (-b + sgn*sqrt(disc)) / (2a) inside the open interval (lo, hi)?"""
    if _cmp_root(a, b, disc, sgn, lo) <= 0:
        return False
    return hi is None or _cmp_root(a, b, disc, sgn, hi) < 0


def quadratic_zero_location(q: Quadratic, region: IntervalSet) -> bool:
    """True iff q has no real root inside the open region, exactly.

    Degenerate cases follow the classical analysis: a linear polynomial has
    one rational root; an identically zero polynomial vanishes everywhere,
    so any nonempty region contains a zero.
    """
    if region.is_empty():
        return True
    if q.a == 0:
        if q.b == 0:
            if q.c == 0:
                return False  # identically zero on a nonempty region
            return True
        return not region.contains(Fraction(-q.c) / q.b)
    disc = q.discriminant
    if disc < 0:
        return True
    if disc == 0:
        return not region.contains(q.vertex)
    for lo, hi in region.intervals:
        for sgn in (1, -1):
            if _root_in_open(q.a, q.b, sgn, lo, hi, disc):
                return False
    return True


def step2_nondegenerate(f0001, gterm, f1011, p00, q01, p11, q10) -> bool:
    """No positive solution of the step-2 system, for constant inputs.

    The system couples F(00,01)*d^2 + (G(00,11)-G(10,01))*d + F(10,11) = 0
    with the admissibility inequality defining region S.
    """
    q = make_quadratic(f0001, gterm, f1011)
    return quadratic_zero_location(q, region_S(p00, q01, p11, q10))


def _negative_somewhere_positive(a: Fraction, b: Fraction, c: Fraction) -> bool:
    """Does a*d^2 + b*d + c take a negative value for some d > 0?"""
    if a < 0:
        return True
    if a == 0:
        if b < 0:
            return True
        if b == 0:
            return c < 0
        return c < 0
    vertex = Fraction(-b) / (2 * a)
    if vertex > 0:
        return b * b - 4 * a * c > 0
    return c < 0


def step2_Q0_system(p00, q00, p10, q10, p01, q01, p11, q11) -> bool:
    """True iff the Q_0 = P_1 = 0 branch system has no positive solution.

    The system, in the single unknown d:

        d*P00 + Q10 = 0;  -d*Q01 + P11 = 0;
        (-d*Q00 + P10) * (d*P01 + Q11) < 0.

    Solvability follows the closed-form analysis: when the two linear
    equations pin d down, the unique candidate is
    d = (P11*Q01 - P00*Q10) / (P00^2 + Q01^2).  When both equations vanish
    identically (P00 = Q01 = 0 forces Q10 = P11 = 0), the inequality alone
    decides.
    """
    p00, q00 = Fraction(p00), Fraction(q00)
    p10, q10 = Fraction(p10), Fraction(q10)
    p01, q01 = Fraction(p01), Fraction(q01)
    p11, q11 = Fraction(p11), Fraction(q11)

    if p00 == 0 and q01 == 0:
        if q10 != 0 or p11 != 0:
            return True
        # both equations vanish identically; product must be negative for
        # some positive d
        a = -q00 * p01
        b = p10 * p01 - q00 * q11
        c = p10 * q11
        return not _negative_somewhere_positive(a, b, c)
    if p00 != 0:
        has_solution = (
            p00 * p11 + q10 * q01 == 0
            and p11 * q01 - p00 * q10 > 0
            and (p10 * p00 + q10 * q00) * (p00 * q11 - q10 * p01) < 0
        )
        return not has_solution
    # P00 = 0, Q01 != 0: the first equation forces Q10 = 0
    has_solution = (
        q10 == 0
        and p11 * q01 > 0
        and (p10 * q01 - p11 * q00) * (p11 * p01 + q11 * q01) < 0
    )
    return not has_solution


def degenerate_step2(f00, f01, f10, f11, f0010, f0111, g0010, g0111) -> bool:
    """True iff {F_0 = 0, F_1 = 0} has no common positive solution.

    Inputs are the constant values F_00, F_01, F_10, F_11, F(00,10),
    F(01,11), G(00,10), G(01,11); the quadratics are

        F_0 = F_00*d^2 + 2*G(00,10)*d + F_10,
        F_1 = F_01*d^2 + 2*G(01,11)*d + F_11.

    Relies on the structural identity F_a*F_b = F(a,b)^2 + G(a,b)^2, which
    pins the discriminants to -4*F(a,b)^2: a nondegenerate quadratic is
    solvable only at its vertex, and only when the cross term F(a,b)
    vanishes.
    """
    def solution_set(fa, gab, fb, fab):
        fa, gab = Fraction(fa), Fraction(gab)
        fb, fab = Fraction(fb), Fraction(fab)
        if fa != 0:
            if fab == 0 and gab < 0:
                return ("point", Fraction(-gab) / fa)
            return ("empty", None)
        # degenerate leading coefficient: F_s is the constant F_b
        return ("all", None) if fb == 0 else ("empty", None)

    s0 = solution_set(f00, g0010, f10, f0010)
    s1 = solution_set(f01, g0111, f11, f0111)
    kinds = (s0[0], s1[0])
    if "empty" in kinds:
        return True
    if kinds == ("all", "all"):
        return False
    if s0[0] == "point" and s1[0] == "point":
        return s0[1] != s1[1]
    # one pinned point, the other any positive d
    return False
