"""Exact rational matrix arithmetic for the stability certification pipeline.

Everything here works over arbitrary-precision rationals: determinants and
principal minors (fraction-free Bareiss elimination), Schur complements,
characteristic polynomials (Faddeev-LeVerrier) and a strict Routh-Hurwitz
stability decision.  Indices in the public API are 1-based, matching the
usual linear-algebra convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_MINOR_CAP = 12

P_CLASS = "P"
P0_PLUS_CLASS = "P0_plus"
P0_CLASS = "P0"
NO_P_CLASS = "none"


class MinorCapExceeded(RuntimeError):
    """Raised when a full minor enumeration would exceed the dimension cap."""


class SingularPivot(ZeroDivisionError):
    """Raised when a Schur complement pivot vanishes."""


def _frac(x):
    """Exact rational scalar; integral values are kept as plain ints.

    int and Fraction compare and hash equal, and int arithmetic is far
    cheaper, so integer matrices stay integer all the way through the
    fraction-free elimination below.
    """
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        x = Fraction(x).limit_denominator(10**12)
    elif not isinstance(x, Fraction):
        x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _ratio(x, y) -> Fraction:
    """Exact quotient of two rational scalars (never a float)."""
    return Fraction(x) / y


class Matrix:
    """Dense square matrix of exact rationals."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence]):
        n = len(rows)
        if n < 1:
            raise ValueError("matrix must have dimension >= 1")
        out = []
        for row in rows:
            if len(row) != n:
                raise ValueError("matrix must be square")
            out.append(tuple(_frac(x) for x in row))
        self.n = n
        self.rows = tuple(out)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def diagonal(values: Sequence) -> "Matrix":
        n = len(values)
        return Matrix([[values[i] if i == j else 0 for j in range(n)]
                       for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i - 1][j - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        return Matrix([[sum(self.rows[i][k] * other.rows[k][j] for k in range(n))
                        for j in range(n)] for i in range(n)])

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    def scale(self, c) -> "Matrix":
        c = _frac(c)
        return Matrix([[c * x for x in row] for row in self.rows])

    def permuted(self, perm: Sequence[int]) -> "Matrix":
        """P^T A P for the permutation sending position k to index perm[k] (1-based)."""
        idx = [p - 1 for p in perm]
        return Matrix([[self.rows[i][j] for j in idx] for i in idx])

    def submatrix(self, indices: Iterable[int]) -> "Matrix":
        """Principal submatrix on the given 1-based rows/columns."""
        idx = sorted(set(indices))
        if not idx:
            raise ValueError("empty index set has no submatrix")
        if idx[0] < 1 or idx[-1] > self.n:
            raise ValueError("index out of range")
        idx0 = [i - 1 for i in idx]
        return Matrix([[self.rows[i][j] for j in idx0] for i in idx0])

    def det(self) -> Fraction:
        return _det_bareiss([list(row) for row in self.rows])

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"Matrix([{body}])"


def _det_bareiss(m: list[list]) -> Fraction:
    """Fraction-free Bareiss elimination; exact for rational entries.

    Every interior division is exact, so integer input stays integer
    (floor division coincides with true division there) and rational input
    stays rational.
    """
    n = len(m)
    int_path = all(isinstance(x, int) for row in m for x in row)
    if not int_path:
        # mixed int/Fraction rows would hit float-producing int divisions
        m = [[Fraction(x) for x in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            mik = row_i[k]
            if int_path:
                for j in range(k + 1, n):
                    row_i[j] = (pivot * row_i[j] - mik * row_k[j]) // prev
            else:
                for j in range(k + 1, n):
                    row_i[j] = (pivot * row_i[j] - mik * row_k[j]) / prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def parse_matrix(text: str) -> Matrix:
    """Parse the plain-text matrix format.

    One row per line; entries separated by whitespace or commas; each entry
    an integer, a decimal (parsed exactly, e.g. 17.85 -> 357/20) or a
    fraction ``p/q``.  Blank lines and ``#`` comments are ignored.
    """
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        entries = [tok for tok in line.replace(",", " ").split() if tok]
        try:
            rows.append([Fraction(tok) for tok in entries])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse matrix row {line!r}: {exc}") from exc
    if not rows:
        raise ValueError("no matrix rows found")
    return Matrix(rows)


def load_matrix(path) -> Matrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


# ---------------------------------------------------------------------------
# principal minors


def principal_minor(a: Matrix, alpha: Iterable[int]) -> Fraction:
    """Determinant of the principal submatrix on rows/columns alpha.

    The empty index set yields 1 by convention.
    """
    idx = sorted(set(alpha))
    if not idx:
        return 1
    return a.submatrix(idx).det()


class MinorTable:
    """All 2^n principal minors, keyed by frozen index sets."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: dict[frozenset, Fraction]):
        self.n = n
        self.values = values

    def __getitem__(self, alpha) -> Fraction:
        return self.values[frozenset(alpha)]

    def __len__(self):
        return len(self.values)

    def items(self):
        return self.values.items()

    def order_sums(self) -> list[Fraction]:
        """Sum of all principal minors of order k, for k = 1..n."""
        sums = [0] * self.n
        for alpha, val in self.values.items():
            if alpha:
                sums[len(alpha) - 1] += val
        return sums


def all_principal_minors(a: Matrix, cap: int = DEFAULT_MINOR_CAP) -> MinorTable:
    if a.n > cap:
        raise MinorCapExceeded(
            f"minor enumeration needs 2^{a.n} determinants; cap is n <= {cap}")
    values = {frozenset(): 1}
    for k in range(1, a.n + 1):
        for combo in itertools.combinations(range(1, a.n + 1), k):
            values[frozenset(combo)] = principal_minor(a, combo)
    return MinorTable(a.n, values)


# ---------------------------------------------------------------------------
# deletion / Schur complement


def delete_index(a: Matrix, i: int) -> Matrix:
    """Remove row and column i (1-based)."""
    if a.n == 1:
        raise ValueError("cannot delete from a 1x1 matrix")
    if not 1 <= i <= a.n:
        raise ValueError("index out of range")
    keep = [k for k in range(1, a.n + 1) if k != i]
    return a.submatrix(keep)


def schur_complement(a: Matrix) -> Matrix:
    """Schur complement of the last diagonal entry a_nn."""
    n = a.n
    pivot = a.rows[n - 1][n - 1]
    if pivot == 0:
        raise SingularPivot("a_nn = 0: Schur complement undefined")
    if n == 1:
        raise ValueError("Schur complement needs n >= 2")
    return Matrix([[a.rows[i][j] - _ratio(a.rows[i][n - 1] * a.rows[n - 1][j],
                                          pivot)
                    for j in range(n - 1)] for i in range(n - 1)])


# ---------------------------------------------------------------------------
# characteristic polynomial and stability


@dataclass(frozen=True)
class CharPoly:
    """Coefficients c_0..c_n of det(A - lambda*I)."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x) -> Fraction:
        x = _frac(x)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * x + c
        return total


def char_poly(a: Matrix) -> CharPoly:
    """Exact characteristic polynomial via Faddeev-LeVerrier."""
    n = a.n
    # p(lambda) = det(lambda*I - A) = lambda^n + b_{n-1} lambda^{n-1} + ... + b_0
    b = [0] * n
    m = Matrix.identity(n)
    for k in range(1, n + 1):
        am = a @ m
        trace = sum(am.rows[i][i] for i in range(n))
        bk = _frac(_ratio(-trace, k))
        b[n - k] = bk
        if k < n:
            m = Matrix([[am.rows[i][j] + (bk if i == j else 0)
                         for j in range(n)] for i in range(n)])
    # det(A - lambda I) = (-1)^n p(lambda)
    sign = (-1) ** n
    coeffs = [sign * b[k] for k in range(n)] + [sign]
    return CharPoly(tuple(coeffs))


def hurwitz_determinants(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Leading principal minors of the Hurwitz matrix of a_n x^n + ... + a_0.

    ``coeffs`` are given lowest-degree first; the leading coefficient must be
    positive.
    """
    n = len(coeffs) - 1
    a = list(coeffs)

    def at(k: int) -> Fraction:
        return a[k] if 0 <= k <= n else 0

    h = [[at(n - 2 * j + i) for j in range(1, n + 1)] for i in range(1, n + 1)]
    dets = []
    for k in range(1, n + 1):
        dets.append(_det_bareiss([row[:k] for row in h[:k]]))
    return dets


def is_positive_stable(a: Matrix) -> bool:
    """True iff every eigenvalue of A has strictly positive real part.

    Decided exactly: A is positive stable iff -A is Hurwitz stable, which is
    checked with strict Routh-Hurwitz inequalities on the characteristic
    polynomial.  Boundary cases (a vanishing Hurwitz determinant) count as
    not stable.
    """
    n = a.n
    cp = char_poly(a)
    # det(-A - lambda I) = (-1)^n * det(A + lambda I); det(A + lambda I) has
    # coefficients c_k * (-1)^k from det(A - lambda I).
    coeffs = [cp.coeffs[k] * (-1) ** (n + k) for k in range(n + 1)]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    # A Hurwitz-stable polynomial has all coefficients positive; cheap filter.
    if any(c <= 0 for c in coeffs):
        return False
    return all(d > 0 for d in hurwitz_determinants(coeffs))


# ---------------------------------------------------------------------------
# P-matrix classes and the necessary-condition filter


def classify_P(a: Matrix, minors: MinorTable | None = None,
               cap: int = DEFAULT_MINOR_CAP) -> str:
    """Strongest applicable class among P, P0_plus, P0, none."""
    if minors is None:
        minors = all_principal_minors(a, cap=cap)
    vals = [v for alpha, v in minors.items() if alpha]
    if any(v < 0 for v in vals):
        return NO_P_CLASS
    if all(v > 0 for v in vals):
        return P_CLASS
    if all(s > 0 for s in minors.order_sums()):
        return P0_PLUS_CLASS
    return P0_CLASS


def necessary_filter(a: Matrix, minors: MinorTable | None = None,
                     cap: int = DEFAULT_MINOR_CAP) -> bool:
    """Necessary condition for D-stability of a stable matrix.

    A positive D-stable matrix must be a P0+-matrix; returning False is a
    certificate of non-D-stability.
    """
    return classify_P(a, minors=minors, cap=cap) in (P_CLASS, P0_PLUS_CLASS)


# ---------------------------------------------------------------------------
# exact complex-rational determinant (used by the Johnson functional and as
# an independent oracle for the recursion)


def det_complex(a: Matrix, diag: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Exact (Re, Im) of det(A + i*diag(d)) by Gaussian elimination over Q(i)."""
    n = a.n
    if len(diag) != n:
        raise ValueError("diagonal length mismatch")
    m = [[(Fraction(a.rows[i][j]),
           Fraction(diag[i]) if i == j else Fraction(0))
          for j in range(n)] for i in range(n)]
    re_det, im_det = Fraction(1), Fraction(0)
    sign = 1
    for k in range(n):
        pivot_row = None
        for r in range(k, n):
            if m[r][k] != (Fraction(0), Fraction(0)):
                pivot_row = r
                break
        if pivot_row is None:
            return Fraction(0), Fraction(0)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        pr, pi = m[k][k]
        norm = pr * pr + pi * pi
        re_det, im_det = re_det * pr - im_det * pi, re_det * pi + im_det * pr
        for r in range(k + 1, n):
            xr, xi = m[r][k]
            if xr == 0 and xi == 0:
                continue
            # factor = m[r][k] / pivot
            fr = (xr * pr + xi * pi) / norm
            fi = (xi * pr - xr * pi) / norm
            for c in range(k, n):
                yr, yi = m[k][c]
                zr, zi = m[r][c]
                m[r][c] = (zr - (fr * yr - fi * yi), zi - (fr * yi + fi * yr))
    if sign < 0:
        re_det, im_det = -re_det, -im_det
    return re_det, im_det
