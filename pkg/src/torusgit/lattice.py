"""Exact integer and rational linear algebra.

Everything downstream (semistability tests, wall arrangements, blow-up
loci) reduces to a handful of primitives implemented here:

* Smith normal form over the integers, with the unimodular transforms,
  and the integer kernel / rank computations derived from it;
* feasibility of homogeneous systems of linear inequalities over the
  rationals, decided by Fourier-Motzkin elimination (mixed strict and
  non-strict inequalities are supported);
* extraction of a nonzero integer point from a rational polyhedral cone,
  by enumerating candidate minimal faces;
* bounded enumeration of the minimal generators of the monoid of
  non-negative integer solutions of ``W a = 0`` (invariant monomials).

No floating point is used anywhere: coordinates are Python integers and
``fractions.Fraction``.  The predicates here are wall-sensitive, so an
approximate answer would be worse than useless.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, InternalError


def _as_int_tuple(entries: Iterable[int]) -> tuple[int, ...]:
    return tuple(int(e) for e in entries)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major.

    Entries are arbitrary-precision Python ints.  The class is small on
    purpose: anything clever lives in module functions.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise InputError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise InputError("entry count does not match rows x cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(_as_int_tuple(r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else tuple(() for _ in range(self.cols)))

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InputError("matrix shapes do not compose")
        ot = other.transpose()
        data = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in ot.entries)
            for r in self.entries
        )
        return IntMatrix(self.rows, other.cols, data)

    def mul_vec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise InputError("vector length does not match matrix columns")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def submatrix_cols(self, cols: Sequence[int]) -> "IntMatrix":
        data = tuple(tuple(r[j] for j in cols) for r in self.entries)
        return IntMatrix(self.rows, len(cols), data)


def dot(u: Sequence[int], v: Sequence[int]):
    if len(u) != len(v):
        raise InputError("dot product of vectors of different lengths")
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (0 stays 0)."""
    g = 0
    for e in v:
        g = math.gcd(g, e)
    if g <= 1:
        return _as_int_tuple(v)
    return tuple(e // g for e in v)


def scale_to_integers(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Clear denominators and return the primitive integer vector."""
    lcm = 1
    for e in v:
        lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
    return primitive(tuple(int(e * lcm) for e in v))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = diag(d_1, ..., d_k) with d_1 | d_2 | ... and U, V unimodular."""

    diag: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms, by integer row/column reduction."""
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    n = min(r, c)
    for t in range(n):
        while True:
            # locate a pivot of minimal absolute value in the working block
            pivot = None
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    e = a[i][j]
                    if e != 0 and (best is None or abs(e) < best):
                        best = abs(e)
                        pivot = (i, j)
            if pivot is None:
                break
            pi, pj = pivot
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            dirty = False
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            # pivot clears its row and column; enforce divisibility downstream
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if t < n and a[t][t] < 0:
            negate_row(t)

    diag = tuple(a[i][i] for i in range(n))
    left = IntMatrix.from_rows(u, r)
    right = IntMatrix.from_rows(v, c)
    # reconstruction identity, cheap enough to always assert
    if left.mul(m).mul(right).entries != tuple(
        tuple(diag[i] if i == j and i < n else 0 for j in range(c)) for i in range(r)
    ):
        raise InternalError("Smith normal form reconstruction failed")
    for i in range(n - 1):
        if diag[i] == 0 and diag[i + 1] != 0:
            raise InternalError("zero before nonzero in Smith diagonal")
        if diag[i] != 0 and diag[i + 1] % diag[i] != 0:
            raise InternalError("divisibility chain violated in Smith diagonal")
    return SmithDecomposition(diag, left, right)


def rank(m: IntMatrix) -> int:
    return smith_normal_form(m).rank


def kernel_basis(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the saturated integer kernel {x : M x = 0} (columns of V)."""
    snf = smith_normal_form(m)
    n = min(m.rows, m.cols)
    out = []
    for j in range(m.cols):
        if j >= n or snf.diag[j] == 0:
            out.append(snf.right.col(j))
    return out


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix, again an integer matrix."""
    n = m.rows
    if n != m.cols:
        raise InputError("only square matrices can be inverted")
    aug = [[Fraction(e) for e in row] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(m.entries)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise InputError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    data = []
    for row in aug:
        ints = []
        for x in row[n:]:
            if x.denominator != 1:
                raise InputError("matrix is not unimodular")
            ints.append(int(x))
        data.append(ints)
    return IntMatrix.from_rows(data, n)


def det(m: IntMatrix) -> int:
    """Exact determinant (fraction-free Gaussian elimination would also do;
    Fractions are fine at the sizes used here)."""
    n = m.rows
    if n != m.cols:
        raise InputError("determinant of a non-square matrix")
    a = [[Fraction(e) for e in row] for row in m.entries]
    sign = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        for i in range(col + 1, n):
            if a[i][col] != 0:
                f = a[i][col] / a[col][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    prod = Fraction(sign)
    for i in range(n):
        prod *= a[i][i]
    if prod.denominator != 1:
        raise InternalError("integer determinant came out fractional")
    return int(prod)


def solve_rational(gram: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a nonsingular rational linear system exactly."""
    n = len(gram)
    a = [row[:] + [rhs[i]] for i, row in enumerate(gram)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise InputError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Rational polyhedral cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalCone:
    """{lambda : <lambda, n_k> >= 0 for every normal n_k}.

    Inequalities may be redundant; the cone always contains 0.
    """

    ambient_dim: int
    inequalities: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for n in self.inequalities:
            if len(n) != self.ambient_dim:
                raise InputError("inequality normal has wrong length")


STRICT = "strict"
NONNEG = "nonneg"

_Row = tuple[tuple[int, ...], bool]  # (coefficients, is_strict)


def _normalize_row(coeffs: Sequence[int], strict: bool) -> _Row:
    return primitive(coeffs), strict


def feasible_system(rows: list[_Row], dim: int) -> bool:
    """Is there a rational point with <coeffs, x> >= 0 (resp. > 0) for all rows?

    Homogeneous Fourier-Motzkin elimination; exact over the rationals and
    valid for mixed strict/non-strict systems.
    """
    work: dict[tuple[int, ...], bool] = {}
    for coeffs, strict in rows:
        coeffs = primitive(coeffs)
        if all(e == 0 for e in coeffs):
            if strict:
                return False
            continue
        work[coeffs] = work.get(coeffs, False) or strict

    remaining = list(range(dim))
    while remaining:
        # eliminate the variable producing the fewest pairings
        def cost(k: int) -> tuple[int, int]:
            pos = sum(1 for c in work if c[k] > 0)
            neg = sum(1 for c in work if c[k] < 0)
            return (pos * neg, k)

        var = min(remaining, key=cost)
        remaining.remove(var)
        pos = [(c, s) for c, s in work.items() if c[var] > 0]
        neg = [(c, s) for c, s in work.items() if c[var] < 0]
        zero = [(c, s) for c, s in work.items() if c[var] == 0]
        work = {}
        for c, s in zero:
            work[c] = work.get(c, False) or s
        for (p, ps), (q, qs) in itertools.product(pos, neg):
            comb = tuple(p[var] * q[i] - q[var] * p[i] for i in range(dim))
            comb = primitive(comb)
            strict = ps or qs
            if all(e == 0 for e in comb):
                if strict:
                    return False
                continue
            work[comb] = work.get(comb, False) or strict
    return True


def cone_has_point_with(
    cone: RationalCone,
    objective: Sequence[int],
    strictness: str,
    exclude_zero: bool = False,
) -> bool:
    """Does the cone contain a rational point pairing with the objective as asked?

    ``strictness`` is ``STRICT`` (<lambda, objective> > 0) or ``NONNEG``
    (>= 0); with ``exclude_zero`` the point must be nonzero.  Decisions are
    exact (Fourier-Motzkin, resp. minimal-face enumeration).
    """
    if len(objective) != cone.ambient_dim:
        raise InputError("objective length does not match the cone dimension")
    obj = _as_int_tuple(objective)
    base = [(n, False) for n in cone.inequalities]
    if strictness == STRICT:
        # a strict inequality already excludes lambda = 0
        return feasible_system(base + [(obj, True)], cone.ambient_dim)
    if strictness != NONNEG:
        raise InputError(f"unknown strictness {strictness!r}")
    if not exclude_zero:
        return True  # lambda = 0 always qualifies
    return cone_nonzero_point(cone.inequalities + (obj,), cone.ambient_dim) is not None


def cone_nonzero_point(
    ineqs: Sequence[Sequence[int]],
    dim: int,
    eqs: Sequence[Sequence[int]] = (),
) -> tuple[int, ...] | None:
    """A nonzero integer point of {x : eqs x = 0, <m, x> >= 0 for m in ineqs}.

    Every nonzero polyhedral cone contains either a nonzero point of its
    lineality space or an extreme ray, and the extreme rays of a pointed
    cone span the 1-dimensional kernels of subsets of the active normals.
    Enumerating those subsets is complete at the ambient dimensions used
    in this package (<= 8 or so).
    """
    if dim == 0:
        return None
    if eqs:
        basis = kernel_basis(IntMatrix.from_rows([list(e) for e in eqs], dim))
        if not basis:
            return None
        bmat = IntMatrix.from_rows([list(b) for b in basis]).transpose()  # dim x k
        sub = [bmat.transpose().mul_vec(list(m)) for m in ineqs]  # <m, B y> = <B^T m, y>
        pt = cone_nonzero_point(sub, len(basis))
        if pt is None:
            return None
        return primitive(bmat.mul_vec(pt))

    normals = [primitive(m) for m in ineqs]
    normals = [m for m in normals if any(e != 0 for e in m)]
    if not normals:
        return tuple(1 if i == 0 else 0 for i in range(dim))

    def in_cone(x: Sequence[int]) -> bool:
        return all(dot(x, m) >= 0 for m in normals)

    # lineality space first
    lin = kernel_basis(IntMatrix.from_rows([list(m) for m in normals], dim))
    if lin:
        return primitive(lin[0])
    seen: set[tuple[int, ...]] = set()
    for size in range(dim):
        for subset in itertools.combinations(range(len(normals)), size):
            mat = IntMatrix.from_rows([list(normals[i]) for i in subset], dim)
            basis = kernel_basis(mat)
            if len(basis) != 1:
                continue
            v = primitive(basis[0])
            if v in seen:
                continue
            seen.add(v)
            if in_cone(v):
                return v
            w = tuple(-e for e in v)
            if in_cone(w):
                return w
    return None


# ---------------------------------------------------------------------------
# Bounded Hilbert basis
# ---------------------------------------------------------------------------


def _iter_exponents_exact(n_vars: int, total: int):
    if n_vars == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _iter_exponents_exact(n_vars - 1, total - head):
            yield (head,) + tail


def monomials_up_to_degree(n_vars: int, bound: int) -> list[tuple[int, ...]]:
    if n_vars == 0:
        return [()]
    out = []
    for total in range(bound + 1):
        out.extend(_iter_exponents_exact(n_vars, total))
    return out


def hilbert_basis_bounded(weights: IntMatrix, degree_bound: int) -> list[tuple[int, ...]]:
    """Minimal generators of {a in N^N : W a = 0} of total degree <= bound.

    Exhaustive enumeration with minimality pruning: a solution is kept iff
    it does not dominate another nonzero solution coordinatewise.
    """
    if degree_bound < 1:
        raise InputError("degree_bound must be >= 1")
    n = weights.cols
    zero = tuple(0 for _ in range(weights.rows))
    sols = [a for a in monomials_up_to_degree(n, degree_bound)
            if any(e != 0 for e in a) and weights.mul_vec(a) == zero]
    minimal = []
    for a in sols:
        if not any(b != a and all(x <= y for x, y in zip(b, a)) for b in sols):
            minimal.append(a)
    return minimal
