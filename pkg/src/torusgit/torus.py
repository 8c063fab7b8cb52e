"""Diagonal torus actions and Hilbert-Mumford (semi)stability.

A rank-r torus acts diagonally on A^N through an integer weight matrix W
whose j-th column is the character scaling the coordinate x_j.  The orbit
data of a point depends only on its *support* (the set of nonzero
coordinates), so every predicate here is a function of supports: the
one-parameter subgroups admitting a limit at a point of support s form
the rational cone {lambda : <lambda, chi_j> >= 0 for j in s}.

Sign convention, pinned once and validated by the wall/chamber test
suite: the Hilbert-Mumford pairing is mu^chi(lambda) = -<lambda, chi>,
and a support is semistable for chi iff no lambda in its limit cone has
<lambda, chi> > 0.  Equivalently, semistable iff mu^chi >= 0 on the
limit cone.  Do not "fix" apparent sign mismatches locally; rerun the
chamber suite instead.

Normalized Hilbert-Mumford minima are irrational in general (they are
square roots of rationals), so they are carried around exactly as
``SignedSquare`` values: a sign together with the square of the value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, InternalError
from .lattice import (
    NONNEG,
    STRICT,
    feasible_system,
    IntMatrix,
    RationalCone,
    cone_has_point_with,
    cone_nonzero_point,
    det,
    dot,
    kernel_basis,
    primitive,
    scale_to_integers,
    smith_normal_form,
    solve_rational,
    unimodular_inverse,
)

Support = frozenset  # subset of coordinate indices, 0-based
Character = tuple  # integer vector of length rank
Cocharacter = tuple


def support(indices: Iterable[int]) -> Support:
    return frozenset(int(i) for i in indices)


def support_key(s: Support) -> tuple[int, tuple[int, ...]]:
    """Deterministic sort key for supports: by size, then lexicographic."""
    t = tuple(sorted(s))
    return (len(t), t)


@dataclass(frozen=True)
class FinitePartElement:
    """A permutation of the coordinates together with the compatible
    unimodular automorphism of the character lattice: aut * chi_j = chi_{perm(j)}."""

    perm: tuple[int, ...]  # perm[j] = image of coordinate j, 0-based
    aut: IntMatrix

    def apply_support(self, s: Support) -> Support:
        return frozenset(self.perm[j] for j in s)


@dataclass(frozen=True)
class TorusAction:
    """Diagonal action of G_m^rank on A^dim, with an optional finite
    permutation part and a norm form on the cocharacter lattice."""

    rank: int
    weights: IntMatrix  # rank x dim, column j = character of x_j
    norm_form: IntMatrix = None  # type: ignore[assignment]
    finite_part: tuple[FinitePartElement, ...] = ()

    def __post_init__(self) -> None:
        if self.weights.rows != self.rank:
            raise InputError("weight matrix must have `rank` rows")
        q = self.norm_form
        if q is None:
            object.__setattr__(self, "norm_form", IntMatrix.identity(self.rank))
            q = self.norm_form
        if q.rows != self.rank or q.cols != self.rank:
            raise InputError("norm form must be rank x rank")
        if not q.is_symmetric():
            raise InputError("norm form must be symmetric")
        for k in range(1, self.rank + 1):
            minor = IntMatrix.from_rows([q.row(i)[:k] for i in range(k)], k)
            if det(minor) <= 0:
                raise InputError("norm form must be positive definite")
        n = self.dim
        for el in self.finite_part:
            if sorted(el.perm) != list(range(n)):
                raise InputError("finite part permutation is not a permutation of the coordinates")
            if el.aut.rows != self.rank or el.aut.cols != self.rank:
                raise InputError("finite part automorphism has wrong size")
            if abs(det(el.aut)) != 1:
                raise InputError("finite part automorphism must be unimodular")
            for j in range(n):
                if el.aut.mul_vec(self.weights.col(j)) != self.weights.col(el.perm[j]):
                    raise InputError("finite part automorphism incompatible with the weights")
            if el.aut.transpose().mul(q).mul(el.aut).entries != q.entries:
                raise InputError("finite part automorphism does not preserve the norm form")

    @property
    def dim(self) -> int:
        return self.weights.cols

    def character(self, j: int) -> Character:
        return self.weights.col(j)

    def check_support(self, s: Support) -> None:
        if any(j < 0 or j >= self.dim for j in s):
            raise InputError(f"support {sorted(s)} not contained in 0..{self.dim - 1}")

    def all_supports(self) -> list[Support]:
        idx = range(self.dim)
        out = [frozenset(c) for size in range(self.dim + 1)
               for c in itertools.combinations(idx, size)]
        return out

    def check_invariant_character(self, chi: Sequence[int]) -> tuple[int, ...]:
        chi = tuple(int(e) for e in chi)
        if len(chi) != self.rank:
            raise InputError("character length does not match the torus rank")
        for el in self.finite_part:
            if el.aut.mul_vec(chi) != chi:
                raise InputError("character is not invariant under the finite part")
        return chi

    def finite_group_elements(self) -> list[FinitePartElement]:
        """The group generated by the finite part, via closure under composition."""
        ident = FinitePartElement(tuple(range(self.dim)), IntMatrix.identity(self.rank))
        seen = {(ident.perm, ident.aut.entries): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for h in self.finite_part:
                    perm = tuple(h.perm[g.perm[j]] for j in range(self.dim))
                    aut = h.aut.mul(g.aut)
                    key = (perm, aut.entries)
                    if key not in seen:
                        el = FinitePartElement(perm, aut)
                        seen[key] = el
                        nxt.append(el)
            frontier = nxt
        return list(seen.values())


@dataclass(frozen=True)
class DiagonalizableGroup:
    """A stabilizer: torus of `dimension`, component group +(Z/d_i), and the
    order of the finite permutation part preserving the support."""

    dimension: int
    invariant_factors: tuple[int, ...]
    finite_part_order: int = 1

    @property
    def torus_component_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_finite(self) -> bool:
        return self.dimension == 0


# ---------------------------------------------------------------------------
# Limit cones and the basic predicates
# ---------------------------------------------------------------------------


def limit_cone(action: TorusAction, s: Support) -> RationalCone:
    """Cocharacters lambda with a limit at a point of support s:
    {lambda : <lambda, chi_j> >= 0 for all j in s}."""
    action.check_support(s)
    return RationalCone(action.rank, tuple(action.character(j) for j in sorted(s)))


def hm_pairing(action: TorusAction, chi: Sequence[int], lam: Sequence[int]) -> int:
    """mu^chi(lambda) = -<lambda, chi>."""
    if len(chi) != action.rank or len(lam) != action.rank:
        raise InputError("character/cocharacter length does not match the rank")
    return -dot(lam, chi)


def is_semistable(action: TorusAction, chi: Sequence[int], s: Support) -> bool:
    """No destabilizing one-parameter subgroup: no lambda in the limit cone
    with <lambda, chi> > 0."""
    chi = action.check_invariant_character(chi)
    return not cone_has_point_with(limit_cone(action, s), chi, STRICT)


def is_stable(action: TorusAction, chi: Sequence[int], s: Support) -> bool:
    """Every nonzero lambda in the limit cone has <lambda, chi> < 0."""
    chi = action.check_invariant_character(chi)
    return not cone_has_point_with(limit_cone(action, s), chi, NONNEG, exclude_zero=True)


def semistable_supports(action: TorusAction, chi: Sequence[int]) -> list[Support]:
    return sorted((s for s in action.all_supports() if is_semistable(action, chi, s)),
                  key=support_key)


# ---------------------------------------------------------------------------
# Exact normalized Hilbert-Mumford minima
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class SignedSquare:
    """The exact value sign * sqrt(square), with square a non-negative rational."""

    sign: int
    square: Fraction

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise InputError("sign must be -1, 0 or 1")
        if self.square < 0 or (self.sign == 0) != (self.square == 0):
            raise InputError("inconsistent signed square")

    @staticmethod
    def zero() -> "SignedSquare":
        return SignedSquare(0, Fraction(0))

    def neg(self) -> "SignedSquare":
        return SignedSquare(-self.sign, self.square)

    def scaled(self, k: int) -> "SignedSquare":
        """The value k * self for a positive integer k."""
        if k <= 0:
            raise InputError("scaling factor must be positive")
        return SignedSquare(self.sign, self.square * k * k)

    def __lt__(self, other: "SignedSquare") -> bool:
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign >= 0:
            return self.square < other.square
        return self.square > other.square

    def __le__(self, other: "SignedSquare") -> bool:
        return self == other or self < other


@dataclass(frozen=True)
class HmMinimum:
    value: SignedSquare
    minimizer: tuple[int, ...]


def _q_norm_sq(action: TorusAction, v: Sequence[int]) -> int:
    return dot(v, action.norm_form.mul_vec(v))


def normalized_hm_min(action: TorusAction, chi: Sequence[int], s: Support) -> HmMinimum | None:
    """Minimum of mu^chi(lambda)/|lambda|_Q over nonzero lambda in the limit cone.

    Returns None when the cone is {0} (no-destabilizer signal).  The
    minimization enumerates the faces of the cone: on the span of each
    face the critical directions of the linear functional restricted to
    the Q-unit sphere are the (exactly computable) Riesz vector of chi
    and its negative, and the minimum over the cone is attained at a
    feasible critical direction of the minimal face containing it.
    """
    chi = tuple(int(e) for e in chi)
    if len(chi) != action.rank:
        raise InputError("character length does not match the rank")
    action.check_support(s)
    cols = {j: action.character(j) for j in sorted(s)}
    cone_rows = [cols[j] for j in sorted(s)]

    def in_cone(v: Sequence[int]) -> bool:
        return all(dot(v, row) >= 0 for row in cone_rows)

    best: tuple[SignedSquare, tuple[int, ...]] | None = None

    def consider(value: SignedSquare, witness: tuple[int, ...]) -> None:
        nonlocal best
        witness = primitive(witness)
        if best is None or value < best[0] or (value == best[0] and witness < best[1]):
            best = (value, witness)

    for active in _subsets(sorted(s)):
        if active:
            mat = IntMatrix.from_rows([list(cols[j]) for j in active], action.rank)
            basis = kernel_basis(mat)
        else:
            basis = [tuple(1 if i == k else 0 for i in range(action.rank))
                     for k in range(action.rank)]
        k = len(basis)
        if k == 0:
            continue
        bmat = IntMatrix.from_rows([list(b) for b in basis]).transpose()  # rank x k
        c = bmat.transpose().mul_vec(chi)
        if all(e == 0 for e in c):
            witness = cone_nonzero_point(cone_rows, action.rank,
                                         eqs=[cols[j] for j in active])
            if witness is not None:
                consider(SignedSquare.zero(), witness)
            continue
        gram = [[Fraction(dot(basis[i], action.norm_form.mul_vec(basis[j])))
                 for j in range(k)] for i in range(k)]
        y = solve_rational(gram, [Fraction(e) for e in c])
        v2 = Fraction(0)
        for ci, yi in zip(c, y):
            v2 += ci * yi
        if v2 <= 0:
            raise InternalError("Riesz norm of a nonzero restricted character must be positive")
        lam = scale_to_integers(tuple(
            sum(Fraction(bmat.entries[i][j]) * y[j] for j in range(k))
            for i in range(action.rank)))
        if in_cone(lam):
            consider(SignedSquare(-1, v2), lam)
        neg = tuple(-e for e in lam)
        if in_cone(neg):
            consider(SignedSquare(1, v2), neg)

    if best is None:
        return None
    return HmMinimum(best[0], best[1])


def _subsets(items: Sequence[int]):
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def in_orbit_changing_locus(action: TorusAction, s: Support) -> bool:
    """Whether some limit actually changes the orbit: exists lambda in the
    limit cone with <lambda, chi_j> > 0 for some j in s."""
    cone = limit_cone(action, s)
    return any(cone_has_point_with(cone, action.character(j), STRICT) for j in sorted(s))


def minimal_hm_values(action: TorusAction, chi: Sequence[int]) -> frozenset[SignedSquare]:
    """The finite set of normalized minima over all supports whose points
    admit an orbit-changing limit."""
    chi = tuple(int(e) for e in chi)
    values = set()
    for s in action.all_supports():
        if not in_orbit_changing_locus(action, s):
            continue
        res = normalized_hm_min(action, chi, s)
        if res is None:
            raise InternalError("orbit-changing support with trivial limit cone")
        values.add(res.value)
    return frozenset(values)


# ---------------------------------------------------------------------------
# Combining linearizations: the m0 bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CombinedLinearization:
    m0: int
    combined: tuple[int, ...]
    d: SignedSquare | None  # None when chi_L has no unstable support
    e: SignedSquare | None


def combine_linearizations(
    action: TorusAction, chi_l: Sequence[int], chi_m: Sequence[int]
) -> CombinedLinearization:
    """Smallest m0 > 0 with m0*d + e < 0 and the character m0*chi_l + chi_m.

    d is the largest normalized HM minimum of chi_l over the chi_l-unstable
    supports, e the largest normalized supremum of mu^{chi_m} over the same
    supports (computed as the negated minimum for -chi_m).  The maxima run
    over *all* unstable supports, not only those admitting orbit-changing
    limits: destabilizers within the stabilizer still rule out semistability
    for every large m, and restricting to orbit-changing supports makes the
    two-step property fail on degenerate weight matrices.
    """
    chi_l = action.check_invariant_character(chi_l)
    chi_m = action.check_invariant_character(chi_m)
    unstable = [s for s in action.all_supports() if not is_semistable(action, chi_l, s)]
    if not unstable:
        combined = tuple(a + b for a, b in zip(chi_l, chi_m))
        return CombinedLinearization(1, combined, None, None)

    d: SignedSquare | None = None
    e: SignedSquare | None = None
    for s in unstable:
        res_l = normalized_hm_min(action, chi_l, s)
        if res_l is None:
            raise InternalError("unstable support with trivial limit cone")
        if res_l.value.sign >= 0:
            raise InternalError("normalized minimum is non-negative on an unstable support")
        res_m = normalized_hm_min(action, tuple(-x for x in chi_m), s)
        if res_m is None:
            raise InternalError("unstable support with trivial limit cone")
        sup_m = res_m.value.neg()
        d = res_l.value if d is None or d < res_l.value else d
        e = sup_m if e is None or e < sup_m else e

    assert d is not None and e is not None
    if e.sign <= 0:
        m0 = 1
    else:
        # least m > 0 with m*d + e < 0, i.e. m^2 * d.square > e.square
        ratio = e.square / d.square
        m0 = math.isqrt(ratio.numerator // ratio.denominator)
        while Fraction(m0 * m0) * d.square <= e.square:
            m0 += 1
    combined = tuple(m0 * a + b for a, b in zip(chi_l, chi_m))
    return CombinedLinearization(m0, combined, d, e)


def two_step_semistable(
    action: TorusAction, chi_l: Sequence[int], chi_m: Sequence[int], s: Support
) -> bool:
    """Membership in the two-step locus: semistable for chi_l, and every
    lambda in the limit cone with <lambda, chi_l> = 0 has <lambda, chi_m> <= 0.

    This is the support-level shadow of taking the chi_m-semistable locus
    relative to the good moduli space of the chi_l-semistable locus; it is
    the brute-force oracle against which the m0 bound is validated.
    """
    if not is_semistable(action, chi_l, s):
        return False
    cone = limit_cone(action, s)
    rows = [(n, False) for n in cone.inequalities]
    rows += [(tuple(chi_l), False), (tuple(-x for x in chi_l), False)]
    rows += [(tuple(chi_m), True)]
    return not feasible_system(rows, action.rank)


# ---------------------------------------------------------------------------
# Stabilizers and effectivization
# ---------------------------------------------------------------------------


def stabilizer(action: TorusAction, s: Support) -> DiagonalizableGroup:
    """Stabilizer of a point with support s, as Hom(X(T)/Lambda_s, G_m)
    where Lambda_s is generated by the support characters, plus the order
    of the finite-part subgroup fixing the support setwise."""
    action.check_support(s)
    cols = sorted(s)
    if cols:
        mat = action.weights.submatrix_cols(cols)
        snf = smith_normal_form(mat)
        dim = action.rank - snf.rank
        factors = tuple(d for d in snf.diag if d > 1)
    else:
        dim = action.rank
        factors = ()
    order = sum(1 for g in action.finite_group_elements() if g.apply_support(s) == s)
    return DiagonalizableGroup(dim, factors, max(order, 1))


@dataclass(frozen=True)
class Effectivization:
    action: TorusAction
    quotiented_cocharacters: tuple[tuple[int, ...], ...]  # basis of the killed subtorus


def effectivize(action: TorusAction) -> Effectivization:
    """Re-express the action through the quotient by the kernel subtorus.

    The new weight matrix is U[:k] W for the Smith transform U of W, where
    k = rank(W); characters of the quotient torus are the saturation of the
    column span of W, and the returned action has the same semistability
    data support by support.
    """
    w = action.weights
    snf = smith_normal_form(w)
    k = snf.rank
    killed = kernel_basis(w.transpose())
    if k == action.rank:
        return Effectivization(action, tuple())
    u_top = IntMatrix.from_rows([snf.left.row(i) for i in range(k)], action.rank)
    new_w = u_top.mul(w)
    u_inv = unimodular_inverse(snf.left)
    basis = IntMatrix.from_rows([[u_inv.entries[i][j] for j in range(k)]
                                 for i in range(action.rank)], k)  # rank x k
    new_q = basis.transpose().mul(action.norm_form).mul(basis)
    new_fp = tuple(
        FinitePartElement(el.perm, u_top.mul(el.aut).mul(basis))
        for el in action.finite_part
    )
    eff = TorusAction(k, new_w, new_q, new_fp)
    return Effectivization(eff, tuple(primitive(b) for b in killed))


# ---------------------------------------------------------------------------
# Projective-to-affine-cone reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeReduction:
    action: TorusAction  # rank + 1, same coordinates; the cone G_m scales all of A^N
    character: tuple[int, ...]  # (twist, -d)


def cone_over_projective(
    action: TorusAction, linearization_twist: Sequence[int], d: int
) -> ConeReduction:
    """Affine-cone form of a linear action on P^{N-1} linearized by O(d)
    twisted by a character: adds a G_m scaling every coordinate with weight
    1 and the distinguished character (twist, -d).  Semistability of a
    projective point equals affine semistability of any cone representative."""
    if d <= 0:
        raise InputError("the linearization degree d must be positive")
    twist = tuple(int(e) for e in linearization_twist)
    if len(twist) != action.rank:
        raise InputError("twist length does not match the rank")
    rows = [list(action.weights.row(i)) + [] for i in range(action.rank)]
    rows.append([1] * action.dim)
    new_w = IntMatrix.from_rows(rows, action.dim)
    q = action.norm_form
    new_q_rows = [list(q.row(i)) + [0] for i in range(action.rank)]
    new_q_rows.append([0] * action.rank + [1])
    new_q = IntMatrix.from_rows(new_q_rows, action.rank + 1)
    new_fp = []
    for el in action.finite_part:
        aut_rows = [list(el.aut.row(i)) + [0] for i in range(action.rank)]
        aut_rows.append([0] * action.rank + [1])
        new_fp.append(FinitePartElement(el.perm, IntMatrix.from_rows(aut_rows, action.rank + 1)))
    cone_action = TorusAction(action.rank + 1, new_w, new_q, tuple(new_fp))
    return ConeReduction(cone_action, twist + (-d,))
