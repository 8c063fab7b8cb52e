"""Extended weighted blow-ups of torus quotients at monomial centers.

A monomial weighted center on [A^N / T] is a nonempty subset Z of the
coordinates with positive integer weights a_j.  It induces the weighted
ideal sequence I_n = (monomials in the x_j, j in Z, of weighted degree
>= n), with I_n = (1) for n <= 0.  The two-sided Rees algebra
(+)_n I_n is a polynomial ring on generators X_j (degree a_j), the
untouched coordinates x_k (degree 0) and T (degree -1), subject to
x_j = X_j T^{a_j}; its G_m-quotient is the extended weighted blow-up.

The presentation built here keeps coordinate j of the ambient A^{N+1} in
the slot of the original coordinate x_j (so X_j sits at index j) and
appends T as the last coordinate.  The Rees G_m contributes one extra
torus factor, so the ambient carries a rank-(r+1) action with columns
(chi_j, a_j) for j in Z, (chi_k, 0) for k not in Z, and (0, -1) for T.
theta is the distinguished character t -> t^{-1} of the Rees factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ComputationDeclined, InputError
from .lattice import IntMatrix, monomials_up_to_degree
from .torus import (
    FinitePartElement,
    Support,
    TorusAction,
    is_semistable,
    support_key,
)

DEFAULT_MAX_SUPPORTS = 1 << 20


@dataclass(frozen=True)
class MonomialWeightedCenter:
    coords: tuple[int, ...]  # 0-based, strictly increasing, nonempty
    weights: tuple[int, ...]  # aligned with coords, all >= 1

    def __post_init__(self) -> None:
        if not self.coords:
            raise InputError("a monomial center needs at least one coordinate")
        if list(self.coords) != sorted(set(self.coords)):
            raise InputError("center coordinates must be strictly increasing")
        if len(self.weights) != len(self.coords) or any(a < 1 for a in self.weights):
            raise InputError("center weights must be positive and aligned with coords")

    def weight_of(self, j: int) -> int:
        return self.weights[self.coords.index(j)]

    def weighted_degree(self, exponents: Sequence[int]) -> int:
        """Weighted degree of a monomial on the center coordinates."""
        return sum(self.weight_of(j) * exponents[j] for j in self.coords)


@dataclass(frozen=True)
class EBPresentation:
    """Graded presentation of an extended weighted blow-up."""

    original: TorusAction
    center: MonomialWeightedCenter
    ambient: TorusAction  # rank r+1 on A^{N+1}; coordinate N is T
    theta: tuple[int, ...]  # (0, ..., 0, -1)
    exceptional_index: int  # index of T in the ambient, = original.dim
    substitution: tuple[int, ...]  # substitution[j] = Rees power a_j (0 off the center)

    def section_support(self, s: Support) -> Support:
        """Image of an original support under the T = 1 section."""
        return frozenset(s) | {self.exceptional_index}

    def section_of_monomial(self, ambient_monomial: Sequence[int]) -> tuple[int, ...]:
        """Restrict an ambient monomial to the T = 1 section (drop T)."""
        return tuple(ambient_monomial[: self.exceptional_index])

    def rees_degree(self, ambient_monomial: Sequence[int]) -> int:
        return self.ambient.weights.mul_vec(list(ambient_monomial))[-1]


def extended_weighted_blowup(action: TorusAction, center: MonomialWeightedCenter) -> EBPresentation:
    """Build the rank-(r+1) presentation described in the module docstring.

    The finite part of the action must preserve the center: sigma(Z) = Z
    with matching weights; it then extends to the ambient by fixing T.
    """
    n = action.dim
    if any(j < 0 or j >= n for j in center.coords):
        raise InputError("center coordinates out of range")
    zset = set(center.coords)
    for el in action.finite_part:
        image = {el.perm[j] for j in center.coords}
        if image != zset:
            raise InputError("finite part does not preserve the center coordinates")
        for j in center.coords:
            if center.weight_of(el.perm[j]) != center.weight_of(j):
                raise InputError("finite part does not preserve the center weights")

    r = action.rank
    rees_row = [center.weight_of(j) if j in zset else 0 for j in range(n)] + [-1]
    rows = [list(action.weights.row(i)) + [0] for i in range(r)]
    rows.append(rees_row)
    ambient_w = IntMatrix.from_rows(rows, n + 1)

    q = action.norm_form
    q_rows = [list(q.row(i)) + [0] for i in range(r)]
    q_rows.append([0] * r + [1])
    ambient_q = IntMatrix.from_rows(q_rows, r + 1)

    finite = []
    for el in action.finite_part:
        perm = tuple(el.perm) + (n,)
        aut_rows = [list(el.aut.row(i)) + [0] for i in range(r)]
        aut_rows.append([0] * r + [1])
        finite.append(FinitePartElement(perm, IntMatrix.from_rows(aut_rows, r + 1)))

    ambient = TorusAction(r + 1, ambient_w, ambient_q, tuple(finite))
    theta = tuple(0 for _ in range(r)) + (-1,)
    substitution = tuple(center.weight_of(j) if j in zset else 0 for j in range(n))
    return EBPresentation(action, center, ambient, theta, n, substitution)


def _guard_supports(dim: int, max_supports: int) -> None:
    if 1 << dim > max_supports:
        raise ComputationDeclined(
            f"2^{dim} supports exceed the limit {max_supports}; raise --max-supports"
        )


def weighted_blowup_locus(eb: EBPresentation, max_supports: int = DEFAULT_MAX_SUPPORTS) -> list[Support]:
    """Supports semistable for theta relative to the original quotient:
    exactly those meeting the center coordinates {X_j}.  The only relevant
    destabilizer over the base is the Rees cocharacter (0, ..., 0, -1),
    whose limit fails to exist precisely when some X_j is present."""
    _guard_supports(eb.ambient.dim, max_supports)
    zset = set(eb.center.coords)
    out = [s for s in eb.ambient.all_supports() if s & zset]
    return sorted(out, key=support_key)


def saturated_locus(eb: EBPresentation, max_supports: int = DEFAULT_MAX_SUPPORTS) -> list[Support]:
    """Supports semistable for theta relative to the good moduli space:
    no lambda in the full rank-(r+1) limit cone with negative T-component.
    Always contained in the weighted blow-up locus, with equality when the
    original torus is trivial."""
    _guard_supports(eb.ambient.dim, max_supports)
    out = [s for s in eb.ambient.all_supports() if is_semistable(eb.ambient, eb.theta, s)]
    return sorted(out, key=support_key)


@dataclass(frozen=True)
class ExceptionalDivisor:
    """The Cartier divisor V(T): supports on it are those omitting T."""

    exceptional_index: int
    on_divisor: tuple[Support, ...]
    blowup_intersection: tuple[Support, ...]  # closure of the usual exceptional divisor

    def contains(self, s: Support) -> bool:
        return self.exceptional_index not in s


def exceptional_divisor(eb: EBPresentation, max_supports: int = DEFAULT_MAX_SUPPORTS) -> ExceptionalDivisor:
    _guard_supports(eb.ambient.dim, max_supports)
    t = eb.exceptional_index
    zset = set(eb.center.coords)
    on_div = [s for s in eb.ambient.all_supports() if t not in s]
    inter = [s for s in on_div if s & zset]
    return ExceptionalDivisor(t, tuple(sorted(on_div, key=support_key)),
                              tuple(sorted(inter, key=support_key)))


# ---------------------------------------------------------------------------
# Structural checks on the graded presentation
# ---------------------------------------------------------------------------


def check_weighted_sequence(center: MonomialWeightedCenter, n_bound: int = 8,
                            total_degree_bound: int = 8) -> bool:
    """Sanity of the induced ideal sequence on small degrees: I_n I_m is
    contained in I_{n+m} (multiplicativity) and each I_n is generated by
    the I_i with i <= max(a_j) (generation bound), checked on monomials
    of total degree <= the bound."""
    k = len(center.coords)
    d = max(center.weights)
    wts = center.weights

    def wdeg(alpha: Sequence[int]) -> int:
        return sum(a * e for a, e in zip(wts, alpha))

    monos = monomials_up_to_degree(k, total_degree_bound)

    def generated(alpha: tuple[int, ...], m: int) -> bool:
        # is alpha in the ideal spanned by products of I_i, i <= d, of total weight m?
        if m <= d:
            return wdeg(alpha) >= m
        return any(
            alpha[j] >= 1
            and generated(tuple(a - (1 if i == j else 0) for i, a in enumerate(alpha)),
                          m - wts[j])
            for j in range(k)
        )

    for n in range(1, n_bound + 1):
        in_n = [alpha for alpha in monos if wdeg(alpha) >= n]
        for alpha in in_n:
            for beta in monos:
                if wdeg(beta) >= 1 and sum(alpha) + sum(beta) <= total_degree_bound:
                    if wdeg(tuple(a + b for a, b in zip(alpha, beta))) < n + 1:
                        return False
            if not generated(alpha, n):
                return False
    return True


def check_presentation(eb: EBPresentation) -> list[str]:
    """Structural round-trip checks; returns a list of failure descriptions.

    Verifies that the substitution x_j -> X_j T^{a_j} composed with the
    T = 1 section is the identity on coordinates, and that the ambient
    weight columns are exactly (chi_j, a_j), (chi_k, 0) and (0, -1).
    """
    failures = []
    a = eb.original
    amb = eb.ambient
    n = a.dim
    if amb.dim != n + 1 or amb.rank != a.rank + 1:
        failures.append("ambient dimensions do not extend the original by one")
        return failures
    if eb.exceptional_index != n:
        failures.append("exceptional coordinate is not the appended one")
    zset = set(eb.center.coords)
    for j in range(n):
        expected_rees = eb.center.weight_of(j) if j in zset else 0
        if eb.substitution[j] != expected_rees:
            failures.append(f"substitution table wrong at coordinate {j}")
        col = amb.character(j)
        if col[: a.rank] != a.character(j) or col[a.rank] != expected_rees:
            failures.append(f"ambient weight column wrong at coordinate {j}")
    t_col = amb.character(n)
    if t_col != tuple([0] * a.rank + [-1]):
        failures.append("T column is not (0, ..., 0, -1)")
    return failures
