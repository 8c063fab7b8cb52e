"""Wall and chamber analysis for torus linearizations.

For a rank-r action with weight columns chi_1, ..., chi_N and a reference
torus G_m^n mapping onto T with finite kernel, the forbidden locus in the
character space of G_m^n is the union of the pullbacks of the hyperplanes
of X(T)_Q spanned by rank-(r-1) subsets of the weight columns.  A
character off every wall has equal semistable and stable loci over all
supports; that is the sufficiency certified by ``verify_ss_equals_s``
(the wall set may be over-inclusive, and necessity is not asserted).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import ComputationDeclined, InputError
from .lattice import IntMatrix, dot, kernel_basis, primitive, rank
from .torus import Support, TorusAction, is_semistable, is_stable, support_key


@dataclass(frozen=True)
class WallArrangement:
    """Finitely many linear hyperplanes in X(G_m^n)_Q, stored by their
    primitive integer normals, together with the pullback map psi."""

    ambient_rank: int
    walls: tuple[tuple[int, ...], ...]
    psi: IntMatrix  # r x n matrix of Psi: X(G_m^n)_Q -> X(T)_Q


def _canonical_normal(v: Sequence[int]) -> tuple[int, ...]:
    v = primitive(v)
    for e in v:
        if e != 0:
            return v if e > 0 else tuple(-x for x in v)
    return v


def compute_walls(action: TorusAction, psi: IntMatrix) -> WallArrangement:
    """Pull back the hyperplanes spanned by rank-(r-1) weight subsets.

    For r = 1 the empty subset spans {0}, whose pullback is the single
    hyperplane ker(Psi); duplicate walls are removed.
    """
    r = action.rank
    if psi.rows != r:
        raise InputError("psi must map onto the character space of the acting torus")
    if rank(psi) != r:
        raise InputError("psi must have full rank r (finite kernel)")
    n = psi.cols
    normals = set()
    for subset in itertools.combinations(range(action.dim), max(r - 1, 0)):
        mat = IntMatrix.from_rows([list(action.character(j)) for j in subset], r)
        basis = kernel_basis(mat)
        if len(basis) != 1:
            continue  # the subset does not span a hyperplane
        h = basis[0]
        nu = psi.transpose().mul_vec(h)
        if all(e == 0 for e in nu):
            raise InputError("psi is not injective on character spaces")
        normals.add(_canonical_normal(nu))
    return WallArrangement(n, tuple(sorted(normals)), psi)


def is_generic(arrangement: WallArrangement, mu: Sequence[int]) -> bool:
    """True iff mu lies on none of the walls (exact membership)."""
    if len(mu) != arrangement.ambient_rank:
        raise InputError("character length does not match the reference torus rank")
    return all(dot(nu, mu) != 0 for nu in arrangement.walls)


def _coordinate_order(bound: int) -> list[int]:
    out = [0]
    for h in range(1, bound + 1):
        out.extend((h, -h))
    return out


def find_generic_character(arrangement: WallArrangement, height_bound: int) -> tuple[int, ...]:
    """Deterministic search for a generic character of height <= bound.

    Candidates are scanned by increasing height (max absolute coordinate)
    and, within a height, lexicographically with per-coordinate order
    0, 1, -1, 2, -2, ...; the first vector off every wall is returned.
    """
    if height_bound < 1:
        raise InputError("height_bound must be >= 1")
    n = arrangement.ambient_rank
    order = _coordinate_order(height_bound)
    pos = {v: i for i, v in enumerate(order)}
    candidates = sorted(
        itertools.product(order, repeat=n),
        key=lambda v: (max((abs(e) for e in v), default=0), tuple(pos[e] for e in v)),
    )
    for mu in candidates:
        if is_generic(arrangement, mu):
            return mu
    raise ComputationDeclined(
        f"no generic character of height <= {height_bound} "
        f"in rank {n} off {len(arrangement.walls)} walls"
    )


def pull_back(arrangement: WallArrangement, mu: Sequence[int]) -> tuple[int, ...]:
    """Psi(mu): the character of the acting torus induced by mu."""
    if len(mu) != arrangement.ambient_rank:
        raise InputError("character length does not match the reference torus rank")
    return arrangement.psi.mul_vec(mu)


def verify_ss_equals_s(
    action: TorusAction, mu_pulled: Sequence[int], max_dim: int = 20
) -> tuple[bool, Support | None]:
    """Exhaustively check that every semistable support is stable.

    Supports are scanned by size then lexicographically; the first
    semistable-but-not-stable support is returned as a counterexample.
    """
    if action.dim > max_dim:
        raise ComputationDeclined(
            f"2^{action.dim} supports exceed the guard (max_dim={max_dim})"
        )
    for s in sorted(action.all_supports(), key=support_key):
        if is_semistable(action, mu_pulled, s) and not is_stable(action, mu_pulled, s):
            return False, s
    return True, None
