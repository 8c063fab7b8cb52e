import dataclasses

import pytest

from conftest import random_action
from torusgit.desing import (
    desingularize,
    max_stabilizer_centers,
    verify_tower,
)
from torusgit.errors import ComputationDeclined, InputError
from torusgit.lattice import IntMatrix
from torusgit.rees import MonomialWeightedCenter
from torusgit.torus import TorusAction, effectivize, is_semistable, stabilizer


def action(rows):
    return TorusAction(len(rows), IntMatrix.from_rows(rows, len(rows[0])))


HYPERBOLA = action([[1, -1]])


def cubics_effective():
    from torusgit.luna import cubics_slice

    return effectivize(cubics_slice()).action


def test_centers_hyperbola():
    live = HYPERBOLA.all_supports()
    centers = max_stabilizer_centers(HYPERBOLA, live)
    assert centers == [MonomialWeightedCenter((0, 1), (1, 1))]


def test_centers_cubics_slice():
    a = cubics_effective()
    centers = max_stabilizer_centers(a, a.all_supports())
    assert centers == [MonomialWeightedCenter((0, 1, 2), (1, 1, 1))]


def test_centers_already_dm():
    a = action([[1, 2]])
    live = [s for s in a.all_supports() if s]
    assert max_stabilizer_centers(a, live) == []


def test_desingularize_hyperbola():
    tower = desingularize(HYPERBOLA, (0,))
    assert len(tower.steps) == 1
    final = tower.final_action
    assert final.rank == 2 and final.dim == 3
    assert tower.final_character == (0, -1)
    assert set(tower.final_dm_supports) == {frozenset({0, 1}), frozenset({0, 1, 2})}
    for s in tower.final_dm_supports:
        assert stabilizer(final, s).dimension == 0
    # the strictly polystable directions {X, T} and {Y, T} are excluded
    assert frozenset({0, 2}) not in tower.final_dm_supports
    assert frozenset({1, 2}) not in tower.final_dm_supports


def test_desingularize_cubics_slice():
    a = cubics_effective()
    tower = desingularize(a, (0, 0))
    assert len(tower.steps) == 1
    boundary = frozenset({0, 1, 2})
    assert boundary in set(tower.final_dm_supports)
    g = stabilizer(tower.final_action, boundary)
    assert g.dimension == 0
    assert g.torus_component_order * g.finite_part_order == 9 * 6


def test_desingularize_already_dm_is_zero_steps():
    a = action([[1, 2]])
    tower = desingularize(a, (-1,))
    assert tower.steps == ()
    assert tower.final_character == (-1,)
    assert tower.final_action is a


def test_desingularize_requires_effective_action():
    a = action([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    with pytest.raises(InputError):
        desingularize(a, (0, 0, 0))


def test_desingularize_requires_nonempty_start_locus():
    a = TorusAction(1, IntMatrix(1, 0, ((),)))
    # dim-0 action: only the empty support; any nonzero character kills it
    with pytest.raises(InputError):
        desingularize(a, (1,))


def test_verify_tower_passes_on_worked_examples():
    for base, chi in ((HYPERBOLA, (0,)), (cubics_effective(), (0, 0))):
        report = verify_tower(desingularize(base, chi))
        assert report.ok, [c for c in report.checks if not c.ok]
        assert {c.name for c in report.checks} == {
            "section_projection_roundtrip",
            "good_moduli_space",
            "global_quotient",
            "final_stabilizers_finite",
        }


def test_verify_tower_zero_steps_vacuous():
    a = action([[1, 2]])
    report = verify_tower(desingularize(a, (-1,)))
    assert report.ok
    assert [c.name for c in report.checks] == ["final_stabilizers_finite"]


def test_verify_tower_detects_corrupted_theta():
    tower = desingularize(HYPERBOLA, (0,))
    step = tower.steps[0]
    bad_theta = tuple(-e for e in step.presentation.theta)
    bad_presentation = dataclasses.replace(step.presentation, theta=bad_theta)
    bad_step = dataclasses.replace(step, presentation=bad_presentation)
    bad_tower = dataclasses.replace(tower, steps=(bad_step,))
    report = verify_tower(bad_tower)
    assert not report.ok
    failing = {c.name for c in report.checks if not c.ok}
    assert failing == {"good_moduli_space"}


def test_tower_termination_and_monotonicity(rng):
    """Fifty random effective actions: the tower terminates within N*r
    steps, the final supports are all Deligne-Mumford, and the maximal
    stabilizer dimension decreases, or the number of maximal centers
    does, at every step."""
    done = 0
    while done < 50:
        a = random_action(rng, max_rank=3, max_dim=5, entry_bound=2)
        a = effectivize(a).action
        if a.rank == 0:
            continue
        from torusgit.torus import is_stable

        if not is_stable(a, tuple(0 for _ in range(a.rank)), frozenset(range(a.dim))):
            continue  # no properly stable point: outside the tower's scope
        tower = desingularize(a, tuple(0 for _ in range(a.rank)))
        assert len(tower.steps) <= a.dim * a.rank + 1
        final = tower.final_action
        for s in tower.final_dm_supports:
            assert stabilizer(final, s).dimension == 0

        # monotonicity along the recorded steps
        profile = []
        current, chi = a, tuple(0 for _ in range(a.rank))
        live = [s for s in current.all_supports() if is_semistable(current, chi, s)]
        for step in tower.steps:
            dims = [stabilizer(current, s).dimension for s in live]
            centers = max_stabilizer_centers(current, live)
            profile.append((max(dims), len(centers)))
            current = step.presentation.ambient
            chi = step.character
            live = [s for s in current.all_supports() if is_semistable(current, chi, s)]
        for (d1, c1), (d2, c2) in zip(profile, profile[1:]):
            assert d2 < d1 or (d2 == d1 and c2 < c1), profile
        done += 1


def test_tower_embeds_original_stable_supports(rng):
    """The composite T = 1 section keeps originally properly-stable
    supports live and Deligne-Mumford in the final ambient.  (Supports
    with a finite stabilizer but a non-closed orbit over the moduli space
    may legitimately fall out of the relative semistable locus.)"""
    from torusgit.torus import is_stable

    done = 0
    while done < 20:
        a = random_action(rng, max_rank=2, max_dim=4, entry_bound=2)
        a = effectivize(a).action
        if a.rank == 0:
            continue
        chi0 = tuple(0 for _ in range(a.rank))
        if not is_stable(a, chi0, frozenset(range(a.dim))):
            continue
        tower = desingularize(a, chi0)
        if not tower.steps:
            done += 1
            continue
        original_stable = [s for s in a.all_supports() if is_stable(a, chi0, s)]
        final = set(tower.final_dm_supports)
        for s in original_stable:
            image = s
            for step in tower.steps:
                image = step.presentation.section_support(image)
            assert image in final, (a.weights.entries, sorted(s))
            assert stabilizer(tower.final_action, image).dimension == 0
        done += 1


def test_step_guard():
    with pytest.raises(ComputationDeclined):
        desingularize(HYPERBOLA, (0,), max_steps=0)
