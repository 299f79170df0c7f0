"""Selection verifiers and witness choosers, checked against exhaustive
realization sampling and the frozen step-through examples."""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import realizations, kth_min_valid, verifier_answer_sound
from uncquery.core import Area, TieRule
from uncquery.selection import (
    Objective,
    SelectionProblem,
    kmin_bypass_witness,
    kmin_verifier,
    kmin_witness,
    make_strategy,
    min1_bypass_witness,
    min1_verifier,
    min1_witness,
    mirror_areas,
)


def O(lo, hi):
    return Area.open(lo, hi)


def C(lo, hi):
    return Area.closed(lo, hi)


class TestMin1Verifier:
    def test_resolved_instance(self):
        assert min1_verifier([O(2, 5), O(6, 8), O(9, 11)]) == 0

    def test_unresolved_instance(self):
        assert min1_verifier([O(2, 6), O(5, 8), O(9, 11)]) is None

    def test_lex_point_before_closed_tie(self):
        # A revealed point at the shared lower bound wins on index.
        assert (
            kmin_verifier([Area.point(1), C(1, 3)], 1, TieRule.LEX) == 0
        )

    def test_lex_unrevealed_smaller_index_blocks(self):
        assert kmin_verifier([C(1, 3), Area.point(1)], 1, TieRule.LEX) is None

    def test_stable_touching_closed_resolves(self):
        assert min1_verifier([C(1, 3), C(3, 5)]) == 0


class TestKminVerifier:
    def test_disjoint_chain(self):
        assert kmin_verifier([O(1, 2), O(3, 4), O(5, 6)], 2) == 1

    def test_rank_swap_unresolved(self):
        assert kmin_verifier([O(1, 4), O(2, 5), O(6, 9)], 2) is None

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            kmin_verifier([O(1, 2)], 2)


class TestMin1Witness:
    def test_two_heads_by_lo(self):
        assert min1_witness([O(2, 6), O(5, 8), O(9, 11)]) == [0, 1]
        assert min1_witness([O(3, 17), O(14, 19), O(15, 20)]) == [0, 1]

    def test_skips_point_head(self):
        assert min1_witness([Area.point(3), O(0, 5)]) == [1]

    def test_all_points_rejected(self):
        with pytest.raises(ValueError):
            min1_witness([Area.point(1), Area.point(2)])


class TestKminWitness:
    def test_unseparated_prefix(self):
        assert kmin_witness([O(1, 4), O(2, 5), O(6, 9)], 2) == [1, 0]

    def test_separated_prefix_reduces_to_min1(self):
        assert kmin_witness([O(1, 2), O(3, 6), O(4, 7)], 2) == [1, 2]

    def test_k1_equals_min1(self):
        vec = [O(2, 6), O(5, 8), O(9, 11)]
        assert kmin_witness(vec, 1) == min1_witness(vec)


class TestBypassWitnesses:
    def test_min1_head(self):
        assert min1_bypass_witness([O(1, 5), O(3, 7)]) == [0]

    def test_kmin_unseparated_max_u(self):
        assert kmin_bypass_witness([O(1, 6), O(2, 4), O(7, 9)], 2) == [0]

    def test_kmin_separated_max_within_prefix(self):
        assert kmin_bypass_witness([O(0, 1), O(2, 4), O(7, 9)], 2) == [1]


class TestMirror:
    def test_mirror_areas(self):
        assert mirror_areas([O(2, 5)]) == [O(-5, -2)]

    def test_max1_via_mirror(self):
        problem = SelectionProblem(k=1, objective=Objective.KTH_MAX)
        strategy = make_strategy("min1-witness", problem)
        assert strategy.verifier([O(1, 3), O(4, 6)]) == 1


class TestStrategyRegistry:
    def test_unknown_name(self):
        with pytest.raises(ValueError):
            make_strategy("nope", SelectionProblem(k=1))

    def test_min1_requires_k1(self):
        with pytest.raises(ValueError):
            make_strategy("min1-witness", SelectionProblem(k=2))

    def test_lex_names_force_lex_tie(self):
        # With the candidate at the larger index, a tie at 3 means the
        # smaller-index competitor could claim the answer: lex needs strict
        # separation where stable does not.
        s = make_strategy("min1-lex", SelectionProblem(k=1, tie_rule=TieRule.STABLE))
        vec = [C(3, 5), C(1, 3)]
        assert s.verifier(vec) is None
        stable = make_strategy("min1-witness", SelectionProblem(k=1))
        assert stable.verifier(vec) == 1

    def test_bypass_model_check(self):
        from uncquery.models import ModelSpec

        s = make_strategy("min1-bypass", SelectionProblem(k=1))
        assert s.model_check(ModelSpec.parse("O-O")) is not None
        assert s.model_check(ModelSpec.parse("OP-P")) is None


# ---------------------------------------------------------------------------
# Exhaustive realization soundness.

small_areas = st.builds(
    lambda lo, length, kind: (
        Area.point(lo)
        if kind == "point"
        else (Area.open(lo, lo + length) if kind == "open" else Area.closed(lo, lo + length))
    ),
    st.fractions(min_value=0, max_value=8),
    st.fractions(min_value=Fraction(1, 2), max_value=4),
    st.sampled_from(["open", "closed", "point"]),
)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(small_areas, min_size=1, max_size=4),
    st.integers(min_value=1, max_value=4),
    st.sampled_from(list(TieRule)),
)
def test_verifier_sound_on_sampled_realizations(vec, k, tie):
    if k > len(vec):
        k = len(vec)
    answer = kmin_verifier(vec, k, tie)
    assert verifier_answer_sound(vec, answer, k, tie)


def _grid_specs():
    from itertools import product

    return [
        (Fraction(lo), Fraction(length), kind)
        for lo, length, kind in product((0, 1, 2), (1, 2), "poc")
    ]


def _mk(lo, length, kind):
    if kind == "p":
        return Area.point(lo)
    if kind == "o":
        return Area.open(lo, lo + length)
    return Area.closed(lo, lo + length)


def test_lex_verifier_complete_on_grid():
    """When the lex verifier declines, no index is a valid answer in every
    sampled realization.  Exhaustive over a small point/open/closed grid."""
    from itertools import product

    specs = _grid_specs()
    for combo in product(specs, repeat=2):
        vec = [_mk(*s) for s in combo]
        for k in (1, 2):
            if kmin_verifier(vec, k, TieRule.LEX) is not None:
                continue
            always = set(range(len(vec)))
            for vals in realizations(vec):
                always = {i for i in always if kth_min_valid(vals, i, k, TieRule.LEX)}
                if not always:
                    break
            assert not always, (k, [str(a) for a in vec])


def test_stable_verifier_complete_with_distinct_lower_bounds():
    """The stable verifier anchors at the lo-order head, so its completeness
    claim holds when lower bounds are pairwise distinct: an undecided head is
    invalid in some sampled realization."""
    from itertools import product

    from uncquery.core import order_l

    specs = _grid_specs()
    for combo in product(specs, repeat=2):
        if combo[0][0] == combo[1][0]:
            continue
        vec = [_mk(*s) for s in combo]
        for k in (1, 2):
            if kmin_verifier(vec, k, TieRule.STABLE) is not None:
                continue
            pk = order_l(vec)[k - 1]
            assert not all(
                kth_min_valid(vals, pk, k, TieRule.STABLE) for vals in realizations(vec)
            ), (k, [str(a) for a in vec])


@settings(max_examples=60, deadline=None)
@given(st.lists(small_areas, min_size=1, max_size=5))
def test_witness_subsets_are_queriable(vec):
    if all(a.is_point for a in vec):
        return
    w = min1_witness(vec)
    assert 1 <= len(w) <= 2
    assert all(not vec[i].is_point for i in w)
