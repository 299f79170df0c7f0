"""Shared test utilities: exhaustive realization checking and affine maps."""
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence

from uncquery.core import Area, TieRule


def sample_values(area: Area) -> List[Fraction]:
    """Representative exact values of an area: attained endpoints, near-endpoint
    interior points, and the midpoint.  Enough to witness every strict/non-strict
    ordering disagreement between areas with rational endpoints."""
    if area.is_point:
        return [area.lo]
    out = []
    quarter = area.length / 4
    if area.attains_lo:
        out.append(area.lo)
    out.append(area.lo + quarter / 64)
    out.append(area.lo + 2 * quarter)
    out.append(area.hi - quarter / 64)
    if area.attains_hi:
        out.append(area.hi)
    return sorted(set(out))


def realizations(areas: Sequence[Area]):
    yield from product(*(sample_values(a) for a in areas))


def kth_min_valid(values: Sequence[Fraction], answer: int, k: int, tie_rule: TieRule) -> bool:
    """Whether `answer` is a correct k-th-smallest report for these exact values."""
    if tie_rule is TieRule.LEX:
        order = sorted(range(len(values)), key=lambda j: (values[j], j))
        return order[k - 1] == answer
    below = sum(1 for v in values if v < values[answer])
    at_most = sum(1 for v in values if v <= values[answer])
    return below <= k - 1 and at_most >= k


def verifier_answer_sound(
    areas: Sequence[Area], answer: Optional[int], k: int, tie_rule: TieRule
) -> bool:
    """A claimed answer must be valid in EVERY sampled realization."""
    if answer is None:
        return True
    return all(kth_min_valid(vals, answer, k, tie_rule) for vals in realizations(areas))


def affine_map_area(area: Area, m: Fraction, b: Fraction) -> Area:
    """Strictly increasing affine image; preserves kinds and order relations."""
    assert m > 0
    return Area(m * area.lo + b, m * area.hi + b, area.lo_kind, area.hi_kind)
