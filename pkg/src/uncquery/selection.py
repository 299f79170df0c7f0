"""Selection verifiers and witness choosers: the plain and lexicographic
1-Min / k-Min witness pairs, the additive-guarantee bypass choosers, and the
mirror that turns k-th-max questions into k-th-min ones."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

from .core import Area, AreaVector, TieRule, order_l, order_u, surely_leq, surely_lt


class Objective(Enum):
    KTH_MIN = "kmin"
    KTH_MAX = "kmax"


@dataclass(frozen=True)
class SelectionProblem:
    k: int
    objective: Objective = Objective.KTH_MIN
    tie_rule: TieRule = TieRule.STABLE

    kind = "kmin"

    def validate(self, n: int) -> None:
        if not 1 <= self.k <= n:
            raise ValueError(f"k={self.k} out of range for n={n}")


def _before_ok(candidate: int, competitor: int, areas: AreaVector, tie_rule: TieRule) -> bool:
    """Competitor is surely ranked before the candidate answer."""
    a, b = areas[competitor], areas[candidate]
    if tie_rule is TieRule.LEX and competitor > candidate:
        return surely_lt(a, b)
    return surely_leq(a, b)


def _after_ok(candidate: int, competitor: int, areas: AreaVector, tie_rule: TieRule) -> bool:
    """Competitor is surely ranked after the candidate answer."""
    a, b = areas[candidate], areas[competitor]
    if tie_rule is TieRule.LEX and competitor < candidate:
        return surely_lt(a, b)
    return surely_leq(a, b)


def kmin_verifier(
    areas: AreaVector, k: int, tie_rule: TieRule = TieRule.STABLE
) -> Optional[int]:
    """Answer index if the k-th smallest is already determined, else None.

    Under the lex tie rule a determined answer is the lex-first valid one:
    competitors with a smaller index need only a non-strict separation, those
    with a larger index a strict one.
    """
    n = len(areas)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for n={n}")
    order = order_l(areas, None, tie_rule)
    pk = order[k - 1]
    for i in order[: k - 1]:
        if not _before_ok(pk, i, areas, tie_rule):
            return None
    for j in order[k:]:
        if not _after_ok(pk, j, areas, tie_rule):
            return None
    return pk


def min1_verifier(areas: AreaVector, tie_rule: TieRule = TieRule.STABLE) -> Optional[int]:
    return kmin_verifier(areas, 1, tie_rule)


def _first_nonpoints(areas: AreaVector, ordering: Sequence[int], limit: int) -> List[int]:
    out = []
    for i in ordering:
        if not areas[i].is_point:
            out.append(i)
            if len(out) == limit:
                break
    return out


def min1_witness(
    areas: AreaVector,
    tie_rule: TieRule = TieRule.STABLE,
    subset: Optional[Sequence[int]] = None,
) -> List[int]:
    """The two lo-order heads, skipping point areas (points are unqueriable)."""
    ordering = order_l(areas, subset, tie_rule)
    picked = _first_nonpoints(areas, ordering, 2)
    if not picked:
        raise ValueError("no queriable area available for a witness set")
    return picked


def kmin_witness(
    areas: AreaVector, k: int, tie_rule: TieRule = TieRule.STABLE
) -> List[int]:
    """Witness pair for k-Min.

    If the k-1 smallest-by-lo areas are surely below everything else, the
    problem reduces to 1-Min on the rest.  Otherwise pair the k-th head with
    the member of the prefix having the largest u value.
    """
    order = order_l(areas, None, tie_rule)
    prefix = order[: k - 1]
    tail = order[k - 1 :]
    pk = tail[0]
    if all(surely_leq(areas[i], areas[j]) for i in prefix for j in tail):
        return min1_witness(areas, tie_rule, subset=tail)
    q1 = order_u(areas, prefix, tie_rule)[-1]
    picked = [i for i in (pk, q1) if not areas[i].is_point]
    if len(picked) < 1:
        # Both chosen heads are points; fall back to intervals actually
        # blocking the verifier so the emitted set still hits every solution.
        blockers = [
            i
            for i in order
            if not areas[i].is_point
            and (not surely_leq(areas[i], areas[pk]) or not surely_leq(areas[pk], areas[i]))
        ]
        picked = blockers[:2] or _first_nonpoints(areas, order, 2)
    if not picked:
        raise ValueError("no queriable area available for a witness set")
    return picked


def min1_bypass_witness(areas: AreaVector) -> List[int]:
    """Singleton lo-order head; additive (OPT+1) guarantee, OP-P only."""
    picked = _first_nonpoints(areas, order_l(areas), 1)
    if not picked:
        raise ValueError("no queriable area available")
    return picked


def max1_bypass_witness(areas: AreaVector, subset: Sequence[int]) -> List[int]:
    """Mirror of the 1-Min bypass on a subset: the largest-hi queriable head."""
    mirrored = [a.mirror() for a in areas]
    ordering = order_l(mirrored, subset)
    picked = _first_nonpoints(areas, ordering, 1)
    if not picked:
        raise ValueError("no queriable area available")
    return picked


def kmin_bypass_witness(areas: AreaVector, k: int) -> List[int]:
    """Singleton chooser for k-Min with an OPT + min{k, n-k} guarantee.

    While the k smallest-by-lo areas are not surely below the rest, query the
    one among them with the largest u value; once they are separated, run the
    1-Max bypass inside that prefix.
    """
    order = order_l(areas)
    prefix = order[:k]
    rest = order[k:]
    separated = all(surely_leq(areas[i], areas[j]) for i in prefix for j in rest)
    if not separated:
        by_u = order_u(areas, prefix)
        for q in reversed(by_u):
            if not areas[q].is_point:
                return [q]
        picked = _first_nonpoints(areas, order, 1)
        if not picked:
            raise ValueError("no queriable area available")
        return picked
    return max1_bypass_witness(areas, prefix)


def mirror_areas(areas: AreaVector) -> List[Area]:
    """Negate every area; k-th max of the originals is k-th min of these."""
    return [a.mirror() for a in areas]


def mirror_to_max(fn):
    """Lift a min-oriented verifier/witness to the max objective."""

    def wrapped(areas: AreaVector, *args, **kwargs):
        return fn(mirror_areas(areas), *args, **kwargs)

    return wrapped


# ---------------------------------------------------------------------------
# Strategy registry for the engine and the CLI.

from .engine import SolverStrategy, alternate  # noqa: E402


def _require_op_p(spec) -> Optional[str]:
    if str(spec) != "OP-P":
        return (
            f"bypass strategies diverge once queries may return intervals; "
            f"model {spec} is refused (OP-P only)"
        )
    return None


def _require_op_family(spec) -> Optional[str]:
    if str(spec) not in ("OP-OP", "OP-P"):
        return f"alternation is defined for the OP-OP model, got {spec}"
    return None


def _orient(fn, objective: Objective):
    if objective is Objective.KTH_MAX:
        return mirror_to_max(fn)
    return fn


STRATEGY_NAMES = (
    "min1-witness",
    "kmin-witness",
    "min1-bypass",
    "kmin-bypass",
    "min1-lex",
    "kmin-lex",
    "opop-alternate",
)


def make_strategy(name: str, problem: SelectionProblem) -> SolverStrategy:
    """Build a named selection strategy bound to the problem's parameters."""
    k = problem.k
    if name.startswith("min1") and k != 1:
        raise ValueError(f"{name} requires k=1, got k={k}")
    tie = problem.tie_rule
    if name.endswith("-lex"):
        tie = TieRule.LEX

    verifier = _orient(lambda areas: kmin_verifier(areas, k, tie), problem.objective)

    if name in ("min1-witness", "min1-lex"):
        witness = _orient(lambda areas: min1_witness(areas, tie), problem.objective)
        return SolverStrategy(name, verifier, witness, k_bound=2)
    if name in ("kmin-witness", "kmin-lex"):
        witness = _orient(lambda areas: kmin_witness(areas, k, tie), problem.objective)
        return SolverStrategy(name, verifier, witness, k_bound=2)
    if name == "min1-bypass":
        witness = _orient(min1_bypass_witness, problem.objective)
        return SolverStrategy(name, verifier, witness, k_bound=1, model_check=_require_op_p)
    if name == "kmin-bypass":
        witness = _orient(lambda areas: kmin_bypass_witness(areas, k), problem.objective)
        return SolverStrategy(name, verifier, witness, k_bound=1, model_check=_require_op_p)
    if name == "opop-alternate":
        bypass_name = "min1-bypass" if k == 1 else "kmin-bypass"
        witness_name = "min1-witness" if k == 1 else "kmin-witness"
        bypass = make_strategy(bypass_name, problem)
        bypass.model_check = None  # the restriction is what alternation lifts
        paired = make_strategy(witness_name, problem)
        combined = alternate(bypass, paired, name="opop-alternate")
        combined.model_check = _require_op_family
        return combined
    raise ValueError(f"unknown strategy {name!r}; known: {', '.join(STRATEGY_NAMES)}")
