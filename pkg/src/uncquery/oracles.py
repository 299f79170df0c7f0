"""Query-response sources.

Three kinds: ground-truth oracles that refine toward a fixed hidden
configuration, scripted replays, and the adversaries used by the tight
examples.  Non-adversary oracles are update independent: the response to the
c-th query on index i never depends on what happened to other indices.
Adversaries may inspect the full query history and also carry a companion
script describing what the colluding optimum is shown.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .core import Area, EndpointKind, parse_rational
from .models import ModelSpec, TypeSet, UncertainInstance, validate_response
from .selection import Objective, SelectionProblem
from .core import TieRule

GROUND_TRUTH = "ground-truth"
SCRIPTED = "scripted"
ADVERSARY = "adversary"


class OracleError(Exception):
    pass


class Oracle:
    kind: str = SCRIPTED
    update_independent: bool = True

    def respond(self, index: int, count: int, current: Area) -> Area:
        raise NotImplementedError

    def fork(self) -> "Oracle":
        """Fresh copy with pristine history; replays are deterministic."""
        return copy.deepcopy(self)


class ExactPolicy:
    """Reveal the hidden value itself."""

    def __repr__(self) -> str:
        return "ExactPolicy()"


@dataclass(frozen=True)
class HalvePolicy:
    """Return a sub-interval of `shrink` times the current length, centered on
    the hidden value and clipped inside the current area."""

    shrink: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "shrink", Fraction(self.shrink))
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie strictly between 0 and 1")


def _halve_window(hidden: Fraction, current: Area, shrink: Fraction):
    new_len = current.length * shrink
    lo = hidden - new_len / 2
    hi = hidden + new_len / 2
    clipped_lo = clipped_hi = False
    if lo < current.lo:
        shift = current.lo - lo
        lo += shift
        hi += shift
        clipped_lo = True
    elif hi > current.hi:
        shift = hi - current.hi
        lo -= shift
        hi -= shift
        clipped_hi = True
    # Nudge off a shared endpoint so the response is visibly interior.  The
    # nudge is new_len/100, reduced if needed to keep the hidden value inside.
    delta = new_len / 100
    if clipped_lo and hidden > current.lo:
        lo += min(delta, (hidden - current.lo) / 2)
        hi += min(delta, (hidden - current.lo) / 2)
    elif clipped_hi and hidden < current.hi:
        lo -= min(delta, (current.hi - hidden) / 2)
        hi -= min(delta, (current.hi - hidden) / 2)
    return lo, hi


def ground_truth_respond(
    policy, hidden: Fraction, current: Area, count: int, returns: TypeSet
) -> Area:
    """Deterministic refinement of `current` toward `hidden`.

    Point-only return sets force the exact point whatever the policy says.
    """
    hidden = Fraction(hidden)
    if not current.contains_value(hidden):
        raise OracleError(f"hidden value {hidden} not inside current area {current}")
    if current.is_point:
        raise OracleError("point areas cannot be refined")
    if returns.letters == {"P"} or isinstance(policy, ExactPolicy):
        if "P" not in returns:
            raise OracleError("exact responses need P in the return type set")
        return Area.point(hidden)
    if isinstance(policy, HalvePolicy):
        lo, hi = _halve_window(hidden, current, policy.shrink)
        strict_inside = lo < hidden < hi
        if "O" in returns and strict_inside:
            return Area.open(lo, hi)
        if "C" in returns:
            return Area.closed(lo, hi)
        if "O" in returns:
            raise OracleError(
                f"cannot build an open response around boundary value {hidden}"
            )
        raise OracleError(f"return type set {returns} admits no interval response")
    raise OracleError(f"unknown refinement policy {policy!r}")


class GroundTruthOracle(Oracle):
    kind = GROUND_TRUTH
    update_independent = True

    def __init__(self, policy, hidden: Sequence, returns: TypeSet):
        self.policy = policy
        self.hidden = tuple(Fraction(h) for h in hidden)
        self.returns = returns

    @staticmethod
    def for_instance(instance: UncertainInstance, policy=None) -> "GroundTruthOracle":
        if instance.hidden is None:
            raise OracleError("instance carries no hidden configuration")
        if policy is None:
            policy = (
                ExactPolicy()
                if "P" in instance.model.returns
                else HalvePolicy(Fraction(1, 2))
            )
        return GroundTruthOracle(policy, instance.hidden, instance.model.returns)

    def respond(self, index: int, count: int, current: Area) -> Area:
        return ground_truth_respond(
            self.policy, self.hidden[index], current, count, self.returns
        )


class ScriptedOracle(Oracle):
    kind = SCRIPTED
    update_independent = True

    def __init__(self, responses: Dict[int, List[Area]]):
        self.responses = {int(i): list(rs) for i, rs in responses.items()}

    @staticmethod
    def from_json(data: dict) -> "ScriptedOracle":
        # External script keys are 1-based to match reported indices.
        return ScriptedOracle(
            {
                int(key) - 1: [Area.from_json(a) for a in areas]
                for key, areas in data["responses"].items()
            }
        )

    @staticmethod
    def load(path: str) -> "ScriptedOracle":
        with open(path) as fh:
            return ScriptedOracle.from_json(json.load(fh))

    def respond(self, index: int, count: int, current: Area) -> Area:
        try:
            return self.responses[index][count - 1]
        except (KeyError, IndexError):
            raise OracleError(
                f"script has no response for index {index + 1}, query #{count}"
            ) from None


def _shrink_fallback(current: Area) -> Area:
    """Generic strict refinement for repeat queries an adversary never
    planned for; keeps the upper end, raises the lower quarter."""
    if current.is_point:
        raise OracleError("point areas cannot be refined")
    lo = current.lo + current.length / 4
    return Area(lo, current.hi, EndpointKind.OPEN, current.hi_kind)


class MinTightAdversary(Oracle):
    """The 2n-query construction for 1-Min under interval returns.

    The distinguished wide interval keeps creeping upward; the n identical
    overlapping intervals resolve high one by one.  Whichever threshold the
    algorithm crosses first (n queries on the wide interval, or n distinct
    overlapping intervals queried) fixes the branch; the final response on the
    other side then lets the run finish at exactly 2n queries.
    """

    kind = ADVERSARY
    update_independent = False

    def __init__(self, n: int, a0_index: int = 0):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.a0_index = a0_index
        self.epsilon = Fraction(1, 4 * n)
        self.a0_queries = 0
        self.s_seen: List[int] = []
        self.case: Optional[int] = None

    def respond(self, index: int, count: int, current: Area) -> Area:
        if not 0 <= index <= self.n:
            raise OracleError(f"index {index + 1} outside the fixed instance")
        if index == self.a0_index:
            self.a0_queries += 1
            i = self.a0_queries
            if self.case is None and i == self.n:
                self.case = 1
            if self.case == 2 and i >= self.n:
                return Area.open(2, 3)
            return Area.open(1 + i * self.epsilon, 5)
        if index in self.s_seen:
            return _shrink_fallback(current)
        self.s_seen.append(index)
        if self.case is None and len(self.s_seen) == self.n:
            self.case = 2
            return Area.open(3, 4)
        return Area.open(6, 7)

    def opt_script(self, case: int) -> ScriptedOracle:
        """What the colluding optimum is shown in the given branch."""
        if case == 1:
            responses = {
                i: [Area.open(6, 7)]
                for i in range(self.n + 1)
                if i != self.a0_index
            }
        elif case == 2:
            chain = [
                Area.open(1 + i * self.epsilon, 5) for i in range(1, self.n)
            ] + [Area.open(2, 3)]
            responses = {self.a0_index: chain}
        else:
            raise ValueError("case must be 1 or 2")
        return ScriptedOracle(responses)

    @property
    def opt_value(self) -> int:
        return self.n


class KMinPointAdversary(Oracle):
    """The 2k-area lower bound for k-Min under point-capable inputs: the
    first k-1 distinct intervals queried resolve low, the k-th resolves high,
    while the colluding optimum only ever needed the high one."""

    kind = ADVERSARY
    update_independent = False

    def __init__(self, k: int, point_returns: bool = True):
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        self.point_returns = point_returns
        self.seen: List[int] = []

    def _low(self) -> Area:
        return Area.point(1) if self.point_returns else Area.open(Fraction(1, 2), Fraction(3, 2))

    def _high(self) -> Area:
        return Area.point(4) if self.point_returns else Area.open(Fraction(7, 2), Fraction(9, 2))

    def respond(self, index: int, count: int, current: Area) -> Area:
        if not 0 <= index < 2 * self.k:
            raise OracleError(f"index {index + 1} outside the fixed instance")
        if index >= self.k:
            raise OracleError("point areas cannot be queried")
        if index in self.seen:
            return _shrink_fallback(current)
        self.seen.append(index)
        if len(self.seen) <= self.k - 1:
            return self._low()
        return self._high()

    opt_value = 1


class CpAnomalyAdversary(Oracle):
    """Identical closed intervals answered 2 until the last distinct index,
    which gets 1; the colluding optimum queries that index straight away."""

    kind = ADVERSARY
    update_independent = False

    def __init__(self, n: int, designated: Optional[int] = None):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.designated = n - 1 if designated is None else designated
        self.seen: List[int] = []

    def respond(self, index: int, count: int, current: Area) -> Area:
        if not 0 <= index < self.n:
            raise OracleError(f"index {index + 1} outside the fixed instance")
        if index in self.seen:
            raise OracleError("point areas cannot be refined")
        self.seen.append(index)
        if len(self.seen) < self.n:
            return Area.point(2)
        return Area.point(1)

    def opt_script(self) -> ScriptedOracle:
        responses = {i: [Area.point(2)] for i in range(self.n)}
        responses[self.designated] = [Area.point(1)]
        return ScriptedOracle(responses)

    @property
    def revealed_hidden(self):
        """Configuration consistent with every response in this construction."""
        return tuple(
            Fraction(1) if i == self.designated else Fraction(2) for i in range(self.n)
        )

    opt_value = 1


class OpoCounterOracle(Oracle):
    """Two-interval schedule showing the 1-Min bypass diverges once queries
    may return intervals: the low interval never separates, the high one
    resolves in a single query."""

    kind = SCRIPTED
    update_independent = True

    def respond(self, index: int, count: int, current: Area) -> Area:
        if index == 0:
            return Area.open(19 - Fraction(1, count + 1), 20)
        if index == 1:
            return Area.open(21 - Fraction(1, 2 * count), 21)
        raise OracleError(f"index {index + 1} outside the fixed instance")

    opt_value = 1


# ---------------------------------------------------------------------------
# Fixtures: the instances each adversary is defined against.


@dataclass
class Fixture:
    name: str
    instance: UncertainInstance
    oracle: Oracle
    opt_value: int
    opt_oracle: Optional[Oracle] = None
    notes: str = ""

    def fresh_oracle(self) -> Oracle:
        return self.oracle.fork()


def min_tight_fixture(n: int, a0_last: bool = False) -> Fixture:
    """Tight 1-Min instance: one wide interval and n identical overlapping
    ones.  Placing the wide interval last flips which adversary branch a
    deterministic ascending-index solver hits."""
    wide = Area.open(1, 5)
    narrow = [Area.open(3, 7) for _ in range(n)]
    if a0_last:
        areas = narrow + [wide]
        a0_index = n
    else:
        areas = [wide] + narrow
        a0_index = 0
    instance = UncertainInstance(
        model=ModelSpec.parse("O-O"),
        areas=tuple(areas),
        problem=SelectionProblem(k=1),
    )
    adversary = MinTightAdversary(n, a0_index)
    return Fixture(
        name="min-tight",
        instance=instance,
        oracle=adversary,
        opt_value=n,
        notes="fixture OPT asserted from the collusion argument",
    )


def kmin_point_fixture(k: int, point_returns: bool = True) -> Fixture:
    areas = tuple(Area.open(0, 5) for _ in range(k)) + tuple(
        Area.point(3) for _ in range(k)
    )
    model = ModelSpec.parse("OP-P" if point_returns else "OP-O")
    instance = UncertainInstance(
        model=model,
        areas=areas,
        problem=SelectionProblem(k=k),
    )
    return Fixture(
        name="kmin-point",
        instance=instance,
        oracle=KMinPointAdversary(k, point_returns),
        opt_value=1,
        notes="fixture OPT asserted from the collusion argument",
    )


def cp_anomaly_fixture(n: int, tie_rule: TieRule = TieRule.STABLE) -> Fixture:
    instance = UncertainInstance(
        model=ModelSpec.parse("CP-P"),
        areas=tuple(Area.closed(1, 3) for _ in range(n)),
        problem=SelectionProblem(k=1, tie_rule=tie_rule),
    )
    adversary = CpAnomalyAdversary(n)
    return Fixture(
        name="cp-anomaly",
        instance=instance,
        oracle=adversary,
        opt_value=1,
        opt_oracle=adversary.opt_script(),
        notes="fixture OPT asserted for the non-lex reading",
    )


def opo_counterexample_fixture() -> Fixture:
    instance = UncertainInstance(
        model=ModelSpec.parse("O-O"),
        areas=(Area.open(2, 20), Area.open(19, 21)),
        problem=SelectionProblem(k=1),
    )
    return Fixture(
        name="opo-counter",
        instance=instance,
        oracle=OpoCounterOracle(),
        opt_value=1,
    )


FIXTURE_BUILDERS = {
    "min-tight": lambda n=3, **kw: min_tight_fixture(n, **kw),
    "kmin-point": lambda k=2, **kw: kmin_point_fixture(k, **kw),
    "cp-anomaly": lambda n=3, **kw: cp_anomaly_fixture(n, **kw),
    "opo-counter": lambda **kw: opo_counterexample_fixture(**kw),
}
