"""The generic solve loop: verify, pick a witness set, query its members,
repeat.  Strategies plug in a verifier and a witness chooser; the engine owns
budgets, response validation, the query log, and the alternation counter."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import Area, AreaVector
from .models import ModelSpec, UncertainInstance, validate_instance, validate_response


class EngineError(Exception):
    pass


class StrategyModelError(EngineError):
    """Strategy refuses to run under the instance's model."""


class OracleResponseError(EngineError):
    pass


class RunStatus(Enum):
    SOLVED = "solved"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass
class SolverStrategy:
    """Verifier returns the answer index or None; witness returns a nonempty
    index set of at most k_bound queriable areas."""

    name: str
    verifier: Callable[[AreaVector], Optional[int]]
    witness: Callable[[AreaVector], Sequence[int]]
    k_bound: int = 2
    model_check: Optional[Callable[[ModelSpec], Optional[str]]] = None

    def reset(self) -> None:
        reset = getattr(self.witness, "reset", None)
        if reset is not None:
            reset()


class AlternatingWitness:
    """Strictly alternates two witness choosers across engine iterations."""

    def __init__(self, first, second):
        self.first = first
        self.second = second
        self.turn = 0

    def reset(self) -> None:
        self.turn = 0

    def __call__(self, areas: AreaVector) -> Sequence[int]:
        chooser = self.first if self.turn % 2 == 0 else self.second
        self.turn += 1
        return chooser(areas)


def alternate(a: SolverStrategy, b: SolverStrategy, name: Optional[str] = None) -> SolverStrategy:
    """Combine two strategies sharing one verifier semantics by alternating
    their witness choosers, A first."""
    return SolverStrategy(
        name=name or f"alternate({a.name},{b.name})",
        verifier=a.verifier,
        witness=AlternatingWitness(a.witness, b.witness),
        k_bound=max(a.k_bound, b.k_bound),
    )


@dataclass
class RunReport:
    answer: Optional[int]
    query_log: List[Tuple[int, Area]]
    counts: Dict[int, int]
    total: int
    status: RunStatus
    final_areas: Tuple[Area, ...]
    # (witness indices, areas snapshot, counts snapshot) per iteration;
    # consumed by the brute-force witness validity checks, not serialized.
    witness_trace: List[tuple] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "answer": None if self.answer is None else self.answer + 1,
            "queries": [[i + 1, a.to_json()] for i, a in self.query_log],
            "counts": {str(i + 1): c for i, c in sorted(self.counts.items())},
            "total": self.total,
            "status": self.status.value,
        }


def default_budget(n: int, max_refinements: int = 16) -> int:
    return 4 * n * max_refinements


def solve(
    instance: UncertainInstance,
    oracle,
    strategy: SolverStrategy,
    budget: int,
) -> RunReport:
    """Run the verify/witness/query loop until solved or out of budget.

    Witness members are queried once per iteration in ascending index order;
    the verifier is re-checked before each query so a run stops as soon as a
    response settles the answer.  Point areas are never queriable.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    violations = validate_instance(instance)
    if violations:
        raise EngineError(f"invalid instance: {violations[0].reason}")
    if strategy.model_check is not None:
        err = strategy.model_check(instance.model)
        if err:
            raise StrategyModelError(err)
    strategy.reset()

    areas: List[Area] = list(instance.areas)
    counts: Dict[int, int] = {}
    log: List[Tuple[int, Area]] = []
    trace: List[tuple] = []

    while True:
        answer = strategy.verifier(areas)
        if answer is not None:
            return RunReport(
                answer, log, counts, len(log), RunStatus.SOLVED, tuple(areas), trace
            )
        witness = sorted(set(strategy.witness(areas)))
        if not witness:
            raise EngineError(f"strategy {strategy.name} returned an empty witness set")
        if len(witness) > strategy.k_bound:
            raise EngineError(
                f"witness set {witness} exceeds k_bound={strategy.k_bound}"
            )
        trace.append((tuple(witness), tuple(areas), dict(counts)))
        for pos, idx in enumerate(witness):
            if areas[idx].is_point:
                raise EngineError(f"witness set names unqueriable point area {idx + 1}")
            if pos > 0 and strategy.verifier(areas) is not None:
                break
            if len(log) >= budget:
                return RunReport(
                    None, log, counts, len(log), RunStatus.BUDGET_EXCEEDED, tuple(areas), trace
                )
            counts[idx] = counts.get(idx, 0) + 1
            response = oracle.respond(idx, counts[idx], areas[idx])
            err = validate_response(instance.model, areas[idx], response)
            if err is not None:
                raise OracleResponseError(f"index {idx + 1}: {err}")
            areas[idx] = response
            log.append((idx, response))
