"""Staged learning of countable concept classes under a target prior.

A countable class cannot be learned with a uniformly bounded number of
equivalence queries, even when every finite prefix has tiny dimension:
the interval family below is the standard witness. It becomes learnable
in expectation once the target is drawn from a known prior tau. The
staged learner runs the finite max-min learner on growing enumeration
prefixes with shrinking failure budgets:

  stage k:  eps_k = 1 / 2**(k+1)
            prefix   = shortest enumeration prefix with prior mass >= 1 - eps_k
            budget   = smallest n whose chance of fewer than d dimension
                       drops in n fair-coin queries is below eps_k, where
                       d bounds the dimension of every prefix

Within a stage the learner proposes hypotheses from the prefix concepts
still consistent with every counterexample seen so far, evaluated on an
exact finite atomization of the real domain. When the budget runs out or
no consistent prefix concept remains, the next stage restarts with a
longer prefix and a stricter budget. Since the target sits inside all
late-enough prefixes and each stage fails with probability at most
2 * eps_k, the total expected query count is finite.
"""

from __future__ import annotations

import math
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator

from .concepts import Concept, ConceptClass, Domain
from .learner import TeacherResponse, derive_seed, sample_index, teacher_respond, unit_variate
from .littlestone import LdimCache, ldim
from .querygraph import QueryGraph, max_min_query

__all__ = [
    "AtomizedPrefix",
    "CountableFamily",
    "FiniteFamily",
    "IntervalFamily",
    "PriorExhaustedError",
    "StageSchedule",
    "StagedResult",
    "StagedSummary",
    "negative_feedback_probability",
    "prefix_size",
    "run_staged_learner",
    "sample_target",
    "schedule_for",
    "stage_epsilon",
    "staged_trials",
    "step_budget",
]


class PriorExhaustedError(ValueError):
    """A truncated enumeration ran out before reaching the required mass."""


@dataclass(frozen=True)
class AtomizedPrefix:
    """Finite image of an enumeration prefix.

    `cls` holds one concept per prefix member, in the order the handles
    were given, over a domain whose points are atoms on which every
    prefix concept is constant. `locate` maps a real domain point to the
    name of its atom, so real counterexamples translate to atom-level
    restrictions without losing information about the prefix.
    """

    cls: ConceptClass
    locate: Callable[[Any], str]


class CountableFamily(ABC):
    """A countable concept class with an enumeration and a target prior.

    Concepts are addressed by their 0-based enumeration index. Points of
    the underlying domain are family specific (rationals for interval
    families, point names for finite ones); only `atomize` and `respond`
    touch them.
    """

    #: upper bound on the dimension of every enumeration prefix, >= 1
    ldim_bound: int = 1

    #: number of concepts, or None when the enumeration is infinite
    size: int | None = None

    @abstractmethod
    def prior(self, index: int) -> Fraction:
        """Prior probability of the concept at `index`."""

    @abstractmethod
    def eval(self, index: int, point: Any) -> int:
        """Label the concept at `index` assigns to a real domain point."""

    @abstractmethod
    def atomize(self, indices: list[int]) -> AtomizedPrefix:
        """Exact finite quotient of the domain for the given concepts."""

    @abstractmethod
    def respond(self, target: int, hypothesis: int, rng: random.Random) -> TeacherResponse:
        """Teacher step over real points, exactly as the finite teacher."""

    @abstractmethod
    def describe(self) -> str:
        """Short functional name used in reports."""

    def priors(self) -> Iterator[Fraction]:
        i = 0
        while self.size is None or i < self.size:
            yield self.prior(i)
            i += 1


def stage_epsilon(stage: int) -> Fraction:
    """Failure budget of a stage: eps_k = 1 / 2**(k+1), stages from 1."""
    if stage < 1:
        raise ValueError("stages are numbered from 1")
    return Fraction(1, 2 ** (stage + 1))


def prefix_size(priors: Iterable[Fraction], eps: Fraction) -> int:
    """Shortest prefix whose cumulative prior mass reaches 1 - eps.

    Raises PriorExhaustedError when a finite (truncated) enumeration
    ends first.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    need = 1 - eps
    acc = Fraction(0)
    for n, w in enumerate(priors, start=1):
        acc += w
        if acc >= need:
            return n
    raise PriorExhaustedError(f"enumeration ended at mass {acc}, needed {need}")


def step_budget(dimension_bound: int, eps: Fraction) -> int:
    """Smallest query budget that fails with probability below eps.

    Each query before identification drops the class dimension with
    probability at least 1/2, so a stage with dimension bound d fails
    only if n queries produce fewer than d drops. The exact fair-coin
    tail sum(C(n, j) for j < d) / 2**n is driven below eps; no looser
    closed form is used, keeping the budget minimal.
    """
    if dimension_bound < 1:
        raise ValueError("dimension bound must be at least 1")
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    n = 1
    while True:
        tail = Fraction(
            sum(math.comb(n, j) for j in range(min(dimension_bound, n + 1))), 2**n
        )
        if tail < eps:
            return n
        n += 1


@dataclass(frozen=True)
class StageSchedule:
    """Resolved parameters of one stage."""

    stage: int
    eps: Fraction
    prefix: int
    budget: int


def schedule_for(family: CountableFamily, stage: int) -> StageSchedule:
    eps = stage_epsilon(stage)
    return StageSchedule(
        stage=stage,
        eps=eps,
        prefix=prefix_size(family.priors(), eps),
        budget=step_budget(family.ldim_bound, eps),
    )


class IntervalFamily(CountableFamily):
    """Open intervals (1/(n+1), 1/n) for n >= 1 under a geometric prior.

    The intervals are pairwise disjoint, so every prefix has dimension
    exactly 1 once it holds two concepts, yet no finite query bound works
    for an adversarial target: a hypothesis interval almost always eats
    the counterexample mass of a much smaller target interval, yielding
    only the near-useless negative answer. The geometric prior
    tau(n) = ratio * (1 - ratio)**(n-1) restores finite expected cost.

    Points are exact rationals in (0, 1); the n-th concept (0-based
    index n-1) labels x positive iff 1/(n+1) < x < 1/n.
    """

    def __init__(self, ratio: Fraction = Fraction(1, 2)) -> None:
        ratio = Fraction(ratio)
        if not 0 < ratio < 1:
            raise ValueError("prior ratio must lie strictly between 0 and 1")
        self.ratio = ratio
        self.ldim_bound = 1
        self.size = None

    def describe(self) -> str:
        return f"intervals(ratio={self.ratio})"

    def interval(self, index: int) -> tuple[Fraction, Fraction]:
        """Open interval of the concept at 0-based `index`."""
        if index < 0:
            raise ValueError("enumeration indices start at 0")
        n = index + 1
        return Fraction(1, n + 1), Fraction(1, n)

    def length(self, index: int) -> Fraction:
        low, high = self.interval(index)
        return high - low

    def prior(self, index: int) -> Fraction:
        if index < 0:
            raise ValueError("enumeration indices start at 0")
        return self.ratio * (1 - self.ratio) ** index

    def eval(self, index: int, point: Any) -> int:
        low, high = self.interval(index)
        return 1 if low < point < high else 0

    def atomize(self, indices: list[int]) -> AtomizedPrefix:
        if len(set(indices)) != len(indices):
            raise ValueError("duplicate enumeration indices")
        names = [f"i{i + 1}" for i in indices]
        lengths = [self.length(i) for i in indices]
        rest = 1 - sum(lengths, Fraction(0))
        # total interval length is sum 1/(n(n+1)) = 1, so any finite
        # selection leaves the remainder atom strictly positive mass
        domain = Domain(tuple(names) + ("rest",), tuple(lengths) + (rest,))
        concepts = []
        for k in range(len(indices)):
            bits = tuple(1 if j == k else 0 for j in range(len(indices))) + (0,)
            concepts.append(Concept(domain, bits))
        cls = ConceptClass(domain, tuple(concepts), tuple(names))
        spans = [(name, self.interval(i)) for name, i in zip(names, indices)]

        def locate(point: Any) -> str:
            for name, (low, high) in spans:
                if low < point < high:
                    return name
            return "rest"

        return AtomizedPrefix(cls, locate)

    def respond(self, target: int, hypothesis: int, rng: random.Random) -> TeacherResponse:
        if target == hypothesis:
            return TeacherResponse()
        parts = [hypothesis, target]
        pick = parts[sample_index([self.length(i) for i in parts], rng)]
        low, high = self.interval(pick)
        offset = unit_variate(rng) * (high - low)
        if offset == 0:
            # 0 would land on the open boundary; use the midpoint instead
            offset = (high - low) / 2
        point = low + offset
        return TeacherResponse(point, self.eval(target, point))


class FiniteFamily(CountableFamily):
    """A finite concept class file read as a (possibly truncated) family.

    Enumeration order is the class's concept order; the prior is the
    file's tau entry. A tau summing below 1 models a truncated
    enumeration: stages whose mass demand exceeds the total raise
    PriorExhaustedError.
    """

    def __init__(
        self,
        concept_class: ConceptClass,
        tau: tuple[Fraction, ...],
        name: str = "finite",
    ) -> None:
        if len(tau) != len(concept_class):
            raise ValueError("need exactly one prior weight per concept")
        if any(t < 0 for t in tau):
            raise ValueError("prior weights must be nonnegative")
        if sum(tau, Fraction(0)) > 1:
            raise ValueError("prior weights must sum to at most 1")
        if len(concept_class) == 0:
            raise ValueError("a family needs at least one concept")
        self.concept_class = concept_class
        self.tau = tau
        self.name = name
        self.size = len(concept_class)
        self.ldim_bound = max(1, ldim(concept_class))

    def describe(self) -> str:
        return self.name

    def prior(self, index: int) -> Fraction:
        return self.tau[index]

    def eval(self, index: int, point: Any) -> int:
        return self.concept_class.concepts[index].value(point)

    def atomize(self, indices: list[int]) -> AtomizedPrefix:
        cc = self.concept_class
        cls = ConceptClass(
            cc.domain,
            tuple(cc.concepts[i] for i in indices),
            tuple(cc.label(i) for i in indices),
        )
        return AtomizedPrefix(cls, lambda point: point)

    def respond(self, target: int, hypothesis: int, rng: random.Random) -> TeacherResponse:
        cc = self.concept_class
        return teacher_respond(cc.concepts[target], cc.concepts[hypothesis], cc.domain, rng)


@dataclass(frozen=True)
class StagedResult:
    """Outcome of one staged run.

    `history` lists every counterexample as (real point, target label);
    by construction the target is consistent with all of them. When
    `identified` is False the run used up the stage cap.
    """

    identified: bool
    queries: int
    stages: int
    history: tuple[tuple[Any, int], ...]
    seed: int | None = None


def run_staged_learner(
    family: CountableFamily,
    target: int,
    rng: random.Random,
    stage_cap: int = 30,
    seed: int | None = None,
) -> StagedResult:
    """Learn an enumeration member with staged prefixes and budgets.

    Counterexample history carries across stages; each stage keeps only
    prefix concepts consistent with the history, so the target is never
    discarded from any prefix that contains it. Returns an unidentified
    result (never raises) when `stage_cap` stages all fail.
    """
    if target < 0 or (family.size is not None and target >= family.size):
        raise ValueError("target is not a valid enumeration index")
    history: list[tuple[Any, int]] = []
    queries = 0
    for stage in range(1, stage_cap + 1):
        plan = schedule_for(family, stage)
        live = [
            i
            for i in range(plan.prefix)
            if all(family.eval(i, point) == label for point, label in history)
        ]
        if not live:
            continue
        atoms = family.atomize(live)
        cache = LdimCache(atoms.cls)
        graph = QueryGraph(atoms.cls, cache)
        mask = cache.full_mask
        for _ in range(plan.budget):
            if mask == 0:
                break
            local = graph.best_query(mask)
            response = family.respond(target, live[local], rng)
            queries += 1
            if response.equivalent:
                return StagedResult(True, queries, stage, tuple(history), seed)
            history.append((response.point, response.label))
            atom_index = atoms.cls.domain.index(atoms.locate(response.point))
            mask = cache.restrict_mask(mask, atom_index, response.label)
    return StagedResult(False, queries, stage_cap, tuple(history), seed)


def sample_target(family: CountableFamily, rng: random.Random) -> int:
    """Draw an enumeration index from the family's prior."""
    u = unit_variate(rng)
    acc = Fraction(0)
    for i, w in enumerate(family.priors()):
        acc += w
        if acc > u:
            return i
    raise PriorExhaustedError(f"prior mass {acc} exhausted below variate {u}")


@dataclass(frozen=True)
class StagedSummary:
    """Summary of seeded staged runs with prior-drawn targets."""

    family: str
    trials: int
    seed: int
    stage_cap: int
    identified: int
    mean: Fraction
    variance: Fraction
    max_queries: int
    counts: tuple[int, ...]

    def as_dict(self) -> dict[str, Any]:
        return {
            "class": self.family,
            "target": "tau",
            "trials": self.trials,
            "seed": self.seed,
            "stage_cap": self.stage_cap,
            "identified": self.identified,
            "mean": str(self.mean),
            "variance": str(self.variance),
            "max": self.max_queries,
        }

    def csv_row(self) -> str:
        return (
            f"{self.family},tau,{self.trials},{self.seed},"
            f"{self.mean},{self.variance},{self.max_queries}"
        )

    @staticmethod
    def csv_header() -> str:
        return "class,target,trials,seed,mean,variance,max"


def staged_trials(
    family: CountableFamily,
    trials: int,
    seed: int,
    stage_cap: int = 30,
) -> StagedSummary:
    """Seeded staged runs, one prior-drawn target per trial."""
    if trials < 1:
        raise ValueError("need at least one trial")
    counts: list[int] = []
    identified = 0
    for i in range(trials):
        rng = random.Random(derive_seed(seed, i))
        target = sample_target(family, rng)
        result = run_staged_learner(family, target, rng, stage_cap)
        counts.append(result.queries)
        if result.identified:
            identified += 1
    mean = Fraction(sum(counts), trials)
    if trials > 1:
        variance = sum((Fraction(c) - mean) ** 2 for c in counts) / (trials - 1)
    else:
        variance = Fraction(0)
    return StagedSummary(
        family=family.describe(),
        trials=trials,
        seed=seed,
        stage_cap=stage_cap,
        identified=identified,
        mean=mean,
        variance=variance,
        max_queries=max(counts),
        counts=tuple(counts),
    )


def negative_feedback_probability(
    family: IntervalFamily,
    prefix: int,
    target: int,
) -> Fraction:
    """Chance the first counterexample lands inside the queried interval.

    The plain (unstaged) max-min learner on the first `prefix` interval
    concepts proposes the smallest interval of the prefix. Against a
    target interval of index `target` (0-based, outside or inside the
    prefix but different from the proposal), the teacher's draw lands in
    the hypothesis interval, where the target's label is 0, with
    probability len(hyp) / (len(hyp) + len(target)). As the target index
    grows this tends to 1: the learner almost always receives only the
    useless negative answer, which is why no uniform query bound exists
    for the unstaged learner on this family.
    """
    if prefix < 1:
        raise ValueError("prefix must hold at least one concept")
    indices = list(range(prefix))
    atoms = family.atomize(indices)
    proposal = atoms.cls.index_of(max_min_query(atoms.cls))
    hyp = indices[proposal]
    if hyp == target:
        raise ValueError("the proposal equals the target; no counterexample exists")
    len_h = family.length(hyp)
    len_t = family.length(target)
    return len_h / (len_h + len_t)
