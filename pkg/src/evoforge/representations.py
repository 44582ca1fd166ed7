"""Representation classes: monotone conjunctions and term-wise DNF evolution.

A conjunction mutates by adding, removing, or swapping a single variable.
DNFs with a known clause count are evolved clause-by-clause, each term
against its own slice of the target, then recombined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .boolfn import (Assignment, MonotoneConjunction, MonotoneDnf,
                     OutputConvention, conj_perf_closed_form,
                     eval_conjunction)
from .engine import (CorrelationFitness, EvalCounters, EvolutionParams,
                     EvolutionTrace, RepresentationClass, evolve)
from .errors import KMismatchError, ParameterError
from .perf import Aggregator, PerfMatrix, SampleSpec, empirical_perf, gen_perf, \
    term_perf_matrix
from .rng import derive_seed


@dataclass(frozen=True)
class ConjunctionRep:
    """A monotone conjunction together with its clause-size cap q."""

    conj: MonotoneConjunction
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ParameterError(f"size cap must be >= 1, got {self.q}")
        if self.conj.size > self.q:
            raise ParameterError(
                f"conjunction has {self.conj.size} variables, cap is {self.q}")


def short_clause_cap(epsilon: float) -> int:
    """Size cap ceil(log2(3/epsilon)) for the short-clause regime."""
    if not 0 < epsilon < 1:
        raise ParameterError(f"epsilon must be in (0,1), got {epsilon}")
    return math.ceil(math.log2(3 / epsilon))


def conj_neighborhood(r: ConjunctionRep, n: int,
                      epsilon: float | None = None) -> list[ConjunctionRep]:
    """All single-edit mutations of r over variables 1..n, r itself first.

    Order: self, then additions by ascending variable, removals by
    ascending variable, swaps by (removed, added) ascending.  Additions
    are suppressed at the size cap.  Size is 1 + (n-v) + v + v*(n-v)
    when the cap does not bind, with v = |vars|.
    """
    present = sorted(r.conj.literals)
    absent = [v for v in range(1, n + 1) if v not in r.conj.literals]
    out = [r]
    seen = {r.conj.literals}

    def push(lits):
        fs = frozenset(lits)
        if fs not in seen:
            seen.add(fs)
            out.append(ConjunctionRep(MonotoneConjunction(fs), r.q))

    if r.conj.size < r.q:
        for v in absent:
            push(r.conj.literals | {v})
    for v in present:
        push(r.conj.literals - {v})
    for u in present:
        for w in absent:
            push((r.conj.literals - {u}) | {w})
    return out


def conj_mutation_weights(r: ConjunctionRep,
                          neighborhood: list[ConjunctionRep]) -> list[float]:
    """Uniform selection weights over the neighborhood."""
    return [1.0 / len(neighborhood)] * len(neighborhood)


def default_neigh_cap(n: int) -> int:
    """1 + 2n + ceil(n^2/4): the largest uncapped neighborhood plus slack."""
    return 1 + 2 * n + math.ceil(n * n / 4)


class ConjunctionClass(RepresentationClass):
    """Monotone conjunctions over n variables with add/remove/swap moves."""

    def __init__(self, n: int, q: int | None = None,
                 neigh_cap: int | None = None,
                 convention: OutputConvention = OutputConvention.SIGNED):
        if n < 1:
            raise ParameterError(f"n must be >= 1, got {n}")
        self.n = n
        self.q = n if q is None else q
        if not 1 <= self.q <= n:
            raise ParameterError(f"size cap must be in 1..{n}, got {self.q}")
        self.neigh_cap = default_neigh_cap(n) if neigh_cap is None else neigh_cap
        self.convention = convention

    def evaluate(self, rep: ConjunctionRep, x: Assignment) -> int:
        return eval_conjunction(rep.conj, x, self.convention)

    def neighborhood(self, rep: ConjunctionRep,
                     epsilon: float) -> list[ConjunctionRep]:
        return conj_neighborhood(rep, self.n, epsilon)

    def mutation_weights(self, rep: ConjunctionRep,
                         neighborhood: list[ConjunctionRep]) -> list[float]:
        return conj_mutation_weights(rep, neighborhood)

    def function(self, rep: ConjunctionRep) -> MonotoneConjunction:
        return rep.conj


def evolve_conjunction(target: MonotoneConjunction, params: EvolutionParams,
                       r0: ConjunctionRep | None = None, *,
                       q: int | None = None,
                       use_exact: bool = False) -> EvolutionTrace:
    """Evolve a monotone conjunction toward target under signed correlation.

    Starts from the empty conjunction unless r0 is given.  q bounds the
    clause size (default: n, effectively uncapped); the target must fit
    under it.  use_exact replaces sampling with exact expectations, for
    landscape diagnostics.
    """
    if r0 is not None and q is not None and r0.q != q:
        raise ParameterError(f"r0 carries cap {r0.q} but q={q} was given")
    q_eff = q if q is not None else (r0.q if r0 is not None else params.n)
    if target.size > q_eff:
        raise ParameterError(
            f"target has {target.size} variables, exceeding cap {q_eff}")
    if target.max_literal > params.n:
        raise ParameterError(
            f"target references x{target.max_literal} but n={params.n}")
    if r0 is None:
        r0 = ConjunctionRep(MonotoneConjunction(frozenset()), q_eff)
    cls = ConjunctionClass(params.n, q=q_eff)
    fitness = CorrelationFitness(target, exact_mode=use_exact)
    return evolve(r0, cls, target, params, fitness)


class BestClauseFitness:
    """Fitness of a clause as its best correlation against ANY target clause.

    Used by the redundancy experiments: with this signal every term is
    free to chase whichever target clause it currently resembles most,
    which is what lets several terms pile onto the same clause.  Each
    clause comparison burns its own derived sample stream.
    """

    def __init__(self, target: MonotoneDnf,
                 convention: OutputConvention = OutputConvention.SIGNED):
        self.target = target
        self.convention = convention

    def estimate(self, fn, n: int, s: int, seed: int,
                 counters: EvalCounters | None = None) -> float:
        if counters is not None:
            counters.add(self.target.k, self.target.k * s)
        return max(
            empirical_perf(fn, clause, n, SampleSpec(s, derive_seed(seed, i)),
                           self.convention)
            for i, clause in enumerate(self.target.clauses))

    def exact_value(self, fn, n: int) -> float | None:
        if not isinstance(fn, MonotoneConjunction):
            return None
        return float(max(conj_perf_closed_form(fn, c, self.convention)
                         for c in self.target.clauses))


@dataclass(frozen=True)
class DnfEvolutionPlan:
    """How to evolve a k-clause DNF: shared per-term params and reporting.

    aggregator picks the headline scalar from the clause-vs-clause
    matrix; combine_order permutes evolved clauses in the output DNF.
    """

    k: int
    params: EvolutionParams
    aggregator: Aggregator = Aggregator.MATCHED_MIN
    combine_order: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"clause count must be >= 1, got {self.k}")
        if not isinstance(self.aggregator, Aggregator):
            raise ParameterError(f"not an aggregator: {self.aggregator!r}")
        if self.combine_order is not None:
            if sorted(self.combine_order) != list(range(self.k)):
                raise ParameterError(
                    f"combine_order must permute 0..{self.k - 1}, "
                    f"got {self.combine_order}")


def term_seed(plan: DnfEvolutionPlan, i: int) -> int:
    """Run seed for term i; with k=1 term 0 reproduces evolve_conjunction
    called at this seed."""
    return derive_seed(plan.params.seed, i)


@dataclass(frozen=True)
class KdnfResult:
    result: MonotoneDnf
    traces: tuple[EvolutionTrace, ...]
    matrix: PerfMatrix
    gen_perfs: dict
    headline: float
    perf_evals: int
    samples_drawn: int


def evolve_kdnf(target: MonotoneDnf, plan: DnfEvolutionPlan, *,
                term_fitness: str = "paired",
                q: int | None = None) -> KdnfResult:
    """Evolve each clause of target separately, then recombine.

    term_fitness "paired" evolves term i against target clause i alone;
    "best_any" scores every term against its best-matching target clause
    (the redundancy-bias variant).  The exact clause-vs-clause matrix of
    the combined result is evaluated under every aggregator.
    """
    if plan.k != target.k:
        raise KMismatchError(
            f"plan expects {plan.k} clauses, target has {target.k}")
    if term_fitness not in ("paired", "best_any"):
        raise ParameterError(f"unknown term fitness mode: {term_fitness!r}")
    q_eff = q if q is not None else plan.params.n
    traces = []
    for i, clause in enumerate(target.clauses):
        tparams = replace(plan.params, seed=term_seed(plan, i))
        if term_fitness == "paired":
            traces.append(evolve_conjunction(clause, tparams, q=q_eff))
        else:
            if clause.size > q_eff:
                raise ParameterError(
                    f"target clause {i} has {clause.size} variables, "
                    f"exceeding cap {q_eff}")
            r0 = ConjunctionRep(MonotoneConjunction(frozenset()), q_eff)
            cls = ConjunctionClass(plan.params.n, q=q_eff)
            traces.append(evolve(r0, cls, clause, tparams,
                                 BestClauseFitness(target)))
    order = plan.combine_order or tuple(range(plan.k))
    result = MonotoneDnf(tuple(traces[j].final_rep.conj for j in order))
    matrix = term_perf_matrix(result, target, plan.params.n, mode="exact")
    gen_perfs = {agg: gen_perf(matrix, agg) for agg in Aggregator}
    return KdnfResult(result=result, traces=tuple(traces), matrix=matrix,
                      gen_perfs=gen_perfs, headline=gen_perfs[plan.aggregator],
                      perf_evals=sum(t.perf_evals for t in traces),
                      samples_drawn=sum(t.samples_drawn for t in traces))
