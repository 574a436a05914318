"""The ten acceptance criteria, one test each, at their stated tolerances.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""
import contextlib
import itertools
import math
import time

import numpy as np
import pytest

from msl import (
    ClassicalSecretary,
    KleinbergUNI,
    PAV,
    RandomBasis,
    SparsePavingMatroid,
    ThresholdGreedy,
    UniformMatroid,
    complete_graph,
    connectivity,
    evaluate_exact,
    evaluate_monte_carlo,
    fano,
    lemma_lambda_witness,
    lift_wrap,
    multi_project_wrap,
    perturb_wrap,
    project_wrap,
    r10,
    regular_compose,
    restrict_wrap,
    same_rank_function,
    tree_compose,
)
from msl.algorithms import classical_success_probability
from msl.combinators import Extend
from msl.enumeration import (
    basis_membership,
    density,
    enumerate_bases,
    enumerate_circuits,
    is_paving,
    opt,
)
from msl.experiments import DEFAULT_GAMMA, ledger_verify, pav_sweep, rb_sweep, uni_sweep
from msl.connectivity import PerturbationStep
from msl.fixtures import (
    direct_sum_decomposition,
    graphic_two_sum,
    k4_triangle_star,
    medium_fixtures,
    small_fixtures,
    two_k5_graph,
)

from conftest import ACCEPTANCE, all_subsets


@contextlib.contextmanager
def criterion(k, label):
    t0 = time.perf_counter()
    info = {}
    try:
        yield info
    except BaseException as exc:
        ACCEPTANCE[k] = (False, f"{label} ({type(exc).__name__}: {str(exc)[:120]})")
        raise
    extra = info.get("detail", "")
    ACCEPTANCE[k] = (True, f"{label} [{time.perf_counter() - t0:.1f}s{'; ' + extra if extra else ''}]")


def algorithms_for(M):
    """Every leaf algorithm that applies to ``M``."""
    nl = M.ground - M.loops()
    algs = [Extend(ClassicalSecretary(ground=nl), M.ground) if nl else None,
            RandomBasis(M), ThresholdGreedy(M)]
    if isinstance(M, UniformMatroid) and M.full_rank >= 1:
        algs.append(KleinbergUNI(M.full_rank, ground=M.ground))
    known_paving = isinstance(M, (UniformMatroid, SparsePavingMatroid))
    if M.full_rank >= 2 and (known_paving or (len(M) <= 20 and is_paving(M))):
        algs.append(PAV(M))
    return [a for a in algs if a is not None]


def wrappers_for(M):
    """(algorithm, target matroid) pairs for each wrapper on ``M``."""
    out = []
    E = sorted(M.ground)
    nonloops = [e for e in E if not M.is_loop(e)]
    R = frozenset(E[:-1])
    out.append((restrict_wrap(ThresholdGreedy(M), R), M.restrict(R)))
    if nonloops:
        x = nonloops[0]
        out.append((lift_wrap(M, x, ThresholdGreedy(M.contract([x]))), M.delete([x])))
        N = M.contract([x])
        ground = M.delete([x]).ground - N.loops()
        out.append((project_wrap(M, x, ThresholdGreedy(M.delete([x]).restrict(ground))),
                    N.restrict(ground)))
    X = frozenset(E[: len(E) // 2])
    wit = lemma_lambda_witness(M, X)
    alg = multi_project_wrap(wit, ThresholdGreedy(M.restrict(X)))
    final = M.contract(M.ground - X)
    out.append((alg, final.restrict(alg.ground)))
    return out


def weights_for(M, seed):
    rng = np.random.default_rng(seed)
    return (1.0 - rng.random(len(M))).tolist()


_EXACT: dict = {}


def exact_report(name, M, alg, w):
    key = (name, alg.name)
    if key not in _EXACT:
        _EXACT[key] = evaluate_exact(alg, M, w, strict=True)
    return _EXACT[key]


# 1 ---------------------------------------------------------------------

def test_criterion_1_soundness():
    with criterion(1, "zero independence violations, exhaustive <=8 / Monte Carlo <=100") as info:
        t0 = time.perf_counter()
        runs = 0
        for i, (name, M) in enumerate(small_fixtures().items()):
            assert len(M) <= 8
            w = weights_for(M, i)
            for alg in algorithms_for(M):
                rep = exact_report(name, M, alg, w)
                assert rep.violations == 0, (name, alg.name)
                runs += 1
            for alg, target in wrappers_for(M):
                wt = [w[sorted(M.ground).index(e)] for e in sorted(target.ground)]
                if not target.ground:
                    continue
                rep = evaluate_exact(alg, target, wt, strict=True)
                assert rep.violations == 0, (name, alg.name)
                runs += 1
        for i, (name, M) in enumerate(medium_fixtures().items()):
            assert len(M) <= 100
            w = weights_for(M, 100 + i)
            algs = algorithms_for(M)
            if len(M) <= 30:
                algs += [a for a, _ in wrappers_for(M)]
            targets = [M] * len(algorithms_for(M)) + [t for _, t in wrappers_for(M)]
            for alg, target in zip(algs, targets):
                wt = [w[sorted(M.ground).index(e)] for e in sorted(target.ground)]
                rep = evaluate_monte_carlo(alg, target, wt, 10_000, seed=i, strict=True)
                assert rep.violations == 0, (name, alg.name)
                runs += 1
        # compositions: perturbation chain, tree and regular assemblies
        F = fano()
        s1 = PerturbationStep(F.delete([2]), 1, "lift")
        s2 = PerturbationStep(F.delete([1]), 2, "projection")
        # (algorithm, target, exhaustive?); the regular assembly's ghost and
        # projection coins make its exact tree too large, so it is sampled
        composed = [(perturb_wrap([s1, s2], ThresholdGreedy(s1.source)), s2.target, True)]
        for M, td in (k4_triangle_star(), direct_sum_decomposition()):
            composed.append((tree_compose(M, td, lambda N, v, l: ThresholdGreedy(N))[0], M, True))
        dec = graphic_two_sum()
        composed.append((regular_compose(dec)[0], dec.matroid.restrict(dec.target), False))
        M, td = two_k5_graph()
        composed.append((tree_compose(M, td, lambda N, v, l: ThresholdGreedy(N))[0], M, False))
        for alg, target, exhaustive in composed:
            w = weights_for(target, len(target))
            if exhaustive:
                rep = evaluate_exact(alg, target, w, strict=True)
            else:
                rep = evaluate_monte_carlo(alg, target, w, 10_000, seed=3, strict=True)
            assert rep.violations == 0, alg.name
            runs += 1
        elapsed = time.perf_counter() - t0
        info["detail"] = f"{runs} evaluations"
        assert elapsed < 300


# 2 ---------------------------------------------------------------------

def test_criterion_2_exact_vs_monte_carlo():
    with criterion(2, "Monte Carlo within 3 SE of exact; greedy opt == brute force") as info:
        checked = 0
        for i, (name, M) in enumerate(small_fixtures().items()):
            w = weights_for(M, i)
            for alg in algorithms_for(M):
                ex = exact_report(name, M, alg, w)
                mc = evaluate_monte_carlo(alg, M, w, 10_000, seed=1000 + i)
                assert abs(ex.mean - mc.mean) <= 3 * mc.se + 1e-12, (name, alg.name, ex.mean,
                                                                     mc.mean, mc.se)
                checked += 1
        rng = np.random.default_rng(0)
        pool = list(small_fixtures().values()) + [
            m for m in medium_fixtures().values() if len(m) <= 12] + [r10(), complete_graph(5)]
        for M in pool:
            assert len(M) <= 12
            for _ in range(5):
                w = rng.random(len(M)).tolist()
                wd = dict(zip(sorted(M.ground), w))
                brute = max(sum(wd[e] for e in B) for B in enumerate_bases(M))
                assert opt(M, w) == brute
        info["detail"] = f"{checked} exact/MC pairs, {len(pool)} greedy fixtures"


# 3 ---------------------------------------------------------------------

def test_criterion_3_rb():
    with criterion(3, "RB exact formula to 1e-12; rb_sweep within 2+gamma/sqrt(n)+3SE") as info:
        t0 = time.perf_counter()
        for i, (name, M) in enumerate(small_fixtures().items()):
            w = weights_for(M, i)
            memb = basis_membership(M)
            formula = math.fsum(wi * float(memb[e]) for e, wi in zip(sorted(M.ground), w))
            ex = exact_report(name, M, RandomBasis(M), w)
            assert abs(ex.mean - formula) <= 1e-12 * abs(formula), name
        rows = rb_sweep((20, 40, 80), seed=0, trials=10_000)
        for row in rows:
            assert row.r == row.n // 2
            assert row.bound == pytest.approx(2 + DEFAULT_GAMMA / math.sqrt(row.n))
            assert row.ratio <= row.bound + 3 * row.ratio_se and row.satisfied
        elapsed = time.perf_counter() - t0
        info["detail"] = "ratios " + ", ".join(f"n={r.n}:{r.ratio:.3f}<={r.bound:.3f}" for r in rows)
        assert elapsed < 60


# 4 ---------------------------------------------------------------------

def test_criterion_4_pav_uni():
    with criterion(4, "PAV and UNI sweeps within their bounds + 3 SE") as info:
        t0 = time.perf_counter()
        prow = pav_sweep((37, 49, 64), seed=0, trials=10_000)
        urow = uni_sweep((36, 48, 63), seed=0, trials=10_000)
        for row in prow:
            assert row.n == 2 * row.r
            assert row.bound == pytest.approx(1 / (1 - 6 / math.sqrt(row.r)))
            assert row.ratio <= row.bound + 3 * row.ratio_se
            assert row.extra["chain_inequality"]
        for row in urow:
            assert row.bound == pytest.approx(1 / (1 - 5 / math.sqrt(row.r)))
            assert row.ratio <= row.bound + 3 * row.ratio_se
        elapsed = time.perf_counter() - t0
        info["detail"] = "PAV " + ", ".join(f"r={r.r}:{r.ratio:.3f}" for r in prow) + \
            "; UNI " + ", ".join(f"r={r.r}:{r.ratio:.3f}" for r in urow)
        assert elapsed < 300


# 5 ---------------------------------------------------------------------

def test_criterion_5_classical():
    with criterion(5, "classical secretary success probabilities") as info:
        from fractions import Fraction

        rep = evaluate_exact(ClassicalSecretary(3, 1), UniformMatroid(1, 3), [1, 0, 0])
        assert Fraction(rep.mean).limit_denominator(1000) == Fraction(1, 2)
        assert classical_success_probability(3, 1) == Fraction(1, 2)

        target = Fraction(3, 10) * sum(Fraction(1, j - 1) for j in range(4, 11))
        assert classical_success_probability(10, 3) == target
        # independent exact count over all 10! orders
        hits = 0
        for p in itertools.permutations(range(10)):
            b = max(p[:3])
            for v in p[3:]:
                if v > b:
                    hits += v == 9
                    break
        assert Fraction(hits, math.factorial(10)) == target
        w = [1.0] + [0.0] * 9
        mc = evaluate_monte_carlo(ClassicalSecretary(10, 3), UniformMatroid(1, 10), w, 10_000,
                                  seed=5)
        assert abs(mc.mean - float(target)) <= 3 * mc.se
        info["detail"] = f"n=10: exact {float(target):.4f}, MC {mc.mean:.4f} +- {mc.se:.4f}"


# 6 ---------------------------------------------------------------------

def test_criterion_6_ledger():
    with criterion(6, "wrapper ratio ledger, one-sided 3 SE") as info:
        rows = ledger_verify(seed=0, trials=10_000)
        bad = [r for r in rows if not r.satisfied or r.violations]
        assert not bad, [(r.fixture, r.wrapper, r.weights, r.ratio, r.bound) for r in bad]
        kinds = {r.wrapper for r in rows}
        assert {"lift", "project", "perturb2", "multiproject", "tree", "regular"} <= kinds
        info["detail"] = f"{len(rows)} rows"


# 7 ---------------------------------------------------------------------

def test_criterion_7_lambda_witness():
    with criterion(7, "lambda witness rank identities, exhaustive for |E| <= 10") as info:
        pairs = 0
        pool = list(small_fixtures().values()) + [r10(), complete_graph(5),
                                                  UniformMatroid(5, 10)]
        for M in pool:
            assert len(M) <= 10
            E = M.ground
            for X in all_subsets(E):
                wit = lemma_lambda_witness(M, X)
                I3 = frozenset(wit.I3)
                assert len(I3) == connectivity(M, X)
                assert same_rank_function(wit.N.delete(I3), M.restrict(X))
                assert same_rank_function(wit.N.contract(I3), M.contract(E - X))
                pairs += 1
        info["detail"] = f"{pairs} (M, X) pairs"


# 8 ---------------------------------------------------------------------

def test_criterion_8_lambda_properties():
    with criterion(8, "lambda symmetric and submodular") as info:
        checks = 0
        for M in small_fixtures().values():
            E = M.ground
            lam = {X: connectivity(M, X) for X in all_subsets(E)}
            for X in lam:
                assert lam[X] == lam[E - X]
            for X, Y in itertools.combinations(lam, 2):
                assert lam[X] + lam[Y] >= lam[X | Y] + lam[X & Y]
                checks += 1
        rng = np.random.default_rng(8)
        for M in list(medium_fixtures().values()) + [r10()]:
            E = np.array(sorted(M.ground))
            for _ in range(10_000):
                X = frozenset(E[rng.random(len(E)) < 0.5].tolist())
                Y = frozenset(E[rng.random(len(E)) < 0.5].tolist())
                lx, ly = connectivity(M, X), connectivity(M, Y)
                assert lx == connectivity(M, M.ground - X)
                assert lx + ly >= connectivity(M, X | Y) + connectivity(M, X & Y)
                checks += 1
        info["detail"] = f"{checks} pairs"


# 9 ---------------------------------------------------------------------

def test_criterion_9_additivity():
    with criterion(9, "thickness-0 tree composition is additive") as info:
        M, td = direct_sum_decomposition()
        w = [0.83, 0.27, 0.61, 0.49]
        alg, plan = tree_compose(M, td, lambda N, v, l: ThresholdGreedy(N))
        assert plan.thickness == 0
        total = evaluate_exact(alg, M, w).mean
        parts = 0.0
        for p in td.parts.values():
            sub = M.restrict(p)
            parts += evaluate_exact(ThresholdGreedy(sub), sub, [w[e - 1] for e in sorted(p)]).mean
        assert abs(total - parts) <= 1e-12 * abs(parts)
        info["detail"] = f"{total:.12f} == {parts:.12f}"


# 10 --------------------------------------------------------------------

def test_criterion_10_r10():
    with criterion(10, "R10: 10 elements, rank 5, circuits >= 4, density 2") as info:
        R = r10()
        assert len(R) == 10 and R.full_rank == 5
        circuits = enumerate_circuits(R)
        assert min(len(C) for C in circuits) >= 4
        assert density(R) == 2
        info["detail"] = f"{len(circuits)} circuits, {len(enumerate_bases(R))} bases"
