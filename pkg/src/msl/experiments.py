"""Experiment drivers: random sparse paving matroids, RB / PAV / UNI sweeps and
the wrapper ratio ledger."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import fixtures
from .algorithms import ClassicalSecretary, KleinbergUNI, PAV, RandomBasis, ThresholdGreedy
from .combinators import (
    E_PLUS_1,
    LiftWrap,
    ProjectWrap,
    multi_project_wrap,
    perturb_wrap,
    regular_compose,
    restrict_wrap,
    tree_compose,
)
from .connectivity import PerturbationStep, lemma_lambda_witness
from .enumeration import ENUMERATION_CAP, is_paving
from .errors import MatroidError
from .harness import (
    EXACT_SIZE_LIMIT,
    EvalReport,
    competitive_ratio,
    evaluate_exact,
    evaluate_monte_carlo,
)
from .matroid import Matroid, SparsePavingMatroid, UniformMatroid

DEFAULT_GAMMA = math.sqrt(8 * math.log(2)) + 0.01


def sample_sparse_paving(n: int, r: int, h: int, rng: np.random.Generator,
                         max_attempts: int | None = None) -> SparsePavingMatroid:
    """Keep random r-sets that meet every kept set in at most r-2 elements.

    Stops at ``h`` kept sets or after ``max_attempts`` draws (default ``20 h``);
    a shortfall is reported through ``M.shortfall`` and a warning.
    """
    if r < 2:
        raise MatroidError("need r >= 2")
    if h < 0 or r > n:
        raise MatroidError("need h >= 0 and r <= n")
    max_attempts = 20 * h + 20 if max_attempts is None else max_attempts
    kept: list[frozenset] = []
    attempts = 0
    while len(kept) < h and attempts < max_attempts:
        attempts += 1
        H = frozenset(int(e) + 1 for e in rng.choice(n, size=r, replace=False))
        if all(len(H & K) <= r - 2 for K in kept):
            kept.append(H)
    M = SparsePavingMatroid(r, n, kept)
    M.shortfall = h - len(kept)
    if M.shortfall:
        warnings.warn(f"sparse paving sampler kept {len(kept)} of {h} hyperplanes")
    if n <= ENUMERATION_CAP:
        assert is_paving(M)
    return M


def make_weights(model: str, n: int, rng: np.random.Generator) -> list[float]:
    """``uniform``: i.i.d. uniform on (0, 1]; ``heavy``: one random element of
    weight 1, the others i.i.d. uniform on (0, 0.001] (distinct, so exact
    evaluation need not enumerate tie-break rankings)."""
    if model == "uniform":
        return (1.0 - rng.random(n)).tolist()
    if model == "heavy":
        w = (0.001 * (1.0 - rng.random(n))).tolist()
        w[int(rng.integers(n))] = 1.0
        return w
    raise MatroidError(f"unknown weight model {model!r}")


def rb_exact_mean_sparse_paving(M: SparsePavingMatroid, w) -> float:
    """E[w(B)] for a uniform basis B by counting: |B| = C(n,r) - h and
    |B_e| = C(n-1,r-1) - #{H : e in H}."""
    n, r = M.n, M.r
    total = math.comb(n, r) - len(M.hyperplanes)
    through = dict.fromkeys(range(1, n + 1), 0)
    for H in M.hyperplanes:
        for e in H:
            through[e] += 1
    wd = w if isinstance(w, dict) else dict(zip(range(1, n + 1), w))
    return math.fsum(wd[e] * float(Fraction(math.comb(n - 1, r - 1) - through[e], total))
                     for e in range(1, n + 1))


@dataclass
class SweepRow:
    experiment: str
    n: int
    r: int
    algorithm: str
    weights: str
    trials: int
    mean: float
    se: float
    opt: float
    ratio: float
    ratio_se: float
    bound: float
    satisfied: bool
    exact_mean: float | None = None
    extra: dict = field(default_factory=dict)

    COLUMNS = ("experiment", "n", "r", "algorithm", "weights", "trials", "mean", "se", "opt",
               "ratio", "ratio_se", "bound", "satisfied", "exact_mean")

    def csv_row(self) -> dict:
        return {k: getattr(self, k) for k in self.COLUMNS}

    def to_dict(self) -> dict:
        return asdict(self)


def _row(experiment, rep: EvalReport, weights, bound, exact_mean=None, **extra) -> SweepRow:
    ratio_se = rep.ratio * rep.se / rep.mean if rep.mean > 0 else 0.0
    satisfied = bool(rep.ratio <= bound + 3 * ratio_se) if math.isfinite(bound) else True
    return SweepRow(experiment, rep.n, rep.r, rep.algorithm, weights, rep.trials, rep.mean,
                    rep.se, rep.opt, rep.ratio, ratio_se, bound, satisfied, exact_mean, extra)


def _row_seeds(seed, count):
    return np.random.SeedSequence(seed).spawn(count)


def rb_sweep(n_values=(20, 40, 80), seed: int = 0, trials: int = 10_000,
             gamma: float = DEFAULT_GAMMA, hyperplanes=None, weights: str = "uniform",
             workers: int = 1) -> list[SweepRow]:
    """RB on random sparse paving matroids of rank floor(n/2) versus 2 + gamma/sqrt(n)."""
    rows = []
    for n, ss in zip(n_values, _row_seeds(seed, len(n_values))):
        rng = np.random.default_rng(ss)
        r = n // 2
        h = n if hyperplanes is None else hyperplanes
        M = sample_sparse_paving(n, r, h, rng)
        w = make_weights(weights, n, rng)
        rep = evaluate_monte_carlo(RandomBasis(M), M, w, trials, int(rng.integers(2**32)), workers)
        exact = rb_exact_mean_sparse_paving(M, w)
        rows.append(_row("rb_sweep", rep, weights, 2 + gamma / math.sqrt(n), exact,
                         hyperplanes=len(M.hyperplanes), gamma=gamma,
                         exact_ratio=competitive_ratio(rep.opt, exact)))
    return rows


def pav_bound(r: int) -> float:
    return 1 / (1 - 6 / math.sqrt(r)) if r > 36 else math.inf


def uni_bound(r: int) -> float:
    return 1 / (1 - 5 / math.sqrt(r)) if r > 25 else math.inf


def pav_chain_holds(r: int) -> bool:
    """(1 - 5/sqrt(r-1)) (1 - 1/r) >= 1 - 6/sqrt(r)."""
    return (1 - 5 / math.sqrt(r - 1)) * (1 - 1 / r) >= 1 - 6 / math.sqrt(r)


def pav_sweep(r_values=(37, 49, 64), seed: int = 0, trials: int = 10_000, n_of_r=None,
              hyperplanes=None, weights: str = "uniform", workers: int = 1) -> list[SweepRow]:
    """PAV on random sparse paving matroids versus (1 - 6/sqrt(r))^-1."""
    n_of_r = n_of_r or (lambda r: 2 * r)
    rows = []
    for r, ss in zip(r_values, _row_seeds(seed, len(r_values))):
        rng = np.random.default_rng(ss)
        n = n_of_r(r)
        h = n if hyperplanes is None else hyperplanes
        M = sample_sparse_paving(n, r, h, rng)
        w = make_weights(weights, n, rng)
        rep = evaluate_monte_carlo(PAV(M), M, w, trials, int(rng.integers(2**32)), workers)
        rows.append(_row("pav_sweep", rep, weights, pav_bound(r),
                         hyperplanes=len(M.hyperplanes), uni_sub_bound=uni_bound(r - 1),
                         chain_inequality=pav_chain_holds(r)))
    return rows


def uni_sweep(r_values=(36, 48, 63), seed: int = 0, trials: int = 10_000, n_of_r=None,
              weights: str = "uniform", workers: int = 1) -> list[SweepRow]:
    """UNI on U_{r,n} versus (1 - 5/sqrt(r))^-1; n defaults to 2(r+1), the
    size PAV hands to UNI at rank r+1."""
    n_of_r = n_of_r or (lambda r: 2 * (r + 1))
    rows = []
    for r, ss in zip(r_values, _row_seeds(seed, len(r_values))):
        rng = np.random.default_rng(ss)
        n = n_of_r(r)
        M = UniformMatroid(r, n)
        w = make_weights(weights, n, rng)
        rep = evaluate_monte_carlo(KleinbergUNI(r, n), M, w, trials, int(rng.integers(2**32)),
                                   workers)
        rows.append(_row("uni_sweep", rep, weights, uni_bound(r)))
    return rows


# -- wrapper ledger ------------------------------------------------------


@dataclass
class LedgerRow:
    fixture: str
    wrapper: str
    weights: str
    mode: str
    inner_ratio: float
    ratio: float
    bound: float
    mean: float
    se: float
    opt: float
    satisfied: bool
    violations: int

    COLUMNS = ("fixture", "wrapper", "weights", "mode", "inner_ratio", "ratio", "bound", "mean",
               "se", "opt", "satisfied", "violations")

    def csv_row(self) -> dict:
        return {k: getattr(self, k) for k in self.COLUMNS}


def evaluate(alg, M: Matroid, w, trials: int, seed: int, exact: bool = True) -> EvalReport:
    """Exact when allowed, small enough and the coin space is finite; Monte Carlo otherwise."""
    if exact and len(M) <= EXACT_SIZE_LIMIT and alg.finite_coins:
        return evaluate_exact(alg, M, w)
    return evaluate_monte_carlo(alg, M, w, trials, seed)


def _restrict_w(w: dict, ground) -> dict:
    return {e: w[e] for e in ground}


def _ledger_cases():
    """(fixture, wrapper kind, build) triples.  ``build()`` returns
    ``(inner_alg, inner_matroid, wrapped_alg, wrapped_matroid, transform)``."""
    from .matroid import UniformMatroid as U, complete_graph, fano

    def lift(L, x):
        def build():
            M = L.contract([x])
            inner = ThresholdGreedy(M)
            alg = LiftWrap(L, x, inner)
            return [(inner, M)], alg, alg.N, LiftWrap.bound
        return build

    def project(P, x):
        def build():
            N = P.contract([x])
            M = P.delete([x])
            R = M.ground - N.loops()
            inner_M = M.restrict(R)
            inner = ThresholdGreedy(inner_M)
            alg = ProjectWrap(P, x, inner)
            return [(inner, inner_M)], alg, inner_M, ProjectWrap.bound
        return build

    def perturb(Q, x, y):
        def build():
            s1 = PerturbationStep(Q.delete([y]), x, "lift")
            s2 = PerturbationStep(Q.delete([x]), y, "projection")
            M0 = s1.source
            inner = ThresholdGreedy(M0)
            alg = perturb_wrap([s1, s2], inner)
            return [(inner, M0)], alg, s2.target, lambda c: E_PLUS_1 ** 2 * c
        return build

    def multiproject(M, X):
        def build():
            wit = lemma_lambda_witness(M, X)
            src = M.restrict(X)
            inner = ThresholdGreedy(src)
            alg = multi_project_wrap(wit, inner)
            return [(inner, src)], alg, src.restrict(alg.ground), \
                lambda c: E_PLUS_1 ** wit.t * c
        return build

    def tree(M, td):
        def build():
            alg, plan = tree_compose(M, td, lambda N, v, l: ThresholdGreedy(N))
            leaves = [(ThresholdGreedy(M.restrict(M.closure(td.parts[v]))),
                       M.restrict(M.closure(td.parts[v]))) for v in td.vertices]
            return leaves, alg, M, lambda c: E_PLUS_1 ** plan.thickness * c
        return build

    def regular(dec):
        def build():
            alg, plan = regular_compose(dec)
            M = dec.matroid
            leaves = [(ThresholdGreedy(M.restrict(M.closure(dec.td.parts[v]))),
                       M.restrict(M.closure(dec.td.parts[v]))) for v in dec.td.vertices]
            return leaves, alg, M.restrict(dec.target), \
                lambda c: E_PLUS_1 ** plan.thickness * c
        return build

    K4 = complete_graph(4)
    big = fixtures.medium_fixtures()["sparsepaving(6,30,h3)"]
    cases = [
        ("U2,3", "lift", lift(U(2, 3), 1)),
        ("M(K4)", "lift", lift(K4, 1)),
        ("triangle+3parallel", "lift", lift(fixtures.triple_parallel_graph(), 1)),
        ("M(K7)", "lift", lift(complete_graph(7), 1)),
        ("U2,3", "project", project(U(2, 3), 1)),
        ("M(K4)", "project", project(K4, 1)),
        ("F7", "project", project(fano(), 1)),
        ("sparsepaving(6,30,h3)", "project", project(big, 1)),
        ("F7", "perturb2", perturb(fano(), 1, 2)),
        ("M(K7)", "perturb2", perturb(complete_graph(7), 1, 21)),
        ("U3,5", "multiproject", multiproject(U(3, 5), {1, 2, 3})),
        ("M(K4)", "multiproject", multiproject(K4, {3, 5, 6})),
        ("M(K4)", "tree", tree(*fixtures.k4_triangle_star())),
        ("U1,2+U1,2", "tree", tree(*fixtures.direct_sum_decomposition())),
        ("K5 (2-sum) K5", "tree", tree(*fixtures.two_k5_graph())),
        # ghosts and projection coins make the exact coin tree far too large here
        ("2-sum(C4,C4)", "regular", regular(fixtures.graphic_two_sum()), False),
    ]
    return cases


def ledger_verify(seed: int = 0, trials: int = 10_000, weight_models=("uniform", "heavy")):
    """Check every wrapper's measured ratio against the transform of its inner
    algorithm's measured ratio (one-sided, 3 standard errors)."""
    rows = []
    for case_i, (fixture, kind, build, *flags) in enumerate(_ledger_cases()):
        exact = flags[0] if flags else True
        for model_i, model in enumerate(weight_models):
            rng = np.random.default_rng([seed, case_i, model_i])
            leaves, alg, target, transform = build()
            ground = sorted(frozenset().union(*(m.ground for _, m in leaves)) | target.ground)
            w = dict(zip(ground, make_weights(model, len(ground), rng)))
            c_meas = 1.0
            for inner, inner_M in leaves:
                rep = evaluate(inner, inner_M, _restrict_w(w, inner_M.ground), trials,
                               int(rng.integers(2**32)))
                c_meas = max(c_meas, rep.ratio)
            rep = evaluate(alg, target, _restrict_w(w, target.ground), trials,
                           int(rng.integers(2**32)), exact)
            bound = transform(c_meas)
            ok = (rep.satisfies(bound) if math.isfinite(bound) else True) and rep.violations == 0
            rows.append(LedgerRow(fixture, kind, model, "exact" if rep.exact else "mc", c_meas,
                                  rep.ratio, bound, rep.mean, rep.se, rep.opt, ok,
                                  rep.violations))
    return rows
