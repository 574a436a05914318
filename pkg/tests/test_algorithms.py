import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from msl import (
    ArrivalStream,
    ClassicalSecretary,
    KleinbergUNI,
    PAV,
    RandomBasis,
    SparsePavingMatroid,
    ThresholdGreedy,
    UniformMatroid,
    complete_graph,
    evaluate_exact,
    evaluate_monte_carlo,
    from_spec,
    simulate,
)
from msl.algorithms import classical_success_probability
from msl.enumeration import basis_membership, enumerate_bases
from msl.errors import MatroidError
from msl.harness import Coins


def vectorised_classical(n, t, trials, rng):
    """Fraction of random orders in which the classical rule hires the best."""
    ranks = np.argsort(rng.random((trials, n)), axis=1)
    best_sample = ranks[:, :t].max(axis=1) if t else np.full(trials, -1)
    later = ranks[:, t:]
    beats = later > best_sample[:, None]
    first = beats.argmax(axis=1)
    hired = np.where(beats.any(axis=1), later[np.arange(trials), first], -1)
    return np.mean(hired == n - 1)


def test_classical_single():
    U = UniformMatroid(1, 1)
    out = simulate(ClassicalSecretary(1, 0), U, [0.4], ArrivalStream.fixed([1]))
    assert out.selected == {1}


def test_classical_default_sample():
    assert ClassicalSecretary(10).sample == 3
    assert ClassicalSecretary(3).sample == 1
    with pytest.raises(MatroidError):
        ClassicalSecretary(3, 3)


def test_classical_n3_half():
    rep = evaluate_exact(ClassicalSecretary(3, 1), UniformMatroid(1, 3), [1, 0.001, 0.0005])
    p_best = (rep.mean - 0.0) / 1
    # contributions from hiring a non-best element are at most 0.001 each
    assert abs(p_best - 0.5) < 0.001
    assert classical_success_probability(3, 1) == Fraction(1, 2)


@pytest.mark.parametrize("n", range(1, 9))
def test_classical_formula_exact(n):
    for t in range(n):
        w = [1] + [0] * (n - 1)
        alg = ClassicalSecretary(n, t)
        hits = 0
        for order in itertools.permutations(range(1, n + 1)):
            stream = ArrivalStream(order, {e: e / (n + 1) for e in order})
            hits += 1 in simulate(alg, UniformMatroid(1, n), w, stream).selected
        assert Fraction(hits, math.factorial(n)) == classical_success_probability(n, t)


def test_classical_formula_vectorised_n10():
    rng = np.random.default_rng(0)
    est = vectorised_classical(10, 3, 200_000, rng)
    p = float(classical_success_probability(10, 3))
    assert abs(est - p) < 3 * math.sqrt(p * (1 - p) / 200_000)
    assert p == pytest.approx(0.3 * sum(1 / (j - 1) for j in range(4, 11)))


def test_rb_formula_exact(small):
    rng = np.random.default_rng(1)
    for M in small.values():
        if len(M) > 7:
            continue
        w = rng.random(len(M)).tolist()
        memb = basis_membership(M)
        formula = math.fsum(wi * float(memb[e]) for e, wi in zip(sorted(M.ground), w))
        rep = evaluate_exact(RandomBasis(M), M, w)
        assert rep.mean == pytest.approx(formula, rel=1e-12)


def test_rb_examples():
    U = UniformMatroid(3, 3)
    rep = evaluate_exact(RandomBasis(U), U, [1, 2, 3])
    assert rep.mean == pytest.approx(6) and rep.ratio == pytest.approx(1)
    assert evaluate_exact(RandomBasis(UniformMatroid(2, 4)), UniformMatroid(2, 4),
                          [4, 3, 2, 1]).mean == pytest.approx(5)


def test_rb_sparse_paving_monte_carlo():
    M = SparsePavingMatroid(3, 7, [(1, 2, 3), (1, 4, 5)])
    w = [0.9, 0.1, 0.5, 0.3, 0.8, 0.6, 0.2]
    B = enumerate_bases(M)
    exact = sum(sum(w[e - 1] for e in b) for b in B) / len(B)
    rep = evaluate_monte_carlo(RandomBasis(M), M, w, 10_000, seed=6)
    assert abs(rep.mean - exact) <= 3 * rep.se


def test_uni_base_cases():
    rng = np.random.default_rng(2)
    U = UniformMatroid(1, 6)
    for _ in range(100):
        s = ArrivalStream.random(U.ground, rng)
        w = rng.random(6).tolist()
        a = simulate(KleinbergUNI(1, 6), U, w, s, Coins(rng))
        b = simulate(ClassicalSecretary(6), U, w, s, Coins(rng))
        assert a == b
    U = UniformMatroid(5, 5)
    rep = evaluate_exact(KleinbergUNI(5, 5), U, [1, 2, 3, 4, 5])
    assert rep.ratio == pytest.approx(1)


def test_uni_capacity():
    rng = np.random.default_rng(3)
    for r, n in [(2, 5), (3, 10), (7, 30), (20, 60)]:
        U = UniformMatroid(r, n)
        for _ in range(100):
            alg = KleinbergUNI(r, n)
            out = simulate(alg, U, rng.random(n).tolist(), ArrivalStream.random(U.ground, rng),
                           Coins(rng), strict=True)
            assert len(out.selected) <= r and alg.taken == len(out.selected)


def test_uni_r49_n1000():
    rng = np.random.default_rng(4)
    U = UniformMatroid(49, 1000)
    w = (1 - rng.random(1000)).tolist()
    rep = evaluate_monte_carlo(KleinbergUNI(49, 1000), U, w, 2000, seed=4)
    assert rep.ratio <= 3.5 + 3 * rep.ratio * rep.se / rep.mean
    assert rep.violations == 0


def test_pav_examples():
    U = UniformMatroid(3, 6)
    rng = np.random.default_rng(5)
    for _ in range(50):
        s = ArrivalStream.random(U.ground, rng)
        w = rng.random(6).tolist()
        seed = int(rng.integers(1 << 30))
        a = simulate(PAV(U), U, w, s, Coins(np.random.default_rng(seed)))
        b = simulate(KleinbergUNI(2, 6), U, w, s, Coins(np.random.default_rng(seed)))
        assert a == b
    M = SparsePavingMatroid(5, 12, [(1, 2, 3, 4, 5)])
    for _ in range(300):
        out = simulate(PAV(M), M, rng.random(12).tolist(), ArrivalStream.random(M.ground, rng),
                       Coins(rng), strict=True)
        assert len(out.selected) <= 4
    with pytest.raises(MatroidError):
        PAV(UniformMatroid(1, 4))


def test_tgreedy_rho_zero_is_greedy_in_order():
    K4 = complete_graph(4)
    out = simulate(ThresholdGreedy(K4, 0), K4, [1] * 6, ArrivalStream.fixed([1, 2, 4, 3, 5, 6]))
    assert out.selected == {1, 2, 3}
    with pytest.raises(MatroidError):
        ThresholdGreedy(K4, 1.0)


@pytest.mark.parametrize("n", range(1, 7))
def test_tgreedy_matches_classical_on_u1n(n):
    U = UniformMatroid(1, n)
    w = [float(i % 3) for i in range(n)]
    for order in itertools.permutations(range(1, n + 1)):
        pri = {e: (e * 7 % 11) / 11 for e in order}
        tg, cl = ThresholdGreedy(U, 1 / math.e), ClassicalSecretary(n)
        tg.start(None)
        cl.start(None)
        for e in order:
            assert tg.offer(e, w[e - 1], pri[e]) == cl.offer(e, w[e - 1], pri[e])


def test_from_spec():
    M = complete_graph(4)
    assert from_spec("classical[2]", M).sample == 2
    assert isinstance(from_spec("rb", M), RandomBasis)
    assert from_spec("uni[2]", M).r == 2
    assert isinstance(from_spec("pav", M), PAV)
    assert from_spec("tgreedy[0.5]", M).sample == 3
    for bad in ("foo", "uni[x]", "tgreedy[2]"):
        with pytest.raises((MatroidError, ValueError)):
            from_spec(bad, M)


@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_uni_never_exceeds_capacity(n, seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, n + 1))
    alg = KleinbergUNI(r, n)
    alg.start(Coins(rng))
    taken = sum(alg.offer(e, float(rng.random()), float(rng.random())) for e in range(1, n + 1))
    assert taken <= r
