"""Exhaustive queries on small matroids, greedy optimum and basis sampling."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import MatroidError, ResourceLimitError
from .matroid import ENUMERATION_CAP, Matroid, simplify

Weighting = Mapping[int, float]


def _capped(M: Matroid, cap: int | None) -> list[int]:
    cap = ENUMERATION_CAP if cap is None else cap
    if len(M) > cap:
        raise ResourceLimitError(f"ground set of size {len(M)} exceeds enumeration cap {cap}")
    return sorted(M.ground)


def enumerate_bases(M: Matroid, cap: int | None = None) -> list[frozenset]:
    """All bases, in lexicographic order of their sorted element tuples."""
    elements = _capped(M, cap)
    r = M.full_rank
    return [
        frozenset(B) for B in itertools.combinations(elements, r)
        if M._r(frozenset(B)) == r
    ]


def enumerate_circuits(M: Matroid, cap: int | None = None) -> list[frozenset]:
    elements = _capped(M, cap)
    circuits = []
    for k in range(1, M.full_rank + 2):
        for X in itertools.combinations(elements, k):
            X = frozenset(X)
            if M._r(X) != k - 1:
                continue
            if all(M._r(X - {e}) == k - 1 for e in X):
                circuits.append(X)
    return circuits


def is_paving(M: Matroid, cap: int | None = None) -> bool:
    # a circuit smaller than r has size <= r - 1, so only those sizes need scanning
    elements = _capped(M, cap)
    r = M.full_rank
    for k in range(1, r):
        for X in itertools.combinations(elements, k):
            if M._r(frozenset(X)) < k:
                return False
    return True


def density(M: Matroid, cap: int | None = None) -> Fraction:
    """max |X| / r(X) over subsets of si(M) of positive rank; 0 if M has rank 0."""
    _capped(M, cap)
    S, _ = simplify(M)
    best = Fraction(0)
    # for a fixed rank the largest set is a flat, so only closures of
    # independent sets need checking
    elements = sorted(S.ground)
    seen: set[frozenset] = set()
    for k in range(1, S.full_rank + 1):
        for I in itertools.combinations(elements, k):
            I = frozenset(I)
            if S._r(I) != k:
                continue
            F = S.closure(I)
            if F in seen:
                continue
            seen.add(F)
            best = max(best, Fraction(len(F), k))
    return best


def as_weighting(M: Matroid, w) -> dict[int, float]:
    """Normalise ``w`` to a dict over the ground set.

    A sequence is matched to the ground set in sorted order.
    """
    if isinstance(w, Mapping):
        weights = {e: float(x) for e, x in w.items()}
    else:
        w = list(w)
        elements = sorted(M.ground)
        if len(w) != len(elements):
            raise MatroidError(f"expected {len(elements)} weights, got {len(w)}")
        weights = dict(zip(elements, map(float, w)))
    if set(weights) != set(M.ground):
        raise MatroidError("weighting must be defined on exactly the ground set")
    if any(not x >= 0 for x in weights.values()):
        raise MatroidError("weights must be non-negative")
    return weights


def max_weight_basis(M: Matroid, w) -> frozenset:
    """Greedy in descending weight (ties by label)."""
    w = as_weighting(M, w)
    B: frozenset = frozenset()
    size = 0
    r = M.full_rank
    for e in sorted(M.ground, key=lambda e: (-w[e], e)):
        if size == r:
            break
        if M._r(B | {e}) == size + 1:
            B = B | {e}
            size += 1
    return B


def opt(M: Matroid, w) -> float:
    w = as_weighting(M, w)
    return float(sum(w[e] for e in max_weight_basis(M, w)))


def basis_membership(M: Matroid, cap: int | None = None) -> dict[int, Fraction]:
    """``P(e in B)`` for a uniformly random basis ``B``, i.e. ``|B_e| / |B|``."""
    bases = enumerate_bases(M, cap)
    counts = dict.fromkeys(M.ground, 0)
    for B in bases:
        for e in B:
            counts[e] += 1
    return {e: Fraction(c, len(bases)) for e, c in counts.items()}


def sample_random_basis(M: Matroid, rng: np.random.Generator,
                        max_attempts: int = 100_000) -> frozenset:
    """Uniform basis by rejection: draw uniform r-subsets until one is a basis.

    Raises ``ResourceLimitError`` rather than returning a biased sample.
    """
    elements = np.array(sorted(M.ground))
    r = M.full_rank
    for _ in range(max_attempts):
        X = frozenset(int(e) for e in rng.choice(elements, size=r, replace=False))
        if M._r(X) == r:
            return X
    raise ResourceLimitError(f"no basis found in {max_attempts} rejection attempts")


def check_rank_axioms(M: Matroid, rng: np.random.Generator | None = None,
                      exhaustive_limit: int = 10, samples: int = 2000) -> list[str]:
    """Return a list of violated rank axioms (empty when all hold).

    Exhaustive for ``|E| <= exhaustive_limit``; random subset triples otherwise.
    """
    problems = []
    E = sorted(M.ground)
    if M._r(frozenset()) != 0:
        problems.append("rank(empty) != 0")
    if len(E) <= exhaustive_limit:
        subsets = list(M.subsets())
        pairs = ((X, e) for X in subsets for e in E if e not in X)
        for X, e in pairs:
            rX, rXe = M._r(X), M._r(X | {e})
            if not (rX <= rXe <= rX + 1):
                problems.append(f"unit increase fails at {sorted(X)} + {e}")
            if rX > len(X):
                problems.append(f"rank exceeds size at {sorted(X)}")
        # local submodularity: r(X+a) + r(X+b) >= r(X+a+b) + r(X)
        for X in subsets:
            rest = [e for e in E if e not in X]
            for a, b in itertools.combinations(rest, 2):
                if M._r(X | {a}) + M._r(X | {b}) < M._r(X | {a, b}) + M._r(X):
                    problems.append(f"submodularity fails at {sorted(X)}, {a}, {b}")
    else:
        rng = rng or np.random.default_rng(0)
        for _ in range(samples):
            masks = rng.random((3, len(E))) < 0.5
            X, Y, Z = (frozenset(e for e, m in zip(E, row) if m) for row in masks)
            if M._r(X) > len(X):
                problems.append("rank exceeds size")
            if M._r(X & Y) > M._r(X):
                problems.append("monotonicity fails")
            if M._r(X) + M._r(Y) < M._r(X | Y) + M._r(X & Y):
                problems.append("submodularity fails")
            e = int(rng.choice(E))
            if not M._r(Z) <= M._r(Z | {e}) <= M._r(Z) + 1:
                problems.append("unit increase fails")
    return problems
