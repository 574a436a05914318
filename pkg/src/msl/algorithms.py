"""Standalone secretary algorithms: classical, random basis, UNI, PAV and a
threshold-greedy baseline.

All comparisons between arrivals use the key ``(weight, priority)``, so
equal weights never produce a tie.
"""
from __future__ import annotations

import math
import re

from .enumeration import enumerate_bases, sample_random_basis
from .errors import MatroidError
from .matroid import ENUMERATION_CAP, Matroid

NEG_INF = (-math.inf, -math.inf)


class OnlineAlgorithm:
    """Base class.  ``start(coins)`` resets all state for a new run; ``offer``
    is called once per arriving element and returns the irrevocable decision.

    ``ground`` is the set of elements the algorithm expects to be offered and
    ``finite_coins`` says whether exact evaluation can enumerate its randomness.
    """

    name = "online"
    finite_coins = True

    def __init__(self, ground):
        self.ground = frozenset(ground)

    def start(self, coins) -> None:
        pass

    def offer(self, element, weight: float, priority: float) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.name} on {len(self.ground)} elements>"


class Nothing(OnlineAlgorithm):
    """Rejects everything (the only algorithm for an empty or all-loop ground set)."""

    name = "nothing"

    def offer(self, element, weight, priority):
        return False


class ClassicalSecretary(OnlineAlgorithm):
    """Reject the first ``sample`` arrivals, then take the first arrival that
    beats all of them.  Accepts at most one element.

    ``n`` is the number of arrivals; ``ground`` defaults to ``1..n``.
    """

    name = "classical"

    def __init__(self, n: int | None = None, sample: int | None = None, ground=None):
        if ground is None:
            if n is None:
                raise MatroidError("need n or ground")
            ground = range(1, n + 1)
        super().__init__(ground)
        n = len(self.ground)
        if sample is None:
            sample = math.floor(n / math.e)
        if n and not 0 <= sample < n:
            raise MatroidError(f"sample size must lie in [0, {n}), got {sample}")
        self.n, self.sample = n, sample
        self.name = f"classical[{sample}]"

    def start(self, coins):
        self.seen = 0
        self.best = NEG_INF
        self.done = False

    def offer(self, element, weight, priority):
        key = (weight, priority)
        self.seen += 1
        if self.seen <= self.sample:
            self.best = max(self.best, key)
            return False
        if self.done or key <= self.best:
            return False
        self.done = True
        return True


def classical_secretary(n: int, sample: int | None = None) -> ClassicalSecretary:
    return ClassicalSecretary(n, sample)


def classical_success_probability(n: int, sample: int):
    """P(the best of n is chosen) = (t/n) * sum_{j=t+1}^{n} 1/(j-1); 1/n when t = 0."""
    from fractions import Fraction

    if sample == 0:
        return Fraction(1, n)
    return Fraction(sample, n) * sum(Fraction(1, j - 1) for j in range(sample + 1, n + 1))


class RandomBasis(OnlineAlgorithm):
    """RB: draw a uniformly random basis up front, accept exactly its elements.

    Monte Carlo runs use rejection sampling.  Exact runs choose among the
    enumerated bases with a uniform finite coin, which has the same law.
    """

    name = "rb"

    def __init__(self, M: Matroid, max_attempts: int = 100_000):
        super().__init__(M.ground)
        if M.full_rank > len(M):
            raise MatroidError("matroid has no basis")
        self.matroid = M
        self.max_attempts = max_attempts
        self._bases = None

    def start(self, coins):
        if coins.exact:
            if self._bases is None:
                self._bases = enumerate_bases(self.matroid, ENUMERATION_CAP)
            self.basis = self._bases[coins.choice(len(self._bases))]
        else:
            self.basis = sample_random_basis(self.matroid, coins.generator, self.max_attempts)

    def offer(self, element, weight, priority):
        return element in self.basis


def random_basis(M: Matroid) -> RandomBasis:
    return RandomBasis(M)


class KleinbergUNI(OnlineAlgorithm):
    """Multiple-choice secretary for ``U_{r,n}`` by recursive halving.

    With capacity ``r`` over ``n`` arrivals: if ``r >= n`` take everything;
    if ``r = 1`` run the classical secretary; otherwise draw
    ``m ~ Binomial(n, 1/2)``, hand the first ``m`` arrivals to a recursive
    instance with capacity ``r // 2`` (keeping its picks), then set the
    threshold to the ``(r // 2)``-th largest key among those ``m`` and take
    every later arrival above it while fewer than ``r`` are held.
    """

    name = "uni"

    def __init__(self, r: int, n: int | None = None, ground=None):
        if ground is None:
            ground = range(1, (n or 0) + 1)
        super().__init__(ground)
        n = len(self.ground)
        if not 1 <= r <= n:
            raise MatroidError(f"need 1 <= r <= n, got r={r}, n={n}")
        self.r, self.n = r, n
        self.name = f"uni[{r}]"

    def start(self, coins):
        self.state = _UniState(self.r, self.n, coins)

    def offer(self, element, weight, priority):
        return self.state.offer((weight, priority))

    @property
    def taken(self) -> int:
        return self.state.taken


def kleinberg_uni(r: int, n: int) -> KleinbergUNI:
    return KleinbergUNI(r, n)


class _UniState:
    __slots__ = ("r", "n", "taken", "seen", "mode", "sample", "best", "m", "half",
                 "keys", "threshold", "inner")

    def __init__(self, r, n, coins):
        self.r, self.n = r, n
        self.taken = 0
        self.seen = 0
        if r >= n:
            self.mode = 0
        elif r == 1:
            self.mode = 1
            self.sample = math.floor(n / math.e)
            self.best = NEG_INF
        else:
            self.mode = 2
            self.m = coins.binomial(n, 0.5)
            self.half = r // 2
            self.keys = []
            self.threshold = None
            self.inner = _UniState(self.half, self.m, coins) if self.m >= 1 else None

    def offer(self, key) -> bool:
        self.seen += 1
        if self.mode == 0:
            self.taken += 1
            return True
        if self.mode == 1:
            if self.seen <= self.sample:
                if key > self.best:
                    self.best = key
                return False
            if self.taken or key <= self.best:
                return False
            self.taken = 1
            return True
        if self.seen <= self.m:
            self.keys.append(key)
            if self.inner is not None and self.inner.offer(key):
                self.taken += 1
                return True
            return False
        if self.threshold is None:
            keys = sorted(self.keys, reverse=True)
            self.threshold = keys[self.half - 1] if len(keys) >= self.half else NEG_INF
        if self.taken < self.r and key > self.threshold:
            self.taken += 1
            return True
        return False


class PAV(KleinbergUNI):
    """UNI with capacity ``r(M) - 1``: every such set is independent in a
    paving matroid.  Paving-ness is not re-checked here (it needs a full
    circuit scan); callers with small matroids can use ``is_paving``."""

    def __init__(self, M: Matroid):
        if M.full_rank < 2:
            raise MatroidError("PAV needs rank at least 2")
        super().__init__(M.full_rank - 1, ground=M.ground)
        self.matroid = M
        self.name = "pav"


def pav(M: Matroid) -> PAV:
    return PAV(M)


class ThresholdGreedy(OnlineAlgorithm):
    """Observe the first ``floor(rho * n)`` arrivals, then greedily accept any
    arrival whose key beats the best observed one and keeps the accepted set
    independent.  With ``rho = 0`` the threshold is minus infinity."""

    name = "tgreedy"

    def __init__(self, M: Matroid, rho: float = 1 / math.e):
        if not 0 <= rho < 1:
            raise MatroidError(f"rho must lie in [0, 1), got {rho}")
        super().__init__(M.ground)
        self.matroid = M
        self.rho = rho
        self.sample = math.floor(rho * len(M))
        self.name = f"tgreedy[{rho:.4g}]"

    def start(self, coins):
        self.seen = 0
        self.best = NEG_INF
        self.accepted = frozenset()

    def offer(self, element, weight, priority):
        self.seen += 1
        key = (weight, priority)
        if self.seen <= self.sample:
            if key > self.best:
                self.best = key
            return False
        if key <= self.best:
            return False
        S = self.accepted | {element}
        if self.matroid._r(S) == len(S):
            self.accepted = S
            return True
        return False


def threshold_greedy(M: Matroid, rho: float = 1 / math.e) -> ThresholdGreedy:
    return ThresholdGreedy(M, rho)


_SPEC = re.compile(r"^\s*([a-z]+)\s*(?:\[\s*([^\]]*)\s*\])?\s*$")


def from_spec(spec: str, M: Matroid) -> OnlineAlgorithm:
    """Build an algorithm bound to ``M`` from ``classical[s]``, ``rb``,
    ``uni[r]``, ``pav`` or ``tgreedy[rho]`` (bracketed arguments optional)."""
    m = _SPEC.match(spec)
    if not m:
        raise MatroidError(f"cannot parse algorithm spec {spec!r}")
    kind, arg = m.group(1), m.group(2)
    if kind == "classical":
        return ClassicalSecretary(sample=int(arg) if arg else None, ground=M.ground)
    if kind == "rb":
        return RandomBasis(M)
    if kind == "uni":
        return KleinbergUNI(int(arg) if arg else M.full_rank, ground=M.ground)
    if kind == "pav":
        return PAV(M)
    if kind == "tgreedy":
        return ThresholdGreedy(M, float(arg) if arg else 1 / math.e)
    raise MatroidError(f"unknown algorithm {kind!r}")
