"""Online simulation and evaluation of matroid secretary algorithms.

An algorithm sees each element exactly once, as ``offer(element, weight,
priority)``, and answers accept or reject.  The harness owns the accepted set:
it checks independence after every accept and force-rejects (and counts) any
accept that would create a dependency.

Randomised algorithms draw all of their randomness from the ``coins`` object
passed to ``start``.  In Monte Carlo runs that is a thin wrapper around a
numpy Generator; in exact runs it is a branching source that enumerates every
finite coin outcome with its probability.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .enumeration import as_weighting, opt as _opt
from .errors import MatroidError, ResourceLimitError, UnsupportedModeError
from .matroid import Matroid

EXACT_SIZE_LIMIT = 8
DEFAULT_TRIALS = 10_000
# trials are grouped in fixed blocks, each with its own seed substream, so the
# results do not depend on how blocks are spread across workers
BLOCK_SIZE = 500


class Coins:
    """Randomness for one Monte Carlo trial."""

    exact = False

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def choice(self, k: int, p=None) -> int:
        if p is None:
            return int(self.rng.integers(k))
        cum = np.cumsum(p)
        i = int(np.searchsorted(cum, self.rng.random() * cum[-1], side="right"))
        return min(i, k - 1)

    def bernoulli(self, p: float) -> bool:
        return bool(self.rng.random() < p)

    def binomial(self, n: int, p: float) -> int:
        return int(self.rng.binomial(n, p))

    @property
    def generator(self) -> np.random.Generator:
        return self.rng


class BranchingCoins:
    """Replays a prefix of coin outcomes, then takes the first outcome of
    positive probability at every new draw, recording the path taken."""

    exact = True

    def __init__(self, prefix=()):
        self.prefix = list(prefix)
        self.path: list[tuple[int, list[float]]] = []
        self.probability = 1.0

    def choice(self, k: int, p=None) -> int:
        probs = [1.0 / k] * k if p is None else [float(q) for q in p]
        depth = len(self.path)
        if depth < len(self.prefix):
            c = self.prefix[depth]
        else:
            c = next(i for i, q in enumerate(probs) if q > 0)
        self.path.append((c, probs))
        self.probability *= probs[c]
        return c

    def bernoulli(self, p: float) -> bool:
        return self.choice(2, [1.0 - p, p]) == 1

    def binomial(self, n: int, p: float) -> int:
        pmf = [math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(n + 1)]
        return self.choice(n + 1, pmf)

    @property
    def generator(self):
        raise UnsupportedModeError("algorithm needs a continuous random source")


def coin_outcomes(run):
    """Yield ``(probability, run(coins))`` over every finite coin path."""
    prefix: list[int] = []
    while True:
        coins = BranchingCoins(prefix)
        value = run(coins)
        yield coins.probability, value
        path = coins.path
        while path:
            c, probs = path.pop()
            nxt = next((i for i in range(c + 1, len(probs)) if probs[i] > 0), None)
            if nxt is not None:
                prefix = [cc for cc, _ in path] + [nxt]
                break
        else:
            return


@dataclass(frozen=True)
class ArrivalStream:
    """Arrival order plus distinct tie-break priorities."""

    order: tuple
    priority: dict

    @classmethod
    def random(cls, elements, rng: np.random.Generator) -> "ArrivalStream":
        elements = sorted(elements)
        perm = rng.permutation(len(elements))
        pri = rng.random(len(elements))
        return cls(tuple(elements[i] for i in perm), dict(zip(elements, pri.tolist())))

    @classmethod
    def fixed(cls, order, priority=None) -> "ArrivalStream":
        order = tuple(order)
        if priority is None:
            priority = {e: 0.5 for e in order}
        return cls(order, dict(priority))


class Outcome(NamedTuple):
    selected: frozenset
    violations: int


class IndependenceViolation(AssertionError):
    pass


def simulate(alg, M: Matroid, w, stream: ArrivalStream, coins=None,
             strict: bool = False, validate: bool = True) -> Outcome:
    """Run ``alg`` once over ``stream`` and return the accepted set."""
    if validate:
        w = as_weighting(M, w)
        if len(stream.order) != len(M) or set(stream.order) != M.ground:
            raise MatroidError("stream must cover exactly the ground set")
    if coins is None:
        coins = Coins(np.random.default_rng())
    alg.start(coins)
    selected: frozenset = frozenset()
    violations = 0
    r = M._r
    pri = stream.priority
    for e in stream.order:
        if alg.offer(e, w[e], pri[e]):
            S = selected | {e}
            if r(S) == len(S):
                selected = S
            else:
                violations += 1
                if strict:
                    raise IndependenceViolation(f"{alg!r} accepted dependent element {e}")
    return Outcome(selected, violations)


@dataclass
class EvalReport:
    algorithm: str
    matroid: str
    n: int
    r: int
    mean: float
    opt: float
    ratio: float
    se: float
    trials: int
    violations: int
    exact: bool

    CSV_COLUMNS = ("matroid", "algorithm", "n", "r", "trials", "mean", "se", "opt",
                   "ratio", "violations")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def csv_row(self) -> dict:
        return {k: getattr(self, k) for k in self.CSV_COLUMNS}

    def satisfies(self, bound: float, n_se: float = 3.0) -> bool:
        """One-sided competitive check: mean >= opt / bound - n_se * se."""
        return self.mean >= self.opt / bound - n_se * self.se - 1e-12 * max(1.0, self.opt)


def write_csv(reports, fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=EvalReport.CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerow(rep.csv_row())


def competitive_ratio(opt_value: float, mean: float) -> float:
    if mean > 0:
        return opt_value / mean
    return 1.0 if opt_value == 0 else math.inf


def opt(M: Matroid, w) -> float:
    return _opt(M, w)


def _tie_rankings(elements, w):
    """Every assignment of tie-break priorities that matters: one ranking per
    permutation of each group of equal-weight elements."""
    groups: dict[float, list] = {}
    for e in elements:
        groups.setdefault(w[e], []).append(e)
    tied = [g for g in groups.values() if len(g) > 1]
    base = {e: 0.5 for e in elements}
    for combo in itertools.product(*(itertools.permutations(g) for g in tied)):
        pri = dict(base)
        for ranking in combo:
            for i, e in enumerate(ranking):
                pri[e] = (i + 1) / (len(ranking) + 1)
        yield pri


def evaluate_exact(alg, M: Matroid, w, max_size: int = EXACT_SIZE_LIMIT,
                   strict: bool = False, max_streams: int = 2_000_000) -> EvalReport:
    """Exact value: average over all orders, tie-break rankings and coin outcomes."""
    if len(M) > max_size:
        raise MatroidError(f"exact evaluation limited to {max_size} elements")
    if not getattr(alg, "finite_coins", True):
        raise UnsupportedModeError(f"{alg!r} does not declare a finite coin space")
    w = as_weighting(M, w)
    elements = sorted(M.ground)
    streams = math.factorial(len(elements))
    for value in set(w.values()):
        streams *= math.factorial(sum(1 for x in w.values() if x == value))
    if streams > max_streams:
        raise ResourceLimitError(f"{streams} order/tie-break combinations exceed {max_streams}")
    terms = []
    violations = 0
    count = 0
    for pri in _tie_rankings(elements, w):
        for order in itertools.permutations(elements):
            stream = ArrivalStream(order, pri)
            count += 1

            def run(coins):
                return simulate(alg, M, w, stream, coins, strict=strict, validate=False)

            for prob, out in coin_outcomes(run):
                terms.append(prob * sum(w[e] for e in out.selected))
                violations += out.violations
    mean = math.fsum(terms) / count
    o = _opt(M, w)
    return EvalReport(getattr(alg, "name", type(alg).__name__), M.name, len(M),
                      M.full_rank, mean, o, competitive_ratio(o, mean), 0.0,
                      count, violations, True)


def _run_block(args):
    alg, M, w, seed_seq, size, strict = args
    rng = np.random.default_rng(seed_seq)
    elements = sorted(M.ground)
    out = np.empty(size)
    violations = 0
    coins = Coins(rng)
    for i in range(size):
        stream = ArrivalStream.random(elements, rng)
        res = simulate(alg, M, w, stream, coins, strict=strict, validate=False)
        out[i] = sum(w[e] for e in res.selected)
        violations += res.violations
    return out, violations


def evaluate_monte_carlo(alg, M: Matroid, w, trials: int = DEFAULT_TRIALS, seed: int = 0,
                         workers: int = 1, strict: bool = False) -> EvalReport:
    """Mean and standard error over independent trials (fresh order and coins)."""
    if trials < 1:
        raise MatroidError("trials must be >= 1")
    w = as_weighting(M, w)
    n_blocks = -(-trials // BLOCK_SIZE)
    seeds = np.random.SeedSequence(seed).spawn(n_blocks)
    sizes = [min(BLOCK_SIZE, trials - i * BLOCK_SIZE) for i in range(n_blocks)]
    jobs = [(alg, M, w, s, k, strict) for s, k in zip(seeds, sizes)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_block, jobs))
    else:
        results = [_run_block(j) for j in jobs]
    values = np.concatenate([v for v, _ in results])
    violations = sum(v for _, v in results)
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    o = _opt(M, w)
    return EvalReport(getattr(alg, "name", type(alg).__name__), M.name, len(M),
                      M.full_rank, mean, o, competitive_ratio(o, mean), se, trials,
                      violations, False)


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    write_csv(reports, buf)
    return buf.getvalue()
