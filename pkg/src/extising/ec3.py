"""Monte Carlo study of locality-restricted Exact Cover 3 instances.

A clause ``(a, b, c)`` (1-based, a < b < c) is satisfied when exactly one of
the three bits is 1. A run plants a random bit string, draws clauses it
satisfies, keeps K of those that fit within distance 2M on the cyclic chain,
and checks by enumeration whether the planted string is the only solution.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InsufficientClausesError

Clause = tuple[int, int, int]

POOL_SIZE = 500
MAX_DOUBLINGS = 8
MAX_ENUMERATION_BITS = 24
_CHUNK = 1 << 16


def plant_bitstring(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """N independent Bernoulli(p) bits."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"bit probability must lie in (0, 1), got {p}")
    return (rng.random(n) < p).astype(np.int8)


def valid_triples(planted: Sequence[int]) -> list[Clause]:
    """All sorted triples satisfied by ``planted``, in lexicographic order."""
    x = np.asarray(planted)
    ones = [i + 1 for i in np.flatnonzero(x == 1)]
    zeros = [i + 1 for i in np.flatnonzero(x == 0)]
    out = [tuple(sorted((a, b, c))) for a in ones for b, c in itertools.combinations(zeros, 2)]
    out.sort()
    return out


def sample_satisfied_clauses(planted: Sequence[int], count: int, rng: np.random.Generator,
                             replace: bool = False) -> list[Clause]:
    """Clauses drawn uniformly from those satisfied by ``planted``.

    With ``replace=False`` the ``count`` clauses are distinct.
    """
    x = np.asarray(planted)
    if x.sum() < 1 or (x == 0).sum() < 2:
        raise DomainError("planted string needs at least one 1 and two 0s to satisfy any clause")
    pool = valid_triples(x)
    if replace:
        idx = rng.integers(0, len(pool), size=count)
    else:
        if count > len(pool):
            raise InsufficientClausesError(
                f"only {len(pool)} satisfied clauses exist, {count} requested"
            )
        idx = rng.choice(len(pool), size=count, replace=False)
    return [pool[i] for i in idx]


def is_restricted(clause: Clause, m: int, n: int, cyclic: bool = True) -> bool:
    a, b, c = clause
    span = 2 * m
    if c - a <= span:
        return True
    return cyclic and ((a + n) - b <= span or (b + n) - c <= span)


def restrict_clauses(clauses: Iterable[Clause], m: int, n: int,
                     cyclic: bool = True) -> list[Clause]:
    """Clauses whose bits fit within distance 2M along the chain, order preserved."""
    return [cl for cl in clauses if is_restricted(cl, m, n, cyclic)]


@dataclass(frozen=True)
class UniqueCheck:
    unique: bool
    witness: tuple[int, ...] | None  # a second solution, or the only-but-not-unique one


def _solutions(clauses: Sequence[Clause], n: int, limit: int) -> list[int]:
    found: list[int] = []
    cl = np.asarray(clauses, dtype=np.int64).reshape(-1, 3) - 1
    for start in range(0, 1 << n, _CHUNK):
        x = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.int64)
        ok = np.ones(x.shape, dtype=bool)
        for a, b, c in cl:
            ok &= ((x >> a) & 1) + ((x >> b) & 1) + ((x >> c) & 1) == 1
        hits = x[ok]
        found.extend(int(v) for v in hits[: limit - len(found)])
        if len(found) >= limit:
            break
    return found


def _bits(value: int, n: int) -> tuple[int, ...]:
    return tuple((value >> i) & 1 for i in range(n))


def has_unique_solution(clauses: Sequence[Clause], n: int) -> UniqueCheck:
    """Enumerate all 2^N assignments and test for exactly one solution."""
    if n > MAX_ENUMERATION_BITS:
        raise DomainError(f"exhaustive check is limited to N <= {MAX_ENUMERATION_BITS}")
    sols = _solutions(clauses, n, limit=2)
    if len(sols) == 1:
        return UniqueCheck(True, None)
    return UniqueCheck(False, _bits(sols[1], n) if len(sols) == 2 else None)


def clause_counts(clauses: Iterable[Clause], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-site clause counts and the symmetric per-pair count matrix."""
    sites = np.zeros(n, dtype=np.int64)
    pairs = np.zeros((n, n), dtype=np.int64)
    for cl in clauses:
        idx = [v - 1 for v in cl]
        for v in idx:
            sites[v] += 1
        for u, v in itertools.combinations(idx, 2):
            pairs[u, v] += 1
            pairs[v, u] += 1
    return sites, pairs


@dataclass(frozen=True)
class Ec3Instance:
    n_bits: int
    planted: tuple[int, ...]
    clauses: tuple[Clause, ...]
    m_restriction: int
    cyclic: bool = True

    def __post_init__(self):
        object.__setattr__(self, "planted", tuple(int(b) for b in self.planted))
        object.__setattr__(self, "clauses", tuple(tuple(int(v) for v in c) for c in self.clauses))
        if len(self.planted) != self.n_bits or set(self.planted) - {0, 1}:
            raise DomainError("planted string must hold n_bits binary digits")
        if len(set(self.clauses)) != len(self.clauses):
            raise DomainError("duplicate clauses")
        for cl in self.clauses:
            a, b, c = cl
            if not 1 <= a < b < c <= self.n_bits:
                raise DomainError(f"clause {cl} is not a sorted triple of sites")
            if self.planted[a - 1] + self.planted[b - 1] + self.planted[c - 1] != 1:
                raise DomainError(f"clause {cl} is violated by the planted string")
            if not is_restricted(cl, self.m_restriction, self.n_bits, self.cyclic):
                raise DomainError(f"clause {cl} breaks the M={self.m_restriction} restriction")

    def to_text(self) -> str:
        lines = [f"{self.n_bits} {self.m_restriction}", "".join(map(str, self.planted))]
        lines += [f"{a} {b} {c}" for a, b, c in self.clauses]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, cyclic: bool = True) -> "Ec3Instance":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        n, m = (int(v) for v in lines[0].split())
        planted = tuple(int(ch) for ch in lines[1])
        clauses = tuple(tuple(int(v) for v in ln.split()) for ln in lines[2:])
        return cls(n, planted, clauses, m, cyclic)


@dataclass
class RunOutcome:
    error: bool
    instance: Ec3Instance | None
    redraws: int = 0
    shortage: bool = False


def simulate_run(n: int, m: int, p: float, k: int, rng: np.random.Generator, *,
                 cyclic: bool = True, pool_size: int = POOL_SIZE,
                 max_doublings: int = MAX_DOUBLINGS) -> RunOutcome:
    """One planted-instance trial; ``error`` is True when uniqueness fails."""
    redraws = 0
    while True:
        planted = plant_bitstring(n, p, rng)
        if planted.sum() >= 1 and (planted == 0).sum() >= 2:
            break
        redraws += 1
    universe = valid_triples(planted)
    if len(restrict_clauses(universe, m, n, cyclic)) < k:
        # no pool of any size can supply k distinct restricted clauses
        return RunOutcome(True, None, redraws, shortage=True)
    for attempt in range(max_doublings + 1):
        idx = np.unique(rng.integers(0, len(universe), size=pool_size << attempt))
        pool = restrict_clauses((universe[i] for i in idx), m, n, cyclic)
        if len(pool) >= k:
            break
    else:
        return RunOutcome(True, None, redraws, shortage=True)
    chosen = sorted(pool[i] for i in rng.choice(len(pool), size=k, replace=False))
    inst = Ec3Instance(n, tuple(planted), tuple(chosen), m, cyclic)
    return RunOutcome(not has_unique_solution(chosen, n).unique, inst, redraws)


def run_rng(seed: int, run_index: int) -> np.random.Generator:
    """Independent stream for one run, so run order never changes the result."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(run_index,)))


@dataclass(frozen=True)
class SimReport:
    p_e: float
    runs: int
    seed: int
    half_width: float
    params: dict = field(default_factory=dict)
    errors: int = 0
    shortage_runs: int = 0
    redraws: int = 0


def estimate_pe(n: int, m: int, p: float, k: int, runs: int, seed: int, *,
                cyclic: bool = True, pool_size: int = POOL_SIZE,
                max_doublings: int = MAX_DOUBLINGS) -> SimReport:
    """Fraction of runs whose K restricted clauses do not pin the planted string."""
    if runs < 1 or k < 1:
        raise DomainError("runs and K must be positive")
    if not 0.0 < p < 1.0:
        raise DomainError(f"bit probability must lie in (0, 1), got {p}")
    errors = shortage = redraws = 0
    for r in range(runs):
        out = simulate_run(n, m, p, k, run_rng(seed, r), cyclic=cyclic,
                           pool_size=pool_size, max_doublings=max_doublings)
        errors += out.error
        shortage += out.shortage
        redraws += out.redraws
    pe = errors / runs
    return SimReport(
        p_e=pe,
        runs=runs,
        seed=seed,
        half_width=1.96 * math.sqrt(pe * (1 - pe) / runs),
        params={"N": n, "M": m, "p": p, "K": k, "cyclic": cyclic},
        errors=errors,
        shortage_runs=shortage,
        redraws=redraws,
    )
