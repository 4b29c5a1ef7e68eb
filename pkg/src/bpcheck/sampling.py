"""Monte Carlo sampling of random trees, used as an independent statistical oracle.

Randomness is addressed rather than streamed: the rule applied at a node is a
function of ``(seed, sample index, node address)`` only, obtained by chaining
BLAKE2b digests down the tree (generator ``blake2b-tree-v1``).  Samples are
therefore reproducible on every platform and independent of traversal order or
of how a batch of sample indices is partitioned between workers.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import Iterable, Iterator

from .process import BranchingProcess, TreePrefix, Type

GENERATOR = "blake2b-tree-v1"
_TWO64 = 1 << 64
_MASK64 = _TWO64 - 1
Z99 = NormalDist().inv_cdf(0.995)


def _root_key(seed: int, index: int | None = None) -> bytes:
    if not 0 <= seed <= _MASK64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    payload = GENERATOR.encode() + seed.to_bytes(8, "little")
    if index is not None:
        payload += b"/" + index.to_bytes(8, "little")
    return hashlib.blake2b(payload, digest_size=16).digest()


def _child_key(key: bytes, k: int) -> bytes:
    return hashlib.blake2b(key + k.to_bytes(4, "little"), digest_size=16).digest()


class _RuleTable:
    """Per-type cumulative thresholds on a 64-bit uniform draw (exact)."""

    def __init__(self, bp: BranchingProcess):
        self.table = {}
        for t in bp.types:
            acc = Fraction(0)
            entries = []
            for rule in bp.rules_of(t):
                acc += rule.probability
                # u < acc * 2^64 for integer u  <=>  u < ceil(acc * 2^64)
                entries.append((-((-acc.numerator * _TWO64) // acc.denominator), rule.successors))
            self.table[t] = entries

    def draw(self, t: Type, key: bytes) -> tuple:
        u = int.from_bytes(key[:8], "little")
        for threshold, successors in self.table[t]:
            if u < threshold:
                return successors
        return self.table[t][-1][1]


def _sample_from_key(bp, table, start, depth, key, max_nodes=None) -> TreePrefix:
    nodes, label, branching = set(), {}, {}
    stack = [((), start, key)]
    while stack:
        addr, t, k = stack.pop()
        nodes.add(addr)
        if max_nodes is not None and len(nodes) > max_nodes:
            raise ValueError(f"sampled prefix exceeds {max_nodes} nodes")
        label[addr] = t
        if len(addr) < depth:
            succ = table.draw(t, k)
            branching[addr] = len(succ)
            for i, y in enumerate(succ, start=1):
                stack.append((addr + (i,), y, _child_key(k, i)))
        else:
            branching[addr] = 0
    return TreePrefix(frozenset(nodes), label, branching)


def sample_prefix(bp: BranchingProcess, start: Type, depth: int, seed: int,
                  max_nodes: int | None = None) -> TreePrefix:
    """Depth-``depth`` truncation of a random tree rooted at ``start``.

    Raises ValueError if the prefix would have more than ``max_nodes`` nodes.
    """
    bp.require(start)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    return _sample_from_key(bp, _RuleTable(bp), start, depth, _root_key(seed), max_nodes)


def sample_prefixes(bp: BranchingProcess, start: Type, depth: int, seed: int,
                    indices: Iterable[int], max_nodes: int | None = None) -> Iterator[TreePrefix]:
    """The prefixes of the numbered samples used by :func:`estimate_af`."""
    bp.require(start)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    table = _RuleTable(bp)
    for i in indices:
        yield _sample_from_key(bp, table, start, depth, _root_key(seed, i), max_nodes)


def _all_branches_hit(table, start, targets, depth, key) -> tuple[bool, int]:
    explored = 0
    stack = [(start, key, 0)]
    while stack:
        t, k, d = stack.pop()
        explored += 1
        if t in targets:
            continue
        if d >= depth:
            return False, explored
        succ = table.draw(t, k)
        for i in range(len(succ), 0, -1):
            stack.append((succ[i - 1], _child_key(k, i), d + 1))
    return True, explored


def af_hits(bp: BranchingProcess, start: Type, targets, depth: int, seed: int,
            indices: Iterable[int]) -> Iterator[tuple[bool, int]]:
    """For each sample index: (every depth-bounded branch meets ``targets``, nodes explored).

    Exploration is depth-first and stops at the first branch that reaches
    ``depth`` without meeting a target, so trees are never fully materialised.
    """
    bp.require(start)
    targets = frozenset(targets)
    for t in targets:
        bp.require(t)
    table = _RuleTable(bp)
    for i in indices:
        yield _all_branches_hit(table, start, targets, depth, _root_key(seed, i))


@dataclass(frozen=True)
class Estimate:
    point: Fraction
    half_width: Fraction
    samples: int
    seed: int

    @property
    def lower(self) -> Fraction:
        return max(Fraction(0), self.point - self.half_width)

    @property
    def upper(self) -> Fraction:
        return min(Fraction(1), self.point + self.half_width)


def binomial_half_width(successes: int, n: int, z: float = Z99) -> Fraction:
    """Normal-approximation half width ``z * sqrt(p(1-p)/n)``."""
    p = successes / n
    return Fraction(z * math.sqrt(p * (1 - p) / n))


def estimate_af(bp: BranchingProcess, start: Type, targets, depth: int, n: int,
                seed: int) -> Estimate:
    """Fraction of ``n`` sampled prefixes in which every depth-``depth`` branch meets ``targets``.

    This under-estimates Pr[AF targets] for finite depth and converges to it as
    depth grows.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    hits = sum(ok for ok, _ in af_hits(bp, start, targets, depth, seed, range(n)))
    return Estimate(Fraction(hits, n), binomial_half_width(hits, n), n, seed)
