"""Balanced pairs, minimal decomposition and the balanced pair algorithm.

A pair of words (u, v) is balanced when parikh(u) = parikh(v).  The
balanced pair algorithm for two substitutions with the same incidence
matrix starts from an initial balanced pair of fixed-point prefixes and
closes the set of minimal balanced pairs under image-then-decompose.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .words import (
    Morphism,
    Word,
    _fixed_point_codes,
    apply,
    incidence_matrix,
    parikh,
    power,
    prolongable_seeds,
)

__all__ = [
    "BalancedPair",
    "AlgorithmOutcome",
    "is_balanced",
    "minimal_decomposition",
    "find_initial_balanced_pair",
    "balanced_pair_algorithm",
    "default_seeds",
    "all_seed_pairs",
]


@dataclass(frozen=True)
class BalancedPair:
    """Two words over the same alphabet with equal Parikh vectors."""

    u: Word
    v: Word

    def __post_init__(self):
        if self.u.alphabet != self.v.alphabet:
            raise DomainError("balanced pair components must share an alphabet")
        if not is_balanced(self.u, self.v):
            raise DomainError(f"({self.u}, {self.v}) is not balanced")

    def __str__(self) -> str:
        return f"({self.u},{self.v})"


@dataclass
class AlgorithmOutcome:
    """Result of the balanced pair algorithm.

    status is one of "closed", "cap-exceeded", "no-initial-pair"; when
    closed, minimal_pairs is stable under one more algorithm step.
    """

    status: str
    minimal_pairs: list[BalancedPair] = field(default_factory=list)
    iterations: int = 0
    initial_length: int | None = None


def is_balanced(u: Word, v: Word) -> bool:
    """Whether u and v contain every letter equally often."""
    if u.alphabet != v.alphabet:
        raise DomainError("words must share an alphabet")
    if len(u) != len(v):
        return False
    return bool((parikh(u) == parikh(v)).all())


def minimal_decomposition(p: BalancedPair) -> list[BalancedPair]:
    """Split a balanced pair at every balanced proper prefix.

    Cuts are greedy leftmost, so every piece is minimal: no proper
    prefix pair of a piece is balanced.
    """
    u, v = p.u, p.v
    d = len(u.alphabet)
    diff = [0] * d
    nonzero = 0
    pieces: list[BalancedPair] = []
    start = 0
    for i, (cu, cv) in enumerate(zip(u.codes, v.codes)):
        if cu != cv:
            before_u = diff[cu]
            diff[cu] += 1
            nonzero += (before_u == 0) - (diff[cu] == 0)
            before_v = diff[cv]
            diff[cv] -= 1
            nonzero += (before_v == 0) - (diff[cv] == 0)
        if nonzero == 0:
            pieces.append(BalancedPair(u[start : i + 1], v[start : i + 1]))
            start = i + 1
    return pieces


def default_seeds(phi0: Morphism, phi1: Morphism) -> tuple[str, str]:
    """The unique prolongable seed of each morphism, or an error when a
    morphism has none or several (explicit seeds are then required)."""
    chosen = []
    for m in (phi0, phi1):
        seeds = prolongable_seeds(m)
        if len(seeds) != 1:
            raise DomainError(
                f"{m} has prolongable seeds {seeds}; pass seeds explicitly"
            )
        chosen.append(seeds[0])
    return chosen[0], chosen[1]


def all_seed_pairs(phi0: Morphism, phi1: Morphism) -> list[tuple[str, str]]:
    """Every pair of prolongable seeds, in alphabet order."""
    return [(s0, s1) for s0 in prolongable_seeds(phi0) for s1 in prolongable_seeds(phi1)]


def find_initial_balanced_pair(
    phi0: Morphism,
    phi1: Morphism,
    seeds: tuple[str, str] | None = None,
    bound: int = 10_000,
) -> int | None:
    """Smallest n <= bound with parikh(u0[:n]) = parikh(u1[:n]), where
    u_i is the fixed point of phi_i from its seed; None if there is none.

    Both fixed points are streamed with O(1) Parikh-difference updates
    per letter, so million-letter bounds run in seconds.
    """
    if phi0.source != phi1.source:
        raise DomainError("the two morphisms must share an alphabet")
    if not (incidence_matrix(phi0) == incidence_matrix(phi1)).all():
        warnings.warn(
            "incidence matrices differ; the search still runs", stacklevel=2
        )
    if seeds is None:
        seeds = default_seeds(phi0, phi1)
    u0 = np.array(_fixed_point_codes(phi0, seeds[0], bound), dtype=np.int64)
    u1 = np.array(_fixed_point_codes(phi1, seeds[1], bound), dtype=np.int64)
    d = len(phi0.source)
    equal = np.ones(len(u0), dtype=bool)
    for letter in range(d):
        c0 = np.cumsum(u0 == letter)
        c1 = np.cumsum(u1 == letter)
        equal &= c0 == c1
    hits = np.flatnonzero(equal)
    if hits.size == 0:
        return None
    return int(hits[0]) + 1


def balanced_pair_algorithm(
    phi0: Morphism,
    phi1: Morphism,
    m: int = 1,
    seeds: tuple[str, str] | None = None,
    initial_bound: int = 10_000,
    max_pairs: int = 10_000,
    max_iterations: int = 100,
) -> AlgorithmOutcome:
    """Balanced pair algorithm for (phi0^m, phi1^m).

    From the smallest initial balanced pair of fixed-point prefixes,
    repeatedly map each minimal pair through (phi0^m, phi1^m) and
    decompose, until no new minimal pair appears (closed) or a cap is
    hit.  Pairs are processed in first-seen order, so the run is
    deterministic.
    """
    if phi0.source != phi1.source:
        raise DomainError("the two morphisms must share an alphabet")
    if not (incidence_matrix(phi0) == incidence_matrix(phi1)).all():
        raise DomainError("balanced pair algorithm requires equal incidence matrices")
    if seeds is None:
        seeds = default_seeds(phi0, phi1)
    n = find_initial_balanced_pair(phi0, phi1, seeds, bound=initial_bound)
    if n is None:
        return AlgorithmOutcome(status="no-initial-pair")
    p0 = power(phi0, m)
    p1 = power(phi1, m)
    alphabet = phi0.source
    u = Word(alphabet, tuple(_fixed_point_codes(phi0, seeds[0], n)))
    v = Word(alphabet, tuple(_fixed_point_codes(phi1, seeds[1], n)))
    seen: dict[BalancedPair, None] = {}
    queue = list(minimal_decomposition(BalancedPair(u, v)))
    for p in queue:
        seen.setdefault(p, None)
    iterations = 0
    frontier = list(seen)
    while frontier:
        iterations += 1
        if iterations > max_iterations:
            return AlgorithmOutcome("cap-exceeded", list(seen), iterations - 1, n)
        new: list[BalancedPair] = []
        for p in frontier:
            image = BalancedPair(apply(p0, p.u), apply(p1, p.v))
            for piece in minimal_decomposition(image):
                if piece not in seen:
                    seen[piece] = None
                    new.append(piece)
                    if len(seen) > max_pairs:
                        return AlgorithmOutcome("cap-exceeded", list(seen), iterations, n)
        frontier = new
    return AlgorithmOutcome("closed", list(seen), iterations, n)
