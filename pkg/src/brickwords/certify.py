"""Letter-dominance certificates and numeric prefix-count scans.

The certificate mechanizes the pairing argument that proves the absence
of an initial balanced pair: if every occurrence of a letter in the
dominated row pairs backward with exactly one occurrence in the
dominating row, every dominating occurrence after the first pairs
forward with exactly one dominated occurrence, and the dominating row's
initial occurrence is unpaired, then the dominating row's prefix counts
of that letter strictly exceed the dominated row's for every prefix
length.

All pairing conditions are checked locally on the diagrams of the brick
images of the 2-factors of the index word (escalating to 3-factors when
a window leaves a diagram), plus an explicit check of the first few
columns of the real coded picture, so a passing certificate covers every
position of the infinite picture.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bricks import SimultaneousCoding, place_bricks, render_diagram
from .errors import DomainError, InconclusiveError
from .inference import CandidateSubstitution, FactorSet, factor_closure
from .words import Morphism, Word, _fixed_point_codes

__all__ = [
    "DominanceCertificate",
    "verify_letter_dominance",
    "scan_prefix_counts",
]

_OK, _EXIT, _FAIL = 0, 1, 2


@dataclass
class DominanceCertificate:
    """Outcome of the local pairing check for one letter.

    A pass licenses: for all n > 0, the count of `letter` in the
    dominated row's n-prefix is strictly below the count in the
    dominating row's n-prefix.
    """

    letter: str
    direction: int
    window_back: int
    window_fwd: int
    checked_factors: int
    passed: bool
    initial_unpaired: int | None = None
    failure: dict | None = None
    classes_checked: int = 0

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def verify_letter_dominance(
    coding: SimultaneousCoding,
    cand: CandidateSubstitution,
    L2: FactorSet,
    letter: str,
    windows: tuple[int, int] = (1, 1),
    direction: int | None = None,
) -> DominanceCertificate:
    """Check the three pairing conditions for `letter` over the factor
    diagrams, with `windows = (back, fwd)` columns of context.

    direction selects the dominating row (0 or 1); None tries row 1
    first and returns the first passing direction, falling back to the
    row-1 failure certificate.  Requires a candidate verified by both
    the projection and joins checks, and back <= fwd (the counting
    argument is unsound otherwise).
    """
    if cand.status != "verified":
        raise DomainError(
            "dominance requires a candidate verified by both the projection "
            f"and joins checks (status: {cand.status})"
        )
    back, fwd = windows
    if back < 0 or fwd < 0:
        raise DomainError("windows must be nonnegative")
    if back > fwd:
        raise DomainError(
            "window_back must not exceed window_fwd; the pairing argument "
            "does not imply strict dominance otherwise"
        )
    if letter not in coding.phi0.source:
        raise DomainError(f"letter {letter!r} is not in the base alphabet")
    if direction is not None:
        return _certify_direction(coding, cand, L2, letter, back, fwd, direction)
    cert1 = _certify_direction(coding, cand, L2, letter, back, fwd, 1)
    if cert1.passed:
        return cert1
    cert0 = _certify_direction(coding, cand, L2, letter, back, fwd, 0)
    return cert0 if cert0.passed else cert1


def _certify_direction(
    coding: SimultaneousCoding,
    cand: CandidateSubstitution,
    L2: FactorSet,
    letter: str,
    back: int,
    fwd: int,
    direction: int,
) -> DominanceCertificate:
    alpha = coding.phi0.source.index(letter)
    factor_sets = {2: L2}
    last_failure = None
    classes = 0
    for k in (2, 3):
        factors = factor_sets.get(k)
        if factors is None:
            factors = factor_closure(cand.mu, cand.seed, k)
        unresolved, failure, classes = _check_factors(
            coding, factors, alpha, back, fwd, direction
        )
        if failure is not None:
            last_failure = failure
        if not unresolved:
            prefix_failure = _check_prefix(coding, alpha, back, fwd, direction, k)
            if prefix_failure is not None:
                return DominanceCertificate(
                    letter, direction, back, fwd, k,
                    passed=False, failure=prefix_failure, classes_checked=classes,
                )
            return DominanceCertificate(
                letter, direction, back, fwd, k,
                passed=True, initial_unpaired=0, classes_checked=classes,
            )
    if last_failure is not None:
        return DominanceCertificate(
            letter, direction, back, fwd, 3,
            passed=False, failure=last_failure, classes_checked=classes,
        )
    raise InconclusiveError(
        f"windows ({back},{fwd}) exceed the available context for letter "
        f"{letter!r} even over 3-factor diagrams"
    )


def _check_factors(coding, factors, alpha, back, fwd, direction):
    """Evaluate every pairing window over every factor diagram.

    An occurrence class is (index letter, row, position inside the
    image block).  A class is resolved when some anchor position p has
    the window fitting and holding exactly one partner in every factor
    that shows the letter at p; every occurrence of the infinite
    picture outside the first k-1 bricks is then covered.
    """
    g = direction
    d = 1 - g
    k = None
    states: dict[tuple, list[int]] = {}
    failures: dict[tuple, dict] = {}
    for f in factors:
        k = len(f)
        bricks = coding.bricks_of(f)
        placed = place_bricks(bricks, coding.phi0, coding.phi1)
        cells = (_row_cells(placed, 0), _row_cells(placed, 1))
        for p, pb in enumerate(placed):
            for r in (0, 1):
                start, _ = pb.span(r)
                img = pb.img0 if r == 0 else pb.img1
                for idx, code in enumerate(img.codes):
                    if code != alpha:
                        continue
                    n = start + idx
                    if r == d:
                        lo, hi, other = n - back, n, g
                    else:
                        lo, hi, other = n, n + fwd, d
                    count = _count_window(cells[other], lo, hi, alpha)
                    key = (f[p], r, idx)
                    per_p = states.setdefault(key, [_OK] * k)
                    if count is None:
                        per_p[p] = max(per_p[p], _EXIT)
                    elif count != 1:
                        per_p[p] = _FAIL
                        failures.setdefault(
                            key,
                            {
                                "kind": "pairing",
                                "factor": str(f),
                                "row": r,
                                "column": n,
                                "window": [lo, hi],
                                "count": count,
                                "diagram": render_diagram(
                                    bricks, coding.phi0, coding.phi1
                                ),
                            },
                        )
    unresolved = [
        key for key, per_p in states.items() if not any(s == _OK for s in per_p)
    ]
    failure = None
    for key in unresolved:
        if key in failures:
            failure = failures[key]
            break
    return unresolved, failure, len(states)


def _row_cells(placed, j):
    cells: dict[int, int] = {}
    for pb in placed:
        start, _ = pb.span(j)
        img = pb.img0 if j == 0 else pb.img1
        for idx, code in enumerate(img.codes):
            col = start + idx
            prev = cells.get(col)
            if prev is None:
                cells[col] = code
            elif prev != code:
                raise DomainError("inconsistent image overlap in a brick diagram")
    return cells


def _count_window(cells, lo, hi, alpha):
    count = 0
    for col in range(lo, hi + 1):
        code = cells.get(col)
        if code is None:
            return None
        count += code == alpha
    return count


def _check_prefix(coding, alpha, back, fwd, direction, k):
    """Check the pairing conditions on the first k-1 bricks of the real
    picture, windows truncated at column 0, and the unpaired initial
    occurrence at column 0 of the dominating row."""
    g = direction
    d = 1 - g
    w = coding.index_word
    zone = min(k - 1, len(w))
    count = max(zone + back + fwd + 8, 2 * zone)
    while True:
        count = min(count, len(w))
        placed = place_bricks(coding.bricks_of(w[:count]), coding.phi0, coding.phi1)
        cells = (_row_cells(placed, 0), _row_cells(placed, 1))
        result = _prefix_conditions(placed[:zone], cells, alpha, back, fwd, d, g)
        if result != "grow":
            return result
        if count == len(w):
            raise InconclusiveError(
                "coding too short to close the forward windows near the start"
            )
        count *= 2


def _prefix_conditions(zone_placed, cells, alpha, back, fwd, d, g):
    initial = cells[g].get(0)
    if initial != alpha:
        return {
            "kind": "initial",
            "detail": "dominating row does not start with the letter",
        }
    for col in range(0, fwd + 1):
        code = cells[d].get(col)
        if code is None:
            return "grow"
        if code == alpha:
            return {
                "kind": "initial",
                "detail": (
                    "initial occurrence in the dominating row is paired: the "
                    f"dominated row holds the letter at column {col}"
                ),
                "column": col,
            }
    for pb in zone_placed:
        for r in (0, 1):
            start, _ = pb.span(r)
            img = pb.img0 if r == 0 else pb.img1
            for idx, code in enumerate(img.codes):
                if code != alpha:
                    continue
                n = start + idx
                if r == g and n == 0:
                    continue
                if r == d:
                    lo, hi, other = max(0, n - back), n, g
                else:
                    lo, hi, other = n, n + fwd, d
                count = _count_window(cells[other], lo, hi, alpha)
                if count is None:
                    return "grow"
                if count != 1:
                    return {
                        "kind": "pairing",
                        "where": "prefix",
                        "row": r,
                        "column": n,
                        "window": [lo, hi],
                        "count": count,
                    }
    return None


def scan_prefix_counts(
    phi0: Morphism,
    phi1: Morphism,
    seeds: tuple[str, str],
    letter: str,
    n: int,
) -> dict:
    """Numeric witness: stream both fixed points to length n and report
    the minimum over 1 <= m <= n of count(u1[:m]) - count(u0[:m]) for
    the letter, the first m attaining it, and whether every prefix
    difference is positive."""
    if n < 1:
        raise DomainError("scan length must be >= 1")
    alpha = phi0.source.index(letter)
    u0 = np.array(_fixed_point_codes(phi0, seeds[0], n), dtype=np.int64)
    u1 = np.array(_fixed_point_codes(phi1, seeds[1], n), dtype=np.int64)
    diff = np.cumsum(u1 == alpha) - np.cumsum(u0 == alpha)
    argmin = int(diff.argmin())
    min_diff = int(diff[argmin])
    return {
        "letter": letter,
        "n": n,
        "min_diff": min_diff,
        "argmin": argmin + 1,
        "all_positive": min_diff >= 1,
    }
