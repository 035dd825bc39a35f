"""Recognizing the index word of a coding as a substitution fixed point.

The search decodes a prefix of the index word w as mu(w[0]) mu(w[1]) ...
by backtracking over image lengths; a successful candidate is then
certified against the two propositions that make the coding trustworthy:
the projection identity (with per-letter correction suffixes) and the
pairwise joining of adjacent bricks.  Return words give the derived
sequence used to retry inference one level up.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bricks import Brick, SimultaneousCoding, joins_with
from .errors import DomainError, RefutationError
from .words import Alphabet, Morphism, Word, apply, prolongable_seeds

__all__ = [
    "CandidateSubstitution",
    "FactorSet",
    "CorrectionMaps",
    "Verdict",
    "infer_fixing_substitution",
    "infer_substitution_for_word",
    "factor_closure",
    "derive_correction_maps",
    "verify_projection",
    "verify_joins",
    "return_words",
    "derived_coding",
]

DEFAULT_MAX_IMAGE_LEN = 8
DEFAULT_HORIZON = 5_000
DEFAULT_NODE_BUDGET = 10_000_000


@dataclass
class CandidateSubstitution:
    """An inferred substitution fixing the index word, with its
    verification state."""

    mu: Morphism
    horizon: int
    coding: SimultaneousCoding | None = None
    warnings: list[str] = field(default_factory=list)
    projection_verified: bool = False
    joins_verified: bool = False
    refuted: bool = False

    @property
    def status(self) -> str:
        if self.refuted:
            return "refuted"
        if self.projection_verified and self.joins_verified:
            return "verified"
        return "unverified"

    @property
    def seed(self) -> str:
        """First letter of the fixed point mu generates."""
        if self.coding is not None and len(self.coding.index_word):
            return self.coding.index_word[0]
        seeds = prolongable_seeds(self.mu)
        if not seeds:
            raise DomainError("candidate substitution has no prolongable seed")
        return seeds[0]


@dataclass(frozen=True)
class FactorSet:
    """All length-k factors of a substitution fixed point."""

    length: int
    factors: frozenset[Word]

    def __iter__(self):
        return iter(sorted(self.factors, key=lambda w: w.codes))

    def __len__(self):
        return len(self.factors)

    def __contains__(self, w: Word) -> bool:
        return w in self.factors


@dataclass
class CorrectionMaps:
    """Per-index-letter suffix words s_0, s_1 aligning projected mu
    images with the phi images."""

    s0: dict[str, Word]
    s1: dict[str, Word]

    def get(self, i: int) -> dict[str, Word]:
        return self.s0 if i == 0 else self.s1


@dataclass
class Verdict:
    """Outcome of a verification pass, with located counterexamples."""

    passed: bool
    failures: list[dict] = field(default_factory=list)
    checked: int = 0

    def __bool__(self) -> bool:
        return self.passed


class _Budget(Exception):
    pass


def _search_images(
    codes: tuple[int, ...],
    n_letters: int,
    max_image_len: int,
    horizon: int,
    node_budget: int,
) -> list[tuple[int, ...]] | None:
    """Backtracking decode of codes[:horizon] as a concatenation of
    images.  Image lengths are tried smallest first and letters are
    resolved left to right, so the first complete consistent assignment
    is deterministic."""
    images: list[tuple[int, ...] | None] = [None] * n_letters
    avail = len(codes)
    budget = [node_budget]
    missing = [n_letters]

    # the decode runs past the horizon when a letter has not yet been
    # read as a source, so the returned assignment is always complete;
    # the decoded horizon is then >= the requested one
    def extend(i: int, j: int):
        while j < horizon or missing[0] > 0:
            if i >= avail:
                return None
            x = codes[i]
            im = images[x]
            if im is None:
                min_len = 2 if i == 0 else 1
                for guess in range(min_len, max_image_len + 1):
                    if j + guess > avail:
                        break
                    if budget[0] <= 0:
                        raise _Budget
                    budget[0] -= 1
                    images[x] = codes[j : j + guess]
                    missing[0] -= 1
                    result = extend(i + 1, j + guess)
                    if result is not None:
                        return result
                    images[x] = None
                    missing[0] += 1
                return None
            end = j + len(im)
            stop = min(end, avail)
            if codes[j:stop] != im[: stop - j]:
                return None
            i += 1
            j = end
        return j

    try:
        reached = extend(0, 0)
    except _Budget:
        return None
    if reached is None:
        return None
    return list(images)  # type: ignore[return-value]


def infer_substitution_for_word(
    word: Word,
    max_image_len: int = DEFAULT_MAX_IMAGE_LEN,
    horizon: int = DEFAULT_HORIZON,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Morphism | None:
    """Find the first substitution (smallest image lengths, letters left
    to right) whose fixed point begins with word[:horizon]; None when
    the bounded search exhausts or the node budget runs out."""
    if len(word) == 0:
        raise DomainError("cannot infer a substitution for the empty word")
    horizon = min(horizon, len(word))
    images = _search_images(
        word.codes, len(word.alphabet), max_image_len, horizon, node_budget
    )
    if images is None:
        return None
    alphabet = word.alphabet
    return Morphism(
        alphabet,
        alphabet,
        {a: Word(alphabet, images[c]) for c, a in enumerate(alphabet.letters)},
    )


def infer_fixing_substitution(
    coding: SimultaneousCoding,
    max_image_len: int = DEFAULT_MAX_IMAGE_LEN,
    horizon: int = DEFAULT_HORIZON,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> CandidateSubstitution | None:
    """Infer a substitution mu with mu(w) = w for the coding's index
    word w; None when no consistent assignment exists within the caps
    (an absence within caps, not a nonexistence proof)."""
    w = coding.index_word
    if len(w) < horizon:
        raise DomainError(
            f"index word has {len(w)} letters, fewer than the horizon {horizon}"
        )
    mu = infer_substitution_for_word(w, max_image_len, horizon, node_budget)
    if mu is None:
        return None
    cand = CandidateSubstitution(mu=mu, horizon=horizon, coding=coding)
    consumed = _source_letters_consumed(mu, w, horizon)
    counts = [w.codes[:consumed].count(c) for c in range(len(w.alphabet))]
    rare = [w.alphabet.letters[c] for c, k in enumerate(counts) if k < 2]
    if rare:
        cand.warnings.append(
            f"letters {rare} occur fewer than twice in the decoded prefix; "
            "the horizon may be inconclusive"
        )
    return cand


def _source_letters_consumed(mu: Morphism, w: Word, horizon: int) -> int:
    total = 0
    i = 0
    while total < horizon and i < len(w):
        total += len(mu.images[w[i]])
        i += 1
    return i


def factor_closure(mu: Morphism, seed: str, k: int) -> FactorSet:
    """All k-factors of the fixed point of mu from seed, as the least
    set containing the factors of a seed expansion and closed under
    taking k-factors of images."""
    if k < 1:
        raise DomainError("factor length must be >= 1")
    prefix = mu.source.word([seed])
    while len(prefix) < k + 1:
        grown = apply(mu, prefix)
        if len(grown) == len(prefix):
            break
        prefix = grown
    factors: set[tuple[int, ...]] = set()
    queue: list[tuple[int, ...]] = []

    def add_factors(codes: tuple[int, ...]):
        top = len(codes) - k
        for i in range(top + 1):
            f = codes[i : i + k]
            if f not in factors:
                factors.add(f)
                queue.append(f)

    add_factors(prefix.codes[: max(len(prefix), k)])
    image_codes = mu._image_codes
    while queue:
        f = queue.pop()
        image = tuple(c for x in f for c in image_codes[x])
        add_factors(image)
    alphabet = mu.source
    return FactorSet(k, frozenset(Word(alphabet, f) for f in factors))


def _bundle_parts(cand: CandidateSubstitution, coding: SimultaneousCoding | None):
    coding = coding or cand.coding
    if coding is None:
        raise DomainError("candidate has no coding attached")
    return coding, cand.mu


def derive_correction_maps(
    cand: CandidateSubstitution, coding: SimultaneousCoding | None = None
) -> CorrectionMaps:
    """Compute s_i(x) at each letter's first occurrence context: the
    unique suffix with tau_i pi mu(w[:m+1]) s_i(x) = phi_i tau_i pi(w[:m+1]).

    Raises RefutationError when the left side is not a prefix of the
    right side for some letter, which refutes the candidate.
    """
    coding, mu = _bundle_parts(cand, coding)
    w = coding.index_word
    first_at: dict[int, int] = {}
    for pos, c in enumerate(w.codes):
        if c not in first_at:
            first_at[c] = pos
        if len(first_at) == len(w.alphabet):
            break
    missing = [
        w.alphabet.letters[c] for c in range(len(w.alphabet)) if c not in first_at
    ]
    if missing:
        raise DomainError(f"letters {missing} do not occur in the index word")
    maps = CorrectionMaps({}, {})
    for c, pos in sorted(first_at.items(), key=lambda kv: kv[1]):
        x = w.alphabet.letters[c]
        context = w[: pos + 1]
        mu_context = apply(mu, context)
        for i in (0, 1):
            lhs = coding.tau_of(mu_context, i)
            rhs = (coding.phi0 if i == 0 else coding.phi1)(coding.tau_of(context, i))
            if not rhs.startswith(lhs):
                raise RefutationError(
                    x, i, f"tau_{i} pi mu(w[:{pos + 1}]) = {lhs} is not a prefix of {rhs}"
                )
            maps.get(i)[x] = rhs[len(lhs) :]
    return maps


def verify_projection(
    cand: CandidateSubstitution,
    maps: CorrectionMaps,
    L2: FactorSet,
    coding: SimultaneousCoding | None = None,
) -> Verdict:
    """Check the projection identity over every 2-factor yx of the index
    word and both rows:

        tau_i pi mu(x) s_i(x) = s_i(y) phi_i tau_i pi(x)

    together with the base case at w[0].  A pass establishes that the
    row projections of pi(w) reproduce the two fixed points.
    """
    coding, mu = _bundle_parts(cand, coding)
    phis = (coding.phi0, coding.phi1)
    failures: list[dict] = []
    checked = 0
    seed = cand.seed if cand.coding is not None else coding.index_word[0]
    seed_word = mu.source.word([seed])
    mu_seed = apply(mu, seed_word)
    for i in (0, 1):
        lhs = coding.tau_of(mu_seed, i) + maps.get(i)[seed]
        rhs = phis[i](coding.tau_of(seed_word, i))
        checked += 1
        if lhs != rhs:
            failures.append(
                {"kind": "base", "projection": i, "lhs": str(lhs), "rhs": str(rhs)}
            )
    for f in L2:
        y, x = f[0], f[1]
        x_word = mu.source.word([x])
        mu_x = apply(mu, x_word)
        for i in (0, 1):
            lhs = coding.tau_of(mu_x, i) + maps.get(i)[x]
            rhs = maps.get(i)[y] + phis[i](coding.tau_of(x_word, i))
            checked += 1
            if lhs != rhs:
                failures.append(
                    {
                        "kind": "factor",
                        "projection": i,
                        "factor": str(f),
                        "lhs": str(lhs),
                        "rhs": str(rhs),
                    }
                )
    verdict = Verdict(passed=not failures, failures=failures, checked=checked)
    cand.projection_verified = verdict.passed
    if failures:
        cand.refuted = True
    return verdict


def verify_joins(
    cand: CandidateSubstitution,
    coding: SimultaneousCoding | None = None,
    L2: FactorSet | None = None,
) -> Verdict:
    """Check that pi maps every 2-factor of the index word to a joining
    brick pair, so the coded picture has no gaps or overlaps."""
    coding, mu = _bundle_parts(cand, coding)
    if L2 is None:
        L2 = factor_closure(mu, cand.seed, 2)
    failures: list[dict] = []
    checked = 0
    for f in L2:
        b0 = coding.brick(f[0])
        b1 = coding.brick(f[1])
        checked += 1
        if not joins_with(b0, b1, coding.phi0, coding.phi1):
            failures.append(
                {
                    "factor": str(f),
                    "brick0": str(b0),
                    "brick1": str(b1),
                    "diagram": _nonjoining_diagram(b0, b1, coding),
                }
            )
    verdict = Verdict(passed=not failures, failures=failures, checked=checked)
    cand.joins_verified = verdict.passed
    if failures:
        cand.refuted = True
    return verdict


def _nonjoining_diagram(b0: Brick, b1: Brick, coding: SimultaneousCoding) -> str:
    from .bricks import render_diagram

    one = render_diagram([b0], coding.phi0, coding.phi1)
    two = render_diagram([b1], coding.phi0, coding.phi1)
    return f"{one}\n  does not join with\n{two}"


def return_words(u_prefix: Word, factor: Word) -> list[Word]:
    """Distinct words between consecutive occurrences of factor in
    u_prefix (occurrence start up to the next occurrence start), in
    first occurrence order."""
    starts = _occurrences(u_prefix, factor)
    if len(starts) < 2:
        raise DomainError(
            f"factor {factor} occurs {len(starts)} time(s); need at least 2"
        )
    seen: dict[tuple[int, ...], None] = {}
    for a, b in zip(starts, starts[1:]):
        seen.setdefault(u_prefix.codes[a:b], None)
    return [Word(u_prefix.alphabet, codes) for codes in seen]


def derived_coding(u_prefix: Word, factor: Word) -> Word:
    """The sequence of return-word indices (first occurrence numbering),
    one symbol per completed return; input for a derived-level retry of
    inference."""
    starts = _occurrences(u_prefix, factor)
    if len(starts) < 2:
        raise DomainError(
            f"factor {factor} occurs {len(starts)} time(s); need at least 2"
        )
    numbering: dict[tuple[int, ...], int] = {}
    out: list[int] = []
    for a, b in zip(starts, starts[1:]):
        codes = u_prefix.codes[a:b]
        idx = numbering.setdefault(codes, len(numbering))
        out.append(idx)
    alphabet = Alphabet([str(i) for i in range(len(numbering))])
    return Word(alphabet, tuple(out))


def _occurrences(u: Word, factor: Word) -> list[int]:
    if u.alphabet != factor.alphabet:
        raise DomainError("factor must be over the word's alphabet")
    if len(factor) == 0:
        raise DomainError("factor must be nonempty")
    f = factor.codes
    return [i for i in range(len(u) - len(f) + 1) if u.codes[i : i + len(f)] == f]
