"""Alphabets, finite words, morphisms, Parikh vectors and fixed points.

Letters are arbitrary string tokens, so both classical alphabets like
{a, b, c} and index alphabets like {0, ..., 11} work unchanged.  Words
over an alphabet with multi-character tokens are printed with a "."
separator between letters; single-character alphabets print joined.
"""

from __future__ import annotations

import re
from itertools import chain
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError, ParseError

__all__ = [
    "Alphabet",
    "Word",
    "Morphism",
    "apply",
    "power",
    "compose",
    "incidence_matrix",
    "is_primitive",
    "parikh",
    "fixed_point_prefix",
    "iter_fixed_point",
    "prolongable_seeds",
    "parse_morphism",
    "parse_word",
]


class Alphabet:
    """An ordered finite set of distinct letter tokens.

    The declaration order is fixed at construction and used for all
    Parikh and incidence indexing.
    """

    __slots__ = ("letters", "_index")

    def __init__(self, letters: Iterable[str]):
        self.letters = tuple(letters)
        if not self.letters:
            raise DomainError("alphabet must be nonempty")
        self._index = {a: i for i, a in enumerate(self.letters)}
        if len(self._index) != len(self.letters):
            raise DomainError(f"duplicate letters in alphabet {self.letters}")
        for a in self.letters:
            if not isinstance(a, str) or a == "" or any(ch.isspace() for ch in a):
                raise DomainError(f"invalid letter token {a!r}")

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise DomainError(f"letter {letter!r} not in alphabet {self.letters}") from None

    @property
    def multichar(self) -> bool:
        return any(len(a) > 1 for a in self.letters)

    def word(self, letters: Iterable[str]) -> Word:
        """Build a word from an iterable of letter tokens."""
        return Word(self, tuple(self.index(a) for a in letters))

    def parse(self, text: str) -> Word:
        """Parse a word from its textual form (see :func:`parse_word`)."""
        return parse_word(text, self)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __contains__(self, letter) -> bool:
        return letter in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Alphabet({','.join(self.letters)})"


class Word:
    """An immutable finite word over a fixed alphabet.

    Internally letters are stored as alphabet indices; `word[i]` returns
    the letter token and slicing returns a Word.
    """

    __slots__ = ("alphabet", "codes")

    def __init__(self, alphabet: Alphabet, codes: tuple[int, ...] = ()):
        self.alphabet = alphabet
        self.codes = tuple(codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.alphabet, self.codes[i])
        return self.alphabet.letters[self.codes[i]]

    def __iter__(self) -> Iterator[str]:
        letters = self.alphabet.letters
        return (letters[c] for c in self.codes)

    def __add__(self, other: Word) -> Word:
        if self.alphabet != other.alphabet:
            raise DomainError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.codes + other.codes)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.alphabet == other.alphabet
            and self.codes == other.codes
        )

    def __hash__(self) -> int:
        return hash((self.alphabet.letters, self.codes))

    def __bool__(self) -> bool:
        return bool(self.codes)

    def count(self, letter: str) -> int:
        return self.codes.count(self.alphabet.index(letter))

    def startswith(self, other: Word) -> bool:
        return self.codes[: len(other.codes)] == other.codes

    def __str__(self) -> str:
        sep = "." if self.alphabet.multichar else ""
        return sep.join(self.alphabet.letters[c] for c in self.codes)

    def __repr__(self) -> str:
        return f"Word({str(self) or 'ε'})"


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse a word in the spec grammar.

    Single-character letters are juxtaposed ("abc"); words containing "."
    are split on it, which is how alphabets with multi-character tokens
    such as {0,...,11} are written ("0.9.10").  A trailing "x^k" repeats
    the preceding letter k times ("a^3bc" is "aaabc").
    """
    tokens: list[str] = []
    if "." in text:
        pieces = [p for p in text.split(".") if p != ""]
    else:
        pieces = list(text)
    i = 0
    while i < len(pieces):
        piece = pieces[i]
        if "^" in piece and "." in text:
            base, _, exp = piece.partition("^")
            tokens.extend([base] * _parse_repeat(exp, text))
            i += 1
            continue
        if i + 1 < len(pieces) and pieces[i + 1] == "^":
            j = i + 2
            digits = ""
            while j < len(pieces) and pieces[j].isdigit():
                digits += pieces[j]
                j += 1
            tokens.extend([piece] * _parse_repeat(digits, text))
            i = j
            continue
        tokens.append(piece)
        i += 1
    try:
        return alphabet.word(tokens)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def _parse_repeat(digits: str, context: str) -> int:
    if not digits.isdigit() or int(digits) < 1:
        raise ParseError(f"bad repetition count {digits!r} in {context!r}")
    return int(digits)


class Morphism:
    """A map from letters to nonempty finite words, extended to words by
    concatenation.  Images must be nonempty (non-erasing)."""

    def __init__(self, source: Alphabet, target: Alphabet, images: dict[str, Word | str]):
        self.source = source
        self.target = target
        img: list[Word] = []
        for a in source.letters:
            if a not in images:
                raise DomainError(f"no image given for letter {a!r}")
            w = images[a]
            if isinstance(w, str):
                w = parse_word(w, target)
            if w.alphabet != target:
                raise DomainError(f"image of {a!r} is not over the target alphabet")
            if len(w) == 0:
                raise DomainError(f"erasing image for letter {a!r}")
            img.append(w)
        if len(images) != len(source.letters):
            unknown = set(images) - set(source.letters)
            raise DomainError(f"images given for unknown letters {sorted(unknown)}")
        self.images = {a: w for a, w in zip(source.letters, img)}
        self._image_codes = [w.codes for w in img]
        self._image_lens = np.array([len(w) for w in img], dtype=np.int64)

    @classmethod
    def from_rules(cls, rules: dict[str, str], alphabet: Alphabet | None = None) -> Morphism:
        """Build an endomorphism from `letter -> image string` rules.

        The alphabet defaults to the rule keys in declaration order.
        """
        if alphabet is None:
            alphabet = Alphabet(rules.keys())
        return cls(alphabet, alphabet, dict(rules))

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def image(self, letter: str) -> Word:
        return self.images[letter]

    def __call__(self, u: Word | str) -> Word:
        return apply(self, u)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Morphism)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(self._image_codes)))

    def __str__(self) -> str:
        return ";".join(f"{a}->{self.images[a]}" for a in self.source.letters)

    def __repr__(self) -> str:
        return f"Morphism({self})"


def apply(m: Morphism, u: Word | str) -> Word:
    """Image of the word u under m (a single letter token is accepted)."""
    if isinstance(u, str):
        u = m.source.word([u]) if u in m.source else m.source.parse(u)
    if u.alphabet != m.source:
        raise DomainError("word is not over the morphism's source alphabet")
    codes = m._image_codes
    return Word(m.target, tuple(chain.from_iterable(codes[c] for c in u.codes)))


def compose(outer: Morphism, inner: Morphism) -> Morphism:
    """The morphism u -> outer(inner(u))."""
    if inner.target != outer.source:
        raise DomainError("composition mismatch: inner target differs from outer source")
    return Morphism(
        inner.source, outer.target, {a: apply(outer, inner.images[a]) for a in inner.source}
    )


def power(m: Morphism, k: int) -> Morphism:
    """k-fold composition of an endomorphism with itself (k >= 1)."""
    if not m.is_endomorphism:
        raise DomainError("power requires an endomorphism")
    if k < 1:
        raise DomainError("power requires k >= 1")
    result = m
    for _ in range(k - 1):
        result = compose(m, result)
    return result


def parikh(u: Word) -> np.ndarray:
    """Per-letter occurrence counts of u, in alphabet order."""
    return np.bincount(
        np.fromiter(u.codes, dtype=np.int64, count=len(u.codes)),
        minlength=len(u.alphabet),
    )


def incidence_matrix(m: Morphism) -> np.ndarray:
    """Matrix whose (i, j) entry counts letter i in the image of letter j."""
    if not m.is_endomorphism:
        raise DomainError("incidence matrix requires an endomorphism")
    d = len(m.source)
    M = np.zeros((d, d), dtype=np.int64)
    for j, a in enumerate(m.source.letters):
        M[:, j] = parikh(m.images[a])
    return M


def is_primitive(M: np.ndarray) -> bool:
    """Whether some power k <= (d-1)^2 + 1 of M is entrywise positive.

    Only the zero pattern matters, so the check runs on boolean matrices
    and never overflows.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError("incidence matrix must be square")
    if (M < 0).any():
        raise DomainError("incidence matrix must be nonnegative")
    d = M.shape[0]
    B = M > 0
    P = B.copy()
    for _ in range((d - 1) ** 2 + 1):
        if P.all():
            return True
        P = (P.astype(np.int64) @ B.astype(np.int64)) > 0
    return False


def prolongable_seeds(m: Morphism) -> list[str]:
    """Letters x with m(x) starting with x and |m(x)| >= 2, in alphabet order."""
    if not m.is_endomorphism:
        raise DomainError("prolongable seeds require an endomorphism")
    return [
        a
        for a in m.source.letters
        if len(m.images[a]) >= 2 and m.images[a][0] == a
    ]


def _check_seed(m: Morphism, seed: str) -> int:
    code = m.source.index(seed)
    img = m._image_codes[code]
    if len(img) < 2 or img[0] != code:
        raise DomainError(f"letter {seed!r} is not a prolongable seed for {m}")
    return code


def _fixed_point_codes(m: Morphism, seed: str, n: int) -> list[int]:
    """First n letter codes of the fixed point, by leftmost expansion.

    The prefix grows as m(u[0]) m(u[1]) ...; only O(n) letters are ever
    materialized.
    """
    code = _check_seed(m, seed)
    if n <= 0:
        return []
    images = m._image_codes
    out = list(images[code])
    i = 1
    while len(out) < n:
        out.extend(images[out[i]])
        i += 1
    del out[n:]
    return out


def fixed_point_prefix(m: Morphism, seed: str, n: int) -> Word:
    """The first n letters of the one-sided fixed point of m starting
    with the prolongable letter `seed`."""
    return Word(m.source, tuple(_fixed_point_codes(m, seed, n)))


def iter_fixed_point(m: Morphism, seed: str) -> Iterator[str]:
    """Stream the letters of the fixed point of m from `seed`, without a
    length bound.  Memory grows linearly with the letters consumed."""
    code = _check_seed(m, seed)
    images = m._image_codes
    letters = m.source.letters
    out = list(images[code])
    i = 0
    j = 1
    while True:
        while i < len(out):
            yield letters[out[i]]
            i += 1
        out.extend(images[out[j]])
        j += 1


_RULE_RE = re.compile(r"^\s*(\S+?)\s*->\s*(\S+)\s*$")


def parse_morphism(text: str, alphabet: Alphabet | None = None) -> Morphism:
    """Parse the morphism spec grammar `rule (";" rule)*` with
    `rule = letter "->" word`, e.g. ``a->abc;b->a;c->ac``.

    The alphabet defaults to the rule left-hand sides in declaration
    order; images may use the `x^k` repetition sugar.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty morphism spec")
    rules: dict[str, str] = {}
    order: list[str] = []
    col = 1
    for part in text.split(";"):
        mobj = _RULE_RE.match(part)
        if mobj is None:
            raise ParseError(f"bad rule {part.strip()!r}, expected letter->word", column=col)
        letter, image = mobj.group(1), mobj.group(2)
        if letter in rules:
            raise ParseError(f"duplicate rule for letter {letter!r}", column=col)
        rules[letter] = image
        order.append(letter)
        col += len(part) + 1
    if alphabet is None:
        alphabet = Alphabet(order)
    images = {a: parse_word(img, alphabet) for a, img in rules.items()}
    missing = [a for a in alphabet.letters if a not in images]
    if missing:
        raise ParseError(f"no rule for letters {missing}")
    return Morphism(alphabet, alphabet, images)
