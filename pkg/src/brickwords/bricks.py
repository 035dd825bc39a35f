"""Brick alphabets and the simultaneous coding of two fixed points.

A brick is a triple (row-0 block, row-1 block, offset): one block from
each fixed point together with the signed column shift of the second
block's image relative to the first's.  Chaining bricks so that each
joins with the next yields a single sequence that encodes both fixed
points at once; the index word over the discovered brick alphabet is
the object the inference module tries to recognize as a fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OffsetBoundExceeded
from .words import Alphabet, Morphism, Word, _fixed_point_codes

__all__ = [
    "Brick",
    "PlacedBrick",
    "SimultaneousCoding",
    "joins_with",
    "next_offset",
    "simultaneous_coding",
    "tau",
    "render_diagram",
    "place_bricks",
    "offset_range",
]


@dataclass(frozen=True)
class Brick:
    """A (row0, row1, offset) triple; both rows have length `order`."""

    row0: Word
    row1: Word
    offset: int

    def __post_init__(self):
        if len(self.row0) != len(self.row1) or len(self.row0) == 0:
            raise DomainError("brick rows must be nonempty and of equal length")

    @property
    def order(self) -> int:
        return len(self.row0)

    def row(self, j: int) -> Word:
        return self.row0 if j == 0 else self.row1

    def __str__(self) -> str:
        return f"({self.row0},{self.row1},{self.offset})"


def joins_with(b: Brick, b2: Brick, phi0: Morphism, phi1: Morphism) -> bool:
    """Whether b2 can directly follow b: the image of b ends exactly
    where the image of b2 begins, on both rows.

    With s, t the offsets, this is |phi0(v0)| - s - |phi1(v1)| + t = 0,
    lengths taken over the first letter of each row for order > 1 (the
    overlap convention); order-h rows must also overlap by h - 1
    letters, otherwise the bricks cannot be adjacent at all.
    """
    if b.order != b2.order:
        raise DomainError("bricks of different order cannot join")
    if b.order > 1:
        if b.row0[1:] != b2.row0[: b.order - 1] or b.row1[1:] != b2.row1[: b.order - 1]:
            return False
    return next_offset(b, phi0, phi1) == b2.offset


def next_offset(b: Brick, phi0: Morphism, phi1: Morphism) -> int:
    """The unique offset t such that b joins with a brick of offset t."""
    return b.offset + len(phi1.images[b.row1[0]]) - len(phi0.images[b.row0[0]])


class SimultaneousCoding:
    """A finite prefix of the sequence that encodes two fixed points.

    brick_alphabet lists bricks in first occurrence order, which fixes
    the canonical numbering of the index alphabet C = {0,...,|B|-1};
    pi maps each index letter to its brick; index_word is the coded
    prefix itself.
    """

    def __init__(
        self,
        phi0: Morphism,
        phi1: Morphism,
        seeds: tuple[str, str],
        brick_alphabet: list[Brick],
        index_word: Word,
        order: int,
    ):
        self.phi0 = phi0
        self.phi1 = phi1
        self.seeds = seeds
        self.brick_alphabet = list(brick_alphabet)
        self.index_alphabet = index_word.alphabet
        self.index_word = index_word
        self.order = order
        self.pi = {
            self.index_alphabet.letters[i]: b for i, b in enumerate(self.brick_alphabet)
        }

    def brick(self, letter: str) -> Brick:
        return self.pi[letter]

    def bricks_of(self, word: Word) -> list[Brick]:
        """The brick sequence pi(word)."""
        return [self.brick_alphabet[c] for c in word.codes]

    def tau_of(self, word: Word, j: int) -> Word:
        """Row-j projection of pi(word), de-overlapped for order > 1:
        first letters of every block plus the tail of the last block."""
        bricks = self.bricks_of(word)
        if not bricks:
            return Word(self.phi0.source)
        if self.order == 1:
            codes = tuple(b.row(j).codes[0] for b in bricks)
        else:
            codes = (
                tuple(b.row(j).codes[0] for b in bricks) + bricks[-1].row(j).codes[1:]
            )
        return Word(self.phi0.source, codes)

    def offsets(self) -> list[int]:
        return [self.brick_alphabet[c].offset for c in self.index_word.codes]

    def __repr__(self) -> str:
        return (
            f"SimultaneousCoding(order={self.order}, bricks={len(self.brick_alphabet)}, "
            f"length={len(self.index_word)})"
        )


def simultaneous_coding(
    phi0: Morphism,
    phi1: Morphism,
    seeds: tuple[str, str],
    length: int,
    order: int = 1,
    offset_bound: int = 64,
) -> SimultaneousCoding:
    """Code the first `length` positions of the two fixed points with
    bricks of the given order.

    The brick at position i pairs the order-sized blocks of u0 and u1
    at i with the running offset t_i; t_0 = 0 and each brick joins with
    the next.  An offset leaving [-offset_bound, offset_bound] raises
    OffsetBoundExceeded, the empirical signal of an infinite brick
    alphabet.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    if offset_bound < 1:
        raise DomainError("offset bound must be >= 1")
    if length < 0:
        raise DomainError("length must be >= 0")
    if phi0.source != phi1.source:
        raise DomainError("the two morphisms must share an alphabet")
    h = order
    u0 = _fixed_point_codes(phi0, seeds[0], length + h - 1)
    u1 = _fixed_point_codes(phi1, seeds[1], length + h - 1)
    len0 = phi0._image_lens
    len1 = phi1._image_lens
    alphabet = phi0.source
    bricks: list[Brick] = []
    first_seen: dict[tuple, int] = {}
    word_codes: list[int] = []
    t = 0
    for i in range(length):
        if abs(t) > offset_bound:
            raise OffsetBoundExceeded(i, t, offset_bound)
        key = (tuple(u0[i : i + h]), tuple(u1[i : i + h]), t)
        idx = first_seen.get(key)
        if idx is None:
            idx = len(bricks)
            first_seen[key] = idx
            bricks.append(
                Brick(Word(alphabet, key[0]), Word(alphabet, key[1]), t)
            )
        word_codes.append(idx)
        t += int(len1[u1[i]]) - int(len0[u0[i]])
    index_alphabet = Alphabet([str(i) for i in range(max(1, len(bricks)))])
    index_word = Word(index_alphabet, tuple(word_codes))
    return SimultaneousCoding(phi0, phi1, seeds, bricks, index_word, order)


def tau(coding: SimultaneousCoding, j: int) -> Word:
    """Row-j projection of the coded prefix; reproduces a prefix of the
    fixed point u_j."""
    if j not in (0, 1):
        raise DomainError("projection index must be 0 or 1")
    return coding.tau_of(coding.index_word, j)


def offset_range(
    phi0: Morphism,
    phi1: Morphism,
    seeds: tuple[str, str],
    length: int,
) -> tuple[int, int]:
    """(min, max) of the coding offsets t_0..t_{length-1}, computed
    vectorized so million-letter scans stay fast."""
    u0 = np.array(_fixed_point_codes(phi0, seeds[0], length), dtype=np.int64)
    u1 = np.array(_fixed_point_codes(phi1, seeds[1], length), dtype=np.int64)
    deltas = phi1._image_lens[u1] - phi0._image_lens[u0]
    t = np.concatenate([[0], np.cumsum(deltas)[:-1]])
    return int(t.min()), int(t.max())


@dataclass(frozen=True)
class PlacedBrick:
    """A brick with its images laid out on absolute columns."""

    brick: Brick
    img0: Word
    img1: Word
    start0: int
    start1: int

    def span(self, j: int) -> tuple[int, int]:
        if j == 0:
            return self.start0, self.start0 + len(self.img0)
        return self.start1, self.start1 + len(self.img1)


def place_bricks(
    bricks: list[Brick], phi0: Morphism, phi1: Morphism
) -> list[PlacedBrick]:
    """Lay a brick sequence out on columns: row-0 images advance by the
    image length of each block's first letter, row-1 images sit at the
    brick's offset."""
    placed: list[PlacedBrick] = []
    start0 = 0
    for b in bricks:
        placed.append(
            PlacedBrick(b, phi0(b.row0), phi1(b.row1), start0, start0 + b.offset)
        )
        start0 += len(phi0.images[b.row0[0]])
    return placed


def render_diagram(bricks: list[Brick], phi0: Morphism, phi1: Morphism) -> str:
    """Two-line monospaced view of a joining brick sequence.

    Line 1 concatenates the phi0 images of the row-0 blocks with "|" at
    brick boundaries; line 2 does the same for row 1, shifted right by
    the initial offset when positive (line 1 is shifted when the offset
    is negative).  One character per letter; multi-character letters pad
    every cell to the widest token.
    """
    if not bricks:
        return "||\n||"
    for a, b in zip(bricks, bricks[1:]):
        if not joins_with(a, b, phi0, phi1):
            raise DomainError(f"brick {a} does not join with {b}")
    placed = place_bricks(bricks, phi0, phi1)
    width = max(
        len(letter) for p in placed for letter in tuple(p.img0) + tuple(p.img1)
    )
    base = min(placed[0].start0, placed[0].start1)

    def render_row(blocks: list[Word], start: int) -> str:
        cells = "|".join("".join(tok.ljust(width) for tok in blk) for blk in blocks)
        return " " * ((start - base) * width) + "|" + cells + "|"

    line0 = render_row([p.img0 for p in placed], placed[0].start0)
    line1 = render_row([p.img1 for p in placed], placed[0].start1)
    return f"{line0}\n{line1}"
