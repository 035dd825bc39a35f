"""Named morphism pairs from the literature, used by tests and demos."""

from __future__ import annotations

from typing import NamedTuple

from .words import Morphism, parse_morphism

__all__ = [
    "Fixture",
    "theorem1",
    "family",
    "example1",
    "example2",
    "nonprimitive",
    "sellami1",
    "sellami2",
]


class Fixture(NamedTuple):
    phi0: Morphism
    phi1: Morphism
    seeds: tuple[str, str]


def theorem1() -> Fixture:
    """The conjectured pair with no initial balanced pair."""
    return family(1)


def family(k: int) -> Fixture:
    """a -> a^k bc, b -> a, c -> ac against a -> cba^k, b -> a, c -> ca;
    k = 1 is the theorem pair, k = 2 needs order-2 bricks."""
    phi0 = parse_morphism(f"a->a^{k}bc;b->a;c->ac")
    phi1 = parse_morphism(f"a->cba^{k};b->a;c->ca")
    return Fixture(phi0, phi1, ("a", "c"))


def example1() -> Fixture:
    """Two-letter pair whose 3-brick coding is fixed by 0->01, 1->201,
    2->202.  The coding pairs the fixed points from seeds (a, b); the
    initial-balanced-pair observation uses the (a, a) fixed points."""
    phi0 = parse_morphism("a->aab;b->ab")
    phi1 = parse_morphism("a->aba;b->ba")
    return Fixture(phi0, phi1, ("a", "b"))


def example2() -> Fixture:
    """Three-letter pair with a 12-brick coding over C = {0,...,11}."""
    phi0 = parse_morphism("a->abac;b->aba;c->ab")
    phi1 = parse_morphism("a->acab;b->aab;c->ab")
    return Fixture(phi0, phi1, ("a", "a"))


def nonprimitive() -> Fixture:
    """Non-primitive pair whose growth rates differ (4^n against 3^n),
    so the coding offsets diverge and the brick alphabet is infinite."""
    phi0 = parse_morphism("a->abacaa;b->cbb;c->bcc")
    phi1 = parse_morphism("a->baacaa;b->bbc;c->bcc")
    return Fixture(phi0, phi1, ("a", "b"))


def sellami1() -> Fixture:
    """First comparison pair: the balanced pair algorithm terminates and
    the 6-brick coding is fixed by a morphism."""
    phi0 = parse_morphism("a->aba;b->ab")
    phi1 = parse_morphism("a->aab;b->ba")
    return Fixture(phi0, phi1, ("a", "a"))


def sellami2() -> Fixture:
    """Second comparison pair: the order-1 coding seems not to be fixed
    by any morphism."""
    phi0 = parse_morphism("a->ab;b->ac;c->a")
    phi1 = parse_morphism("a->ab;b->ca;c->a")
    return Fixture(phi0, phi1, ("a", "a"))
