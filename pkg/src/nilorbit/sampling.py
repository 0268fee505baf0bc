"""Seeded small-height rational sampling.

Scheme: numerators uniform in ``[-HEIGHT, HEIGHT]``, denominators uniform in
``DENOMINATORS``, drawn from :class:`random.Random` seeded with the string
``"<purpose>:<seed>"`` (string seeds are hashed deterministically by CPython,
independent of ``PYTHONHASHSEED``).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .bch import GroupElement
from .liealg import Functional, LieAlgebra, Vector

HEIGHT = 6
DENOMINATORS = (1, 2, 3, 4)


def rng(purpose: str, seed: int = 0) -> random.Random:
    return random.Random(f"{purpose}:{seed}")


def rational(r: random.Random) -> Fraction:
    return Fraction(r.randint(-HEIGHT, HEIGHT), r.choice(DENOMINATORS))


def coords(r: random.Random, n: int) -> tuple[Fraction, ...]:
    return tuple(rational(r) for _ in range(n))


def vector(algebra: LieAlgebra, r: random.Random) -> Vector:
    return Vector(algebra, coords(r, algebra.dim))


def element(algebra: LieAlgebra, r: random.Random) -> GroupElement:
    return GroupElement(vector(algebra, r))


def functional(algebra: LieAlgebra, r: random.Random) -> Functional:
    return Functional(algebra, coords(r, algebra.dim))
