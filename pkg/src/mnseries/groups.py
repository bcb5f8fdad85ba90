"""Ordered abelian exponent groups: Z and Z^k under lexicographic order.

Elements are plain ints (Z) or k-tuples of ints (Z^k). Both orders are
bi-invariant total orders, which is what the leading-term arguments on
series supports rely on.
"""

from __future__ import annotations

import itertools
from functools import cmp_to_key

from .errors import MalformedSpec

COORD_BOUND = 1 << 30


class OrderedGroup:
    """Common interface: op / inverse / compare over canonical elements."""

    kind: str
    identity = None

    def canon(self, x):
        raise NotImplementedError

    def op(self, x, y):
        raise NotImplementedError

    def inverse(self, x):
        raise NotImplementedError

    def compare(self, x, y) -> int:
        """-1, 0 or 1 as x precedes, equals or follows y."""
        raise NotImplementedError

    def lt(self, x, y) -> bool:
        return self.compare(x, y) < 0

    def minimum(self, xs):
        return min(xs, key=cmp_to_key(self.compare))

    def sort_key(self):
        return cmp_to_key(self.compare)

    def window(self, lo: int, hi: int) -> list:
        """All elements with every coordinate in [lo, hi], sorted ascending."""
        raise NotImplementedError

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, data):
        return self.canon(data)

    def spec(self) -> dict:
        raise NotImplementedError


def _check_coord(v: int):
    if not isinstance(v, int) or isinstance(v, bool):
        raise MalformedSpec(f"group coordinate must be an int, got {v!r}")
    if abs(v) > COORD_BOUND:
        raise MalformedSpec(f"group coordinate {v} exceeds bound {COORD_BOUND}")
    return v


class IntegersGroup(OrderedGroup):
    """(Z, +) with the natural order."""

    kind = "Z"
    identity = 0

    def canon(self, x):
        return _check_coord(x)

    def op(self, x, y):
        return _check_coord(x + y)

    def inverse(self, x):
        return -x

    def compare(self, x, y):
        return (x > y) - (x < y)

    def window(self, lo, hi):
        return list(range(lo, hi + 1))

    def to_json(self, x):
        return x

    def spec(self):
        return {"group": "Z"}

    def __repr__(self):
        return "IntegersGroup()"


class LexProductGroup(OrderedGroup):
    """(Z^k, +) ordered lexicographically, first coordinate dominant."""

    kind = "Z^k_lex"

    def __init__(self, k: int):
        if not isinstance(k, int) or k < 1:
            raise MalformedSpec(f"Z^k_lex requires k >= 1, got {k!r}")
        self.k = k
        self.identity = (0,) * k

    def canon(self, x):
        if isinstance(x, list):
            x = tuple(x)
        if not isinstance(x, tuple) or len(x) != self.k:
            raise MalformedSpec(f"expected a {self.k}-tuple, got {x!r}")
        for v in x:
            _check_coord(v)
        return x

    def op(self, x, y):
        return tuple(_check_coord(a + b) for a, b in zip(x, y))

    def inverse(self, x):
        return tuple(-a for a in x)

    def compare(self, x, y):
        return (x > y) - (x < y)

    def window(self, lo, hi):
        return [tuple(t) for t in itertools.product(range(lo, hi + 1), repeat=self.k)]

    def to_json(self, x):
        return list(x)

    def spec(self):
        return {"group": "Z^k_lex", "k": self.k}

    def __repr__(self):
        return f"LexProductGroup(k={self.k})"


def group_make(spec: dict | str) -> OrderedGroup:
    """Build a group from a fixture spec: {"group": "Z"} or {"group": "Z^k_lex", "k": k}."""
    if isinstance(spec, str):
        spec = {"group": spec}
    if not isinstance(spec, dict) or "group" not in spec:
        raise MalformedSpec(f"group spec must name a group: {spec!r}")
    kind = spec["group"]
    if kind == "Z":
        return IntegersGroup()
    if kind == "Z^k_lex":
        return LexProductGroup(spec.get("k", 0))
    raise MalformedSpec(f"unknown group kind {kind!r}")
