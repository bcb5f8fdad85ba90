"""Finite associative unital rings given by explicit operation tables.

Elements are dense integer ids 0..size-1 with zero always id 0. Everything
here is exhaustively checkable by table scan, so constructors validate the
full ring axioms and reject bad tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import AxiomViolation, MalformedSpec, NotAutomorphism, RingMismatch

DEFAULT_SIZE_CAP = 256


class FiniteRing:
    """A finite ring: element ids 0..size-1, operation tables, zero = 0."""

    def __init__(self, label: str, add_table: Sequence[Sequence[int]],
                 mul_table: Sequence[Sequence[int]], one: int,
                 names: Sequence[str] | None = None):
        size = len(add_table)
        if size < 2:
            raise MalformedSpec(f"ring {label!r}: need at least 2 elements, got {size}")
        for name, table in (("add", add_table), ("mul", mul_table)):
            if len(table) != size:
                raise MalformedSpec(f"ring {label!r}: {name} table has {len(table)} rows, expected {size}")
            for i, row in enumerate(table):
                if len(row) != size:
                    raise MalformedSpec(f"ring {label!r}: {name} row {i} has {len(row)} entries")
                for j, v in enumerate(row):
                    if not isinstance(v, int) or not 0 <= v < size:
                        raise MalformedSpec(f"ring {label!r}: {name}[{i}][{j}] = {v!r} out of range")
        if not 0 <= one < size:
            raise MalformedSpec(f"ring {label!r}: one = {one} out of range")
        self.label = label
        self.size = size
        self.add_table = tuple(tuple(row) for row in add_table)
        self.mul_table = tuple(tuple(row) for row in mul_table)
        self.zero = 0
        self.one = one
        if names is None:
            names = [str(i) for i in range(size)]
        if len(names) != size:
            raise MalformedSpec(f"ring {label!r}: {len(names)} names for {size} elements")
        self.names = tuple(names)
        self._neg = None
        self._units = None

    def __repr__(self):
        return f"FiniteRing({self.label!r}, size={self.size})"

    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        if self._neg is None:
            neg = [None] * self.size
            for x in range(self.size):
                for y in range(self.size):
                    if self.add_table[x][y] == 0:
                        neg[x] = y
                        break
            self._neg = neg
        n = self._neg[a]
        if n is None:
            raise AxiomViolation(f"ring {self.label!r}: element {a} has no additive inverse")
        return n

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg(b)]

    def sum(self, items: Iterable[int]) -> int:
        acc = 0
        for x in items:
            acc = self.add_table[acc][x]
        return acc

    def pow(self, a: int, n: int) -> int:
        """a^n for n >= 1 (n = 0 would need a unit convention; unused here)."""
        if n < 1:
            raise ValueError("pow defined for n >= 1")
        acc = a
        for _ in range(n - 1):
            acc = self.mul_table[acc][a]
        return acc

    def describe(self, a: int) -> str:
        return self.names[a]

    def describe_set(self, xs: Iterable[int]) -> str:
        return "{" + ", ".join(self.names[x] for x in sorted(xs)) + "}"


@dataclass
class AxiomResult:
    axiom: str
    ok: bool
    witness: tuple | None = None


@dataclass
class AxiomReport:
    ring_label: str
    results: list[AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.ok]

    def to_json(self) -> dict:
        return {
            "ring": self.ring_label,
            "passed": self.passed,
            "axioms": [
                {"axiom": r.axiom, "ok": r.ok,
                 **({"witness": list(r.witness)} if r.witness is not None else {})}
                for r in self.results
            ],
        }


def check_ring_axioms(ring: FiniteRing) -> AxiomReport:
    """Exhaustive table scan of every ring axiom; failures carry a witness."""
    add, mul = ring.add_table, ring.mul_table
    n = ring.size
    results = []

    def first_fail(axiom, gen):
        witness = next(gen, None)
        results.append(AxiomResult(axiom, witness is None, witness))

    first_fail("add-commutative",
               ((a, b) for a in range(n) for b in range(n) if add[a][b] != add[b][a]))
    first_fail("add-associative",
               ((a, b, c) for a in range(n) for b in range(n) for c in range(n)
                if add[add[a][b]][c] != add[a][add[b][c]]))
    first_fail("add-identity",
               ((a,) for a in range(n) if add[0][a] != a or add[a][0] != a))
    first_fail("add-inverse",
               ((a,) for a in range(n) if all(add[a][b] != 0 for b in range(n))))
    first_fail("mul-associative",
               ((a, b, c) for a in range(n) for b in range(n) for c in range(n)
                if mul[mul[a][b]][c] != mul[a][mul[b][c]]))
    first_fail("mul-identity",
               ((a,) for a in range(n) if mul[ring.one][a] != a or mul[a][ring.one] != a))
    first_fail("left-distributive",
               ((a, b, c) for a in range(n) for b in range(n) for c in range(n)
                if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]))
    first_fail("right-distributive",
               ((a, b, c) for a in range(n) for b in range(n) for c in range(n)
                if mul[add[a][b]][c] != add[mul[a][c]][mul[b][c]]))
    results.append(AxiomResult("one-not-zero", ring.one != ring.zero,
                               None if ring.one != ring.zero else (ring.one,)))
    return AxiomReport(ring.label, results)


def units(ring: FiniteRing) -> frozenset[int]:
    """Two-sided invertible elements: {u | exists v with uv = vu = 1}."""
    if ring._units is None:
        mul = ring.mul_table
        one = ring.one
        found = frozenset(
            u for u in ring.elements()
            if any(mul[u][v] == one and mul[v][u] == one for v in ring.elements())
        )
        ring._units = found
    return ring._units


def unit_inverse(ring: FiniteRing, u: int) -> int:
    for v in ring.elements():
        if ring.mul_table[u][v] == ring.one and ring.mul_table[v][u] == ring.one:
            return v
    raise ValueError(f"{ring.describe(u)} is not a unit of {ring.label}")


class RingAutomorphism:
    """A validated ring automorphism, stored as a permutation of element ids."""

    def __init__(self, ring: FiniteRing, mapping: Sequence[int], _checked: bool = False):
        self.ring = ring
        self.map = tuple(mapping)
        if not _checked:
            validated = check_automorphism(ring, mapping)
            self.map = validated.map

    def __call__(self, a: int) -> int:
        return self.map[a]

    def __eq__(self, other):
        return (isinstance(other, RingAutomorphism)
                and self.ring is other.ring and self.map == other.map)

    def __hash__(self):
        return hash((id(self.ring), self.map))

    def __repr__(self):
        return f"RingAutomorphism({self.ring.label!r}, {list(self.map)})"

    @property
    def is_identity(self) -> bool:
        return all(self.map[i] == i for i in range(self.ring.size))

    def inverse(self) -> "RingAutomorphism":
        inv = [0] * self.ring.size
        for i, v in enumerate(self.map):
            inv[v] = i
        return RingAutomorphism(self.ring, inv, _checked=True)


def identity_automorphism(ring: FiniteRing) -> RingAutomorphism:
    return RingAutomorphism(ring, range(ring.size), _checked=True)


def check_automorphism(ring: FiniteRing, mapping: Sequence[int]) -> RingAutomorphism:
    """Validate bijectivity, preservation of both operations, and 0/1 fixing.

    Raises NotAutomorphism with a witness describing the first failure.
    """
    m = tuple(mapping)
    n = ring.size
    if len(m) != n or sorted(m) != list(range(n)):
        raise NotAutomorphism(f"map is not a permutation of 0..{n - 1}", witness=("bijective", m))
    for a in range(n):
        for b in range(n):
            if m[ring.add_table[a][b]] != ring.add_table[m[a]][m[b]]:
                raise NotAutomorphism(
                    f"additivity fails at ({ring.describe(a)}, {ring.describe(b)})",
                    witness=("add", (a, b)))
            if m[ring.mul_table[a][b]] != ring.mul_table[m[a]][m[b]]:
                raise NotAutomorphism(
                    f"multiplicativity fails at ({ring.describe(a)}, {ring.describe(b)})",
                    witness=("mul", (a, b)))
    # a bijection preserving both operations necessarily fixes 0 and 1
    if m[0] != 0:
        raise NotAutomorphism("map does not fix zero", witness=("zero", m[0]))
    if m[ring.one] != ring.one:
        raise NotAutomorphism("map does not fix one", witness=("one", m[ring.one]))
    return RingAutomorphism(ring, m, _checked=True)


def compose_automorphisms(a: RingAutomorphism, b: RingAutomorphism) -> RingAutomorphism:
    """(a o b)(x) = a(b(x)). Composition of automorphisms needs no re-scan."""
    if a.ring is not b.ring:
        raise RingMismatch(f"automorphisms of {a.ring.label} and {b.ring.label}")
    return RingAutomorphism(a.ring, [a.map[b.map[x]] for x in range(a.ring.size)], _checked=True)


def automorphism_power(a: RingAutomorphism, n: int) -> RingAutomorphism:
    """a^n for any integer n; negative powers use the inverse permutation."""
    base = a if n >= 0 else a.inverse()
    acc = identity_automorphism(a.ring)
    for _ in range(abs(n)):
        acc = compose_automorphisms(base, acc)
    return acc


# --- constructors -----------------------------------------------------------


def _validated(ring: FiniteRing) -> FiniteRing:
    report = check_ring_axioms(ring)
    if not report.passed:
        fail = report.failures()[0]
        raise AxiomViolation(
            f"ring {ring.label!r}: axiom {fail.axiom} fails at witness {fail.witness}",
            report=report)
    return ring


def ring_zn(n: int) -> FiniteRing:
    """Z_n, the integers modulo n (n >= 2)."""
    if n < 2:
        raise MalformedSpec(f"Zn requires n >= 2, got {n}")
    add = [[(i + j) % n for j in range(n)] for i in range(n)]
    mul = [[(i * j) % n for j in range(n)] for i in range(n)]
    return _validated(FiniteRing(f"Z{n}", add, mul, one=1))


def ring_from_table(data: dict | str | Path, base_dir: Path | None = None) -> FiniteRing:
    """Build a ring from a table object or a JSON file holding one.

    Expected object: {label, size, add, mul, one[, names]}; zero is index 0
    by convention.
    """
    if isinstance(data, (str, Path)):
        path = Path(data)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedSpec(f"cannot read ring table {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedSpec(f"ring table must be an object, got {type(data).__name__}")
    missing = {"label", "size", "add", "mul", "one"} - set(data)
    if missing:
        raise MalformedSpec(f"ring table missing keys: {sorted(missing)}")
    if len(data["add"]) != data["size"]:
        raise MalformedSpec(f"ring table {data['label']!r}: size {data['size']} "
                            f"does not match add table ({len(data['add'])} rows)")
    ring = FiniteRing(data["label"], data["add"], data["mul"], data["one"],
                      names=data.get("names"))
    return _validated(ring)


def ring_product(r1: FiniteRing, r2: FiniteRing) -> FiniteRing:
    """Direct product; pair (a, b) gets id a*|r2| + b."""
    n1, n2 = r1.size, r2.size
    size = n1 * n2

    def enc(a, b):
        return a * n2 + b

    add = [[0] * size for _ in range(size)]
    mul = [[0] * size for _ in range(size)]
    names = [None] * size
    for a1 in range(n1):
        for b1 in range(n2):
            i = enc(a1, b1)
            names[i] = f"({r1.names[a1]},{r2.names[b1]})"
            for a2 in range(n1):
                for b2 in range(n2):
                    j = enc(a2, b2)
                    add[i][j] = enc(r1.add_table[a1][a2], r2.add_table[b1][b2])
                    mul[i][j] = enc(r1.mul_table[a1][a2], r2.mul_table[b1][b2])
    ring = FiniteRing(f"{r1.label}x{r2.label}", add, mul,
                      one=enc(r1.one, r2.one), names=names)
    return _validated(ring)


def ring_trivial_extension(base: FiniteRing) -> FiniteRing:
    """Pairs (a, b) over the base with (a,b)(c,d) = (ac, ad + bc)."""
    n = base.size
    size = n * n

    def enc(a, b):
        return a * n + b

    add = [[0] * size for _ in range(size)]
    mul = [[0] * size for _ in range(size)]
    names = [None] * size
    for a in range(n):
        for b in range(n):
            i = enc(a, b)
            names[i] = f"({base.names[a]},{base.names[b]})"
            for c in range(n):
                for d in range(n):
                    j = enc(c, d)
                    add[i][j] = enc(base.add_table[a][c], base.add_table[b][d])
                    mul[i][j] = enc(base.mul_table[a][c],
                                    base.add_table[base.mul_table[a][d]][base.mul_table[b][c]])
    ring = FiniteRing(f"T({base.label},{base.label})", add, mul,
                      one=enc(base.one, 0), names=names)
    return _validated(ring)


def ring_gf4() -> FiniteRing:
    """The shipped 4-element field table (0, 1, x, x+1 with x^2 = x+1)."""
    data = json.loads(resources.files(__package__).joinpath("fixtures/gf4_ring.json").read_text())
    return ring_from_table(data)


def ring_make(spec: dict, base_dir: Path | None = None,
              size_cap: int = DEFAULT_SIZE_CAP) -> FiniteRing:
    """Dispatch a RingSpec object to the matching constructor.

    Kinds: {"kind": "Zn", "n": int}, {"kind": "table", ...table or "path"},
    {"kind": "product", "factors": [spec, spec]},
    {"kind": "trivial_extension", "base": spec}.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise MalformedSpec(f"ring spec must be an object with a 'kind': {spec!r}")

    def check_cap(size, what):
        if size > size_cap:
            raise MalformedSpec(f"{what} would have {size} elements, cap is {size_cap}")

    kind = spec["kind"]
    if kind == "Zn":
        check_cap(spec.get("n", 0), "Zn ring")
        return ring_zn(spec.get("n", 0))
    if kind == "table":
        data = spec["path"] if "path" in spec else spec
        if isinstance(data, dict):
            check_cap(data.get("size", 0), "table ring")
        return ring_from_table(data, base_dir=base_dir)
    if kind == "product":
        factors = spec.get("factors")
        if not isinstance(factors, list) or len(factors) != 2:
            raise MalformedSpec("product spec needs exactly 2 factors")
        r1 = ring_make(factors[0], base_dir, size_cap)
        r2 = ring_make(factors[1], base_dir, size_cap)
        check_cap(r1.size * r2.size, "product ring")
        return ring_product(r1, r2)
    if kind == "trivial_extension":
        base = ring_make(spec["base"], base_dir, size_cap)
        check_cap(base.size * base.size, "trivial extension")
        return ring_trivial_extension(base)
    raise MalformedSpec(f"unknown ring kind {kind!r}")
