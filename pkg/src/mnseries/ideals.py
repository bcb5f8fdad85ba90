"""Explicit subsets and ideals of a finite ring.

Ideals are carried as explicit element sets so every checker is a finite
scan and equality is set equality. Closure kinds: subset < left/right <
twosided.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import RingMismatch, SizeCapExceeded
from .rings import DEFAULT_SIZE_CAP, FiniteRing, RingAutomorphism

KINDS = ("subset", "left", "right", "twosided")


@dataclass(frozen=True)
class IdealSet:
    ring: FiniteRing
    members: frozenset[int]
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ideal kind {self.kind!r}")

    def __contains__(self, a: int) -> bool:
        return a in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def describe(self) -> str:
        return self.ring.describe_set(self.members)

    def to_json(self) -> dict:
        return {"ring_label": self.ring.label, "kind": self.kind,
                "members": self.sorted_members()}


def _is_additive_subgroup(ring: FiniteRing, members: frozenset[int]) -> bool:
    if 0 not in members:
        return False
    for a in members:
        if ring.neg(a) not in members:
            return False
        for b in members:
            if ring.add_table[a][b] not in members:
                return False
    return True


def classify_kind(ring: FiniteRing, members: Iterable[int]) -> str:
    """Strongest closure kind the member set satisfies."""
    ms = frozenset(members)
    if not _is_additive_subgroup(ring, ms):
        return "subset"
    left = all(ring.mul_table[r][a] in ms for r in ring.elements() for a in ms)
    right = all(ring.mul_table[a][r] in ms for r in ring.elements() for a in ms)
    if left and right:
        return "twosided"
    if left:
        return "left"
    if right:
        return "right"
    return "subset"


_SATISFIES = {
    "subset": ("subset", "left", "right", "twosided"),
    "left": ("left", "twosided"),
    "right": ("right", "twosided"),
    "twosided": ("twosided",),
}


def make_ideal(ring: FiniteRing, members: Iterable[int], kind: str | None = None) -> IdealSet:
    """Wrap an explicit member set, classifying (or verifying) its kind."""
    ms = frozenset(members)
    actual = classify_kind(ring, ms)
    if kind is None:
        return IdealSet(ring, ms, actual)
    if actual not in _SATISFIES[kind]:
        raise ValueError(f"set {ring.describe_set(ms)} is not a {kind} ideal of {ring.label}")
    return IdealSet(ring, ms, kind)


def ideal_closure(ring: FiniteRing, gens: Iterable[int], kind: str = "twosided") -> IdealSet:
    """Least ideal of the given kind containing gens, by worklist closure."""
    if kind not in ("left", "right", "twosided"):
        raise ValueError(f"closure kind must be left/right/twosided, not {kind!r}")
    members = {0}
    work = [g for g in gens]
    for g in work:
        members.add(g)
    while work:
        a = work.pop()
        new = {ring.neg(a)}
        new.update(ring.add_table[a][b] for b in members)
        if kind in ("left", "twosided"):
            new.update(ring.mul_table[r][a] for r in ring.elements())
        if kind in ("right", "twosided"):
            new.update(ring.mul_table[a][r] for r in ring.elements())
        for x in new:
            if x not in members:
                members.add(x)
                work.append(x)
    return IdealSet(ring, frozenset(members), kind)


def enumerate_ideals(ring: FiniteRing, kind: str = "twosided",
                     size_cap: int = DEFAULT_SIZE_CAP) -> list[IdealSet]:
    """All ideals of the kind, each once, ascending by size then member list.

    Complete for finite rings: every ideal is a finite join of singleton
    closures, and pairwise joins are iterated to a fixpoint.
    """
    if ring.size > size_cap:
        raise SizeCapExceeded(f"ring {ring.label} has {ring.size} elements, cap {size_cap}")
    seen = {frozenset({0})}
    frontier = set()
    for a in ring.elements():
        frontier.add(ideal_closure(ring, [a], kind).members)
    seen |= frontier
    current = set(seen)
    while True:
        fresh = set()
        for i in current:
            for j in frontier:
                if not (j <= i):
                    joined = ideal_closure(ring, i | j, kind).members
                    if joined not in seen:
                        fresh.add(joined)
        if not fresh:
            break
        seen |= fresh
        current = fresh
    out = [IdealSet(ring, ms, kind) for ms in seen]
    out.sort(key=lambda ideal: (len(ideal.members), ideal.sorted_members()))
    return out


def _member_set(ring: FiniteRing, xs) -> frozenset[int]:
    if isinstance(xs, IdealSet):
        if xs.ring is not ring:
            raise RingMismatch(f"expected a subset of {ring.label}, got one of {xs.ring.label}")
        return xs.members
    return frozenset(xs)


def quotient_ideal(U: IdealSet, V) -> IdealSet:
    """(U:V) = {x | v*x in U for every v in V}, by exact membership scan.

    When U and V are both (at least) right ideals the result must come out
    two-sided; that is asserted here because it is a theorem, not an input
    condition.
    """
    ring = U.ring
    vs = _member_set(ring, V)
    members = frozenset(
        x for x in ring.elements()
        if all(ring.mul_table[v][x] in U.members for v in vs)
    )
    result = make_ideal(ring, members)
    if U.kind in ("right", "twosided") and isinstance(V, IdealSet) \
            and V.kind in ("right", "twosided") and result.kind != "twosided":
        raise AssertionError(
            f"(U:V) of right ideals came out {result.kind}; U={U.describe()} V={V.describe()}")
    return result


def annihilator(ring: FiniteRing, X, side: str = "right") -> IdealSet:
    """r_R(X) = {a | xa = 0 for all x in X}; side='left' uses ax = 0."""
    xs = _member_set(ring, X)
    if side == "right":
        members = (a for a in ring.elements()
                   if all(ring.mul_table[x][a] == 0 for x in xs))
    elif side == "left":
        members = (a for a in ring.elements()
                   if all(ring.mul_table[a][x] == 0 for x in xs))
    else:
        raise ValueError(f"side must be 'right' or 'left', not {side!r}")
    return make_ideal(ring, members)


def set_sum(ring: FiniteRing, A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
    """Element-set sum {a + b | a in A, b in B}."""
    return frozenset(ring.add_table[a][b] for a in A for b in B)


def element_powers(ring: FiniteRing, a: int) -> list[int]:
    """a^1, a^2, ... up to the first repeat (powers cycle within |R| steps)."""
    out = []
    seen = set()
    x = a
    while x not in seen:
        seen.add(x)
        out.append(x)
        x = ring.mul_table[x][a]
    return out


@dataclass
class SemiprimeResult:
    ok: bool
    witness: tuple[int, int] | None = None  # (a, n) with a not in U, a^n in U


def is_semiprime_ideal(U: IdealSet) -> SemiprimeResult:
    """True iff no power of an element outside U lands in U."""
    ring = U.ring
    for a in ring.elements():
        if a in U.members:
            continue
        for n, p in enumerate(element_powers(ring, a), start=1):
            if p in U.members:
                return SemiprimeResult(False, (a, n))
    return SemiprimeResult(True)


def nil_radical(ring: FiniteRing) -> tuple[frozenset[int], bool]:
    """Nilpotent elements, and whether they already form a two-sided ideal (NI)."""
    nil = frozenset(a for a in ring.elements() if 0 in element_powers(ring, a))
    is_ni = ideal_closure(ring, nil, "twosided").members == nil
    return nil, is_ni


def weak_annihilator(ring: FiniteRing, X) -> frozenset[int]:
    """N_R(X) = {a | xa is nilpotent for every x in X}."""
    xs = _member_set(ring, X)
    nil, _ = nil_radical(ring)
    return frozenset(a for a in ring.elements()
                     if all(ring.mul_table[x][a] in nil for x in xs))


def close_under_inverses(sigma_family: Iterable[RingAutomorphism]) -> list[RingAutomorphism]:
    out = []
    for s in sigma_family:
        if s not in out:
            out.append(s)
        inv = s.inverse()
        if inv not in out:
            out.append(inv)
    return out


@dataclass
class SigmaCompatResult:
    ok: bool
    witness: tuple | None = None            # (a, b, generator index) breaking ab in U <-> a s(b) in U
    flipped_ok: bool = True                 # the derived form: ab in U <-> s(a) b in U
    flipped_witness: tuple | None = None


def is_sigma_compatible_ideal(U: IdealSet, sigma_family: Iterable[RingAutomorphism]) -> SigmaCompatResult:
    """ab in U <-> a*sigma(b) in U for every generator and inverse.

    Also scans the consequence sigma(a)*b in U <-> ab in U; a divergence
    there with the primary check passing would mean this implementation is
    broken, so both outcomes are reported.
    """
    ring = U.ring
    fam = close_under_inverses(sigma_family)
    primary = None
    flipped = None
    for idx, s in enumerate(fam):
        for a in ring.elements():
            for b in ring.elements():
                ab = ring.mul_table[a][b] in U.members
                if primary is None and (ring.mul_table[a][s.map[b]] in U.members) != ab:
                    primary = (a, b, idx)
                if flipped is None and (ring.mul_table[s.map[a]][b] in U.members) != ab:
                    flipped = (a, b, idx)
            if primary is not None and flipped is not None:
                break
        if primary is not None and flipped is not None:
            break
    return SigmaCompatResult(primary is None, primary, flipped is None, flipped)
