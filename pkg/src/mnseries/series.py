"""Finitely supported twisted series over (ring, ordered group, sigma, tau).

Multiplication follows the twisted convolution
    (sum a_x X^x)(sum b_y X^y) = sum_z ( sum_{xy=z} a_x * sigma_x(b_y) * tau(x,y) ) X^z
and is only associative when sigma and tau satisfy the cocycle conditions,
so this module also carries the condition checkers and the brute-force
associativity oracle that serves as ground truth for them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import (DuplicateKey, MalformedSpec, NotNormalized, TwistMismatch,
                     ZeroSeries)
from .groups import IntegersGroup, OrderedGroup
from .rings import (FiniteRing, RingAutomorphism, automorphism_power,
                    check_automorphism, compose_automorphisms,
                    identity_automorphism, unit_inverse, units)


def _coords(group: OrderedGroup, x) -> tuple:
    return (x,) if group.kind == "Z" else x


class SigmaRule:
    """sigma_x as a product of generator automorphism powers, one per Z factor."""

    def __init__(self, ring: FiniteRing, group: OrderedGroup,
                 generators: Sequence[RingAutomorphism]):
        k = 1 if group.kind == "Z" else group.k
        if len(generators) != k:
            raise MalformedSpec(f"sigma needs {k} generator(s), got {len(generators)}")
        for g in generators:
            if g.ring is not ring:
                raise MalformedSpec("sigma generator belongs to a different ring")
        for i, g in enumerate(generators):
            for h in generators[i + 1:]:
                if compose_automorphisms(g, h) != compose_automorphisms(h, g):
                    raise MalformedSpec("sigma generators must commute")
        self.ring = ring
        self.group = group
        self.generators = list(generators)
        self._memo: dict[Any, RingAutomorphism] = {}

    def at(self, x) -> RingAutomorphism:
        if x in self._memo:
            return self._memo[x]
        acc = identity_automorphism(self.ring)
        for gen, c in zip(self.generators, _coords(self.group, x)):
            acc = compose_automorphisms(automorphism_power(gen, c), acc)
        self._memo[x] = acc
        return acc

    @property
    def is_trivial(self) -> bool:
        return all(g.is_identity for g in self.generators)


class TauRule:
    """Evaluable twist factor tau: G x G -> element id."""

    def at(self, x, y) -> int:
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError


class TauOne(TauRule):
    def __init__(self, ring: FiniteRing):
        self.ring = ring

    def at(self, x, y):
        return self.ring.one

    def spec(self):
        return {"kind": "one"}


class TauUnitPower(TauRule):
    """tau(x, y) = u^(x . M . y) for a central unit u and integer matrix M."""

    def __init__(self, ring: FiniteRing, group: OrderedGroup, unit: int,
                 matrix: Sequence[Sequence[int]]):
        if unit not in units(ring):
            raise MalformedSpec(f"tau unit {unit} is not invertible in {ring.label}")
        for r in ring.elements():
            if ring.mul_table[unit][r] != ring.mul_table[r][unit]:
                raise MalformedSpec(f"tau unit {ring.describe(unit)} is not central")
        k = 1 if group.kind == "Z" else group.k
        matrix = [list(row) for row in matrix]
        if len(matrix) != k or any(len(row) != k for row in matrix):
            raise MalformedSpec(f"tau exponent matrix must be {k}x{k}")
        self.ring = ring
        self.group = group
        self.unit = unit
        self.matrix = matrix
        # powers of u cycle back to one because u is invertible
        powers = [ring.one]
        p = ring.mul_table[ring.one][unit]
        while p != ring.one:
            powers.append(p)
            p = ring.mul_table[p][unit]
        self._powers = powers

    def exponent(self, x, y) -> int:
        xs, ys = _coords(self.group, x), _coords(self.group, y)
        return sum(xs[i] * self.matrix[i][j] * ys[j]
                   for i in range(len(xs)) for j in range(len(ys)))

    def at(self, x, y):
        return self._powers[self.exponent(x, y) % len(self._powers)]

    def spec(self):
        return {"kind": "unit_power", "unit": self.unit, "exponent_rule": self.matrix}


class TauPatched(TauRule):
    """A base rule with finitely many overridden values (for corrupted fixtures)."""

    def __init__(self, base: TauRule, overrides: dict):
        self.base = base
        self.overrides = dict(overrides)

    def at(self, x, y):
        key = (x, y)
        if key in self.overrides:
            return self.overrides[key]
        return self.base.at(x, y)

    def spec(self):
        return {"kind": "patched", "base": self.base.spec(),
                "overrides": [[x, y, v] for (x, y), v in self.overrides.items()]}


class TwistSystem:
    """The (sigma, tau) pair over a ring and ordered group."""

    def __init__(self, ring: FiniteRing, group: OrderedGroup,
                 sigma: SigmaRule, tau: TauRule):
        self.ring = ring
        self.group = group
        self.sigma = sigma
        self.tau = tau
        self._normalized = None

    def sigma_at(self, x) -> RingAutomorphism:
        return self.sigma.at(x)

    def tau_at(self, x, y) -> int:
        return self.tau.at(x, y)

    def sigma_generators(self) -> list[RingAutomorphism]:
        return list(self.sigma.generators)

    def default_window(self) -> list:
        radius = 4 if self.group.kind == "Z" else 2
        return self.group.window(-radius, radius)

    def check_normalized(self, window: Iterable | None = None):
        """sigma_1 = id and tau(1, x) = tau(x, 1) = one on the window."""
        e = self.group.identity
        if not self.sigma_at(e).is_identity:
            return False, {"kind": "sigma-identity"}
        for x in (window if window is not None else self.default_window()):
            if self.tau_at(e, x) != self.ring.one:
                return False, {"kind": "tau-left", "x": self.group.to_json(x)}
            if self.tau_at(x, e) != self.ring.one:
                return False, {"kind": "tau-right", "x": self.group.to_json(x)}
        return True, None

    @property
    def normalized(self) -> bool:
        if self._normalized is None:
            self._normalized, _ = self.check_normalized()
        return self._normalized

    def __repr__(self):
        return f"TwistSystem({self.ring.label!r}, {self.group.kind})"


def trivial_twist(ring: FiniteRing, group: OrderedGroup | None = None) -> TwistSystem:
    """Identity sigma, tau = 1: the plain (untwisted) group series ring."""
    if group is None:
        group = IntegersGroup()
    k = 1 if group.kind == "Z" else group.k
    sigma = SigmaRule(ring, group, [identity_automorphism(ring)] * k)
    return TwistSystem(ring, group, sigma, TauOne(ring))


def twist_from_spec(ring: FiniteRing, group: OrderedGroup, spec: dict | None) -> TwistSystem:
    """Build a TwistSystem from the fixture twist schema.

    sigma: "identity" | {"generator": perm | "identity"} | {"generators": [...]}
    tau:   {"kind": "one"}
         | {"kind": "unit_power", "unit": id, "exponent_rule": "product" | matrix}
         | {"kind": "patched", "base": <tau spec>, "overrides": [[x, y, id], ...]}
    """
    spec = spec or {}
    k = 1 if group.kind == "Z" else group.k
    sigma_spec = spec.get("sigma", "identity")
    if sigma_spec == "identity":
        gen_specs = ["identity"] * k
    elif isinstance(sigma_spec, dict) and "generator" in sigma_spec:
        gen_specs = [sigma_spec["generator"]]
    elif isinstance(sigma_spec, dict) and "generators" in sigma_spec:
        gen_specs = sigma_spec["generators"]
    else:
        raise MalformedSpec(f"bad sigma spec: {sigma_spec!r}")
    generators = [identity_automorphism(ring) if gs == "identity" else check_automorphism(ring, gs)
                  for gs in gen_specs]
    sigma = SigmaRule(ring, group, generators)

    def build_tau(tspec) -> TauRule:
        kind = tspec.get("kind", "one")
        if kind == "one":
            return TauOne(ring)
        if kind == "unit_power":
            rule = tspec.get("exponent_rule", "product")
            if rule == "product":
                matrix = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
            else:
                matrix = rule
            return TauUnitPower(ring, group, tspec["unit"], matrix)
        if kind == "patched":
            base = build_tau(tspec["base"])
            overrides = {}
            for x, y, v in tspec.get("overrides", []):
                overrides[(group.canon(x), group.canon(y))] = v
            return TauPatched(base, overrides)
        raise MalformedSpec(f"unknown tau kind {kind!r}")

    tau = build_tau(spec.get("tau", {"kind": "one"}))
    return TwistSystem(ring, group, sigma, tau)


# --- series values ----------------------------------------------------------


class Series:
    """A finitely supported map G -> R \\ {0}; the zero series has no terms."""

    __slots__ = ("twist", "terms")

    def __init__(self, twist: TwistSystem, terms: dict):
        self.twist = twist
        self.terms = terms

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, x) -> int:
        return self.terms.get(x, 0)

    def support(self) -> list:
        return sorted(self.terms, key=self.twist.group.sort_key())

    def sorted_terms(self) -> list[tuple]:
        return [(x, self.terms[x]) for x in self.support()]

    def content(self) -> frozenset[int]:
        return frozenset(self.terms.values())

    def __eq__(self, other):
        return (isinstance(other, Series) and self.twist is other.twist
                and self.terms == other.terms)

    def __hash__(self):
        return hash((id(self.twist), frozenset(self.terms.items())))

    def __repr__(self):
        if self.is_zero:
            return "Series(0)"
        body = " + ".join(f"{self.twist.ring.describe(c)}*X^{x}" for x, c in self.sorted_terms())
        return f"Series({body})"


def _same_twist(f: Series, g: Series) -> TwistSystem:
    if f.twist is not g.twist:
        raise TwistMismatch("series belong to different twist systems")
    return f.twist


def series_make(twist: TwistSystem, pairs: Iterable[tuple]) -> Series:
    """Build a series from (exponent, coefficient) pairs; zeros are dropped."""
    terms = {}
    for x, c in pairs:
        x = twist.group.canon(x)
        if x in terms:
            raise DuplicateKey(f"duplicate exponent {x!r}")
        if not 0 <= c < twist.ring.size:
            raise MalformedSpec(f"coefficient {c!r} out of range for {twist.ring.label}")
        if c != 0:
            terms[x] = c
    return Series(twist, terms)


def series_zero(twist: TwistSystem) -> Series:
    return Series(twist, {})


def embed_scalar(twist: TwistSystem, r: int) -> Series:
    """r -> r*X^1; the ring embedding, which needs a normalized twist."""
    if not twist.normalized:
        raise NotNormalized("scalar embedding requires sigma_1 = id and tau(1,.) = tau(.,1) = 1")
    if r == 0:
        return Series(twist, {})
    return Series(twist, {twist.group.identity: r})


def series_add(f: Series, g: Series) -> Series:
    tw = _same_twist(f, g)
    terms = dict(f.terms)
    for x, c in g.terms.items():
        s = tw.ring.add(terms.get(x, 0), c)
        if s == 0:
            terms.pop(x, None)
        else:
            terms[x] = s
    return Series(tw, terms)


def series_neg(f: Series) -> Series:
    return Series(f.twist, {x: f.twist.ring.neg(c) for x, c in f.terms.items()})


def series_sub(f: Series, g: Series) -> Series:
    return series_add(f, series_neg(g))


def x_w_pairs(f: Series, g: Series, w) -> list[tuple]:
    """Pairs (x, y) with x in supp f, y in supp g, xy = w; ascending in x."""
    tw = _same_twist(f, g)
    grp = tw.group
    w = grp.canon(w)
    out = []
    for x in f.support():
        y = grp.op(grp.inverse(x), w)
        if y in g.terms:
            out.append((x, y))
    return out


def term_product(tw: TwistSystem, a: int, x, b: int, y) -> int:
    """The coefficient contribution a * sigma_x(b) * tau(x, y)."""
    ring = tw.ring
    return ring.mul(ring.mul(a, tw.sigma_at(x).map[b]), tw.tau_at(x, y))


def series_mul(f: Series, g: Series) -> Series:
    tw = _same_twist(f, g)
    ring, grp = tw.ring, tw.group
    acc: dict = {}
    for x, a in f.terms.items():
        sig = tw.sigma_at(x).map
        for y, b in g.terms.items():
            z = grp.op(x, y)
            t = ring.mul(ring.mul(a, sig[b]), tw.tau_at(x, y))
            prev = acc.get(z)
            acc[z] = t if prev is None else ring.add(prev, t)
    return Series(tw, {z: c for z, c in acc.items() if c != 0})


@dataclass
class SupportStats:
    support: list
    minimal: Any
    leading: int
    content: frozenset[int]


def support_stats(f: Series) -> SupportStats:
    """Sorted support, its minimal exponent, the leading coefficient, content."""
    if f.is_zero:
        raise ZeroSeries("the zero series has no minimal support element")
    supp = f.support()
    return SupportStats(supp, supp[0], f.terms[supp[0]], f.content())


def series_to_json(f: Series) -> list:
    return [[f.twist.group.to_json(x), c] for x, c in f.sorted_terms()]


def series_from_json(twist: TwistSystem, data: Iterable) -> Series:
    return series_make(twist, [(twist.group.from_json(x), c) for x, c in data])


# --- twist-condition checks and the associativity oracle --------------------


@dataclass
class CheckOutcome:
    name: str
    ok: bool
    witness: Any = None

    def to_json(self) -> dict:
        out = {"check": self.name, "ok": self.ok}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class TwistConditionReport:
    window: list
    outcomes: dict[str, CheckOutcome] = field(default_factory=dict)

    def __getitem__(self, name: str) -> CheckOutcome:
        return self.outcomes[name]

    @property
    def gate_ok(self) -> bool:
        """The conditions a fixture must pass: unit values, normalization,
        and the cocycle variant that brute-force associativity agrees with."""
        return all(self.outcomes[k].ok for k in ("tau-units", "normalized", "cocycle-standard"))

    def to_json(self) -> dict:
        return {"window": self.window, "gate_ok": self.gate_ok,
                "checks": [o.to_json() for o in self.outcomes.values()]}


def check_twist_conditions(twist: TwistSystem, window: Iterable) -> TwistConditionReport:
    """Scan the associativity conditions on sigma and tau over a window.

    Two cocycle readings are evaluated side by side: the composition
    tau(xy,z)*sigma_x(tau(x,y)) = tau(x,yz)*tau(y,z) as literally stated
    alongside the standard tau(x,y)*tau(xy,z) = sigma_x(tau(y,z))*tau(x,yz),
    plus sigma_y sigma_z = sigma_yz . eta(y,z) under both conjugation
    directions for eta. None of them is silently preferred; the
    associativity oracle decides which reading the fixture actually needs.
    """
    ring, grp = twist.ring, twist.group
    win = [grp.canon(x) for x in window]
    report = TwistConditionReport(window=[grp.to_json(x) for x in win])
    unit_set = units(ring)

    def pair_witness(x, y, extra=None):
        w = {"x": grp.to_json(x), "y": grp.to_json(y)}
        if extra:
            w.update(extra)
        return w

    tau_fail = None
    for x in win:
        for y in win:
            v = twist.tau_at(x, y)
            if v not in unit_set:
                tau_fail = pair_witness(x, y, {"tau": v})
                break
        if tau_fail:
            break
    report.outcomes["tau-units"] = CheckOutcome("tau-units", tau_fail is None, tau_fail)

    norm_ok, norm_witness = twist.check_normalized(win)
    report.outcomes["normalized"] = CheckOutcome("normalized", norm_ok, norm_witness)

    paper = standard = None
    for x in win:
        sx = twist.sigma_at(x).map
        for y in win:
            xy = grp.op(x, y)
            txy = twist.tau_at(x, y)
            for z in win:
                yz = grp.op(y, z)
                tyz = twist.tau_at(y, z)
                if paper is None:
                    lhs = ring.mul(twist.tau_at(xy, z), sx[txy])
                    rhs = ring.mul(twist.tau_at(x, yz), tyz)
                    if lhs != rhs:
                        paper = {"x": grp.to_json(x), "y": grp.to_json(y),
                                 "z": grp.to_json(z), "lhs": lhs, "rhs": rhs}
                if standard is None:
                    lhs = ring.mul(txy, twist.tau_at(xy, z))
                    rhs = ring.mul(sx[tyz], twist.tau_at(x, yz))
                    if lhs != rhs:
                        standard = {"x": grp.to_json(x), "y": grp.to_json(y),
                                    "z": grp.to_json(z), "lhs": lhs, "rhs": rhs}
            if paper is not None and standard is not None:
                break
        if paper is not None and standard is not None:
            break
    report.outcomes["cocycle-paper"] = CheckOutcome("cocycle-paper", paper is None, paper)
    report.outcomes["cocycle-standard"] = CheckOutcome("cocycle-standard", standard is None, standard)

    conj_l = conj_r = None
    for y in win:
        sy = twist.sigma_at(y).map
        for z in win:
            sz = twist.sigma_at(z).map
            syz = twist.sigma_at(grp.op(y, z)).map
            u = twist.tau_at(y, z)
            if u not in unit_set:
                continue  # already reported under tau-units
            uinv = unit_inverse(ring, u)
            for r in ring.elements():
                both = sy[sz[r]]
                if conj_l is None and both != syz[ring.mul(ring.mul(u, r), uinv)]:
                    conj_l = pair_witness(y, z, {"r": r})
                if conj_r is None and both != syz[ring.mul(ring.mul(uinv, r), u)]:
                    conj_r = pair_witness(y, z, {"r": r})
            if conj_l is not None and conj_r is not None:
                break
        if conj_l is not None and conj_r is not None:
            break
    report.outcomes["sigma-eta-left"] = CheckOutcome("sigma-eta-left", conj_l is None, conj_l)
    report.outcomes["sigma-eta-right"] = CheckOutcome("sigma-eta-right", conj_r is None, conj_r)
    return report


@dataclass
class AssocReport:
    ok: bool
    checked: int
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def check_associativity(twist: TwistSystem, triples: Iterable[tuple]) -> AssocReport:
    """(f g) h = f (g h) over the supplied triples; the ground-truth oracle."""
    checked = 0
    for f, g, h in triples:
        checked += 1
        left = series_mul(series_mul(f, g), h)
        right = series_mul(f, series_mul(g, h))
        if left != right:
            return AssocReport(False, checked, {
                "f": series_to_json(f), "g": series_to_json(g), "h": series_to_json(h),
                "left": series_to_json(left), "right": series_to_json(right)})
    return AssocReport(True, checked)


def random_series(twist: TwistSystem, rng, exponents: Sequence,
                  max_support: int = 3, nonzero: bool = True) -> Series:
    """A seeded random series with support inside the exponent window."""
    exps = list(exponents)
    while True:
        size = rng.randint(0, min(max_support, len(exps)))
        chosen = rng.sample(exps, size)
        terms = {twist.group.canon(x): rng.randrange(1, twist.ring.size) for x in chosen}
        if terms or not nonzero:
            return Series(twist, terms)


def random_triples(twist: TwistSystem, rng, exponents: Sequence, count: int,
                   max_support: int = 3) -> list[tuple]:
    return [tuple(random_series(twist, rng, exponents, max_support) for _ in range(3))
            for _ in range(count)]


def exhaustive_series(twist: TwistSystem, exponents: Sequence,
                      max_support: int | None = None) -> Iterable[Series]:
    """Every series with support inside the window, in deterministic order."""
    exps = [twist.group.canon(x) for x in exponents]
    for coeffs in itertools.product(range(twist.ring.size), repeat=len(exps)):
        terms = {x: c for x, c in zip(exps, coeffs) if c != 0}
        if max_support is not None and len(terms) > max_support:
            continue
        yield Series(twist, terms)


def single_term_triples(twist: TwistSystem, exponents: Sequence) -> Iterable[tuple]:
    """All triples of single-term series with nonzero coefficients."""
    singles = [Series(twist, {twist.group.canon(x): c})
               for x in exponents for c in range(1, twist.ring.size)]
    return itertools.product(singles, repeat=3)
