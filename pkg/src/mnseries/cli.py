"""Fixture loading, verification suites, and report emission.

Fixtures are single JSON documents naming a ring, an optional ordered group
and twist, named ideals and series, the suites the fixture claims to
satisfy, and search caps. A fixture's twist is validated on load (cocycle
conditions plus sampled associativity) before any suite touches it.

Exit codes: 0 all applicable checks pass (not-applicable suites warn),
1 a check failed, 2 the fixture is invalid.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import (HypothesisFails, MNSeriesError, NotNormalized, ParseError,
                     PreconditionFail, SuiteUnknown, TraceMismatch, ValidationError)
from .groups import OrderedGroup, group_make
from .ideals import (IdealSet, annihilator, enumerate_ideals, ideal_closure,
                     is_semiprime_ideal, is_sigma_compatible_ideal, make_ideal,
                     nil_radical, quotient_ideal, weak_annihilator)
from .properties import (PropertyReport, is_G_armendariz, is_IN, is_SA,
                         is_left_fusible, is_right_nonsingular,
                         is_sigma_compatible_ring, right_zip_witness,
                         sigma_u_zip_scan, sigma_u_zip_witness,
                         weak_zip_witness, zero_divisor_sets)
from .rings import (DEFAULT_SIZE_CAP, FiniteRing, check_automorphism,
                    check_ring_axioms, identity_automorphism, ring_make, units)
from .series import (Series, TwistSystem, check_associativity,
                     check_twist_conditions, exhaustive_series, random_series,
                     random_triples, series_from_json, series_make, series_mul,
                     series_to_json, twist_from_spec)
from .transfer import (TruncatedUniverse, coefficient_extraction,
                       lift_fusible_decomposition, lifted_annihilator_check,
                       sa_transfer_witness, series_zip_witness)

DEFAULT_CAPS = {
    "ring_max": DEFAULT_SIZE_CAP,
    "twist_window": [-3, 3],
    "assoc_samples": 200,
    "window": [0, 2],
    "max_support": 3,
    "samples": 100,
    "universe_window": [0, 1],
    "universe_cap": 4096,
    "subset_cap": 65536,
    "witness_cap": 4096,
    "ideal_pair_limit": 16,
    "agreement_samples": 50,
}

SUITE_NAMES = ("ring-axioms", "ideals", "properties", "prop3.2",
               "lemma4.3", "thm4.5", "thm5.4", "examples")


@dataclass
class Fixture:
    label: str
    ring: FiniteRing
    group: OrderedGroup | None = None
    twist: TwistSystem | None = None
    ideals: dict[str, IdealSet] = field(default_factory=dict)
    series: dict[str, Series] = field(default_factory=dict)
    suites: list[str] = field(default_factory=list)
    caps: dict = field(default_factory=dict)
    path: Path | None = None

    def cap(self, key):
        return self.caps.get(key, DEFAULT_CAPS[key])

    def sigma_family(self):
        if self.twist is not None:
            return self.twist.sigma_generators()
        return [identity_automorphism(self.ring)]


def fixture_dir():
    return resources.files(__package__).joinpath("fixtures")


def shipped_fixtures() -> list[str]:
    return sorted(p.name[:-5] for p in fixture_dir().iterdir()
                  if p.name.endswith(".json") and not p.name.endswith("_ring.json"))


def resolve_fixture(name_or_path: str) -> Path:
    p = Path(name_or_path)
    if p.exists():
        return p
    shipped = fixture_dir().joinpath(f"{name_or_path}.json")
    if shipped.is_file():
        return Path(str(shipped))
    raise ParseError(f"no fixture file or shipped fixture named {name_or_path!r} "
                     f"(shipped: {', '.join(shipped_fixtures())})")


def _validate_twist(label: str, twist: TwistSystem, caps: dict, seed: int = 0):
    """Cocycle conditions on the configured window plus sampled associativity.

    A failed standard cocycle triple is turned into an explicit failing
    associativity triple so the error names a concrete witness.
    """
    lo, hi = caps.get("twist_window", DEFAULT_CAPS["twist_window"])
    window = twist.group.window(lo, hi)
    cond = check_twist_conditions(twist, window)
    assoc_witness = None
    if not cond["cocycle-standard"].ok:
        w = cond["cocycle-standard"].witness
        grp = twist.group
        triple = tuple(series_make(twist, [(grp.from_json(w[k]), twist.ring.one)])
                       for k in ("x", "y", "z"))
        probe = check_associativity(twist, [triple])
        if not probe.ok:
            assoc_witness = probe.witness
    rng = random.Random(seed)
    samples = caps.get("assoc_samples", DEFAULT_CAPS["assoc_samples"])
    sampled = check_associativity(
        twist, random_triples(twist, rng, window, samples, max_support=3))
    if not sampled.ok and assoc_witness is None:
        assoc_witness = sampled.witness
    if not cond.gate_ok or assoc_witness is not None:
        failed = [name for name, o in cond.outcomes.items() if not o.ok]
        msg = f"fixture {label!r}: twist validation failed ({', '.join(failed) or 'associativity'})"
        if assoc_witness is not None:
            msg += f"; associativity witness: {json.dumps(assoc_witness, sort_keys=True)}"
        raise ValidationError(msg)
    return cond, sampled


def load_fixture(path: str | Path, validate: bool = True, seed: int = 0) -> Fixture:
    """Parse and validate one fixture document."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "ring" not in data:
        raise ParseError(f"{path} must be an object with at least a 'ring' spec")

    label = data.get("label", path.stem)
    caps = dict(data.get("caps", {}))
    try:
        ring = ring_make(data["ring"], base_dir=path.parent,
                         size_cap=caps.get("ring_max", DEFAULT_CAPS["ring_max"]))
    except MNSeriesError as exc:
        raise ValidationError(f"fixture {label!r}: bad ring: {exc}") from exc

    group = twist = None
    if "group" in data or "twist" in data:
        try:
            group = group_make(data.get("group", {"group": "Z"}))
        except MNSeriesError as exc:
            raise ValidationError(f"fixture {label!r}: bad group: {exc}") from exc
    if "twist" in data:
        try:
            twist = twist_from_spec(ring, group, data["twist"])
        except MNSeriesError as exc:
            raise ValidationError(f"fixture {label!r}: bad twist: {exc}") from exc
        if validate:
            _validate_twist(label, twist, caps, seed)

    ideals = {}
    for name, spec in data.get("ideals", {}).items():
        kind = spec.get("kind", "twosided")
        try:
            if "gens" in spec:
                ideals[name] = ideal_closure(ring, spec["gens"], kind)
            else:
                ideals[name] = make_ideal(ring, spec["members"], kind)
        except (MNSeriesError, ValueError, KeyError) as exc:
            raise ValidationError(f"fixture {label!r}: bad ideal {name!r}: {exc}") from exc

    series = {}
    if data.get("series"):
        if twist is None:
            raise ValidationError(f"fixture {label!r}: series need a twist")
        for name, terms in data["series"].items():
            try:
                series[name] = series_from_json(twist, terms)
            except MNSeriesError as exc:
                raise ValidationError(f"fixture {label!r}: bad series {name!r}: {exc}") from exc

    suites = list(data.get("suites", []))
    for s in suites:
        if s not in SUITE_NAMES:
            raise ValidationError(f"fixture {label!r}: unknown suite {s!r}")
    return Fixture(label, ring, group, twist, ideals, series, suites, caps, path)


# --- suite runners -----------------------------------------------------------


def _window_elems(group: OrderedGroup, bounds) -> list:
    return group.window(bounds[0], bounds[1])


def _suite_ring_axioms(fx: Fixture, seed: int) -> list[PropertyReport]:
    checks = []
    rep = check_ring_axioms(fx.ring)
    checks.append(PropertyReport(
        "ring-axioms", rep.passed,
        witness=[{"axiom": r.axiom, "witness": list(r.witness)}
                 for r in rep.failures()] or None,
        certificate={"axioms": len(rep.results)} if rep.passed else None))
    us = units(fx.ring)
    mul = fx.ring.mul_table
    closed = all(mul[a][b] in us for a in us for b in us)
    inverses = all(any(mul[a][b] == fx.ring.one and mul[b][a] == fx.ring.one for b in us)
                   for a in us)
    checks.append(PropertyReport(
        "units-group", fx.ring.one in us and closed and inverses,
        certificate={"units": sorted(us)}))
    if fx.twist is not None:
        bad = None
        for i, gen in enumerate(fx.twist.sigma_generators()):
            try:
                check_automorphism(fx.ring, gen.map)
            except MNSeriesError as exc:
                bad = {"generator": i, "error": str(exc)}
                break
        checks.append(PropertyReport("sigma-automorphisms", bad is None, witness=bad))
    return checks


def _subset_pool(ring: FiniteRing, seed: int, limit: int):
    """Deterministic nonempty subsets: exhaustive when 2^|R| is small,
    otherwise all singletons plus seeded draws of size <= 4."""
    n = ring.size
    if (1 << n) <= 4096:
        out = []
        for mask in range(1, 1 << n):
            out.append(frozenset(i for i in range(n) if mask >> i & 1))
        return out
    rng = random.Random(seed)
    pool = [frozenset({a}) for a in range(n)]
    while len(pool) < n + limit:
        size = rng.randint(2, 4)
        pool.append(frozenset(rng.sample(range(n), size)))
    return pool


def _suite_ideals(fx: Fixture, seed: int) -> list[PropertyReport]:
    ring = fx.ring
    checks = []
    two = enumerate_ideals(ring, "twosided")
    right = enumerate_ideals(ring, "right")
    checks.append(PropertyReport(
        "ideal-enumeration", True,
        certificate={"twosided": [i.sorted_members() for i in two],
                     "right_count": len(right)}))

    idem_witness = None
    for ideal in two + right:
        if ideal_closure(ring, ideal.members, ideal.kind).members != ideal.members:
            idem_witness = ideal.sorted_members()
            break
    checks.append(PropertyReport("closure-idempotent", idem_witness is None,
                                 witness=idem_witness))

    pool = _subset_pool(ring, seed, fx.cap("agreement_samples"))
    zero_ideal = make_ideal(ring, {0})
    agree_witness = None
    for xs in pool:
        if quotient_ideal(zero_ideal, xs).members != annihilator(ring, xs).members:
            agree_witness = sorted(xs)
            break
    checks.append(PropertyReport("quotient-annihilator-agreement",
                                 agree_witness is None, witness=agree_witness,
                                 bounds={"subsets": len(pool)}))

    pair_witness = None
    contain_witness = None
    for U in right:
        for V in right:
            q = quotient_ideal(U, V)  # asserts two-sidedness internally
            if q.kind != "twosided":
                pair_witness = {"U": U.sorted_members(), "V": V.sorted_members()}
            # U <= (U:V) is promised whenever V.U stays inside U
            vu_inside = all(ring.mul_table[v][u] in U.members
                            for v in V.members for u in U.members)
            if vu_inside and not U.members <= q.members:
                contain_witness = {"U": U.sorted_members(), "V": V.sorted_members(),
                                   "quotient": q.sorted_members()}
    checks.append(PropertyReport("right-pair-quotient-twosided", pair_witness is None,
                                 witness=pair_witness))
    checks.append(PropertyReport("quotient-contains-U", contain_witness is None,
                                 witness=contain_witness))

    nil, is_ni = nil_radical(ring)
    semi_witness = None
    for ideal in two:
        if is_semiprime_ideal(ideal).ok and not nil <= ideal.members:
            semi_witness = ideal.sorted_members()
            break
    checks.append(PropertyReport("nil-inside-semiprime", semi_witness is None,
                                 witness=semi_witness,
                                 certificate={"nil": sorted(nil), "NI": is_ni}))

    if is_ni:
        nil_ideal = make_ideal(ring, nil)
        wa_witness = None
        for xs in pool:
            if weak_annihilator(ring, xs) != quotient_ideal(nil_ideal, xs).members:
                wa_witness = sorted(xs)
                break
        checks.append(PropertyReport("weak-annihilator-is-nil-quotient",
                                     wa_witness is None, witness=wa_witness,
                                     bounds={"subsets": len(pool)}))
    return checks


def _suite_properties(fx: Fixture, seed: int, only: str | None = None) -> list[PropertyReport]:
    ring = fx.ring
    fam = fx.sigma_family()
    checks = []
    zd = zero_divisor_sets(ring)
    checks.append(PropertyReport(
        "zero-divisors", True,
        certificate={"left": sorted(zd.left), "left_regular": sorted(zd.left_regular),
                     "right": sorted(zd.right), "right_regular": sorted(zd.right_regular)}))
    checks.append(is_left_fusible(ring))
    checks.append(is_sigma_compatible_ring(ring, fam))
    checks.append(is_right_nonsingular(ring))
    checks.append(is_IN(ring))
    checks.append(is_SA(ring))
    nil, is_ni = nil_radical(ring)
    checks.append(PropertyReport("nil-radical", True,
                                 certificate={"nil": sorted(nil), "NI": is_ni}))
    for name, ideal in sorted(fx.ideals.items()):
        if ideal.kind != "twosided":
            continue
        sp = is_semiprime_ideal(ideal)
        checks.append(PropertyReport(f"semiprime-{name}", sp.ok,
                                     witness=list(sp.witness) if sp.witness else None))
        sc = is_sigma_compatible_ideal(ideal, fam)
        checks.append(PropertyReport(f"sigma-compatible-{name}", sc.ok,
                                     witness=sc.witness))
    if fx.twist is not None:
        exps = _window_elems(fx.group, fx.cap("window"))
        try:
            checks.append(is_G_armendariz(ring, fx.twist, fx.cap("max_support"), exps))
        except MNSeriesError as exc:
            checks.append(PropertyReport("G-armendariz", None,
                                         note=f"skipped: {exc}"))
    if only is not None:
        matched = [c for c in checks if c.prop == only]
        if not matched:
            raise SuiteUnknown(f"no property named {only!r}; available: "
                               + ", ".join(c.prop for c in checks))
        return matched
    return checks


def _property_suite_status(checks: list[PropertyReport]) -> str:
    """The properties suite reports verdicts as data; it only fails if a
    checker broke down (no verdict and not a deliberate skip)."""
    for c in checks:
        if c.verdict is None and not (c.note or "").startswith(("skipped", "not_applicable")):
            return "fail"
    return "pass"


def _suite_prop32(fx: Fixture, seed: int) -> list[PropertyReport]:
    ring, twist = fx.ring, fx.twist
    if twist is None:
        raise PreconditionFail("fixture has no twist")
    fus = is_left_fusible(ring)
    if not fus.verdict:
        raise PreconditionFail(f"{ring.label} is not left fusible (witness {fus.witness})")
    compat = is_sigma_compatible_ring(ring, twist.sigma_generators())
    if not compat.verdict:
        raise PreconditionFail(f"sigma-compatibility fails: {compat.witness}")
    if not twist.normalized:
        raise PreconditionFail("twist is not normalized")
    exps = _window_elems(fx.group, fx.cap("window"))
    universe = TruncatedUniverse(twist, exps, cap=fx.cap("universe_cap"))
    rng = random.Random(seed)
    samples = fx.cap("samples")
    failures = []
    for _ in range(samples):
        f = random_series(twist, rng, exps, fx.cap("max_support"))
        lift = lift_fusible_decomposition(f, universe)
        if not lift.ok:
            failures.append({"f": series_to_json(f), "lift": lift.to_json()})
    return [PropertyReport(
        "fusible-lift", not failures, witness=failures or None,
        certificate={"samples": samples},
        bounds={"window": fx.cap("window"), "max_support": fx.cap("max_support"),
                "universe": universe.describe()})]


def _suite_lemma43(fx: Fixture, seed: int) -> list[PropertyReport]:
    if fx.twist is None:
        raise PreconditionFail("fixture has no twist")
    universe = TruncatedUniverse(fx.twist, _window_elems(fx.group, fx.cap("universe_window")),
                                 cap=fx.cap("universe_cap"))
    right = enumerate_ideals(fx.ring, "right")
    limit = fx.cap("ideal_pair_limit")
    pairs = [(I, J) for I in right for J in right][:limit]
    checks = []
    for I, J in pairs:
        for side in ("left", "right"):
            checks.append(lifted_annihilator_check(I, J, side, universe))
    if len(right) ** 2 > limit:
        checks.append(PropertyReport("pair-coverage", None,
                                     note=f"skipped: only first {limit} of {len(right) ** 2} pairs run"))
    return checks


def _suite_thm45(fx: Fixture, seed: int) -> list[PropertyReport]:
    if fx.twist is None:
        raise PreconditionFail("fixture has no twist")
    twist = fx.twist
    universe = TruncatedUniverse(twist, _window_elems(fx.group, fx.cap("universe_window")),
                                 cap=fx.cap("universe_cap"))
    win = universe.window
    two = enumerate_ideals(fx.ring, "twosided")
    configs = [("empty", [], [])]
    for I in two:
        for J in two:
            gens_i = [series_make(twist, [(win[k % len(win)], c)])
                      for k, c in enumerate(sorted(I.members - {0}))]
            gens_j = [series_make(twist, [(win[(k + 1) % len(win)], c)])
                      for k, c in enumerate(sorted(J.members - {0}))]
            configs.append((f"{I.sorted_members()}x{J.sorted_members()}", gens_i, gens_j))
    limit = fx.cap("ideal_pair_limit") + 1
    checks = []
    for name, gi, gj in configs[:limit]:
        rep = sa_transfer_witness(gi, gj, universe)
        rep.certificate = dict(rep.certificate or {}, config=name)
        checks.append(rep)
    if len(configs) > limit:
        checks.append(PropertyReport("config-coverage", None,
                                     note=f"skipped: only first {limit} of {len(configs)} configurations run"))
    return checks


def _suite_thm54(fx: Fixture, seed: int) -> list[PropertyReport]:
    if fx.twist is None:
        raise PreconditionFail("fixture has no twist")
    twist = fx.twist
    U = fx.ideals.get("U")
    if U is None:
        raise PreconditionFail("fixture names no ideal 'U'")
    if U.kind != "twosided":
        raise PreconditionFail("U must be two-sided")
    semi = is_semiprime_ideal(U)
    if not semi.ok:
        raise PreconditionFail(f"U is not semiprime (witness {semi.witness})")
    compat = is_sigma_compatible_ideal(U, twist.sigma_generators())
    if not compat.ok:
        raise PreconditionFail(f"U is not sigma-compatible (witness {compat.witness})")
    if not twist.normalized:
        raise PreconditionFail("twist is not normalized")

    checks = [sigma_u_zip_scan(fx.ring, U, fx.cap("subset_cap"), fx.cap("witness_cap"))]

    exps = _window_elems(fx.group, fx.cap("window"))
    all_series = list(exhaustive_series(twist, exps))
    pairs = qualifying = 0
    mismatch = None
    try:
        for f in all_series:
            for g in all_series:
                pairs += 1
                if series_mul(f, g).content() <= U.members:
                    qualifying += 1
                    coefficient_extraction(f, g, U)
    except TraceMismatch as exc:
        mismatch = str(exc)
    checks.append(PropertyReport(
        "extraction-vs-oracle", mismatch is None, witness=mismatch,
        certificate={"pairs": pairs, "qualifying": qualifying},
        bounds={"window": fx.cap("window")}))

    universe = TruncatedUniverse(twist, exps, cap=fx.cap("universe_cap"))
    candidates = [a for a in fx.ring.elements() if a not in U.members
                  and quotient_ideal(U, {a}).members == U.members]
    if not candidates:
        checks.append(PropertyReport("series-zip", None,
                                     note="skipped: no element outside U satisfies (U:{a}) = U"))
        return checks
    outside = candidates[0]
    configs = [[series_make(twist, [(twist.group.identity, outside)])]]
    inside = sorted(a for a in U.members if a != 0)
    if inside and len(exps) > 1:
        configs.append([series_make(twist, [(exps[0], inside[0])]),
                        series_make(twist, [(exps[1], outside)])])
    for X in configs:
        checks.append(series_zip_witness(X, U, universe))
    return checks


def _zip_status(report: PropertyReport) -> str:
    if report.note:
        return report.note.split(":")[0]
    return "ok" if report.verdict else "fail"


def _suite_examples(fx: Fixture, seed: int) -> list[PropertyReport]:
    ring = fx.ring
    checks = []
    proper_two = {name: ideal for name, ideal in sorted(fx.ideals.items())
                  if ideal.kind == "twosided" and len(ideal.members) < ring.size}
    for name, U in proper_two.items():
        scan = sigma_u_zip_scan(ring, U, fx.cap("subset_cap"), fx.cap("witness_cap"))
        scan.certificate = dict(scan.certificate or {}, ideal=name)
        checks.append(scan)
        quotients = {str(v): quotient_ideal(U, {v}).sorted_members()
                     for v in ring.elements() if v not in U.members}
        checks.append(PropertyReport(
            f"singleton-quotients-{name}", True,
            certificate={"U": U.sorted_members(), "quotients": quotients}))

    pool = _subset_pool(ring, seed, fx.cap("agreement_samples"))
    fam = fx.sigma_family()
    zero_ideal = make_ideal(ring, {0})
    nil, is_ni = nil_radical(ring)
    disagreement = None
    compared = 0
    for xs in pool:
        a = sigma_u_zip_witness(ring, zero_ideal, xs, fam)
        b = right_zip_witness(ring, xs)
        compared += 1
        if _zip_status(a) != _zip_status(b) or \
                (a.verdict and a.certificate["minimal_witness"] != b.certificate["minimal_witness"]):
            disagreement = {"X": sorted(xs), "sigma_u_zip": a.to_json(),
                            "right_zip": b.to_json()}
            break
        if is_ni:
            c = sigma_u_zip_witness(ring, make_ideal(ring, nil), xs, fam)
            d = weak_zip_witness(ring, xs)
            compared += 1
            if _zip_status(c) != _zip_status(d) or \
                    (c.verdict and c.certificate["minimal_witness"] != d.certificate["minimal_witness"]):
                disagreement = {"X": sorted(xs), "sigma_u_zip": c.to_json(),
                                "weak_zip": d.to_json()}
                break
    checks.append(PropertyReport(
        "zip-specialization-agreement", disagreement is None,
        witness=disagreement, certificate={"comparisons": compared},
        bounds={"subsets": len(pool), "NI": is_ni}))
    return checks


_SUITES = {
    "ring-axioms": _suite_ring_axioms,
    "ideals": _suite_ideals,
    "properties": _suite_properties,
    "prop3.2": _suite_prop32,
    "lemma4.3": _suite_lemma43,
    "thm4.5": _suite_thm45,
    "thm5.4": _suite_thm54,
    "examples": _suite_examples,
}


@dataclass
class SuiteReport:
    fixture: str
    suite: str
    seed: int
    params: dict
    checks: list[PropertyReport]
    status: str
    elapsed: float = 0.0

    def to_json(self, include_timing: bool = False) -> dict:
        out = {"fixture": self.fixture, "suite": self.suite, "seed": self.seed,
               "params": self.params, "status": self.status,
               "checks": [c.to_json(include_timing) for c in self.checks]}
        if include_timing:
            out["elapsed"] = self.elapsed
        return out


def run_suite(fixture: Fixture, suite: str, seed: int = 0,
              overrides: dict | None = None) -> SuiteReport:
    """Run one named suite; preconditions that fail make the suite
    not-applicable unless the fixture claims it, in which case they fail it."""
    if suite not in _SUITES:
        raise SuiteUnknown(f"unknown suite {suite!r}; choose from {', '.join(SUITE_NAMES)}")
    if overrides:
        fixture = Fixture(fixture.label, fixture.ring, fixture.group, fixture.twist,
                          fixture.ideals, fixture.series, fixture.suites,
                          {**fixture.caps, **overrides}, fixture.path)
    params = {k: fixture.cap(k) for k in ("window", "max_support", "samples",
                                          "universe_window")}
    start = time.perf_counter()
    try:
        checks = _SUITES[suite](fixture, seed)
    except (PreconditionFail, NotNormalized) as exc:
        claimed = suite in fixture.suites
        status = "fail" if claimed else "not_applicable"
        note = ("claimed applicable but precondition failed: "
                if claimed else "not_applicable: ") + str(exc)
        checks = [PropertyReport(suite, False if claimed else None, note=note)]
        return SuiteReport(fixture.label, suite, seed, params, checks, status,
                           time.perf_counter() - start)
    except TraceMismatch as exc:
        checks = [PropertyReport(suite, False, witness=str(exc),
                                 note="derivation trace mismatch")]
        return SuiteReport(fixture.label, suite, seed, params, checks, "fail",
                           time.perf_counter() - start)
    except HypothesisFails as exc:
        checks = [PropertyReport(suite, False, witness=exc.witness,
                                 note=f"hypothesis_fails: {exc}")]
        return SuiteReport(fixture.label, suite, seed, params, checks, "fail",
                           time.perf_counter() - start)
    if suite == "properties":
        status = _property_suite_status(checks)
    else:
        status = "pass" if all(c.verdict is not False for c in checks) else "fail"
    return SuiteReport(fixture.label, suite, seed, params, checks, status,
                       time.perf_counter() - start)


# --- rendering ----------------------------------------------------------------


def _compact(value, limit: int = 200) -> str:
    text = json.dumps(value, sort_keys=True, default=str)
    return text if len(text) <= limit else text[:limit] + "..."


def _render_text(data: dict) -> str:
    lines = [f"suite {data['suite']} on {data['fixture']} "
             f"(seed {data['seed']}): {data['status'].upper()}"]
    # the properties battery reports verdicts as facts, not pass/fail checks
    tags = {True: "true", False: "false", None: "info"} if data["suite"] == "properties" \
        else {True: "PASS", False: "FAIL", None: "INFO"}
    for check in data["checks"]:
        verdict = check.get("verdict")
        tag = tags[verdict]
        line = f"  [{tag}] {check['property']}"
        if check.get("note"):
            line += f"  ({check['note']})"
        if verdict is not True and check.get("witness") is not None:
            line += f"  witness: {_compact(check['witness'])}"
        elif check.get("certificate") is not None:
            line += f"  {_compact(check['certificate'], 120)}"
        lines.append(line)
    if "elapsed" in data:
        lines.append(f"  elapsed: {data['elapsed']:.3f}s")
    return "\n".join(lines)


def emit_report(report: SuiteReport | dict, fmt: str = "text",
                include_timing: bool = False) -> str:
    """Serialize a suite report; json output is canonical and timing-free by
    default so identical runs emit identical bytes."""
    data = report.to_json(include_timing) if isinstance(report, SuiteReport) else report
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True)
    if fmt == "text":
        return _render_text(data)
    raise ValueError(f"unknown format {fmt!r}")


# --- command line ---------------------------------------------------------------


def _add_common(parser):
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--seed", type=int, default=0)


def _parse_window(text: str) -> list[int]:
    lo, _, hi = text.partition("..")
    try:
        return [int(lo), int(hi)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like 'a..b', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mn", description="Validate and verify finite twisted-series fixtures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load a fixture and report its validation")
    p.add_argument("fixture")
    _add_common(p)

    p = sub.add_parser("ideals", help="enumerate the ideals of a fixture's ring")
    p.add_argument("fixture")
    p.add_argument("--kind", choices=("twosided", "right", "left"), default="twosided")
    _add_common(p)

    p = sub.add_parser("props", help="run the base-ring property battery")
    p.add_argument("fixture")
    p.add_argument("--property", dest="prop")
    _add_common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("fixture")
    p.add_argument("--suite", required=True)
    p.add_argument("--window", type=_parse_window)
    p.add_argument("--max-support", type=int, dest="max_support")
    p.add_argument("--out", type=Path)
    _add_common(p)

    p = sub.add_parser("report", help="re-render a saved suite report")
    p.add_argument("path", type=Path)
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "report":
            try:
                data = json.loads(args.path.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                print(f"error: cannot load report: {exc}", file=sys.stderr)
                return 2
            print(emit_report(data, args.format))
            return 0

        path = resolve_fixture(args.fixture)
        if args.command == "validate":
            fx = load_fixture(path, seed=args.seed)
            payload = {"fixture": fx.label, "valid": True,
                       "ring": {"label": fx.ring.label, "size": fx.ring.size},
                       "suites_claimed": fx.suites,
                       "ideals": {k: v.to_json() for k, v in sorted(fx.ideals.items())}}
            if fx.twist is not None:
                cond, assoc = _validate_twist(fx.label, fx.twist, fx.caps, args.seed)
                payload["twist"] = cond.to_json()
                payload["associativity"] = assoc.to_json()
            if args.format == "json":
                print(json.dumps(payload, indent=2, sort_keys=True))
            else:
                print(f"fixture {fx.label}: valid "
                      f"(ring {fx.ring.label}, {fx.ring.size} elements; "
                      f"suites: {', '.join(fx.suites) or 'none claimed'})")
            return 0

        if args.command == "ideals":
            fx = load_fixture(path, seed=args.seed)
            found = enumerate_ideals(fx.ring, args.kind)
            if args.format == "json":
                print(json.dumps({"fixture": fx.label, "kind": args.kind,
                                  "ideals": [i.sorted_members() for i in found]},
                                 indent=2, sort_keys=True))
            else:
                print(f"{len(found)} {args.kind} ideals of {fx.ring.label}:")
                for i in found:
                    print(f"  {i.describe()}")
            return 0

        if args.command == "props":
            fx = load_fixture(path, seed=args.seed)
            checks = _suite_properties(fx, args.seed, only=args.prop)
            report = SuiteReport(fx.label, "properties", args.seed, {}, checks,
                                 _property_suite_status(checks))
            print(emit_report(report, args.format))
            return 0 if report.status == "pass" else 1

        if args.command == "verify":
            fx = load_fixture(path, seed=args.seed)
            overrides = {}
            if args.window:
                overrides["window"] = args.window
            if args.max_support:
                overrides["max_support"] = args.max_support
            report = run_suite(fx, args.suite, seed=args.seed, overrides=overrides)
            rendered = emit_report(report, args.format)
            print(rendered)
            if args.out:
                args.out.write_text(emit_report(report, "json") + "\n")
            if report.status == "not_applicable":
                print(f"warning: suite {args.suite} not applicable to {fx.label}",
                      file=sys.stderr)
                return 0
            return 0 if report.status == "pass" else 1
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SuiteUnknown as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MNSeriesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
