"""Executable transfer arguments between a base ring and its series ring.

Each harness runs a constructive argument step by step over a truncated
series universe and re-verifies every claimed membership by direct
evaluation, with an independent brute-force scan as the final oracle. A
TraceMismatch means a step's claim failed direct evaluation; that aborts
loudly because it would signal either an implementation bug or a genuine
gap in the argument, and neither may be papered over.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import (HypothesisFails, NotFusibleRing, NotNormalized,
                     NotSigmaCompatible, PreconditionFail, RingMismatch,
                     SizeCapExceeded, TraceMismatch, TwistMismatch, ZeroSeries)
from .ideals import (IdealSet, annihilator, enumerate_ideals, ideal_closure,
                     is_semiprime_ideal, is_sigma_compatible_ideal, set_sum)
from .properties import (PropertyReport, _Timer, fusible_decompositions,
                         is_G_armendariz, is_left_fusible, is_SA,
                         is_sigma_compatible_ring, sigma_u_zip_witness,
                         zero_divisor_sets)
from .series import (Series, TwistSystem, embed_scalar, exhaustive_series,
                     series_add, series_make, series_mul, series_sub,
                     series_to_json, support_stats, term_product, x_w_pairs)

DEFAULT_UNIVERSE_CAP = 4096


class TruncatedUniverse:
    """All series with support inside a finite window: the decidable stand-in
    for the full series ring, over which its quantifiers become scans."""

    def __init__(self, twist: TwistSystem, window: Iterable,
                 cap: int = DEFAULT_UNIVERSE_CAP):
        grp = twist.group
        win = sorted({grp.canon(x) for x in window}, key=grp.sort_key())
        if not win:
            raise PreconditionFail("universe window must be nonempty")
        count = twist.ring.size ** len(win)
        if count > cap:
            raise SizeCapExceeded(
                f"{twist.ring.size}^{len(win)} = {count} universe series exceed the cap of {cap}")
        self.twist = twist
        self.window = win
        self.count = count
        self._all = None

    def __len__(self) -> int:
        return self.count

    @property
    def has_identity(self) -> bool:
        return self.twist.group.identity in self.window

    def all_series(self) -> list[Series]:
        if self._all is None:
            self._all = list(exhaustive_series(self.twist, self.window))
        return self._all

    def nonzero_series(self) -> list[Series]:
        return [s for s in self.all_series() if not s.is_zero]

    def with_coeffs_in(self, members: Iterable[int]) -> list[Series]:
        allowed = frozenset(members)
        return [s for s in self.all_series() if s.content() <= allowed]

    def describe(self) -> dict:
        return {"window": [self.twist.group.to_json(x) for x in self.window],
                "series": self.count}


# --- fusible decomposition lift ----------------------------------------------


@dataclass
class FusibleLift:
    """f = g + h with g a left zero-divisor of the series ring (killed by
    embed(d)) and h left regular on the whole truncated universe."""

    g: Series
    h: Series
    s0: Any
    a: int
    b: int
    d: int
    sum_ok: bool
    g_annihilated_ok: bool
    leading_regular_ok: bool
    h_regular_ok: bool
    h_regular_witness: Series | None = None

    @property
    def ok(self) -> bool:
        return (self.sum_ok and self.g_annihilated_ok
                and self.leading_regular_ok and self.h_regular_ok)

    def to_json(self) -> dict:
        grp = self.g.twist.group
        out = {"g": series_to_json(self.g), "h": series_to_json(self.h),
               "s0": grp.to_json(self.s0), "a": self.a, "b": self.b, "d": self.d,
               "sum_ok": self.sum_ok, "g_annihilated_ok": self.g_annihilated_ok,
               "leading_regular_ok": self.leading_regular_ok,
               "h_regular_ok": self.h_regular_ok}
        if self.h_regular_witness is not None:
            out["h_regular_witness"] = series_to_json(self.h_regular_witness)
        return out


def lift_fusible_decomposition(f: Series, universe: TruncatedUniverse) -> FusibleLift:
    """Split a nonzero series at its minimal exponent, base-ring style.

    The minimal coefficient f(s0) = a + b with a a left zero-divisor and b
    left regular; g carries a at s0 and h the rest. The certificate then
    shows g * embed(d) = 0 for a recorded d with a*d = 0, and that no
    nonzero k in the universe has h*k = 0.
    """
    twist = f.twist
    ring = twist.ring
    if f.is_zero:
        raise ZeroSeries("cannot decompose the zero series")
    fus = is_left_fusible(ring)
    if not fus.verdict:
        raise NotFusibleRing(f"{ring.label} is not left fusible (witness {fus.witness})")
    compat = is_sigma_compatible_ring(ring, twist.sigma_generators())
    if not compat.verdict:
        raise NotSigmaCompatible(f"{ring.label} with this sigma fails compatibility: {compat.witness}")
    if not twist.normalized:
        raise NotNormalized("fusible lift requires a normalized twist")

    stats = support_stats(f)
    s0 = stats.minimal
    a, b = fusible_decompositions(ring, stats.leading)[0]
    d = next(r for r in range(1, ring.size) if ring.mul_table[a][r] == 0)
    g = series_make(twist, [(s0, a)])
    h = series_sub(f, g)

    sum_ok = series_add(g, h) == f
    g_annihilated_ok = series_mul(g, embed_scalar(twist, d)).is_zero
    leading_regular_ok = b in zero_divisor_sets(ring).left_regular
    h_regular_ok = True
    h_regular_witness = None
    for k in universe.nonzero_series():
        if series_mul(h, k).is_zero:
            h_regular_ok = False
            h_regular_witness = k
            break
    return FusibleLift(g, h, s0, a, b, d, sum_ok, g_annihilated_ok,
                       leading_regular_ok, h_regular_ok, h_regular_witness)


# --- annihilator lifting (IN side) -------------------------------------------


def _series_annihilator(universe: TruncatedUniverse, targets: Sequence[Series],
                        side: str) -> set[Series]:
    if side == "left":
        return {u for u in universe.all_series()
                if all(series_mul(u, w).is_zero for w in targets)}
    if side == "right":
        return {u for u in universe.all_series()
                if all(series_mul(w, u).is_zero for w in targets)}
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def _series_set_sum(A: Iterable[Series], B: Iterable[Series]) -> set[Series]:
    return {series_add(x, y) for x in A for y in B}


def lifted_annihilator_check(I: IdealSet, J: IdealSet, side: str,
                             universe: TruncatedUniverse) -> PropertyReport:
    """Check the three coefficientwise annihilator identities on the universe.

    (1) the I-and-J coefficient series are exactly the (I n J) ones;
    (2) a series annihilates the I-coefficient series on the chosen side
        iff its own coefficients lie in the matching base annihilator of I
        (and likewise for J);
    (3) the base-ring sum identity l(I n J) = l(I) + l(J) and its
        universe-level counterpart agree for this pair.
    """
    twist = universe.twist
    ring = twist.ring
    if I.ring is not ring or J.ring is not ring:
        raise RingMismatch("ideals must live in the universe's coefficient ring")
    compat = is_sigma_compatible_ring(ring, twist.sigma_generators())
    if not compat.verdict:
        raise PreconditionFail(f"twist is not sigma-compatible: {compat.witness}")
    with _Timer() as t:
        meet = I.members & J.members
        witnesses = {}

        both = {u for u in universe.all_series()
                if u.content() <= I.members and u.content() <= J.members}
        meet_series = set(universe.with_coeffs_in(meet))
        id1 = both == meet_series
        if not id1:
            sample = next(iter(both ^ meet_series))
            witnesses["membership-intersection"] = series_to_json(sample)

        id2 = True
        for name, ideal in (("I", I), ("J", J)):
            base_side = annihilator(ring, ideal.members, side).members
            expected = set(universe.with_coeffs_in(base_side))
            actual = _series_annihilator(universe, universe.with_coeffs_in(ideal.members), side)
            if actual != expected:
                id2 = False
                sample = next(iter(actual ^ expected))
                witnesses[f"annihilator-lift-{name}"] = series_to_json(sample)

        base_holds = (annihilator(ring, meet, "left").members
                      == set_sum(ring, annihilator(ring, I.members, "left").members,
                                 annihilator(ring, J.members, "left").members))
        l_meet = _series_annihilator(universe, universe.with_coeffs_in(meet), "left")
        l_sum = _series_set_sum(
            _series_annihilator(universe, universe.with_coeffs_in(I.members), "left"),
            _series_annihilator(universe, universe.with_coeffs_in(J.members), "left"))
        univ_holds = l_meet == l_sum
        id3 = base_holds == univ_holds
        if not id3:
            witnesses["sum-identity-agreement"] = {"base": base_holds, "universe": univ_holds}

        verdict = id1 and id2 and id3
    return PropertyReport(
        "lifted-annihilator", verdict,
        witness=witnesses or None,
        certificate={"I": I.sorted_members(), "J": J.sorted_members(), "side": side,
                     "identities": {"membership-intersection": id1,
                                    "annihilator-lift": id2,
                                    "sum-identity-agreement": id3},
                     "base_sum_identity": base_holds,
                     "universe_sum_identity": univ_holds},
        bounds=universe.describe(), elapsed=t.elapsed)


# --- SA transfer (content-ideal construction) ---------------------------------


def _contents(series_list: Iterable[Series]) -> set[int]:
    out: set[int] = set()
    for s in series_list:
        out |= s.content()
    return out


def sa_transfer_witness(I_gens: Sequence[Series], J_gens: Sequence[Series],
                        universe: TruncatedUniverse) -> PropertyReport:
    """Build the base ideal K matching r(I0) + r(J0) from series contents and
    verify the annihilator sum identity on both levels.

    I0 and J0 are the right ideals generated by the generator contents; K is
    searched among the enumerated base ideals; the universe-level identity
    compares the right annihilators of the coefficientwise series sets. The
    reverse direction recovers the base ideal from the universe-level series
    set by taking contents again.
    """
    twist = universe.twist
    ring = twist.ring
    if not twist.normalized:
        raise NotNormalized("SA transfer requires a normalized twist")
    for s in itertools.chain(I_gens, J_gens):
        if s.twist is not twist:
            raise TwistMismatch("generator series must share the universe's twist")
    sa = is_SA(ring)
    if not sa.verdict:
        raise PreconditionFail(f"base ring is not SA: {sa.witness}")
    garm = is_G_armendariz(ring, twist, max_support=len(universe.window),
                           exponents=universe.window)
    if not garm.verdict:
        raise PreconditionFail(f"base ring fails the bounded G-Armendariz check: {garm.witness}")

    with _Timer() as t:
        I0 = ideal_closure(ring, _contents(I_gens), "right")
        J0 = ideal_closure(ring, _contents(J_gens), "right")
        rI0 = annihilator(ring, I0.members).members
        rJ0 = annihilator(ring, J0.members).members
        target = set_sum(ring, rI0, rJ0)
        K = None
        for cand in enumerate_ideals(ring, "twosided"):
            if annihilator(ring, cand.members).members == target:
                K = cand
                break
        if K is None:
            return PropertyReport(
                "sa-transfer", False,
                witness={"I0": I0.sorted_members(), "J0": J0.sorted_members(),
                         "r_sum": sorted(target)},
                note="no-K: annihilator sum matches no ideal, contradicting the SA precondition",
                bounds=universe.describe(), elapsed=t.elapsed)

        I_series = universe.with_coeffs_in(I0.members)
        J_series = universe.with_coeffs_in(J0.members)
        K_series = universe.with_coeffs_in(K.members)
        r_I = _series_annihilator(universe, I_series, "right")
        r_J = _series_annihilator(universe, J_series, "right")
        r_K = _series_annihilator(universe, K_series, "right")
        universe_ok = _series_set_sum(r_I, r_J) == r_K

        K0 = ideal_closure(ring, _contents(K_series), "right")
        reverse_ok = annihilator(ring, K0.members).members == target

        verdict = universe_ok and reverse_ok
    return PropertyReport(
        "sa-transfer", verdict,
        witness=None if verdict else {"universe_ok": universe_ok, "reverse_ok": reverse_ok},
        certificate={"I0": I0.sorted_members(), "J0": J0.sorted_members(),
                     "K": K.sorted_members(), "K0": K0.sorted_members(),
                     "r_I0": sorted(rI0), "r_J0": sorted(rJ0), "r_sum": sorted(target)},
        bounds=universe.describe(), elapsed=t.elapsed)


# --- coefficient extraction (the series-to-base zip induction) ----------------


@dataclass
class TraceStep:
    w: Any
    pairs: list
    established: tuple
    multiplier: int
    ih_pairs: list = field(default_factory=list)
    check: str = "direct-eval-ok"

    def to_json(self, group) -> dict:
        return {"w": group.to_json(self.w),
                "pairs": [[group.to_json(u), group.to_json(v)] for u, v in self.pairs],
                "established": [[group.to_json(self.established[0]),
                                 group.to_json(self.established[1])]],
                "multiplier": self.multiplier,
                "check": self.check}


@dataclass
class DerivationTrace:
    f: Series
    g: Series
    U: IdealSet
    steps: list[TraceStep]
    conclusions: dict

    @property
    def all_in_ideal(self) -> bool:
        return all(t in self.U.members for t in self.conclusions.values())

    def to_json(self) -> dict:
        grp = self.f.twist.group
        return {"f": series_to_json(self.f), "g": series_to_json(self.g),
                "U": self.U.sorted_members(),
                "steps": [s.to_json(grp) for s in self.steps],
                "conclusions": [
                    {"u": grp.to_json(u), "v": grp.to_json(v), "product": t}
                    for (u, v), t in sorted(self.conclusions.items(), key=repr)]}


def extraction_oracle(f: Series, g: Series, U: IdealSet) -> dict:
    """Direct scan: every pairwise twisted product and whether it lies in U."""
    return {(u, v): term_product(f.twist, f.terms[u], u, g.terms[v], v)
            for u in f.terms for v in g.terms}


def coefficient_extraction(f: Series, g: Series, U: IdealSet) -> DerivationTrace:
    """Extract every product f(u)*sigma_u(g(v))*tau(u,v) into U from fg in U.

    Walks the products w in ascending order; at each w the pairs of X_w are
    peeled off front to back, multiplying the running remainder on the right
    by f(u_i), discharging later terms by the induction hypothesis, and
    concluding membership of the head term by semiprimeness. Every claim a
    step makes is re-verified by direct evaluation and a failure aborts via
    TraceMismatch. The finished conclusion set is checked against the
    brute-force oracle.
    """
    if f.twist is not g.twist:
        raise TwistMismatch("series belong to different twist systems")
    twist = f.twist
    ring = twist.ring
    grp = twist.group
    if U.ring is not ring:
        raise RingMismatch("ideal must live in the series' coefficient ring")
    if U.kind != "twosided":
        raise PreconditionFail(f"U must be a two-sided ideal, got kind {U.kind!r}")
    semi = is_semiprime_ideal(U)
    if not semi.ok:
        raise PreconditionFail(f"U is not semiprime: witness {semi.witness}")
    compat = is_sigma_compatible_ideal(U, twist.sigma_generators())
    if not compat.ok:
        raise PreconditionFail(f"U is not sigma-compatible: witness {compat.witness}")
    fg = series_mul(f, g)
    bad = [(w, c) for w, c in fg.sorted_terms() if c not in U.members]
    if bad:
        raise PreconditionFail(
            f"fg has coefficients outside U at {[(grp.to_json(w), c) for w, c in bad]}")

    products = sorted({grp.op(u, v) for u in f.terms for v in g.terms},
                      key=grp.sort_key())
    steps: list[TraceStep] = []
    established: dict = {}

    def fail(msg, step=None):
        raise TraceMismatch(msg, step=step)

    for w in products:
        pairs = x_w_pairs(f, g, w)
        terms = [term_product(twist, f.terms[u], u, g.terms[v], v) for u, v in pairs]
        remainder = ring.sum(terms)
        if remainder != fg.coeff(w):
            fail(f"sum over X_w disagrees with the product coefficient at w={grp.to_json(w)}")
        for i, (u_i, v_i) in enumerate(pairs):
            multiplier = f.terms[u_i]
            ih = []
            for j in range(i + 1, len(pairs)):
                key = (u_i, pairs[j][1])
                if key not in established:
                    fail(f"induction hypothesis pair {key} not yet established", step=(w, i, j))
                if ring.mul(terms[j], multiplier) not in U.members:
                    fail(f"hypothesis term times multiplier left U at {key}", step=(w, i, j))
                ih.append(key)
            if remainder not in U.members:
                fail(f"running remainder left U at w={grp.to_json(w)}, i={i}", step=(w, i))
            if ring.mul(remainder, multiplier) not in U.members:
                fail(f"remainder times multiplier left U at w={grp.to_json(w)}, i={i}", step=(w, i))
            if terms[i] not in U.members:
                fail(f"semiprime extraction failed: term at {(u_i, v_i)} is outside U", step=(w, i))
            established[(u_i, v_i)] = terms[i]
            steps.append(TraceStep(w, pairs, (u_i, v_i), multiplier, ih))
            remainder = ring.sub(remainder, terms[i])
        if remainder != 0:
            fail(f"peeling X_w left a nonzero remainder at w={grp.to_json(w)}")

    oracle = extraction_oracle(f, g, U)
    if set(oracle) != set(established):
        fail("trace conclusions cover a different pair set than the oracle")
    for key, value in oracle.items():
        if established[key] != value or value not in U.members:
            fail(f"oracle disagrees with the trace at {key}")
    return DerivationTrace(f, g, U, steps, established)


# --- series-level zip witness --------------------------------------------------


def series_zip_witness(X: Sequence[Series], U: IdealSet,
                       universe: TruncatedUniverse) -> PropertyReport:
    """Reduce a series-level quotient hypothesis to contents and back.

    Verifies (inside the universe) that the quotient by X is exactly the
    U-coefficient series, reduces to the base hypothesis (U:C_X) = U, finds
    the minimal content witness, forms the corresponding finite X0 and
    verifies the quotient by X0, with coefficient_extraction supplying the
    step-by-step justification and the direct scan acting as oracle.
    """
    twist = universe.twist
    ring = twist.ring
    grp = twist.group
    if U.ring is not ring:
        raise RingMismatch("ideal must live in the universe's coefficient ring")
    X = list(X)
    if not X:
        raise PreconditionFail("X must be a nonempty set of series")
    for s in X:
        if s.twist is not twist:
            raise TwistMismatch("members of X must share the universe's twist")
    semi = is_semiprime_ideal(U)
    if U.kind != "twosided" or not semi.ok:
        raise PreconditionFail(f"U must be a semiprime two-sided ideal (witness {semi.witness})")
    compat = is_sigma_compatible_ideal(U, twist.sigma_generators())
    if not compat.ok:
        raise PreconditionFail(f"U is not sigma-compatible: witness {compat.witness}")
    if all(s.content() <= U.members for s in X):
        raise PreconditionFail("X lies inside the U-coefficient series")
    if not universe.has_identity:
        raise PreconditionFail("universe window must contain the group identity")
    if not twist.normalized:
        raise NotNormalized("series zip witness requires a normalized twist")

    with _Timer() as t:
        u_series = set(universe.with_coeffs_in(U.members))
        quotient = {h for h in universe.all_series()
                    if all(series_mul(s, h).content() <= U.members for s in X)}
        if quotient != u_series:
            sample = next(iter(quotient ^ u_series))
            raise HypothesisFails(
                "(U((G)):X) differs from the U-coefficient series in the universe",
                witness=series_to_json(sample))

        c_x = sorted(_contents(X))
        base_ok = sigma_u_zip_witness(ring, U, c_x, twist.sigma_generators())
        if base_ok.verdict is not True:
            # cannot happen when the universe-level hypothesis held; still reported
            return PropertyReport("series-zip", False,
                                  witness={"base": base_ok.to_json()},
                                  bounds=universe.describe(), elapsed=t.elapsed)
        c_x0 = base_ok.certificate["minimal_witness"]
        x0 = [s for s in X if any(c in c_x0 for c in s.content())]

        quotient0 = {h for h in universe.all_series()
                     if all(series_mul(s, h).content() <= U.members for s in x0)}
        reduced_ok = quotient0 == u_series

        extractions = 0
        for h in sorted(quotient0, key=lambda s: series_to_json(s)):
            for s in x0:
                trace = coefficient_extraction(s, h, U)
                extractions += 1
                # the content conclusion the induction is for: h has U-coefficients
                for v in h.terms:
                    if h.terms[v] not in U.members:
                        raise TraceMismatch(
                            f"extraction finished but h({grp.to_json(v)}) is outside U")
                del trace

        verdict = reduced_ok
    return PropertyReport(
        "series-zip", verdict,
        witness=None if verdict else {"quotient0_size": len(quotient0),
                                      "expected_size": len(u_series)},
        certificate={"C_X": c_x, "C_X0": list(c_x0),
                     "X0": [series_to_json(s) for s in x0],
                     "extractions": extractions},
        bounds=universe.describe(), elapsed=t.elapsed)
