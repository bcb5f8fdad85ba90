import random

import pytest

from mnseries.errors import (HypothesisFails, NotFusibleRing, PreconditionFail,
                             SizeCapExceeded, ZeroSeries)
from mnseries.ideals import make_ideal
from mnseries.properties import zero_divisor_sets
from mnseries.series import (embed_scalar, exhaustive_series, random_series,
                             series_add, series_make, series_mul, series_to_json)
from mnseries.transfer import (TruncatedUniverse,
                               coefficient_extraction, extraction_oracle,
                               lift_fusible_decomposition,
                               lifted_annihilator_check, sa_transfer_witness,
                               series_zip_witness)


@pytest.fixture(scope="module")
def uni_z4(tw_z4):
    return TruncatedUniverse(tw_z4, [0, 1])


@pytest.fixture(scope="module")
def uni_klein(tw_klein):
    return TruncatedUniverse(tw_klein, [0, 1])


def test_universe_enumeration(tw_z4):
    uni = TruncatedUniverse(tw_z4, [0, 1])
    assert len(uni) == 16
    assert len(uni.all_series()) == 16
    assert len(uni.nonzero_series()) == 15
    assert len(uni.with_coeffs_in({0, 2})) == 4
    assert uni.has_identity


def test_universe_cap(tw_z4):
    with pytest.raises(SizeCapExceeded):
        TruncatedUniverse(tw_z4, [0, 1, 2], cap=10)


# --- fusible decomposition lift ---


def test_lift_klein_example(tw_klein):
    # f = (1,0) + (1,1)X splits with a = (0,1), b = (1,1), d = (1,0)
    uni = TruncatedUniverse(tw_klein, [0, 1, 2])
    f = series_make(tw_klein, [(0, 2), (1, 3)])
    lift = lift_fusible_decomposition(f, uni)
    assert lift.ok
    assert series_to_json(lift.g) == [[0, 1]]
    assert series_to_json(lift.h) == [[0, 3], [1, 3]]
    assert lift.d == 2
    assert series_add(lift.g, lift.h) == f
    assert series_mul(lift.g, embed_scalar(tw_klein, lift.d)).is_zero


def test_lift_domain_case(tw_gf4_frob):
    # in a field only a = 0 is a left zero-divisor, so g is the zero series
    uni = TruncatedUniverse(tw_gf4_frob, [0, 1, 2])
    f = series_make(tw_gf4_frob, [(0, 2), (2, 1)])
    lift = lift_fusible_decomposition(f, uni)
    assert lift.ok
    assert lift.a == 0 and lift.g.is_zero
    assert lift.b == 2 and lift.h == f


def test_lift_rejects_non_fusible_ring(tw_z4, uni_z4):
    with pytest.raises(NotFusibleRing):
        lift_fusible_decomposition(series_make(tw_z4, [(0, 1)]), uni_z4)


def test_lift_rejects_zero_series(tw_klein, uni_klein):
    with pytest.raises(ZeroSeries):
        lift_fusible_decomposition(series_make(tw_klein, []), uni_klein)


def test_lift_invariants_on_seeded_samples(tw_klein, tw_gf4_frob):
    for twist in (tw_klein, tw_gf4_frob):
        uni = TruncatedUniverse(twist, [0, 1, 2])
        regular = zero_divisor_sets(twist.ring).left_regular
        rng = random.Random(0)
        for _ in range(30):
            f = random_series(twist, rng, [0, 1, 2], 3)
            lift = lift_fusible_decomposition(f, uni)
            assert lift.ok
            assert series_add(lift.g, lift.h) == f
            assert lift.b in regular
            for k in uni.nonzero_series():
                assert not series_mul(lift.h, k).is_zero


# --- annihilator lifting ---


def test_lifted_annihilator_z4_pairs(z4, uni_z4, u_z4):
    zero = make_ideal(z4, {0}, "twosided")
    full = make_ideal(z4, set(range(4)), "twosided")
    for I in (zero, u_z4, full):
        for J in (zero, u_z4, full):
            for side in ("left", "right"):
                rep = lifted_annihilator_check(I, J, side, uni_z4)
                assert rep.verdict is True, rep.witness
                assert rep.certificate["base_sum_identity"] is True
                assert rep.certificate["universe_sum_identity"] is True


def test_lifted_annihilator_examples(z4, uni_z4, u_z4, tw_z4):
    # u annihilates every <2>-coefficient series iff u's coefficients kill 2
    rep = lifted_annihilator_check(u_z4, u_z4, "left", uni_z4)
    assert rep.verdict
    # I = 0: the annihilator of {zero series} is the whole universe, and the
    # expected coefficient set l(0) = R gives the whole universe as well
    zero = make_ideal(z4, {0}, "twosided")
    assert lifted_annihilator_check(zero, zero, "left", uni_z4).verdict
    # I = R: only the zero series annihilates the R-coefficient series
    full = make_ideal(z4, set(range(4)), "twosided")
    rep = lifted_annihilator_check(full, full, "left", uni_z4)
    assert rep.verdict


def test_lifted_annihilator_twisted(tw_z4_tau, u_z4, z4):
    uni = TruncatedUniverse(tw_z4_tau, [0, 1])
    zero = make_ideal(z4, {0}, "twosided")
    for I in (zero, u_z4):
        rep = lifted_annihilator_check(I, u_z4, "left", uni)
        assert rep.verdict is True, rep.witness


# --- SA transfer ---


def test_sa_transfer_z4_example(tw_z4, uni_z4):
    rep = sa_transfer_witness([series_make(tw_z4, [(0, 2)])],
                              [series_make(tw_z4, [(1, 2)])], uni_z4)
    assert rep.verdict is True
    assert rep.certificate["I0"] == [0, 2]
    assert rep.certificate["J0"] == [0, 2]
    assert rep.certificate["K"] == [0, 2]
    assert rep.certificate["r_sum"] == [0, 2]


def test_sa_transfer_empty_generators(tw_z4, uni_z4):
    rep = sa_transfer_witness([], [series_make(tw_z4, [(1, 2)])], uni_z4)
    assert rep.verdict is True
    assert rep.certificate["I0"] == [0]
    assert rep.certificate["K"] == [0]  # r(I0) = R makes the sum R = r(0)


def test_sa_transfer_klein_factors(tw_klein, uni_klein):
    # r((1,0)) = 0 x Z2 and r((0,1)) = Z2 x 0 sum to R = r({0})
    rep = sa_transfer_witness([series_make(tw_klein, [(0, 2)])],
                              [series_make(tw_klein, [(0, 1)])], uni_klein)
    assert rep.verdict is True
    assert rep.certificate["r_I0"] == [0, 1]
    assert rep.certificate["r_J0"] == [0, 2]
    assert rep.certificate["K"] == [0]


# --- coefficient extraction ---


def test_extraction_two_term_mod4(tw_z4, u_z4):
    f = series_make(tw_z4, [(0, 1), (1, 3)])
    g = series_make(tw_z4, [(0, 2), (1, 2)])
    assert series_to_json(series_mul(f, g)) == [[0, 2], [2, 2]]
    trace = coefficient_extraction(f, g, u_z4)
    assert trace.conclusions == {(0, 0): 2, (0, 1): 2, (1, 0): 2, (1, 1): 2}
    assert trace.all_in_ideal
    assert len(trace.steps) == 4
    step = trace.steps[0].to_json(tw_z4.group)
    assert set(step) == {"w", "pairs", "established", "multiplier", "check"}
    assert step["check"] == "direct-eval-ok"


def test_extraction_zero_series_is_vacuous(tw_z4, u_z4):
    zero = series_make(tw_z4, [])
    f = series_make(tw_z4, [(0, 1)])
    trace = coefficient_extraction(zero, f, u_z4)
    assert trace.steps == [] and trace.conclusions == {}


def test_extraction_precondition_failures(tw_z4, u_z4, z4):
    f = series_make(tw_z4, [(0, 1), (1, 1)])
    g = series_make(tw_z4, [(0, 1), (1, 3)])
    with pytest.raises(PreconditionFail):
        coefficient_extraction(f, g, u_z4)  # fg = 1 + 0X + 3X^2 has 1, 3 outside U
    zero_ideal = make_ideal(z4, {0}, "twosided")
    with pytest.raises(PreconditionFail):
        coefficient_extraction(f, g, zero_ideal)  # {0} is not semiprime in Z4


def test_extraction_matches_oracle_exhaustively(tw_z4, u_z4):
    window = [0, 1]
    for f in exhaustive_series(tw_z4, window):
        for g in exhaustive_series(tw_z4, window):
            if series_mul(f, g).content() <= u_z4.members:
                trace = coefficient_extraction(f, g, u_z4)
                oracle = extraction_oracle(f, g, u_z4)
                assert trace.conclusions == oracle
                assert all(v in u_z4.members for v in oracle.values())


def test_extraction_with_tau_twist(tw_z4_tau, u_z4):
    f = series_make(tw_z4_tau, [(0, 2), (1, 2)])
    g = series_make(tw_z4_tau, [(0, 2), (1, 2)])
    trace = coefficient_extraction(f, g, u_z4)
    assert trace.all_in_ideal
    assert set(trace.conclusions) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_extraction_over_lex_exponents(z4, u_z4):
    from mnseries.groups import LexProductGroup
    from mnseries.series import twist_from_spec
    twist = twist_from_spec(z4, LexProductGroup(2), {"sigma": "identity",
                                                     "tau": {"kind": "one"}})
    f = series_make(twist, [((0, 1), 2), ((1, 0), 3)])
    g = series_make(twist, [((0, 0), 2), ((1, -1), 2)])
    assert series_mul(f, g).content() <= u_z4.members
    trace = coefficient_extraction(f, g, u_z4)
    assert set(trace.conclusions) == {((0, 1), (0, 0)), ((0, 1), (1, -1)),
                                      ((1, 0), (0, 0)), ((1, 0), (1, -1))}
    assert trace.all_in_ideal
    uni = TruncatedUniverse(twist, [(0, 0), (0, 1)])
    assert len(uni) == 16 and uni.has_identity


def test_trace_serialization(tw_z4, u_z4):
    f = series_make(tw_z4, [(0, 1), (1, 3)])
    g = series_make(tw_z4, [(0, 2)])
    trace = coefficient_extraction(f, g, u_z4)
    data = trace.to_json()
    assert data["U"] == [0, 2]
    assert len(data["steps"]) == len(trace.steps)
    assert all(c["product"] in (0, 2) for c in data["conclusions"])


# --- series zip witness ---


def test_series_zip_single_scalar(tw_z4, u_z4, uni_z4):
    rep = series_zip_witness([series_make(tw_z4, [(0, 3)])], u_z4, uni_z4)
    assert rep.verdict is True
    assert rep.certificate["C_X"] == [3]
    assert rep.certificate["C_X0"] == [3]
    assert rep.certificate["X0"] == [[[0, 3]]]


def test_series_zip_identity_series(tw_z4, u_z4, uni_z4):
    rep = series_zip_witness([embed_scalar(tw_z4, 1)], u_z4, uni_z4)
    assert rep.verdict is True
    assert rep.certificate["X0"] == [[[0, 1]]]


def test_series_zip_content_reduction(tw_z4, u_z4, uni_z4):
    # X = {2, 3X}: (U:{2}) = Z4 so the minimal content witness is {3}
    X = [series_make(tw_z4, [(0, 2)]), series_make(tw_z4, [(1, 3)])]
    rep = series_zip_witness(X, u_z4, uni_z4)
    assert rep.verdict is True
    assert rep.certificate["C_X"] == [2, 3]
    assert rep.certificate["C_X0"] == [3]
    assert rep.certificate["X0"] == [[[1, 3]]]


def test_series_zip_hypothesis_fails(tw_klein, uni_klein, klein):
    # X = {(0,1)} kills every ((1,0)-coefficient) series, so the quotient
    # strictly exceeds the U-series and the hypothesis fails
    zero = make_ideal(klein, {0}, "twosided")
    X = [series_make(tw_klein, [(0, 1)])]
    with pytest.raises(HypothesisFails) as exc:
        series_zip_witness(X, zero, uni_klein)
    assert exc.value.witness is not None


def test_series_zip_rejects_X_inside_U(tw_z4, u_z4, uni_z4):
    with pytest.raises(PreconditionFail):
        series_zip_witness([series_make(tw_z4, [(0, 2)])], u_z4, uni_z4)


def test_series_zip_rejects_non_semiprime(tw_z4, uni_z4, z4):
    zero = make_ideal(z4, {0}, "twosided")
    with pytest.raises(PreconditionFail):
        series_zip_witness([series_make(tw_z4, [(0, 1)])], zero, uni_z4)
