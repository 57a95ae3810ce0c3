import random
from fractions import Fraction
from itertools import product

import pytest

from conftest import random_si_instance, random_si_weights, random_two_sided
from lexknap import (
    IntersectionCase,
    KnapsackInstance,
    Sense,
    build_two_sided,
    case_classify,
    extended_formulation,
    ge_packing_coefficient,
    intersection_hull,
    lex_cmp,
    lift_point,
    oracle,
    profile_for,
    relaxed_intersection,
)
from lexknap.errors import (
    DifferentBoxes,
    EmptyIntersection,
    NotInHull,
    NotSuperincreasing,
    WrongCase,
    ZeroCoefficientRegime,
)
from lexknap.jsonio import hull_from_dict, instance_from_dict, load_fixture
from lexknap.ratlp import Status, lp_solve

A21 = (2, 8, 46, 150, 310)
W21 = (1, 4, 25, 75, 160)
U21 = (3, 5, 2, 1, 2)


def fixture_pair(name):
    d = load_fixture(name)
    return instance_from_dict(d["le"]), instance_from_dict(d["ge"])


def test_build_two_sided_fixture_gap1():
    le, ge = fixture_pair("twosided_gap1")
    ts = build_two_sided(le, ge)
    assert ts.theta == (0, 3, 1, 1, 2)
    assert ts.gamma == (3, 3, 2, 1, 1)
    assert ts.fixed_suffix == ()
    assert case_classify(ts) is IntersectionCase.GAP_ONE
    cloud = oracle.enumerate_lattice(ts.as_pair())
    assert ts.theta == oracle.lex_max_point(cloud)
    assert ts.gamma == oracle.lex_min_point(cloud)


def test_build_two_sided_fixture_gap2():
    le, ge = fixture_pair("twosided_gap2")
    ts = build_two_sided(le, ge)
    assert ts.gamma == (0, 5, 1, 1, 0)
    assert case_classify(ts) is IntersectionCase.GAP_AT_LEAST_TWO
    cloud = oracle.enumerate_lattice(ts.as_pair())
    assert ts.gamma == oracle.lex_min_point(cloud)


def test_build_two_sided_pins_forced_suffix():
    le = KnapsackInstance(A21, U21, 841)
    ge = KnapsackInstance(W21, U21, 310, Sense.GE)
    ts = build_two_sided(le, ge)
    assert ts.fixed_suffix == (5,)
    assert ts.gamma == (0, 0, 0, 0, 2) and ts.theta == (0, 3, 1, 1, 2)
    assert ts.m == 4 and ts.free_demand <= 0
    cloud = oracle.enumerate_lattice(ts.as_pair())
    assert all(p[4] == 2 for p in cloud.points)
    assert ts.gamma == oracle.lex_min_point(cloud)


def test_build_two_sided_errors():
    le = KnapsackInstance(A21, U21, 841)
    with pytest.raises(ValueError):
        build_two_sided(le, le)
    with pytest.raises(DifferentBoxes):
        build_two_sided(le, KnapsackInstance(W21, (3, 5, 2, 1, 1), 300, Sense.GE))
    with pytest.raises(EmptyIntersection):
        build_two_sided(le, KnapsackInstance(W21, U21, 999, Sense.GE))
    # demand reachable in the box but not under the capacity: gamma > theta
    with pytest.raises(EmptyIntersection):
        build_two_sided(
            KnapsackInstance(A21, U21, 320), KnapsackInstance(W21, U21, 300, Sense.GE)
        )
    with pytest.raises(NotSuperincreasing):
        build_two_sided(le, KnapsackInstance((1, 2, 3, 4, 5), U21, 9, Sense.GE))
    with pytest.raises(ZeroCoefficientRegime):
        build_two_sided(
            KnapsackInstance((2, 8, 46, 150, 310, 0, 0), (3, 5, 2, 1, 2, 4, 2), 841),
            KnapsackInstance((0, 0, 0, 2, 7, 30, 50), (3, 5, 2, 1, 2, 4, 2), 150, Sense.GE),
        )


def test_theta_gamma_are_set_extremes_sweep():
    rng = random.Random(61)
    for _ in range(25):
        _, _, ts = random_two_sided(rng, n=rng.randint(2, 5))
        cloud = oracle.enumerate_lattice(ts.as_pair())
        assert ts.theta == oracle.lex_max_point(cloud)
        assert ts.gamma == oracle.lex_min_point(cloud)
        # the intersection is exactly the lex interval [gamma, theta]
        for p in cloud.points:
            assert lex_cmp(ts.gamma, p).result.value <= 0 <= lex_cmp(ts.theta, p).result.value


def test_intersection_hull_distributivity_sweep():
    """Joint system = LE rows + GE rows + box: certified on 25 random pairs."""
    rng = random.Random(113)
    seen = set()
    for _ in range(25):
        _, _, ts = random_two_sided(rng, n=rng.randint(2, 5))
        if ts.m:
            seen.add(case_classify(ts))
        hull = intersection_hull(ts)
        cloud = oracle.enumerate_lattice(ts.as_pair())
        report = oracle.assert_integer_hull(hull, cloud, require_facets=False)
        assert report.passed
    assert seen == {IntersectionCase.GAP_ONE, IntersectionCase.GAP_AT_LEAST_TWO}


def test_single_point_intersection():
    # demand equal to the whole box weight pins everything
    u = (1, 2)
    le = KnapsackInstance((1, 3), u, 7)
    ge = KnapsackInstance((1, 3), u, 7, Sense.GE)
    ts = build_two_sided(le, ge)
    assert ts.m == 0 and ts.theta == ts.gamma == (1, 2)
    hull = intersection_hull(ts)
    assert hull.satisfies((1, 2)) and not hull.satisfies((0, 2))
    with pytest.raises(WrongCase):
        case_classify(ts)
    with pytest.raises(WrongCase):
        extended_formulation(ts)


def test_multi_le_reduction_to_lex_min_theta():
    """Intersecting several <=-sets on one box is the lex-least theta's set."""
    rng = random.Random(17)
    for _ in range(10):
        base = random_si_instance(rng, n=3, umax=3)
        u = base.u
        thetas = []
        insts = []
        for _ in range(3):
            w = random_si_weights(rng, u)
            cap = rng.randint(max(w), sum(wi * ui for wi, ui in zip(w, u)))
            inst = KnapsackInstance(w, u, cap)
            insts.append(inst)
            _, gp = profile_for(inst)
            thetas.append(gp.theta)
        low = min(thetas, key=lambda t: t[::-1])
        box = oracle.enumerate_box(u)
        joint = [
            p
            for p in box.points
            if all(
                sum(ai * xi for ai, xi in zip(i.a, p)) <= i.b for i in insts
            )
        ]
        interval = [p for p in box.points if lex_cmp(p, low).result.value <= 0]
        assert joint == interval


def test_gap_one_intersection_is_a_union_of_two_slices():
    """In the gap-one case K = {x in K<= : x_m = t} u {x in K>= : x_m = t - 1}.

    Stated on the free prefix: the one-sided sets with the reduced capacity
    and demand, sliced at the two admissible top values, partition the
    intersection.
    """
    rng = random.Random(29)
    for _ in range(10):
        _, _, ts = random_two_sided(rng, want=IntersectionCase.GAP_ONE, n=rng.randint(2, 4))
        m = ts.m
        free = ts.free_le.inst
        w = ts.ge.a[:m]
        t = ts.free_gp.theta[m - 1]
        box = oracle.enumerate_box(free.u).points
        le_slice = {
            p
            for p in box
            if p[m - 1] == t and sum(ai * xi for ai, xi in zip(free.a, p)) <= free.b
        }
        ge_slice = {
            p
            for p in box
            if p[m - 1] == t - 1
            and sum(wi * xi for wi, xi in zip(w, p)) >= ts.free_demand
        }
        assert not (le_slice & ge_slice)
        cloud = {ts.free_part(p) for p in oracle.enumerate_lattice(ts.as_pair()).points}
        assert le_slice | ge_slice == cloud


def test_extended_formulation_gap_one():
    """Exactness of the lifted system: endpoints embed, vertices project back."""
    rng = random.Random(43)
    for _ in range(8):
        le, ge, ts = random_two_sided(rng, want=IntersectionCase.GAP_ONE, n=rng.randint(2, 4))
        ef = extended_formulation(ts)
        m = ts.m
        tn = ts.free_gp.theta[m - 1]
        hull = intersection_hull(ts)
        cloud = oracle.enumerate_lattice(ts.as_pair())
        for p in cloud.points:
            xf = ts.free_part(p)
            if xf[m - 1] == tn:
                assert ef.satisfies(xf, (0,) * m)  # lambda = 1 endpoint
            if xf[m - 1] == tn - 1:
                assert ef.satisfies(xf, xf)  # lambda = 0 endpoint
        # optimizing random objectives over the lift lands on points whose
        # x-part satisfies the combined hull: the projection adds nothing
        cons = [(r.coeffs, r.rhs, r.sense) for r in ef.rows]
        for _ in range(12):
            c = [rng.randint(-5, 5) for _ in range(2 * m)]
            st, _, opt = lp_solve(cons, 2 * m, c)
            assert st is Status.OPTIMAL
            x = list(opt[:m]) + [Fraction(v) for v in ts.theta[m:]]
            assert hull.satisfies(x)


def test_extended_formulation_h_constants():
    le, ge = fixture_pair("twosided_gap1")
    ts = build_two_sided(le, ge)
    ef = extended_formulation(ts)
    m = ts.m
    for j, hj in ef.h:
        assert hj == ge_packing_coefficient(ts.gamma[:m], ts.free_le.inst.u, j, m)


def test_extended_formulation_gap2_force():
    """The gap-one hypothesis is necessary, not an artifact of the proof.

    With a top gap of two the demand-side rows fold the wrong top value into
    their constants: the capacity endpoint still embeds, but some genuine
    point of the intersection at x_m = theta_m - 1 no longer does.
    """
    le, ge = fixture_pair("twosided_gap2")
    ts = build_two_sided(le, ge)
    with pytest.raises(WrongCase):
        extended_formulation(ts)
    ef = extended_formulation(ts, force=True)
    m = ts.m
    tn = ts.free_gp.theta[m - 1]
    broken = []
    for p in oracle.enumerate_lattice(ts.as_pair()).points:
        xf = ts.free_part(p)
        if xf[m - 1] == tn:
            assert ef.satisfies(xf, (0,) * m)
        if xf[m - 1] == tn - 1 and not ef.satisfies(xf, xf):
            broken.append(xf)
    assert broken
    assert all("EF_GE_PACKING" in tag for x in broken for tag in ef.violated(x, x))


def test_lift_point_family():
    le, ge = fixture_pair("twosided_gap1")
    ts = build_two_sided(le, ge)
    ef = extended_formulation(ts)
    hull = intersection_hull(ts)
    for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        x = tuple(
            (1 - eps) * t + eps * g for t, g in zip(ts.theta, ts.gamma)
        )
        assert hull.satisfies(x)
        y = lift_point(ts, x)
        assert ef.satisfies(x[: ts.m], y)
    with pytest.raises(NotInHull):
        lift_point(ts, (9, 9, 9, 9, 9))
    with pytest.raises(ValueError):
        lift_point(ts, ts.theta)  # integral top coordinate: no strict epsilon


def test_relaxed_intersection_seven_variable_fixture():
    le = instance_from_dict(load_fixture("zerocoeff_le7"))
    ge = instance_from_dict(load_fixture("zerocoeff_ge7"))
    rows = tuple(hull_from_dict(load_fixture("zerocoeff_ge7_facets")).ineqs)
    poly = relaxed_intersection(le, ge, ge_rows=rows)
    assert poly.relaxation
    # valid for every point of the true intersection
    box = oracle.enumerate_box(le.u)
    for p in box.points:
        inside = (
            sum(ai * xi for ai, xi in zip(le.a, p)) <= le.b
            and sum(wi * xi for wi, xi in zip(ge.a, p)) >= ge.b
        )
        if inside:
            assert poly.satisfies(p)
    vs = oracle.vertices(poly)
    target = tuple(Fraction(v) for v in (0, 0, 2, 1, 1, Fraction(7, 2), 1))
    assert target in vs.vertices


def test_relaxed_intersection_without_injected_rows():
    """Strictly positive weights: the relaxation is the exact joint system."""
    rng = random.Random(53)
    for _ in range(8):
        le, ge, ts = random_two_sided(rng, n=rng.randint(2, 4))
        poly = relaxed_intersection(le, ge)
        assert poly.relaxation
        cloud = oracle.enumerate_lattice((le, ge))
        for p in cloud.points:
            assert poly.satisfies(p)
