"""End-to-end acceptance sweep.

One test per acceptance criterion.  Each prints a single
``[PASS]/[FAIL] criterion N: <name>`` line — run with ``-s`` to see them —
and enforces its own wall-clock budget on top of the exact checks.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from conftest import random_si_instance, random_si_weights, random_two_sided
from lexknap import (
    IntersectionCase,
    KnapsackInstance,
    Sense,
    alpha_expansion_instance,
    build_two_sided,
    case_classify,
    extended_formulation,
    facet_certificate,
    ge_packing_coefficient,
    hull_le,
    intersection_hull,
    lift_point,
    minimal_packing,
    optimize,
    oracle,
    phi,
    profile_for,
    relaxed_intersection,
    uniqueness,
)
from lexknap.errors import NotSuperincreasing
from lexknap.jsonio import hull_from_dict, instance_from_dict, load_fixture

A21 = (2, 8, 46, 150, 310)
W21 = (1, 4, 25, 75, 160)
U21 = (3, 5, 2, 1, 2)


class _criterion:
    """Prints one [PASS]/[FAIL] line and enforces the wall-clock budget."""

    def __init__(self, num: int, name: str, budget: float) -> None:
        self.num, self.name, self.budget = num, name, budget

    def __enter__(self) -> "_criterion":
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.budget
        label = "PASS" if ok else "FAIL"
        print(f"[{label}] criterion {self.num}: {self.name} ({elapsed:.2f}s)")
        if exc_type is None and not ok:
            raise AssertionError(
                f"criterion {self.num} finished in {elapsed:.2f}s, "
                f"over its {self.budget:g}s budget"
            )
        return False


def _fixture_pair(name):
    d = load_fixture(name)
    return instance_from_dict(d["le"]), instance_from_dict(d["ge"])


def test_criterion_1_maximal_packings_and_rejection():
    with _criterion(1, "greedy maximal packings and validation rejection", 1.0):
        vk, gp = profile_for(KnapsackInstance(A21, U21, 841))
        assert gp.theta == (0, 3, 1, 1, 2)
        assert uniqueness(vk, gp).capacity_used == 840

        vk, gp = profile_for(KnapsackInstance(A21, U21, 863))
        assert gp.theta == (0, 0, 2, 1, 2)
        report = uniqueness(vk, gp)
        assert report.capacity_used == 862
        assert not report.unique
        assert report.alternate == (3, 5, 1, 1, 2)

        crooked = instance_from_dict(load_fixture("example21_nonsi"))
        assert crooked.a == (2, 8, 40, 150, 310)
        assert crooked.u == (1, 5, 4, 1, 2)
        assert crooked.b == 825
        with pytest.raises(NotSuperincreasing):
            profile_for(crooked)
        value, argmax = oracle.brute_max(oracle.enumerate_lattice(crooked), crooked.a)
        assert value == 822
        assert (1, 5, 4, 0, 2) in argmax


def test_criterion_2_exact_facet_list():
    with _criterion(2, "exact facet list for the capacity-841 example", 1.0):
        vk, gp = profile_for(KnapsackInstance(A21, U21, 841))
        hull = hull_le(vk, gp)
        packing = [r.render() for r in hull.ineqs if r.tag.startswith("PACKING")]
        assert packing == [
            "x1 + 3x2 + 9x3 + 18x4 + 18x5 <= 72",
            "x2 + 2x3 + 4x4 + 4x5 <= 17",
            "x3 + x4 + x5 <= 4",
        ]
        bounds = [r for r in hull.ineqs if r.tag.startswith("BOUND")]
        assert len(bounds) == 10
        assert len(hull.ineqs) == 13


def test_criterion_3_packing_rows_give_the_exact_hull():
    with _criterion(3, "packing rows give the exact integer hull", 60.0):
        rng = random.Random(303)
        instances = [KnapsackInstance(A21, U21, 841), KnapsackInstance(A21, U21, 863)]
        instances += [random_si_instance(rng, n=rng.randint(2, 6)) for _ in range(50)]
        for inst in instances:
            box = 1
            for ui in inst.u:
                box *= ui + 1
            assert box <= 10**5
            vk, gp = profile_for(inst)
            hull = hull_le(vk, gp)
            report = oracle.assert_integer_hull(hull, oracle.enumerate_lattice(vk))
            assert report.passed
            for row in hull.ineqs:
                if not row.tag.startswith("PACKING"):
                    continue
                j = int(row.tag[len("PACKING(") : -1])
                cert = facet_certificate(vk, gp, j)
                assert cert.verified
                assert cert.inequality == row


def test_criterion_4_dp_matches_brute_force():
    with _criterion(4, "dynamic program matches brute force", 30.0):
        rng = random.Random(404)
        instances = [KnapsackInstance(A21, U21, 841), KnapsackInstance(A21, U21, 863)]
        instances += [
            random_si_instance(rng, n=rng.randint(2, 5), umax=3) for _ in range(8)
        ]
        for inst in instances:
            vk, gp = profile_for(inst)
            cloud = oracle.enumerate_lattice(vk)
            members = set(cloud.points)
            for _ in range(200):
                c = [
                    Fraction(rng.randint(-8, 8), rng.randint(1, 4))
                    for _ in range(inst.n)
                ]
                res = optimize(vk, gp, c)
                best, _ = oracle.brute_max(cloud, c)
                assert res.value == best
                assert res.solution in members
                assert sum(ci * xi for ci, xi in zip(c, res.solution)) == best


def test_criterion_5_unit_boxes_reduce_to_covers():
    with _criterion(5, "unit boxes turn packing rows into covers", 5.0):
        rng = random.Random(505)
        for _ in range(20):
            n = rng.randint(2, 8)
            u = (1,) * n
            a = random_si_weights(rng, u)
            b = rng.randint(max(a), sum(a) - 1)
            vk, gp = profile_for(KnapsackInstance(a, u, b))
            support = set(gp.support)
            packing = [
                r for r in hull_le(vk, gp).ineqs if r.tag.startswith("PACKING")
            ]
            emitted = {int(r.tag[len("PACKING(") : -1]) for r in packing}
            assert emitted == set(range(1, n + 1)) - support
            for row in packing:
                j = int(row.tag[len("PACKING(") : -1])
                tail = set(gp.support_tail(j))
                assert set(row.coeffs) <= {0, 1}
                assert {i + 1 for i, c in enumerate(row.coeffs) if c} == {j} | tail
                assert row.rhs == len(tail)


def test_criterion_6_two_sided_hulls_certified():
    with _criterion(6, "joint row system describes two-sided hulls", 120.0):
        rng = random.Random(606)
        wants = [IntersectionCase.GAP_ONE] * 10 + [IntersectionCase.GAP_AT_LEAST_TWO] * 10
        for want in wants:
            _, _, ts = random_two_sided(rng, want=want, n=rng.randint(2, 5))
            assert case_classify(ts) is want
            le, ge = ts.as_pair()
            assert min(le.a) >= 1 and min(ge.a) >= 1
            hull = intersection_hull(ts)
            cloud = oracle.enumerate_lattice(ts.as_pair())
            report = oracle.assert_integer_hull(hull, cloud, require_facets=False)
            assert report.passed


def test_criterion_7_extended_formulation_and_lift():
    with _criterion(7, "gap-one extended formulation and exact lifts", 10.0):
        rng = random.Random(707)
        pairs = [
            _fixture_pair("twosided_gap1"),
            (
                KnapsackInstance(A21, U21, 841),
                KnapsackInstance(W21, U21, 310, Sense.GE),
            ),
        ]
        for _ in range(3):
            le, ge, _ = random_two_sided(
                rng, want=IntersectionCase.GAP_ONE, n=rng.randint(2, 5)
            )
            pairs.append((le, ge))
        for le, ge in pairs:
            ts = build_two_sided(le, ge)
            assert case_classify(ts) is IntersectionCase.GAP_ONE
            m = ts.m
            ef = extended_formulation(ts)
            ufree = ts.free_le.inst.u
            for j, hj in ef.h:
                assert hj == ge_packing_coefficient(ts.gamma[:m], ufree, j, m)
            hull = intersection_hull(ts)
            cloud = oracle.enumerate_lattice(ts.as_pair())
            top = ts.theta[m - 1]
            slice_pts = [p for p in cloud.points if p[m - 1] == top - 1]
            assert ts.gamma in slice_pts
            picks = [ts.gamma] + rng.sample(slice_pts, min(4, len(slice_pts)))
            for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                for q in picks:
                    x = tuple(
                        (1 - eps) * t + eps * qi for t, qi in zip(ts.theta, q)
                    )
                    assert x[m - 1] == top - eps
                    assert hull.satisfies(x)
                    y = lift_point(ts, x)
                    assert ef.satisfies(x[:m], y)
        # the shipped example has nontrivial demand-side constants
        ts = build_two_sided(*_fixture_pair("twosided_gap1"))
        assert extended_formulation(ts).h


def test_criterion_8_zero_coefficient_relaxation_vertex():
    with _criterion(8, "zero-coefficient relaxation has the documented vertex", 10.0):
        le = instance_from_dict(load_fixture("zerocoeff_le7"))
        ge = instance_from_dict(load_fixture("zerocoeff_ge7"))
        rows = tuple(hull_from_dict(load_fixture("zerocoeff_ge7_facets")).ineqs)
        assert [r.render() for r in rows] == [
            "x5 + 2x6 + 4x7 >= 12",
            "x6 + x7 >= 4",
            "x7 >= 1",
        ]
        poly = relaxed_intersection(le, ge, ge_rows=rows)
        assert poly.relaxation
        target = tuple(Fraction(v) for v in (0, 0, 2, 1, 1, Fraction(7, 2), 1))
        assert target in oracle.vertices(poly).vertices


def test_criterion_9_packing_coefficient_identities():
    with _criterion(9, "packing coefficient identities", 10.0):
        rng = random.Random(909)
        hits = {"step": 0, "accum": 0, "chain": 0, "tele": 0, "demand": 0}
        loaded = {"tele": 0, "demand": 0}  # checks whose leading factor is nonzero
        for _ in range(100):
            inst = random_si_instance(rng, n=rng.randint(3, 6))
            vk, gp = profile_for(inst)
            n, u, theta = inst.n, inst.u, gp.theta
            eps = Fraction(rng.choice((-1, 1)) * rng.randint(1, 9), rng.randint(1, 9))
            x = [rng.randint(0, ui) for ui in u]
            z = [rng.randint(-3, ui + 2) for ui in u]
            w = [Fraction(xi - zi) - ti * eps for xi, zi, ti in zip(x, z, theta)]
            for j in range(1, n):
                tail = gp.support_tail(j)
                # one support step scales by the remaining headroom
                for s, t in zip(tail, tail[1:]):
                    assert phi(vk, gp, j, t) - phi(vk, gp, j, s) == phi(
                        vk, gp, j, s
                    ) * (u[s - 1] - theta[s - 1])
                    hits["step"] += 1
                # accumulated form of the same recursion
                for i in tail:
                    below = sum(
                        phi(vk, gp, j, k) * (u[k - 1] - theta[k - 1])
                        for k in tail
                        if k < i
                    )
                    assert phi(vk, gp, j, i) == u[j - 1] - theta[j - 1] + below
                    hits["accum"] += 1
                # chain rule through an intermediate support index
                for si, s in enumerate(tail):
                    for i in tail[si + 1 :]:
                        mid = sum(phi(vk, gp, k, i) for k in tail if s <= k < i)
                        assert phi(vk, gp, j, i) == phi(vk, gp, j, s) * (1 + mid)
                        hits["chain"] += 1
                # telescoped tail sums for arbitrary (x, z, eps)
                inner = [i for i in tail if i != n]
                for s in inner:
                    lhs = sum(phi(vk, gp, j, i) * w[i - 1] for i in inner if i >= s)
                    rhs = 0
                    for i in inner:
                        if i < s:
                            continue
                        deeper = [k for k in gp.support_tail(i) if k != n]
                        rhs += w[i - 1] + sum(
                            phi(vk, gp, i, k) * w[k - 1] for k in deeper
                        )
                    assert lhs == phi(vk, gp, j, s) * rhs
                    hits["tele"] += 1
                    loaded["tele"] += bool(phi(vk, gp, j, s))
            # demand-side analogue on an independent minimal packing
            wv = random_si_weights(rng, u)
            d = rng.randint(1, sum(wi * ui for wi, ui in zip(wv, u)))
            gamma = minimal_packing(wv, u, d)
            tset = [k for k in range(1, n + 1) if gamma[k - 1] <= u[k - 1] - 1]
            zf = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n)]
            for j in range(1, n):
                tj = [i for i in tset if j < i < n]
                for s in tj:
                    lhs = sum(
                        ge_packing_coefficient(gamma, u, j, i)
                        * (gamma[i - 1] * eps - zf[i - 1])
                        for i in tj
                        if i >= s
                    )
                    rhs = 0
                    for i in tj:
                        if i < s:
                            continue
                        ti = [k for k in tset if i < k < n]
                        rhs += (
                            eps * ge_packing_coefficient(gamma, u, i, n)
                            - zf[i - 1]
                            - sum(
                                ge_packing_coefficient(gamma, u, i, k) * zf[k - 1]
                                for k in ti
                            )
                        )
                    assert lhs == ge_packing_coefficient(gamma, u, j, s) * rhs
                    hits["demand"] += 1
                    loaded["demand"] += bool(ge_packing_coefficient(gamma, u, j, s))
        assert min(hits.values()) >= 100
        assert min(loaded.values()) >= 100


def test_criterion_10_digit_expansions():
    with _criterion(10, "greedy vectors are positional digit expansions", 5.0):
        rng = random.Random(1010)
        for _ in range(500):
            base = rng.randint(2, 16)
            value = rng.randint(1, 10**9)
            inst = alpha_expansion_instance(base, value)
            _, gp = profile_for(inst)
            digits, v = [], value
            while v:
                digits.append(v % base)
                v //= base
            assert list(gp.theta) == digits
            assert inst.a == tuple(base**t for t in range(len(digits)))
            assert inst.u == (base - 1,) * len(digits)
