import json

import pytest

from conics92.errors import BadReduction, ExhaustedRetries, TooLarge
from conics92.fields import PrimeField, is_square
from conics92.geometry import Chart, ChartPoint, Line3, genericity_check
from conics92.harness import (
    Instance,
    brute_force_fq,
    gen_planted_instance,
    gen_random_instance,
    good_reduction_prime,
    incidence_agreement,
    reduce_instance,
)
from conics92.section import SectionSystem, eval_section, jacobian

from conftest import PLANTED_PRIME


def test_gen_random_deterministic():
    a = gen_random_instance(42, 10)
    b = gen_random_instance(42, 10)
    assert a.to_json() == b.to_json()
    assert genericity_check(a.lines).passed
    c = gen_random_instance(43, 10)
    assert c.to_json() != a.to_json()


def test_gen_random_exhausted():
    with pytest.raises(ExhaustedRetries):
        gen_random_instance(0, 10, retries=0)
    with pytest.raises(ValueError):
        gen_random_instance(0, 0)


def test_planted_exactness(planted_instance):
    pt = planted_instance.planted_point
    system = SectionSystem(pt.chart, planted_instance.lines)
    assert all(v == 0 for v in eval_section(system, pt))
    assert jacobian(system, pt).determinant != 0
    assert genericity_check(planted_instance.lines).passed


def test_planted_deterministic():
    a = gen_planted_instance(11)
    b = gen_planted_instance(11)
    assert a.to_json() == b.to_json()


def test_instance_serialization_round_trip(planted_instance):
    data = planted_instance.to_json()
    back = Instance.from_json(data)
    assert back.to_json() == data
    assert back.planted_point == planted_instance.planted_point
    # exact coordinates serialize as rational strings
    as_text = json.dumps(data)
    assert Instance.from_json(json.loads(as_text)).to_json() == data


def test_instance_rejects_mixed_coordinates():
    data = {
        "lines": [
            {"p": [1.5, "1", 0, 0], "s": [0, 1, 0, 0]},
        ]
        * 8
    }
    with pytest.raises(ValueError):
        Instance.from_json(data)


def test_instance_file_round_trip(tmp_path, planted_instance):
    path = tmp_path / "inst.json"
    planted_instance.save(path)
    assert Instance.load(path).to_json() == planted_instance.to_json()


def test_reduce_instance_good_prime(planted_instance):
    red = reduce_instance(planted_instance, PLANTED_PRIME)
    assert red.field == f"F{PLANTED_PRIME}"
    pm = red.meta["planted_mod_p"]
    fp = PrimeField(PLANTED_PRIME)
    pt = ChartPoint(
        Chart(*pm["chart"]),
        tuple(fp(v) for v in pm["a"]),
        tuple(fp(v) for v in pm["b"]),
    )
    system = SectionSystem(pt.chart, red.lines)
    assert all(v == 0 for v in eval_section(system, pt))
    assert good_reduction_prime(planted_instance) == PLANTED_PRIME


def test_reduction_jacobian_compatibility(planted_instance):
    # the exact F_p Jacobian equals the rational Jacobian reduced mod p
    pt = planted_instance.planted_point
    rec_q = jacobian(SectionSystem(pt.chart, planted_instance.lines), pt)
    red = reduce_instance(planted_instance, PLANTED_PRIME)
    fp = PrimeField(PLANTED_PRIME)
    pm = red.meta["planted_mod_p"]
    pt_p = ChartPoint(
        pt.chart, tuple(fp(v) for v in pm["a"]), tuple(fp(v) for v in pm["b"])
    )
    rec_p = jacobian(SectionSystem(pt.chart, red.lines), pt_p)
    assert fp(rec_q.determinant) == rec_p.determinant


def test_reduce_instance_bad_denominator():
    lines = gen_random_instance(5, 4).lines
    from fractions import Fraction

    bad = Instance(
        lines=(Line3((Fraction(1, 3), 1, 0, 0), lines[0].s),) + lines[1:],
        field="Q",
    )
    with pytest.raises(BadReduction):
        reduce_instance(bad, 3)


def test_reduce_instance_degenerate_line():
    lines = gen_random_instance(5, 4).lines
    bad = Instance(lines=(Line3((3, 3, 3, 3), (1, 1, 1, 4)),) + lines[1:], field="Q")
    # mod 3: (0,0,0,0) is not a valid point
    with pytest.raises(BadReduction):
        reduce_instance(bad, 3)


def test_brute_force_guard():
    inst = gen_random_instance(0, 10)
    with pytest.raises(TooLarge):
        brute_force_fq(inst, 11)
    with pytest.raises(TooLarge):
        brute_force_fq(inst, 5, degree=2)
    with pytest.raises(TooLarge):
        brute_force_fq(inst, 3, degree=3)


def test_brute_force_f3_candidate_counts():
    # |P^3(F_3)| * |P^5(F_3)| = 40 * 364 = 14560
    from conics92.harness import _enumerate_conics_int, _enumerate_planes_int

    assert _enumerate_planes_int(3).shape[0] == 40
    assert _enumerate_conics_int(3).shape[0] == 364
    assert 40 * 364 == 14560


def test_brute_force_finds_planted(planted_instance):
    red = reduce_instance(planted_instance, PLANTED_PRIME)
    sols = brute_force_fq(red, PLANTED_PRIME)
    pm = red.meta["planted_mod_p"]
    key = tuple(pm["chart"])
    hit = False
    for s in sols:
        cp = s.chart_points.get(key)
        if cp and [v.value for v in cp.a] == pm["a"] and [v.value for v in cp.b] == pm["b"]:
            hit = True
    assert hit


def test_brute_force_chart_compatibility_squares(planted_instance):
    for p, inst in ((3, gen_random_instance(0, 10)), (PLANTED_PRIME, planted_instance)):
        sols = brute_force_fq(inst, p)
        assert sols, f"expected solutions over F_{p}"
        for s in sols:
            dets = [d for d in s.chart_dets.values() if d != 0]
            assert dets
            for d in dets[1:]:
                assert is_square(d / dets[0])


def test_brute_force_solutions_satisfy_incidence(planted_instance):
    from conics92.geometry import (
        Plane3,
        conic_value,
        meet_plane_oracle,
        plane_coords,
    )

    red = reduce_instance(planted_instance, PLANTED_PRIME)
    sols = brute_force_fq(red, PLANTED_PRIME)
    for s in sols:
        plane = Plane3(s.plane)
        for line in red.lines:
            x = meet_plane_oracle(line, plane)
            assert conic_value(s.conic, plane_coords(s.istar, x)) == 0


def test_incidence_agreement_f3():
    report = incidence_agreement(gen_random_instance(0, 10), 3)
    assert report["candidates"] == 14560
    assert report["discrepancies"] == 0
    assert report["evaluations"] >= 14560


def test_verify_report(instances, solutions):
    # run the pipeline on a pre-solved seed; solve_all inside verify re-runs,
    # so use the smallest acceptable scope: seed 42 only
    from conics92.harness import verify
    from conics92.solver import SolverOptions

    report = verify(instances[42], SolverOptions(seed=42))
    assert report.count == 92
    assert report.verdict == "equal"
    assert report.positive == report.negative
    assert report.passed
    data = report.to_json()
    assert data["rank"] == 92 and data["signature"] == 0
    assert {c["name"] for c in data["checks"]} >= {
        "residuals",
        "jacobians_nonzero",
        "real_balance",
        "signature_zero",
        "rank_92",
        "scaling_square",
        "odd_permutation_sign",
    }
