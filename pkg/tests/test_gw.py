import random
from fractions import Fraction

import pytest

from conics92.errors import Degenerate, FieldMismatch
from conics92.fields import PrimeField, QuadExtField, SquareClass, square_class
from conics92.gw import (
    EQUAL,
    NOT_EQUAL,
    UNDECIDED,
    GramMatrix,
    GwForm,
    diagonalize_gram,
    gw_add,
    gw_equal,
    gw_mul,
    invariants,
    trace_form,
)


def H(field="R"):
    return GwForm.hyperbolic(field)


def test_add_examples():
    assert gw_add(GwForm.unit(1.0), GwForm.unit(-1.0)) == H()
    f = gw_add(GwForm.unit(Fraction(3)), GwForm.unit(Fraction(-5)))
    assert gw_add(f, GwForm.zero("Q")) == f
    assert gw_add(45 * H(), H()) == 46 * H()


def test_add_field_mismatch():
    with pytest.raises(FieldMismatch):
        gw_add(GwForm.unit(1.0), GwForm.unit(Fraction(1)))


def test_mul_examples():
    assert gw_mul(GwForm.unit(Fraction(2)), GwForm.unit(Fraction(3))) == GwForm.unit(
        Fraction(6)
    )
    a = GwForm.unit(Fraction(7))
    assert gw_mul(a, a) == GwForm.unit(Fraction(1))
    assert gw_equal(gw_mul(H(), GwForm.unit(-1.0)), H()) == EQUAL


def test_invariants_examples():
    inv = invariants(46 * H())
    assert inv["rank"] == 92 and inv["signature"] == 0 and inv["effective"]
    inv = invariants(GwForm.unit(-5.0))
    assert inv["rank"] == 1 and inv["signature"] == -1
    f5 = PrimeField(5)
    inv = invariants(gw_add(GwForm.unit(f5(2)), GwForm.unit(f5(3))))
    assert inv["rank"] == 2
    assert inv["discriminant"].rep == 1  # 6 = 1 mod 5 is a square


def test_invariants_virtual_flag():
    virt = GwForm.unit(1.0) - GwForm.unit(-1.0)
    assert not invariants(virt)["effective"]
    assert invariants(virt)["rank"] == 0


def test_equal_examples():
    lhs = gw_add(GwForm.unit(2.0), GwForm.unit(-2.0))
    assert gw_equal(lhs, H()) == EQUAL
    f3 = PrimeField(3)
    ones = gw_add(GwForm.unit(f3(1)), GwForm.unit(f3(1)))
    assert gw_equal(ones, H("F3")) == NOT_EQUAL
    assert gw_equal(GwForm.unit(complex(1)), GwForm.unit(complex(-1))) == EQUAL


def test_equal_over_q_is_conservative():
    a = gw_add(GwForm.unit(Fraction(3)), GwForm.unit(Fraction(6)))
    b = gw_add(GwForm.unit(Fraction(2)), GwForm.unit(Fraction(1)))
    # same rank/signature/discriminant(2) but different terms: undecided
    assert gw_equal(a, b) == UNDECIDED
    assert gw_equal(a, a) == EQUAL
    c = gw_add(GwForm.unit(Fraction(2)), GwForm.unit(Fraction(-1)))
    assert gw_equal(a, c) == NOT_EQUAL


def test_relation_i_square_multipliers():
    rng = random.Random(0)
    for _ in range(1000):
        a = rng.uniform(-9, 9) or 1.0
        b = rng.uniform(0.2, 4)
        assert gw_equal(GwForm.unit(a * b * b), GwForm.unit(a)) == EQUAL
    for p in (3, 5, 7, 11, 13):
        fp = PrimeField(p)
        for a in range(1, p):
            for b in range(1, p):
                assert (
                    gw_equal(GwForm.unit(fp(a * b * b)), GwForm.unit(fp(a))) == EQUAL
                )


def test_relation_ii_products():
    rng = random.Random(1)
    for _ in range(1000):
        a = Fraction(rng.randint(1, 200)) * rng.choice((1, -1))
        b = Fraction(rng.randint(1, 200)) * rng.choice((1, -1))
        lhs = gw_mul(GwForm.unit(a), GwForm.unit(b))
        assert lhs == GwForm.unit(a * b)


def test_relation_iii_exhaustive_small_primes():
    for p in (3, 5, 7, 11, 13):
        fp = PrimeField(p)
        for a in range(1, p):
            for b in range(1, p):
                if (a + b) % p == 0:
                    continue
                lhs = gw_add(GwForm.unit(fp(a)), GwForm.unit(fp(b)))
                rhs = gw_add(
                    GwForm.unit(fp(a + b)), GwForm.unit(fp(a * b * (a + b)))
                )
                assert gw_equal(lhs, rhs) == EQUAL


def test_relation_iii_real_and_rational_samples():
    rng = random.Random(2)
    for _ in range(1000):
        a = rng.uniform(-5, 5) or 1.0
        b = rng.uniform(-5, 5) or 2.0
        if a + b == 0:
            continue
        lhs = gw_add(GwForm.unit(a), GwForm.unit(b))
        rhs = gw_add(GwForm.unit(a + b), GwForm.unit(a * b * (a + b)))
        assert gw_equal(lhs, rhs) == EQUAL
    for _ in range(1000):
        a = Fraction(rng.randint(1, 60), rng.randint(1, 9)) * rng.choice((1, -1))
        b = Fraction(rng.randint(1, 60), rng.randint(1, 9)) * rng.choice((1, -1))
        if a + b == 0:
            continue
        lhs = gw_add(GwForm.unit(a), GwForm.unit(b))
        rhs = gw_add(GwForm.unit(a + b), GwForm.unit(a * b * (a + b)))
        # over Q the decision procedure must never refute a true identity
        assert gw_equal(lhs, rhs) != NOT_EQUAL


def _replay_sum_with_negative(a, unit):
    """<a> + <-a> rewritten through the two three-term relations:
    <-a>+<a-1> = <-1>+<a^2-a> and <a>+<a^2-a> = <1>+<a-1>."""
    step1_l = gw_add(unit(-a), unit(a - 1))
    step1_r = gw_add(unit(-1), unit(a * a - a))
    step2_l = gw_add(unit(a), unit(a * a - a))
    step2_r = gw_add(unit(1), unit(a - 1))
    return step1_l, step1_r, step2_l, step2_r


def test_relation_iv_follows_from_i_and_iii():
    for p in (3, 5, 7, 11, 13):
        fp = PrimeField(p)
        hp = H(f"F{p}")
        for a in range(2, p):
            unit = lambda v: GwForm.unit(fp(v))
            s1l, s1r, s2l, s2r = _replay_sum_with_negative(a, unit)
            assert gw_equal(s1l, s1r) == EQUAL
            assert gw_equal(s2l, s2r) == EQUAL
            total = gw_add(unit(a), unit(-a))
            assert gw_equal(total, hp) == EQUAL
    rng = random.Random(3)
    for _ in range(200):
        a = rng.uniform(-6, 6)
        if a in (0.0, 1.0):
            continue
        unit = lambda v: GwForm.unit(float(v))
        s1l, s1r, s2l, s2r = _replay_sum_with_negative(a, unit)
        assert gw_equal(s1l, s1r) == EQUAL
        assert gw_equal(s2l, s2r) == EQUAL
        assert gw_equal(gw_add(unit(a), unit(-a)), H()) == EQUAL


def test_rank_additive_disc_multiplicative():
    rng = random.Random(4)
    f7 = PrimeField(7)
    for _ in range(100):
        f = GwForm._normalize(
            "F7",
            [(square_class(f7(rng.randint(1, 6))), rng.randint(1, 3)) for _ in range(3)],
        )
        g = GwForm._normalize(
            "F7",
            [(square_class(f7(rng.randint(1, 6))), rng.randint(1, 3)) for _ in range(2)],
        )
        s = gw_add(f, g)
        assert invariants(s)["rank"] == invariants(f)["rank"] + invariants(g)["rank"]
        assert (
            invariants(s)["discriminant"]
            == invariants(f)["discriminant"] * invariants(g)["discriminant"]
        )


def test_diagonalize_examples():
    g = GramMatrix("Q", ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))))
    d = diagonalize_gram(g)
    assert d == gw_add(GwForm.unit(Fraction(2)), GwForm.unit(Fraction(-2)))
    diag = GramMatrix(
        "Q",
        (
            (Fraction(3), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(-5), Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(7)),
        ),
    )
    expect = sum(
        (GwForm.unit(Fraction(v)) for v in (-5, 7)), GwForm.unit(Fraction(3))
    )
    assert diagonalize_gram(diag) == expect
    real = GramMatrix("R", ((2.0, 0.0), (0.0, -2.0)))
    assert gw_equal(diagonalize_gram(real), H()) == EQUAL


def test_diagonalize_degenerate():
    with pytest.raises(Degenerate):
        diagonalize_gram(GramMatrix("Q", ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)))))
    with pytest.raises(Degenerate):
        diagonalize_gram(GramMatrix("Q", ((Fraction(1), Fraction(2)), (Fraction(2), Fraction(4)))))


def _random_congruence(rng, n, field):
    while True:
        p = [[field(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]
        from conics92.linalg import det

        if det(p) != 0:
            return p


def test_diagonalize_congruence_invariant():
    # decidable over R and F_p; over Q assert only that equality is never refuted
    rng = random.Random(5)
    cases = ((float, "R", EQUAL), (PrimeField(7), "F7", EQUAL), (Fraction, "Q", None))
    for field, tag, want in cases:
        for _ in range(25):
            n = rng.randint(2, 4)
            m = [[field(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
            for i in range(n):
                for j in range(i):
                    m[i][j] = m[j][i]
            from conics92.linalg import det

            if det(m) == 0:
                continue
            g = GramMatrix(tag, tuple(tuple(r) for r in m))
            p = _random_congruence(rng, n, field)
            pgp = [
                [
                    sum(p[k][i] * m[k][l] * p[l][j] for k in range(n) for l in range(n))
                    for j in range(n)
                ]
                for i in range(n)
            ]
            g2 = GramMatrix(tag, tuple(tuple(r) for r in pgp))
            verdict = gw_equal(diagonalize_gram(g), diagonalize_gram(g2))
            if want is None:
                assert verdict != NOT_EQUAL
            else:
                assert verdict == want


def test_trace_form_complex_examples():
    f = trace_form(complex(1, 0))
    assert gw_equal(f, H()) == EQUAL
    assert gw_equal(trace_form(complex(0, 1)), H()) == EQUAL
    rng = random.Random(6)
    for _ in range(100):
        c = complex(rng.uniform(-9, 9), rng.uniform(-9, 9))
        if c == 0:
            continue
        assert gw_equal(trace_form(c), H()) == EQUAL


def test_trace_form_f9_over_f3():
    ext = QuadExtField(3)
    f = trace_form(ext.one())
    assert gw_equal(f, H("F3")) == EQUAL
    # trivial extension
    assert trace_form(Fraction(5)) == GwForm.unit(Fraction(5))


def test_trace_form_f25_random():
    ext = QuadExtField(5)
    rng = random.Random(7)
    for _ in range(40):
        x = ext(rng.randrange(5), rng.randrange(5))
        if x == 0:
            continue
        f = trace_form(x)
        assert invariants(f)["rank"] == 2
        assert f.field == "F5"


def test_form_serialization():
    f = 46 * H()
    data = f.to_json()
    assert data["field"] == "R"
    assert sorted(t["mult"] for t in data["terms"]) == [46, 46]
