"""Exact structural checks of the blade arithmetic; all signs are integers."""
import pytest

from hyperslice.cliff import (
    MultivectorHQ,
    blade_from_key,
    blade_indices,
    blade_key,
    blade_product,
    clifford_conjugate,
    conjugation_sign,
    jh_apply,
    jhr_apply,
    reversal_sign,
)
from hyperslice.quat import ONE, Quaternion

NS = [1, 2, 3, 4]


def blades(n):
    return range(1 << n)


def mul(n, k, l):
    return blade_product(n, k, l)


@pytest.mark.parametrize("n", NS)
def test_generators_square_to_minus_one(n):
    for h in range(n):
        sign, m = mul(n, 1 << h, 1 << h)
        assert (sign, m) == (-1, 0)


@pytest.mark.parametrize("n", NS)
def test_generators_anticommute(n):
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            s1, m1 = mul(n, 1 << a, 1 << b)
            s2, m2 = mul(n, 1 << b, 1 << a)
            assert m1 == m2
            assert s1 == -s2


@pytest.mark.parametrize("n", NS)
def test_blade_product_associative(n):
    for a in blades(n):
        for b in blades(n):
            sab, mab = mul(n, a, b)
            for c in blades(n):
                s1, m1 = mul(n, mab, c)
                sbc, mbc = mul(n, b, c)
                s2, m2 = mul(n, a, mbc)
                assert m1 == m2
                assert sab * s1 == s2 * sbc


@pytest.mark.parametrize("n", NS)
def test_scalar_is_identity(n):
    for a in blades(n):
        assert mul(n, 0, a) == (1, a)
        assert mul(n, a, 0) == (1, a)


@pytest.mark.parametrize("n", NS)
def test_conjugation_antiautomorphism_on_blades(n):
    # (e_K e_L)^c = e_L^c e_K^c, comparing signed results blade by blade
    for a in blades(n):
        for b in blades(n):
            s, m = mul(n, a, b)
            lhs = s * conjugation_sign(m)
            s2, m2 = mul(n, b, a)
            rhs = conjugation_sign(b) * conjugation_sign(a) * s2
            assert m == m2
            assert lhs == rhs


@pytest.mark.parametrize("n", NS)
def test_conjugation_involution(n):
    for a in blades(n):
        assert conjugation_sign(a) * conjugation_sign(a) == 1


def test_reversal_sign_values():
    # |K| = 0, 1, 2, 3, 4 -> +, +, -, -, +
    assert [reversal_sign(k) for k in (0b0, 0b1, 0b11, 0b111, 0b1111)] == [1, 1, -1, -1, 1]


@pytest.mark.parametrize("n", NS)
def test_jh_squares_to_minus_identity(n):
    for h in range(1, n + 1):
        for k in blades(n):
            mv = MultivectorHQ.blade(n, k)
            out = jh_apply(h, jh_apply(h, mv))
            assert out == -mv


@pytest.mark.parametrize("n", NS)
def test_jhr_squares_to_minus_identity(n):
    for h in range(1, n + 1):
        for k in blades(n):
            mv = MultivectorHQ.blade(n, k)
            out = jhr_apply(h, jhr_apply(h, mv))
            assert out == -mv


@pytest.mark.parametrize("n", NS)
def test_jh_jhr_commutation_relations(n):
    # J_h and J_h^r commute; J_h and J_g^r with g != h anticommute, because
    # the (-1)^|K| in the closed form of J^r flips parity under J_h.
    for h in range(1, n + 1):
        for g in range(1, n + 1):
            for k in blades(n):
                mv = MultivectorHQ.blade(n, k)
                lhs = jh_apply(h, jhr_apply(g, mv))
                rhs = jhr_apply(g, jh_apply(h, mv))
                assert lhs == (rhs if g == h else -rhs)


@pytest.mark.parametrize("n", NS)
def test_jhr_closed_form(n):
    # J_h^r(e_K) = (-1)^|K| e_{K xor h}
    for h in range(1, n + 1):
        bit = 1 << (h - 1)
        for k in blades(n):
            out = jhr_apply(h, MultivectorHQ.blade(n, k))
            sign = -1 if k.bit_count() & 1 else 1
            expected = MultivectorHQ.blade(n, k ^ bit, Quaternion(float(sign)))
            assert out == expected


def test_jhr_reference_values_n2():
    # J_1^r on e_(), e_1, e_2, e_12 -> e_1, -e_(), -e_12, e_2
    n = 2
    results = [jhr_apply(1, MultivectorHQ.blade(n, k)) for k in range(4)]
    assert results[0] == MultivectorHQ.blade(n, 0b01)
    assert results[1] == -MultivectorHQ.blade(n, 0b00)
    assert results[2] == -MultivectorHQ.blade(n, 0b11)
    assert results[3] == MultivectorHQ.blade(n, 0b10)


def test_jhr_is_reversal_twist_of_jh():
    # With T = diag(reversal_sign), J_h^r = T J_h T^-1 on every blade.
    for n in NS:
        for h in range(1, n + 1):
            for k in range(1 << n):
                mv = MultivectorHQ.blade(n, k)
                twisted = MultivectorHQ(
                    n,
                    tuple(
                        c * float(reversal_sign(m)) for m, c in enumerate(jh_apply(h, mv.scale(float(reversal_sign(k)))).coeffs)
                    ),
                )
                assert twisted == jhr_apply(h, mv)


def test_blade_keys():
    assert blade_key(0) == ""
    assert blade_key(0b101) == "1,3"
    assert blade_indices(0b110) == (2, 3)
    assert blade_from_key("1,3", 3) == 0b101
    assert blade_from_key("", 3) == 0
    with pytest.raises(ValueError):
        blade_from_key("4", 3)


def test_multivector_json_roundtrip():
    mv = MultivectorHQ(
        2, (Quaternion(1.0), Quaternion(0.0), Quaternion(0.5, 1.0, 0.0, -2.0), Quaternion(0.0))
    )
    data = mv.to_json()
    assert set(data["coeffs"]) == {"", "2"}  # zeros omitted
    assert MultivectorHQ.from_json(data) == mv


def test_multivector_arithmetic():
    a = MultivectorHQ.blade(2, 1, Quaternion(2.0))
    b = MultivectorHQ.blade(2, 1, Quaternion(3.0))
    assert (a + b).coeffs[1] == Quaternion(5.0)
    assert (a - b).coeffs[1] == Quaternion(-1.0)
    assert a.scale(0.5).coeffs[1] == ONE
    assert abs(a.norm() - 2.0) < 1e-15


def test_clifford_conjugate_matches_sign_table():
    mv = MultivectorHQ(2, (Quaternion(1.0), Quaternion(2.0), Quaternion(3.0), Quaternion(4.0)))
    out = clifford_conjugate(mv)
    # |K| = 0:+, 1:-, 1:-, 2:-
    assert out.coeffs == (Quaternion(1.0), Quaternion(-2.0), Quaternion(-3.0), Quaternion(-4.0))
