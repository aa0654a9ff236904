import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperslice.quat import (
    I,
    J,
    K,
    ONE,
    Quaternion,
    ZERO,
    imaginary_unit,
    ordered_product,
    random_imaginary_unit,
    reversed_product,
    slice_decompose,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)


def test_unit_table():
    assert I * J == K
    assert J * K == I
    assert K * I == J
    assert J * I == -K
    assert I * I == -ONE
    assert J * J == -ONE
    assert K * K == -ONE


@given(quats, quats, quats)
def test_mul_associative(a, b, c):
    lhs = (a * b) * c
    rhs = a * (b * c)
    assert lhs.isclose(rhs, tol=1e-6 * (1 + a.norm() * b.norm() * c.norm()))


@given(quats, quats)
def test_conj_antiautomorphism(a, b):
    assert (a * b).conj().isclose(b.conj() * a.conj(), tol=1e-6 * (1 + a.norm() * b.norm()))


@given(quats)
def test_norm_via_conj(a):
    prod = a * a.conj()
    assert abs(prod.w - a.norm_sq()) <= 1e-6 * (1 + a.norm_sq())
    assert abs(prod.x) + abs(prod.y) + abs(prod.z) <= 1e-6 * (1 + a.norm_sq())


@given(quats)
def test_inverse(a):
    if a.norm() < 1e-3:
        return
    assert (a * a.inverse()).isclose(ONE, tol=1e-9)
    assert (a.inverse() * a).isclose(ONE, tol=1e-9)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@given(quats, quats)
def test_norm_multiplicative(a, b):
    assert math.isclose((a * b).norm(), a.norm() * b.norm(), rel_tol=1e-9, abs_tol=1e-6)


def test_json_roundtrip():
    q = Quaternion(1.5, -2.0, 0.25, 3.0)
    assert Quaternion.from_json(q.to_json()) == q
    assert q.to_json() == [1.5, -2.0, 0.25, 3.0]


def test_slice_decompose_reconstructs():
    rng = np.random.default_rng(0)
    for _ in range(200):
        q = Quaternion(*(float(c) for c in rng.standard_normal(4)))
        dec = slice_decompose(q)
        assert dec.y >= 0.0
        imaginary_unit(dec.j)  # raises if not a unit
        assert dec.reconstruct().isclose(q, tol=1e-12)


def test_slice_decompose_real_point_flagged():
    dec = slice_decompose(Quaternion(2.5))
    assert dec.ambiguous
    assert dec.y == 0.0
    assert dec.j == I


def test_random_imaginary_unit_is_unit():
    rng = np.random.default_rng(7)
    for _ in range(50):
        u = random_imaginary_unit(rng)
        imaginary_unit(u)
        assert (u * u).isclose(-ONE, tol=1e-12)


def test_imaginary_unit_rejects_non_units():
    with pytest.raises(ValueError):
        imaginary_unit(Quaternion(0.0, 2.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        imaginary_unit(Quaternion(0.5, 1.0, 0.0, 0.0))


def test_ordered_and_reversed_products():
    units = (I, J, K)
    # ascending: J_1 J_2 J_3 = i j k = (ij)k = k k = -1
    assert ordered_product(units, (1, 2, 3)).isclose(-ONE, tol=0)
    # descending: J_3 J_2 J_1 = k j i = (kj)i = -i i = 1
    assert reversed_product(units, (1, 2, 3)).isclose(ONE, tol=0)
    assert ordered_product(units, ()).isclose(ONE, tol=0)
