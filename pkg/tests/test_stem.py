import numpy as np
import pytest

from hyperslice.catalog import (
    affine_components,
    qfunction,
    stem_affine_component,
    stem_conj,
    stem_identity,
    stem_inverse,
    stem_monomial12,
    stem_square,
)
from hyperslice.errors import RealSliceError
from hyperslice.quat import I, ONE, Quaternion, random_imaginary_unit
from hyperslice.stem import (
    CircularSampler,
    ComplexPointN,
    QFunctionN,
    check_intrinsic,
    check_one_var_direct,
    classify,
    classify_components,
    dbar_residual,
    induce_left,
    induce_right,
    recover_stem_left,
    recover_stem_right,
)

RNG = np.random.default_rng(1234)


def rq():
    return Quaternion(*(float(c) for c in RNG.standard_normal(4)))


def one_var_stems():
    return [stem_identity(), stem_square(), stem_conj(), stem_inverse()]


# ---------------------------------------------------------------------------
# construct -> induce -> recover round trips


@pytest.mark.parametrize("stem", one_var_stems(), ids=lambda s: s.name)
def test_roundtrip_one_var(stem):
    sampler = CircularSampler(1, seed=10)
    fl = QFunctionN(1, lambda q: induce_left(stem, q))
    fr = QFunctionN(1, lambda q: induce_right(stem, q))
    for z, units in sampler.draw(100):
        if not stem.domain(z):
            continue
        want = stem.evaluate(z)
        assert (recover_stem_left(fl, z, units) - want).norm() < 1e-9
        assert (recover_stem_right(fr, z, units) - want).norm() < 1e-9


def test_roundtrip_monomial_and_affine():
    a = Quaternion(0.7, -0.3, 1.1, 0.2)
    cases = [
        (2, stem_monomial12(a)),
        (3, stem_affine_component([rq(), rq(), rq()], rq())),
    ]
    for n, stem in cases:
        sampler = CircularSampler(n, seed=11)
        fl = QFunctionN(n, lambda q: induce_left(stem, q))
        fr = QFunctionN(n, lambda q: induce_right(stem, q))
        for z, units in sampler.draw(100):
            want = stem.evaluate(z)
            assert (recover_stem_left(fl, z, units) - want).norm() < 1e-9
            assert (recover_stem_right(fr, z, units) - want).norm() < 1e-9


def test_recovered_stem_independent_of_units():
    # Unit independence holds on the side where f actually is a slice
    # function: left for left-ordered monomials, right for right-ordered.
    rng = np.random.default_rng(55)
    cases = [
        ("q1_q2_leftmono", 2, recover_stem_left),
        ("q1inv_q2", 2, recover_stem_left),
        ("q2_q1", 2, recover_stem_right),
        ("square", 1, recover_stem_left),
        ("square", 1, recover_stem_right),
    ]
    for name, n, recover in cases:
        f = qfunction(name)
        sampler = CircularSampler(n, seed=5)
        for z, units in sampler.draw(30):
            alt = tuple(random_imaginary_unit(rng) for _ in range(n))
            a = recover(f, z, units)
            b = recover(f, z, alt)
            assert (a - b).norm() < 1e-8, name


def test_recover_refuses_real_slice():
    f = qfunction("square")
    z = ComplexPointN((0.5,), (1e-6,))
    with pytest.raises(RealSliceError):
        recover_stem_left(f, z, (I,))


# ---------------------------------------------------------------------------
# intrinsic (mirror) symmetry


def test_intrinsic_symmetry_of_catalog_stems():
    for stem in one_var_stems():
        assert check_intrinsic(stem, samples=80, seed=3) < 1e-12
    assert check_intrinsic(stem_monomial12(rq()), samples=80, seed=3) < 1e-12


def test_intrinsic_violation_detected():
    # F_1 even in y is not intrinsic: mirror symmetry must fail
    from hyperslice.cliff import MultivectorHQ

    bad = type(stem_identity())(
        1,
        lambda z: MultivectorHQ(1, (Quaternion(z.xs[0]), Quaternion(z.ys[0] ** 2))),
        name="bad",
    )
    assert check_intrinsic(bad, samples=80, seed=3) > 1e-3


# ---------------------------------------------------------------------------
# residuals and classification


def test_dbar_residual_on_stem_matches_theory():
    sampler = CircularSampler(1, seed=8)
    for z, units in sampler.draw(20):
        assert dbar_residual(stem_square(), "left", 1, z, units) < 1e-9
        # conj stem: dbar = 1/2 (dx(x,-y) + J(dy(x,-y))) = ((1,0)+(0,-1))/2 -> norm 1
        assert abs(dbar_residual(stem_conj(), "left", 1, z, units) - 1.0) < 1e-6


CLASSIFY_EXPECT = {
    "identity": "Both",
    "square": "Both",
    "qinv": "Both",
    "conj": "Neither",
    "q1_q2_leftmono": "LeftRegular",
    "q1inv_q2": "LeftRegular",
    "q2_q1": "RightRegular",
    "q2_q1_q3": "Neither",
}


@pytest.mark.parametrize("name", sorted(CLASSIFY_EXPECT))
def test_classify_catalog(name):
    f = qfunction(name)
    sampler = CircularSampler(f.n, seed=42)
    verdict = classify(f, sampler, samples=60)
    assert verdict.classification == CLASSIFY_EXPECT[name]
    assert verdict.errors == 0
    if verdict.classification == "Neither":
        assert min(verdict.left_residual, verdict.right_residual) > 1e-2


def test_classify_right_constant_coefficient():
    # q -> a*q is right regular (and not left for non-real a)
    a = Quaternion(0.2, 1.0, -0.7, 0.4)
    f = QFunctionN(1, lambda q: a * q[0], name="aq")
    verdict = classify(f, CircularSampler(1, seed=9), samples=40)
    assert verdict.classification == "RightRegular"


def test_classify_deterministic():
    f = qfunction("q1inv_q2")
    sampler = CircularSampler(2, seed=13)
    v1 = classify(f, sampler, samples=30)
    v2 = classify(f, sampler, samples=30)
    assert v1.to_json() == v2.to_json()


def test_classify_components_affine_left_regular():
    n = 3
    matrix = [[rq() for _ in range(n)] for _ in range(n)]
    offsets = [rq() for _ in range(n)]
    verdicts = classify_components(
        affine_components(matrix, offsets), CircularSampler(n, seed=21), samples=40
    )
    for v in verdicts:
        assert v.left_ok, v.to_json()
        assert v.classification in ("LeftRegular", "Both")


def test_verdict_json_shape():
    v = classify(qfunction("square"), CircularSampler(1, seed=2), samples=10)
    data = v.to_json()
    for key in (
        "component",
        "classification",
        "side_left_residual",
        "side_right_residual",
        "witness_point",
        "samples",
        "seed",
        "tolerances",
    ):
        assert key in data


# ---------------------------------------------------------------------------
# n = 1: stem check vs direct slice-wise Cauchy-Riemann check


def test_one_var_equivalence():
    rng = np.random.default_rng(77)
    a, b = rq(), rq()
    cases = {
        "square": (qfunction("square"), True),
        "qinv": (qfunction("qinv"), True),
        "linear": (QFunctionN(1, lambda q: q[0] * a + b, name="qa+b"), True),
        "conj": (qfunction("conj"), False),
    }
    sampler = CircularSampler(1, seed=30)
    for name, (f, regular) in cases.items():
        verdict = classify(f, sampler, samples=30)
        for _ in range(5):
            unit = random_imaginary_unit(rng)
            direct = check_one_var_direct(f, unit, sampler, samples=30)
            if regular:
                assert verdict.left_ok and direct < 1e-5, name
            else:
                assert not verdict.left_ok and direct > 1e-2, name


def test_sampler_deterministic_and_in_range():
    s = CircularSampler(2, seed=99)
    a = list(s.draw(20))
    b = list(s.draw(20))
    assert len(a) == 20
    for (za, ua), (zb, ub) in zip(a, b):
        assert za.xs == zb.xs and za.ys == zb.ys and ua == ub
        assert all(0.2 <= y <= 1.5 for y in za.ys)
        assert all(-1.5 <= x <= 1.5 for x in za.xs)
        for u in ua:
            assert (u * u + ONE).norm() < 1e-12
