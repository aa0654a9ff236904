"""Named reference functions and their stems, used by tests and the CLI."""
from __future__ import annotations

from typing import Sequence

from .cliff import MultivectorHQ
from .quat import Quaternion, ZERO
from .stem import ComplexPointN, QFunctionN, StemFunction

__all__ = [
    "qfunction",
    "catalog_names",
    "stem_identity",
    "stem_square",
    "stem_conj",
    "stem_inverse",
    "stem_monomial12",
    "stem_affine_component",
    "affine_components",
]

_MARGIN = 0.05


def _nonzero(point: Sequence[Quaternion], *indices: int) -> bool:
    return all(point[i].norm() > _MARGIN for i in indices)


def _fn_identity(q):  # n=1
    return q[0]


def _fn_square(q):
    return q[0] * q[0]


def _fn_conj(q):
    return q[0].conj()


def _fn_inverse(q):
    return q[0].inverse()


def _fn_q1inv_q2(q):
    return q[0].inverse() * q[1]


def _fn_q1_q2(q):
    return q[0] * q[1]


def _fn_q2_q1(q):
    return q[1] * q[0]


def _fn_q2_q1_q3(q):
    return q[1] * q[0] * q[2]


_CATALOG: dict[str, QFunctionN] = {
    "identity": QFunctionN(1, _fn_identity, name="identity"),
    "square": QFunctionN(1, _fn_square, name="square"),
    "conj": QFunctionN(1, _fn_conj, name="conj"),
    "qinv": QFunctionN(1, _fn_inverse, lambda p: _nonzero(p, 0), name="qinv"),
    "q1inv_q2": QFunctionN(2, _fn_q1inv_q2, lambda p: _nonzero(p, 0), name="q1inv_q2"),
    "q1_q2_leftmono": QFunctionN(2, _fn_q1_q2, name="q1_q2_leftmono"),
    "q2_q1": QFunctionN(2, _fn_q2_q1, name="q2_q1"),
    "q2_q1_q3": QFunctionN(3, _fn_q2_q1_q3, name="q2_q1_q3"),
}


def catalog_names() -> list[str]:
    return sorted(_CATALOG)


def qfunction(name: str) -> QFunctionN:
    try:
        return _CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog function {name!r}; have {catalog_names()}") from None


# ---------------------------------------------------------------------------
# Stems (for construct-induce-recover round trips)


def _mv1(f0: Quaternion, f1: Quaternion) -> MultivectorHQ:
    return MultivectorHQ(1, (f0, f1))


def stem_identity() -> StemFunction:
    """Stem of q -> q: components (x, y)."""
    return StemFunction(
        1,
        lambda z: _mv1(Quaternion(z.xs[0]), Quaternion(z.ys[0])),
        name="identity",
    )


def stem_square() -> StemFunction:
    """Stem of q -> q^2: components (x^2 - y^2, 2xy)."""
    return StemFunction(
        1,
        lambda z: _mv1(
            Quaternion(z.xs[0] ** 2 - z.ys[0] ** 2),
            Quaternion(2.0 * z.xs[0] * z.ys[0]),
        ),
        name="square",
    )


def stem_conj() -> StemFunction:
    """Stem of q -> conj(q): components (x, -y)."""
    return StemFunction(
        1,
        lambda z: _mv1(Quaternion(z.xs[0]), Quaternion(-z.ys[0])),
        name="conj",
    )


def stem_inverse() -> StemFunction:
    """Stem of q -> q^-1: components (x, -y) / (x^2 + y^2)."""

    def evaluate(z: ComplexPointN) -> MultivectorHQ:
        r = z.xs[0] ** 2 + z.ys[0] ** 2
        return _mv1(Quaternion(z.xs[0] / r), Quaternion(-z.ys[0] / r))

    return StemFunction(
        1,
        evaluate,
        domain=lambda z: z.xs[0] ** 2 + z.ys[0] ** 2 > _MARGIN**2,
        name="qinv",
    )


def stem_monomial12(a: Quaternion = Quaternion(1.0)) -> StemFunction:
    """Stem of the ordered monomial (q1, q2) -> q1*q2*a."""

    def evaluate(z: ComplexPointN) -> MultivectorHQ:
        x1, x2 = z.xs
        y1, y2 = z.ys
        return MultivectorHQ(
            2,
            (
                Quaternion(x1 * x2) * a,
                Quaternion(y1 * x2) * a,
                Quaternion(x1 * y2) * a,
                Quaternion(y1 * y2) * a,
            ),
        )

    return StemFunction(2, evaluate, name="monomial12")


def stem_affine_component(
    column: Sequence[Quaternion], offset: Quaternion
) -> StemFunction:
    """Stem of Q -> sum_k q_k * a_k + b (one component of an affine map)."""
    n = len(column)

    def evaluate(z: ComplexPointN) -> MultivectorHQ:
        coeffs = [ZERO] * (1 << n)
        const = offset
        for k in range(n):
            const = const + Quaternion(z.xs[k]) * column[k]
            coeffs[1 << k] = Quaternion(z.ys[k]) * column[k]
        coeffs[0] = const
        return MultivectorHQ(n, tuple(coeffs))

    return StemFunction(n, evaluate, name="affine_component")


def affine_components(
    matrix: Sequence[Sequence[Quaternion]], offsets: Sequence[Quaternion]
) -> list[QFunctionN]:
    """Components of Q -> Q*A + B as black-box functions, one per column."""
    n = len(matrix)

    def component(j: int) -> QFunctionN:
        def func(point: Sequence[Quaternion]) -> Quaternion:
            acc = offsets[j]
            for k in range(n):
                acc = acc + point[k] * matrix[k][j]
            return acc

        return QFunctionN(n, func, name=f"affine[{j}]")

    return [component(j) for j in range(n)]
