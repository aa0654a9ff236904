"""Quaternionic matrices: Dieudonne determinant, 2x2 inverses, affine maps.

The n x n determinant goes through the standard complex embedding
q = z1 + z2*j  ->  [[z1, z2], [-conj(z2), conj(z1)]], whose 2n x 2n complex
determinant is real and nonnegative; its square root is the Dieudonne
determinant.  The 2x2 closed formula carries a factor 2 on the cross term,
det2 = sqrt(|a|^2|d|^2 + |b|^2|c|^2 - 2 Re(c conj(a) b conj(d))); the
single-cross-term variant is kept as `det2_naive` because it fails to vanish
on right-proportional columns (see the regression tests).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NegativeRadicandError, SingularMatrixError, ZeroPivotError
from .quat import ONE, Quaternion, ZERO

__all__ = [
    "QMat2",
    "QMatN",
    "det2",
    "det2_naive",
    "cayley_det2",
    "detN",
    "embed_complex",
    "unembed_complex",
    "inv2_via_a",
    "inv2_via_b",
    "inv2_bilateral",
    "right_proportional",
    "AffineMap",
    "qmatn_identity",
    "qmatn_mul",
    "qmatn_inverse",
    "apply_row",
]

_PIVOT_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class QMat2:
    """2x2 quaternionic matrix with rows (a b) / (c d)."""

    a: Quaternion
    b: Quaternion
    c: Quaternion
    d: Quaternion

    def mul(self, other: "QMat2") -> "QMat2":
        return QMat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def to_qmatn(self) -> "QMatN":
        return QMatN(2, ((self.a, self.b), (self.c, self.d)))

    @classmethod
    def identity(cls) -> "QMat2":
        return cls(ONE, ZERO, ZERO, ONE)


@dataclass(frozen=True, slots=True)
class QMatN:
    """n x n quaternionic matrix, row-major."""

    n: int
    rows: tuple[tuple[Quaternion, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.n or any(len(r) != self.n for r in self.rows):
            raise ValueError("rows must form an n x n grid")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rows": [[q.to_json() for q in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QMatN":
        n = int(data["n"])
        rows = tuple(
            tuple(Quaternion.from_json(entry) for entry in row) for row in data["rows"]
        )
        return cls(n, rows)


def qmatn_identity(n: int) -> QMatN:
    return QMatN(
        n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
    )


def qmatn_mul(a: QMatN, b: QMatN) -> QMatN:
    if a.n != b.n:
        raise ValueError("size mismatch")
    n = a.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ZERO
            for k in range(n):
                acc = acc + a.rows[i][k] * b.rows[k][j]
            row.append(acc)
        rows.append(tuple(row))
    return QMatN(n, tuple(rows))


def apply_row(point: Sequence[Quaternion], m: QMatN) -> tuple[Quaternion, ...]:
    """Row vector times matrix: (Q A)_j = sum_k q_k a_kj."""
    n = m.n
    out = []
    for j in range(n):
        acc = ZERO
        for k in range(n):
            acc = acc + point[k] * m.rows[k][j]
        out.append(acc)
    return tuple(out)


# ---------------------------------------------------------------------------
# Determinants


def _det2_radicand(m: QMat2, cross_coeff: float) -> tuple[float, float]:
    na, nb, nc, nd = m.a.norm(), m.b.norm(), m.c.norm(), m.d.norm()
    cross = (m.c * m.a.conj() * m.b * m.d.conj()).real()
    radicand = (na * nd) ** 2 + (nb * nc) ** 2 - cross_coeff * cross
    scale = (na * nd + nb * nc) ** 2
    return radicand, scale


def det2(m: QMat2) -> float:
    """Dieudonne determinant of a 2x2 quaternionic matrix (nonnegative real).

    Raises:
        NegativeRadicandError: if the radicand is negative beyond roundoff,
            which signals a bug rather than a legitimate value.
    """
    radicand, scale = _det2_radicand(m, 2.0)
    if radicand < -1e-9 * max(scale, 1.0):
        raise NegativeRadicandError(f"radicand {radicand} at scale {scale}")
    return math.sqrt(max(radicand, 0.0))


def det2_naive(m: QMat2) -> float:
    """Variant with a single cross term -Re(c conj(a) b conj(d)).

    Does not vanish on right-proportional columns; retained as an executable
    record of why det2 carries the factor 2.
    """
    radicand, _ = _det2_radicand(m, 1.0)
    return math.sqrt(max(radicand, 0.0))


def cayley_det2(m: QMat2) -> Quaternion:
    """Order-sensitive a*d - c*b; kept for the failure demonstrations."""
    return m.a * m.d - m.c * m.b


def embed_complex(m: QMatN) -> np.ndarray:
    """Standard 2n x 2n complex embedding, blockwise per entry."""
    n = m.n
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            q = m.rows[i][j]
            z1 = complex(q.w, q.x)
            z2 = complex(q.y, q.z)
            out[2 * i, 2 * j] = z1
            out[2 * i, 2 * j + 1] = z2
            out[2 * i + 1, 2 * j] = -z2.conjugate()
            out[2 * i + 1, 2 * j + 1] = z1.conjugate()
    return out


def unembed_complex(block: np.ndarray) -> QMatN:
    """Inverse of embed_complex (reads the top row of each 2x2 block)."""
    size = block.shape[0]
    if block.shape != (size, size) or size % 2:
        raise ValueError("expected an even-sized square matrix")
    n = size // 2
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            z1 = block[2 * i, 2 * j]
            z2 = block[2 * i, 2 * j + 1]
            row.append(Quaternion(z1.real, z1.imag, z2.real, z2.imag))
        rows.append(tuple(row))
    return QMatN(n, tuple(rows))


def detN(m: QMatN) -> float:
    """Dieudonne determinant of an n x n quaternionic matrix."""
    return math.sqrt(abs(np.linalg.det(embed_complex(m))))


# ---------------------------------------------------------------------------
# 2x2 inverses


def _inv(q: Quaternion, what: str) -> Quaternion:
    if q.norm() < _PIVOT_TOL:
        raise SingularMatrixError(f"{what} is not invertible")
    return q.inverse()


def inv2_via_a(m: QMat2) -> QMat2:
    """Right inverse through the pivot a and the complement d - c a^-1 b."""
    if m.a.norm() < _PIVOT_TOL:
        raise ZeroPivotError("entry a must be nonzero")
    ai = m.a.inverse()
    s = _inv(m.d - m.c * ai * m.b, "complement d - c a^-1 b")
    return QMat2(
        ai + ai * m.b * s * m.c * ai,
        -(ai * m.b * s),
        -(s * m.c * ai),
        s,
    )


def inv2_via_b(m: QMat2) -> QMat2:
    """Right inverse through the pivot b and the complement c - d b^-1 a."""
    if m.b.norm() < _PIVOT_TOL:
        raise ZeroPivotError("entry b must be nonzero")
    bi = m.b.inverse()
    s = _inv(m.c - m.d * bi * m.a, "complement c - d b^-1 a")
    return QMat2(
        -(s * m.d * bi),
        s,
        bi + bi * m.a * s * m.d * bi,
        -(bi * m.a * s),
    )


def inv2_bilateral(m: QMat2) -> QMat2:
    """Inverse as a matrix of four complement inverses; needs abcd != 0."""
    for name, entry in (("a", m.a), ("b", m.b), ("c", m.c), ("d", m.d)):
        if entry.norm() < _PIVOT_TOL:
            raise ZeroPivotError(f"entry {name} must be nonzero")
    return QMat2(
        _inv(m.a - m.b * m.d.inverse() * m.c, "a - b d^-1 c"),
        _inv(m.c - m.d * m.b.inverse() * m.a, "c - d b^-1 a"),
        _inv(m.b - m.a * m.c.inverse() * m.d, "b - a c^-1 d"),
        _inv(m.d - m.c * m.a.inverse() * m.b, "d - c a^-1 b"),
    )


# ---------------------------------------------------------------------------
# Right proportionality


def right_proportional(
    q: Sequence[Quaternion], a: Sequence[Quaternion], tol: float = 1e-9
) -> Quaternion | None:
    """Find lambda with q = a*lambda, or None if the tuples are not proportional.

    Proportionality holds iff all C(n,2) Dieudonne determinants of the 2x2
    minors (q_i a_i; q_j a_j) vanish; lambda is then extracted from the
    largest-magnitude pivot a_i and verified componentwise.
    """
    n = len(a)
    if len(q) != n:
        raise ValueError("tuples must have the same length")
    scale = max(max(x.norm() for x in a), max(x.norm() for x in q), 1e-30)
    if all(x.norm() < 1e-300 for x in a):
        raise ValueError("a must be nonzero")
    # The determinant radicand loses about half the working precision to
    # cancellation, so the minor test uses the square root of the tolerance.
    minor_tol = math.sqrt(max(tol, 1e-30))
    for i in range(n):
        for j in range(i + 1, n):
            minor = QMat2(q[i], a[i], q[j], a[j])
            if det2(minor) > minor_tol * scale**2:
                return None
    pivot = max(range(n), key=lambda i: a[i].norm())
    lam = a[pivot].inverse() * q[pivot]
    residual = max((q[i] - a[i] * lam).norm() for i in range(n))
    if residual > math.sqrt(max(tol, 1e-30)) * scale:
        return None
    return lam


# ---------------------------------------------------------------------------
# Affine maps Q -> Q A + B


def _row_norms(m: QMatN) -> list[float]:
    return [math.sqrt(sum(q.norm_sq() for q in row)) for row in m.rows]


@dataclass(frozen=True, slots=True)
class AffineMap:
    """Affine transformation of H^n acting on row vectors: Q -> Q A + B."""

    a: QMatN
    b: tuple[Quaternion, ...]

    def __post_init__(self):
        if len(self.b) != self.a.n:
            raise ValueError("offset length must match matrix size")
        norms = _row_norms(self.a)
        gmean = math.prod(max(v, 1e-300) for v in norms) ** (1.0 / self.a.n)
        if detN(self.a) <= 1e-12 * gmean:
            raise SingularMatrixError("affine map requires an invertible matrix")

    @property
    def n(self) -> int:
        return self.a.n

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(qmatn_identity(n), (ZERO,) * n)

    @classmethod
    def translation(cls, offset: Sequence[Quaternion]) -> "AffineMap":
        return cls(qmatn_identity(len(offset)), tuple(offset))

    def apply(self, point: Sequence[Quaternion]) -> tuple[Quaternion, ...]:
        moved = apply_row(point, self.a)
        return tuple(m + o for m, o in zip(moved, self.b))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: (self.compose(other))(Q) = self(other(Q))."""
        a = qmatn_mul(other.a, self.a)
        b = tuple(m + o for m, o in zip(apply_row(other.b, self.a), self.b))
        return AffineMap(a, b)

    def inverse(self) -> "AffineMap":
        ai = qmatn_inverse(self.a)
        b = tuple(-q for q in apply_row(self.b, ai))
        return AffineMap(ai, b)

    def isclose(self, other: "AffineMap", tol: float = 1e-9) -> bool:
        if self.n != other.n:
            return False
        diff = max(
            (x - y).norm()
            for rx, ry in zip(self.a.rows, other.a.rows)
            for x, y in zip(rx, ry)
        )
        diff = max(diff, max((x - y).norm() for x, y in zip(self.b, other.b)))
        return diff <= tol


def qmatn_inverse(m: QMatN) -> QMatN:
    """Inverse through the complex embedding (the image is closed under it)."""
    emb = embed_complex(m)
    if abs(np.linalg.det(emb)) < 1e-24:
        raise SingularMatrixError("matrix is numerically singular")
    return unembed_complex(np.linalg.inv(emb))
