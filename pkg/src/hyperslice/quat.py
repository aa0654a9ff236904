"""Quaternion arithmetic, the sphere of imaginary units, and slice decomposition.

Everything here is an immutable value with pure operations, so instances can
be shared freely between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Quaternion",
    "ZERO",
    "ONE",
    "I",
    "J",
    "K",
    "imaginary_unit",
    "random_imaginary_unit",
    "SliceDecomposition",
    "slice_decompose",
    "ordered_product",
    "reversed_product",
]

_UNIT_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class Quaternion:
    """Element of H with components (w, x, y, z) = coefficients of 1, i, j, k."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __add__(self, other: "Quaternion | float") -> "Quaternion":
        o = _coerce(other)
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, other: "Quaternion | float") -> "Quaternion":
        o = _coerce(other)
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other: "Quaternion | float") -> "Quaternion":
        return _coerce(other) - self

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: "Quaternion | float") -> "Quaternion":
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        a, b, c, d = self.w, self.x, self.y, self.z
        e, f, g, h = other.w, other.x, other.y, other.z
        return Quaternion(
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        )

    def __rmul__(self, other: float) -> "Quaternion":
        # Reals commute with everything; quaternion * quaternion never lands here.
        return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def real(self) -> float:
        return self.w

    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def inverse(self) -> "Quaternion":
        """Multiplicative inverse conj(q) / |q|^2.

        Raises:
            ZeroDivisionError: if the largest component is below 1e-300.
        """
        scale = max(abs(self.w), abs(self.x), abs(self.y), abs(self.z))
        if scale < 1e-300:
            raise ZeroDivisionError("quaternion inverse of (numerically) zero")
        n2 = self.norm_sq()
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return (self - other).norm() <= tol

    def to_json(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    @classmethod
    def from_json(cls, data: Sequence[float]) -> "Quaternion":
        w, x, y, z = (float(c) for c in data)
        return cls(w, x, y, z)


def _coerce(value: "Quaternion | float") -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    return Quaternion(float(value))


ZERO = Quaternion()
ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def imaginary_unit(q: Quaternion, tol: float = _UNIT_TOL) -> Quaternion:
    """Validate that q lies on the sphere S = {J : J^2 = -1} and return it.

    Requires Re(q) = 0 and |q| = 1 within tol.
    """
    if abs(q.w) > tol or abs(q.norm() - 1.0) > tol:
        raise ValueError(f"not a unit imaginary quaternion: {q}")
    return q


def random_imaginary_unit(rng) -> Quaternion:
    """Uniform random element of S, drawn from a numpy Generator."""
    while True:
        v = rng.standard_normal(3)
        n = math.sqrt(float(v[0]) ** 2 + float(v[1]) ** 2 + float(v[2]) ** 2)
        if n > 1e-6:
            return Quaternion(0.0, float(v[0]) / n, float(v[1]) / n, float(v[2]) / n)


@dataclass(frozen=True, slots=True)
class SliceDecomposition:
    """q = x + y*j with y >= 0 and j in S.

    At real points the unit is not determined; we pick j = i by convention and
    set `ambiguous` so callers can special-case real slices.
    """

    x: float
    y: float
    j: Quaternion
    ambiguous: bool

    def reconstruct(self) -> Quaternion:
        return Quaternion(self.x) + self.j * self.y


def slice_decompose(q: Quaternion) -> SliceDecomposition:
    """Split q into real part, imaginary magnitude and imaginary unit."""
    y = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    if y == 0.0:
        return SliceDecomposition(q.w, 0.0, I, True)
    return SliceDecomposition(q.w, y, Quaternion(0.0, q.x / y, q.y / y, q.z / y), False)


def ordered_product(units: Sequence[Quaternion], indices: Iterable[int]) -> Quaternion:
    """Product of units[k-1] over k in indices, taken in increasing index order.

    The empty index set gives 1.
    """
    acc = ONE
    for k in sorted(indices):
        acc = acc * units[k - 1]
    return acc


def reversed_product(units: Sequence[Quaternion], indices: Iterable[int]) -> Quaternion:
    """Product of units[k-1] over k in indices, taken in decreasing index order."""
    acc = ONE
    for k in sorted(indices, reverse=True):
        acc = acc * units[k - 1]
    return acc
