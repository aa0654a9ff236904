"""The Clifford algebra R_n of signature (0,n), tensored with H.

Blades e_K are indexed by bitmasks over {1..n} (bit h-1 set means h in K).
All blade signs are computed in integer arithmetic; floats only ever get
multiplied by +-1, so the structural identities below hold exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

from .quat import Quaternion, ZERO

__all__ = [
    "MAX_N",
    "blade_product",
    "conjugation_sign",
    "reversal_sign",
    "blade_indices",
    "blade_key",
    "blade_from_key",
    "MultivectorHQ",
    "clifford_conjugate",
    "jh_apply",
    "jhr_apply",
]

# Dense storage is 2^n quaternions per value; 8 keeps that at 256.
MAX_N = 8


def _reorder_sign(k: int, l: int) -> int:
    """Sign from anticommuting the generators of e_K past those of e_L."""
    k >>= 1
    swaps = 0
    while k:
        swaps += (k & l).bit_count()
        k >>= 1
    return -1 if swaps & 1 else 1


def blade_product(n: int, k: int, l: int) -> tuple[int, int]:
    """e_K * e_L = sign * e_M with M = K xor L.

    Each repeated generator contributes e_h^2 = -1 on top of the
    transposition count.
    """
    if k >= 1 << n or l >= 1 << n:
        raise ValueError("blade index out of range for n")
    sign = _reorder_sign(k, l)
    if (k & l).bit_count() & 1:
        sign = -sign
    return sign, k ^ l


def conjugation_sign(k: int) -> int:
    """Clifford conjugation sign on e_K: (-1)^(s(s+1)/2) with s = |K|."""
    s = k.bit_count()
    return -1 if (s * (s + 1) // 2) & 1 else 1


def reversal_sign(k: int) -> int:
    """Product-reversal sign on e_K: (-1)^(s(s-1)/2) with s = |K|."""
    s = k.bit_count()
    return -1 if (s * (s - 1) // 2) & 1 else 1


def blade_indices(k: int) -> tuple[int, ...]:
    """Sorted 1-based generator indices of the blade bitmask."""
    return tuple(h + 1 for h in range(k.bit_length()) if k >> h & 1)


def blade_key(k: int) -> str:
    """JSON key for a blade: comma-joined sorted indices, '' for the scalar."""
    return ",".join(str(h) for h in blade_indices(k))


def blade_from_key(key: str, n: int) -> int:
    if not key:
        return 0
    mask = 0
    for part in key.split(","):
        h = int(part)
        if not 1 <= h <= n:
            raise ValueError(f"blade index {h} out of range for n={n}")
        mask |= 1 << (h - 1)
    return mask


@dataclass(frozen=True, slots=True)
class MultivectorHQ:
    """Element of H tensor R_n: 2^n quaternion coefficients, entry K = F_K."""

    n: int
    coeffs: tuple[Quaternion, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise ValueError(f"n must be between 0 and {MAX_N}")
        if len(self.coeffs) != 1 << self.n:
            raise ValueError("coefficient array must have length 2^n")

    @classmethod
    def zero(cls, n: int) -> "MultivectorHQ":
        return cls(n, (ZERO,) * (1 << n))

    @classmethod
    def blade(cls, n: int, k: int, coeff: Quaternion = Quaternion(1.0)) -> "MultivectorHQ":
        coeffs = [ZERO] * (1 << n)
        coeffs[k] = coeff
        return cls(n, tuple(coeffs))

    def __add__(self, other: "MultivectorHQ") -> "MultivectorHQ":
        self._check_same(other)
        return MultivectorHQ(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "MultivectorHQ") -> "MultivectorHQ":
        self._check_same(other)
        return MultivectorHQ(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "MultivectorHQ":
        return MultivectorHQ(self.n, tuple(-a for a in self.coeffs))

    def scale(self, factor: float) -> "MultivectorHQ":
        return MultivectorHQ(self.n, tuple(a * factor for a in self.coeffs))

    def norm(self) -> float:
        return sum(a.norm_sq() for a in self.coeffs) ** 0.5

    def _check_same(self, other: "MultivectorHQ") -> None:
        if self.n != other.n:
            raise ValueError("multivectors live in different algebras")

    def to_json(self) -> dict:
        coeffs = {
            blade_key(k): c.to_json()
            for k, c in enumerate(self.coeffs)
            if c != ZERO
        }
        return {"n": self.n, "coeffs": coeffs}

    @classmethod
    def from_json(cls, data: dict) -> "MultivectorHQ":
        n = int(data["n"])
        coeffs = [ZERO] * (1 << n)
        for key, value in data["coeffs"].items():
            coeffs[blade_from_key(key, n)] = Quaternion.from_json(value)
        return cls(n, tuple(coeffs))


def clifford_conjugate(mv: MultivectorHQ) -> MultivectorHQ:
    """Clifford conjugation on the R_n factor: generators negate, products reverse."""
    return MultivectorHQ(
        mv.n,
        tuple(c if conjugation_sign(k) > 0 else -c for k, c in enumerate(mv.coeffs)),
    )


def jh_apply(h: int, mv: MultivectorHQ) -> MultivectorHQ:
    """Complex structure J_h: e_K -> -e_{K without h} if h in K, else e_{K union h}.

    Extends H-linearly: the quaternion factor rides along untouched.
    """
    if not 1 <= h <= mv.n:
        raise ValueError(f"h must be in 1..{mv.n}")
    bit = 1 << (h - 1)
    out = [ZERO] * (1 << mv.n)
    for k, c in enumerate(mv.coeffs):
        if c == ZERO:
            continue
        out[k ^ bit] = -c if k & bit else c
    return MultivectorHQ(mv.n, tuple(out))


def jhr_apply(h: int, mv: MultivectorHQ) -> MultivectorHQ:
    """Right complex structure J_h^r(x) = -(J_h(x^c))^c, blade-wise."""
    return -clifford_conjugate(jh_apply(h, clifford_conjugate(mv)))
