"""Stem functions, induced slice functions, stem recovery and regularity checks.

A stem function maps a conjugation-invariant subset of C^n into H tensor R_n.
It induces a left slice function by substituting ascending ordered products of
imaginary units for the blades, and a right slice function by substituting
descending ordered products on the right.  Regularity of a black-box function
on H^n is certified by recovering its stem from the 2^n sign-flipped sample
points and measuring the Cauchy-Riemann-type residual of the recovered stem
by central differences.

The right-hand residual uses the right structure J_h^r together with the
product-reversal grading sign, which conjugates J_h^r back to J_h; the two
formulations give identical residual norms, and the reversal convention is the
one under which (q1, q2) -> q2*q1 comes out right regular.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .cliff import (
    MultivectorHQ,
    blade_indices,
    jh_apply,
    jhr_apply,
    reversal_sign,
)
from .errors import DomainError, RealSliceError
from .quat import (
    Quaternion,
    ZERO,
    ordered_product,
    random_imaginary_unit,
    reversed_product,
    slice_decompose,
)

__all__ = [
    "ComplexPointN",
    "StemFunction",
    "QFunctionN",
    "Tolerances",
    "CircularSampler",
    "RegularityVerdict",
    "check_intrinsic",
    "induce_left",
    "induce_right",
    "recover_stem_left",
    "recover_stem_right",
    "dbar_residual",
    "classify",
    "classify_components",
    "check_one_var_direct",
    "LEFT",
    "RIGHT",
]

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True, slots=True)
class ComplexPointN:
    """Point of C^n stored as separate real pairs (x_h, y_h)."""

    xs: tuple[float, ...]
    ys: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.xs)

    def shifted(self, h: int, dx: float = 0.0, dy: float = 0.0) -> "ComplexPointN":
        xs = list(self.xs)
        ys = list(self.ys)
        xs[h - 1] += dx
        ys[h - 1] += dy
        return ComplexPointN(tuple(xs), tuple(ys))

    def mirrored(self, h: int) -> "ComplexPointN":
        """Conjugate the h-th coordinate: y_h -> -y_h."""
        ys = list(self.ys)
        ys[h - 1] = -ys[h - 1]
        return ComplexPointN(self.xs, tuple(ys))

    def to_json(self) -> dict:
        return {"x": list(self.xs), "y": list(self.ys)}


def _always(_point) -> bool:
    return True


@dataclass(frozen=True)
class StemFunction:
    """Evaluable stem: C^n -> H tensor R_n with a domain predicate.

    The evaluator must be Clifford intrinsic on its domain; `check_intrinsic`
    measures how badly that fails at sampled mirror pairs.
    """

    n: int
    evaluate: Callable[[ComplexPointN], MultivectorHQ]
    domain: Callable[[ComplexPointN], bool] = _always
    name: str = ""


@dataclass(frozen=True)
class QFunctionN:
    """Black-box function H^n -> H with a domain predicate."""

    n: int
    func: Callable[[tuple[Quaternion, ...]], Quaternion]
    domain: Callable[[tuple[Quaternion, ...]], bool] = _always
    name: str = ""

    def __call__(self, point: tuple[Quaternion, ...]) -> Quaternion:
        if not self.domain(point):
            raise DomainError(f"{self.name or 'function'}: point outside domain")
        return self.func(point)


@dataclass(frozen=True, slots=True)
class Tolerances:
    """Numerical policy for the regularity checker.

    `accept` and `reject` are multiplied by (1 + local |f|) before use, so a
    side passes when every residual is below accept*(1+|f|) and fails hard
    when some residual exceeds reject*(1+|f|).
    """

    step: float = 1e-5
    accept: float = 1e-5
    reject: float = 1e-2
    delta: float = 1e-3

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "accept": self.accept,
            "reject": self.reject,
            "delta": self.delta,
        }


@dataclass(frozen=True)
class CircularSampler:
    """Seeded sampler of points in a circular box domain, off the real slices.

    Emits pairs (z, J) with x_h in x_range, y_h in y_range (y_range[0] must be
    at least delta so every coordinate keeps a safe distance from its real
    slice) and J a tuple of independent random imaginary units.
    """

    n: int
    seed: int = 0
    delta: float = 1e-3
    x_range: tuple[float, float] = (-1.5, 1.5)
    y_range: tuple[float, float] = (0.2, 1.5)

    def __post_init__(self):
        if self.y_range[0] < self.delta:
            raise ValueError("y_range must stay above the real-slice margin delta")

    def draw(
        self, count: int, offset: int = 0
    ) -> list[tuple[ComplexPointN, tuple[Quaternion, ...]]]:
        rng = np.random.default_rng(self.seed + offset)
        out = []
        for _ in range(count):
            xs = tuple(float(v) for v in rng.uniform(*self.x_range, size=self.n))
            ys = tuple(float(v) for v in rng.uniform(*self.y_range, size=self.n))
            units = tuple(random_imaginary_unit(rng) for _ in range(self.n))
            out.append((ComplexPointN(xs, ys), units))
        return out


# ---------------------------------------------------------------------------
# Induction and recovery


def _decompose_point(q: Sequence[Quaternion]) -> tuple[ComplexPointN, tuple[Quaternion, ...]]:
    decs = [slice_decompose(qh) for qh in q]
    z = ComplexPointN(tuple(d.x for d in decs), tuple(d.y for d in decs))
    units = tuple(d.j for d in decs)
    return z, units


def induce_left(stem: StemFunction, q: Sequence[Quaternion]) -> Quaternion:
    """Left slice function value: sum over K of J_K * F_K (ascending products)."""
    z, units = _decompose_point(q)
    if not stem.domain(z):
        raise DomainError("point projects outside the stem domain")
    mv = stem.evaluate(z)
    acc = ZERO
    for k, coeff in enumerate(mv.coeffs):
        if coeff == ZERO:
            continue
        acc = acc + ordered_product(units, blade_indices(k)) * coeff
    return acc


def induce_right(stem: StemFunction, q: Sequence[Quaternion]) -> Quaternion:
    """Right slice function value: sum over K of F_K * J_K (descending products)."""
    z, units = _decompose_point(q)
    if not stem.domain(z):
        raise DomainError("point projects outside the stem domain")
    mv = stem.evaluate(z)
    acc = ZERO
    for k, coeff in enumerate(mv.coeffs):
        if coeff == ZERO:
            continue
        acc = acc + coeff * reversed_product(units, blade_indices(k))
    return acc


def _epsilon_components(
    f: QFunctionN,
    z: ComplexPointN,
    units: Sequence[Quaternion],
) -> tuple[list[Quaternion], float]:
    """Blade components G_K of f over the 2^n sign-flipped points, plus max |f|.

    G_K = 2^-n * sum over eps of (prod_{k in K} eps_k) f(x + eps*y*J).
    """
    n = z.n
    size = 1 << n
    acc = [ZERO] * size
    fmax = 0.0
    for mask in range(size):
        point = tuple(
            Quaternion(z.xs[h]) + units[h] * (-z.ys[h] if mask >> h & 1 else z.ys[h])
            for h in range(n)
        )
        value = f(point)
        fmax = max(fmax, value.norm())
        for k in range(size):
            if (mask & k).bit_count() & 1:
                acc[k] = acc[k] - value
            else:
                acc[k] = acc[k] + value
    scale = 1.0 / size
    return [g * scale for g in acc], fmax


def _check_margins(z: ComplexPointN, delta: float) -> None:
    if any(abs(y) < delta for y in z.ys):
        raise RealSliceError(
            f"recovery needs |y_h| >= {delta}; got {min(abs(y) for y in z.ys)}"
        )


def recover_stem_left(
    f: QFunctionN,
    z: ComplexPointN,
    units: Sequence[Quaternion],
    delta: float = 1e-3,
) -> MultivectorHQ:
    """Recover the left stem value at z: F_K = J_K^-1 * G_K."""
    _check_margins(z, delta)
    components, _ = _epsilon_components(f, z, units)
    coeffs = tuple(
        ordered_product(units, blade_indices(k)).inverse() * g
        for k, g in enumerate(components)
    )
    return MultivectorHQ(z.n, coeffs)


def recover_stem_right(
    f: QFunctionN,
    z: ComplexPointN,
    units: Sequence[Quaternion],
    delta: float = 1e-3,
) -> MultivectorHQ:
    """Recover the right stem value at z: F_K = G_K * (J_ks ... J_k1)^-1."""
    _check_margins(z, delta)
    components, _ = _epsilon_components(f, z, units)
    coeffs = tuple(
        g * reversed_product(units, blade_indices(k)).inverse()
        for k, g in enumerate(components)
    )
    return MultivectorHQ(z.n, coeffs)


def _reversal_twist(mv: MultivectorHQ) -> MultivectorHQ:
    """Grading sign that conjugates J_h^r into J_h."""
    return MultivectorHQ(
        mv.n,
        tuple(c if reversal_sign(k) > 0 else -c for k, c in enumerate(mv.coeffs)),
    )


def _dbar_of_stencil(
    side: str,
    h: int,
    fxp: MultivectorHQ,
    fxm: MultivectorHQ,
    fyp: MultivectorHQ,
    fym: MultivectorHQ,
    step: float,
) -> float:
    inv2h = 1.0 / (2.0 * step)
    dx = (fxp - fxm).scale(inv2h)
    dy = (fyp - fym).scale(inv2h)
    if side == LEFT:
        residual = (dx + jh_apply(h, dy)).scale(0.5)
    elif side == RIGHT:
        residual = (_reversal_twist(dx) + jhr_apply(h, _reversal_twist(dy))).scale(0.5)
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return residual.norm()


def dbar_residual(
    target: QFunctionN | StemFunction,
    side: str,
    h: int,
    z: ComplexPointN,
    units: Sequence[Quaternion] = (),
    step: float = 1e-5,
    delta: float = 1e-3,
) -> float:
    """Norm of the h-th Cauchy-Riemann residual of the (recovered) stem at z.

    For a QFunctionN the stem is recovered from sign-flipped samples with the
    supplied units; a StemFunction is differentiated directly and `units` is
    ignored.  Central differences with the given step.
    """
    if not 1 <= h <= target.n:
        raise ValueError(f"h must be in 1..{target.n}")
    if isinstance(target, StemFunction):
        stem_at = target.evaluate
    else:
        _check_margins(z, delta + 2.0 * step)
        if side == LEFT:
            def stem_at(p, _f=target, _u=tuple(units), _d=delta):
                return recover_stem_left(_f, p, _u, _d)
        else:
            def stem_at(p, _f=target, _u=tuple(units), _d=delta):
                return recover_stem_right(_f, p, _u, _d)
    return _dbar_of_stencil(
        side,
        h,
        stem_at(z.shifted(h, dx=step)),
        stem_at(z.shifted(h, dx=-step)),
        stem_at(z.shifted(h, dy=step)),
        stem_at(z.shifted(h, dy=-step)),
        step,
    )


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class RegularityVerdict:
    """Outcome of sampling both Cauchy-Riemann residuals of a function."""

    component: str
    classification: str
    left_residual: float
    right_residual: float
    left_state: str
    right_state: str
    witness: dict | None
    samples: int
    errors: int
    seed: int
    tolerances: Tolerances

    @property
    def left_ok(self) -> bool:
        return self.left_state == "pass"

    @property
    def right_ok(self) -> bool:
        return self.right_state == "pass"

    @property
    def regular(self) -> bool:
        return self.classification != "Neither"

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "classification": self.classification,
            "side_left_residual": self.left_residual,
            "side_right_residual": self.right_residual,
            "side_left_state": self.left_state,
            "side_right_state": self.right_state,
            "witness_point": self.witness,
            "samples": self.samples,
            "errors": self.errors,
            "seed": self.seed,
            "tolerances": self.tolerances.to_json(),
        }


def _side_state(max_norm_residual: float, tol: Tolerances) -> str:
    if max_norm_residual <= tol.accept:
        return "pass"
    if max_norm_residual > tol.reject:
        return "fail"
    return "indeterminate"


def _classification(left_state: str, right_state: str) -> str:
    if left_state == "pass" and right_state == "pass":
        return "Both"
    if left_state == "pass":
        return "LeftRegular"
    if right_state == "pass":
        return "RightRegular"
    return "Neither"


def classify(
    f: QFunctionN,
    sampler: CircularSampler,
    samples: int = 100,
    tol: Tolerances = Tolerances(),
    seed_offset: int = 0,
) -> RegularityVerdict:
    """Classify f as left/right/both/neither slice regular from sampled residuals.

    Residuals are normalized by (1 + local |f|) before comparison against the
    accept and reject thresholds.  Evaluation errors at individual samples are
    counted, not raised.  Deterministic for a fixed sampler seed.
    """
    n = f.n
    max_left = 0.0
    max_right = 0.0
    witness: dict | None = None
    errors = 0
    used = 0
    for z, units in sampler.draw(samples, offset=seed_offset):
        try:
            _, fmax = _epsilon_components(f, z, units)
            fscale = 1.0 + fmax
            stencils = {}
            for h in range(1, n + 1):
                stencils[h] = (
                    z.shifted(h, dx=tol.step),
                    z.shifted(h, dx=-tol.step),
                    z.shifted(h, dy=tol.step),
                    z.shifted(h, dy=-tol.step),
                )
            # G components are shared between the two sides at each stencil node.
            for h, nodes in stencils.items():
                raw = [_epsilon_components(f, p, units)[0] for p in nodes]
                left_nodes = []
                right_nodes = []
                for comps in raw:
                    left_nodes.append(
                        MultivectorHQ(
                            n,
                            tuple(
                                ordered_product(units, blade_indices(k)).inverse() * g
                                for k, g in enumerate(comps)
                            ),
                        )
                    )
                    right_nodes.append(
                        MultivectorHQ(
                            n,
                            tuple(
                                g * reversed_product(units, blade_indices(k)).inverse()
                                for k, g in enumerate(comps)
                            ),
                        )
                    )
                left_res = _dbar_of_stencil(LEFT, h, *left_nodes, tol.step) / fscale
                right_res = _dbar_of_stencil(RIGHT, h, *right_nodes, tol.step) / fscale
                for side, res in ((LEFT, left_res), (RIGHT, right_res)):
                    if res > max(max_left, max_right):
                        witness = {
                            "point": z.to_json(),
                            "units": [u.to_json() for u in units],
                            "h": h,
                            "side": side,
                            "residual": res,
                        }
                    if side == LEFT:
                        max_left = max(max_left, res)
                    else:
                        max_right = max(max_right, res)
            used += 1
        except (DomainError, ZeroDivisionError):
            errors += 1
    left_state = _side_state(max_left, tol) if used else "indeterminate"
    right_state = _side_state(max_right, tol) if used else "indeterminate"
    return RegularityVerdict(
        component=f.name or "f",
        classification=_classification(left_state, right_state),
        left_residual=max_left,
        right_residual=max_right,
        left_state=left_state,
        right_state=right_state,
        witness=witness,
        samples=used,
        errors=errors,
        seed=sampler.seed + seed_offset,
        tolerances=tol,
    )


def classify_components(
    funcs: Sequence[QFunctionN],
    sampler: CircularSampler,
    samples: int = 100,
    tol: Tolerances = Tolerances(),
) -> list[RegularityVerdict]:
    """Classify each component of an H^m-valued map; verdicts are per component."""
    return [
        classify(f, sampler, samples=samples, tol=tol, seed_offset=i)
        for i, f in enumerate(funcs)
    ]


# ---------------------------------------------------------------------------
# Intrinsic symmetry and the one-variable direct check


def check_intrinsic(
    stem: StemFunction,
    samples: int = 50,
    seed: int = 0,
    x_range: tuple[float, float] = (-1.2, 1.2),
    y_range: tuple[float, float] = (-1.2, 1.2),
) -> float:
    """Max violation of the even/odd mirror symmetry over sampled points.

    For each variable h and blade K the component must satisfy
    F_K(..., conj z_h, ...) = F_K(z) if h not in K and -F_K(z) if h in K.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    tried = 0
    attempts = 0
    while tried < samples and attempts < 50 * samples:
        attempts += 1
        xs = tuple(float(v) for v in rng.uniform(*x_range, size=stem.n))
        ys = tuple(float(v) for v in rng.uniform(*y_range, size=stem.n))
        z = ComplexPointN(xs, ys)
        if not stem.domain(z):
            continue
        tried += 1
        base = stem.evaluate(z)
        for h in range(1, stem.n + 1):
            mirror = z.mirrored(h)
            if not stem.domain(mirror):
                raise DomainError(
                    "stem domain is not invariant under conjugation in variable "
                    f"{h}"
                )
            flipped = stem.evaluate(mirror)
            bit = 1 << (h - 1)
            for k in range(1 << stem.n):
                expected = -base.coeffs[k] if k & bit else base.coeffs[k]
                worst = max(worst, (flipped.coeffs[k] - expected).norm())
    if tried == 0:
        raise DomainError("could not sample any point inside the stem domain")
    return worst


def check_one_var_direct(
    f: QFunctionN,
    unit: Quaternion,
    sampler: CircularSampler,
    samples: int = 50,
    step: float = 1e-5,
) -> float:
    """Max |1/2 (d/dx + I d/dy) f(x + yI)| over sampled slice points (n = 1)."""
    if f.n != 1:
        raise ValueError("direct slice check only applies to one-variable functions")
    worst = 0.0
    for z, _units in sampler.draw(samples):
        x, y = z.xs[0], z.ys[0]

        def slice_value(xx: float, yy: float) -> Quaternion:
            return f((Quaternion(xx) + unit * yy,))

        gx = (slice_value(x + step, y) - slice_value(x - step, y)) * (1.0 / (2 * step))
        gy = (slice_value(x, y + step) - slice_value(x, y - step)) * (1.0 / (2 * step))
        worst = max(worst, ((gx + unit * gy) * 0.5).norm())
    return worst
