"""Charts, transition maps and verification harnesses for the model manifolds.

Covered: quaternionic projective space, the blow-up of H^n at the origin, the
diffeomorphism between projective space minus a point and the blow-up, affine
quotients of H^n, the connected-sum chart computation, and the Grassmannian
transition map that fails every regularity check.

All verification is sample-based and seed-deterministic: chart pairs are
checked for inverse consistency, chart triples for the cocycle condition, and
every transition component is classified by the stem-recovery regularity
checker.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DomainError,
    ExcludedPointError,
    FreenessViolation,
)
from .qmat import AffineMap, right_proportional
from .quat import ONE, Quaternion, ZERO
from .stem import (
    CircularSampler,
    QFunctionN,
    RegularityVerdict,
    Tolerances,
    classify,
)

__all__ = [
    "HomogeneousPoint",
    "BlowupPoint",
    "Chart",
    "Atlas",
    "AtlasReport",
    "hp_atlas",
    "blowup_atlas",
    "blowup_transition_formula",
    "pi1",
    "pi2",
    "map_H",
    "map_H_inv",
    "connected_sum_chart_check",
    "ConnectedSumReport",
    "grassmann_components",
    "grassmann_counterexample",
    "GrassmannReport",
    "affine_quotient_atlas",
    "FreenessReport",
    "verify_atlas",
]

_REL_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class HomogeneousPoint:
    """Right vector line [q_1, ..., q_m]: equivalence under q -> q*lambda."""

    coords: tuple[Quaternion, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("need at least one coordinate")
        if max(c.norm() for c in self.coords) < 1e-300:
            raise ValueError("homogeneous coordinates must not all vanish")

    @property
    def m(self) -> int:
        return len(self.coords)

    def pivot(self) -> int:
        return max(range(self.m), key=lambda i: self.coords[i].norm())

    def normalized(self) -> "HomogeneousPoint":
        """Representative with the largest-norm coordinate scaled to 1."""
        lam = self.coords[self.pivot()].inverse()
        return HomogeneousPoint(tuple(c * lam for c in self.coords))

    def equivalent(self, other: "HomogeneousPoint", tol: float = 1e-8) -> bool:
        if self.m != other.m:
            return False
        return right_proportional(self.coords, other.coords, tol=tol) is not None

    def distance(self, other: "HomogeneousPoint") -> float:
        a = self.normalized()
        b = other.normalized()
        return max((x - y).norm() for x, y in zip(a.coords, b.coords))


@dataclass(frozen=True, slots=True)
class BlowupPoint:
    """Incidence pair (q, [a]) with q on the line [a]."""

    q: tuple[Quaternion, ...]
    line: HomogeneousPoint

    def __post_init__(self):
        if len(self.q) != self.line.m:
            raise ValueError("point and line live in different dimensions")
        if right_proportional(self.q, self.line.coords, tol=1e-6) is None:
            raise ValueError("point does not lie on the line")

    @property
    def n(self) -> int:
        return len(self.q)

    def distance(self, other: "BlowupPoint") -> float:
        d = max((x - y).norm() for x, y in zip(self.q, other.q))
        return max(d, self.line.distance(other.line))


def pi1(p: BlowupPoint) -> tuple[Quaternion, ...]:
    """Projection onto the ambient H^n factor."""
    return p.q


def pi2(p: BlowupPoint) -> HomogeneousPoint:
    """Projection onto the exceptional-direction factor."""
    return p.line


# ---------------------------------------------------------------------------
# Charts and atlases


@dataclass(frozen=True)
class Chart:
    """Chart with evaluable coordinate maps and a domain predicate."""

    id: str
    n: int
    forward: Callable[[object], tuple[Quaternion, ...]]
    backward: Callable[[tuple[Quaternion, ...]], object]
    contains: Callable[[object], bool]


@dataclass(frozen=True)
class Atlas:
    """Collection of charts over one manifold, plus overlap sampling bounds.

    Coordinates for overlap sampling are drawn with |q_h| inside coord_range
    so every inverse appearing in a transition stays well conditioned.
    """

    name: str
    n: int
    charts: tuple[Chart, ...]
    coord_range: tuple[float, float] = (0.2, 2.0)


def _sample_coords(rng, n: int, coord_range: tuple[float, float]) -> tuple[Quaternion, ...]:
    out = []
    for _ in range(n):
        v = rng.standard_normal(4)
        norm = math.sqrt(float(v @ v))
        radius = float(rng.uniform(*coord_range))
        out.append(
            Quaternion(*(float(c) * radius / norm for c in v))
        )
    return tuple(out)


def _coord_distance(a: Sequence[Quaternion], b: Sequence[Quaternion]) -> float:
    return max((x - y).norm() for x, y in zip(a, b))


def _transition_components(atlas: Atlas, i: int, j: int) -> list[QFunctionN]:
    src = atlas.charts[i]
    dst = atlas.charts[j]

    def domain(x: tuple[Quaternion, ...]) -> bool:
        try:
            p = src.backward(x)
        except (ZeroDivisionError, ValueError):
            return False
        return src.contains(p) and dst.contains(p)

    def component(k: int) -> QFunctionN:
        def func(x: tuple[Quaternion, ...]) -> Quaternion:
            return dst.forward(src.backward(x))[k]

        return QFunctionN(
            atlas.n, func, domain, name=f"{src.id}->{dst.id}[{k}]"
        )

    return [component(k) for k in range(atlas.n)]


@dataclass(frozen=True)
class AtlasReport:
    """Sampled verification results for one atlas."""

    atlas: str
    seed: int
    pairs: list[dict]
    triples: list[dict]
    transitions: list[dict]
    tolerances: Tolerances
    pair_tol: float

    @property
    def max_pair_residual(self) -> float:
        return max((p["max_residual"] for p in self.pairs if p["samples"]), default=0.0)

    @property
    def max_triple_residual(self) -> float:
        return max((t["max_residual"] for t in self.triples if t["samples"]), default=0.0)

    @property
    def all_components_regular(self) -> bool:
        return all(t["verdict"].regular for t in self.transitions)

    @property
    def passed(self) -> bool:
        return (
            self.max_pair_residual < self.pair_tol
            and self.max_triple_residual < self.pair_tol
            and self.all_components_regular
        )

    def to_json(self) -> dict:
        return {
            "atlas": self.atlas,
            "seed": self.seed,
            "pairs": self.pairs,
            "triples": self.triples,
            "transitions": [
                {**t, "verdict": t["verdict"].to_json()} for t in self.transitions
            ],
            "tolerances": self.tolerances.to_json(),
            "pair_tolerance": self.pair_tol,
            "max_pair_residual": self.max_pair_residual,
            "max_triple_residual": self.max_triple_residual,
            "all_components_regular": self.all_components_regular,
            "passed": self.passed,
        }


def verify_atlas(
    atlas: Atlas,
    samples: int = 200,
    seed: int = 0,
    classify_samples: int = 20,
    tol: Tolerances = Tolerances(),
    pair_tol: float = 1e-9,
) -> AtlasReport:
    """Check inverse consistency, the cocycle condition and transition regularity.

    Failures are recorded in the report, never raised.  Deterministic for a
    fixed seed.
    """
    rng = np.random.default_rng(seed)
    charts = atlas.charts
    m = len(charts)
    coords = [_sample_coords(rng, atlas.n, atlas.coord_range) for _ in range(samples)]

    pairs = []
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            worst = 0.0
            used = 0
            for x in coords:
                p = charts[i].backward(x)
                if not (charts[i].contains(p) and charts[j].contains(p)):
                    continue
                y = charts[j].forward(p)
                p2 = charts[j].backward(y)
                if not charts[i].contains(p2):
                    continue
                x2 = charts[i].forward(p2)
                worst = max(worst, _coord_distance(x, x2))
                used += 1
            pairs.append(
                {
                    "from": charts[i].id,
                    "to": charts[j].id,
                    "samples": used,
                    "max_residual": worst,
                }
            )

    triples = []
    for i in range(m):
        for j in range(m):
            for k in range(m):
                if len({i, j, k}) < 3:
                    continue
                worst = 0.0
                used = 0
                for x in coords[: max(samples // 2, 1)]:
                    p = charts[i].backward(x)
                    if not all(c.contains(p) for c in (charts[i], charts[j], charts[k])):
                        continue
                    direct = charts[k].forward(p)
                    via = charts[k].forward(charts[j].backward(charts[j].forward(p)))
                    worst = max(worst, _coord_distance(direct, via))
                    used += 1
                triples.append(
                    {
                        "i": charts[i].id,
                        "j": charts[j].id,
                        "k": charts[k].id,
                        "samples": used,
                        "max_residual": worst,
                    }
                )

    transitions = []
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            comps = _transition_components(atlas, i, j)
            sampler = CircularSampler(atlas.n, seed=seed + 1000 * (i * m + j))
            for k, comp in enumerate(comps):
                verdict = classify(
                    comp, sampler, samples=classify_samples, tol=tol, seed_offset=k
                )
                transitions.append(
                    {
                        "from": charts[i].id,
                        "to": charts[j].id,
                        "component": k,
                        "verdict": verdict,
                    }
                )

    return AtlasReport(
        atlas=atlas.name,
        seed=seed,
        pairs=pairs,
        triples=triples,
        transitions=transitions,
        tolerances=tol,
        pair_tol=pair_tol,
    )


# ---------------------------------------------------------------------------
# Quaternionic projective space


def _hp_contains(index: int) -> Callable[[HomogeneousPoint], bool]:
    def contains(p: HomogeneousPoint) -> bool:
        top = max(c.norm() for c in p.coords)
        return p.coords[index].norm() > _REL_TOL * top

    return contains


def hp_atlas(n: int) -> Atlas:
    """The n+1 standard charts of quaternionic projective space HP^n.

    Chart i sends [a_0, ..., a_n] to (a_k a_i^-1) for k != i, in index order.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    charts = []
    for i in range(n + 1):
        def forward(p: HomogeneousPoint, _i=i) -> tuple[Quaternion, ...]:
            inv = p.coords[_i].inverse()
            return tuple(c * inv for k, c in enumerate(p.coords) if k != _i)

        def backward(x: tuple[Quaternion, ...], _i=i) -> HomogeneousPoint:
            return HomogeneousPoint(x[:_i] + (ONE,) + x[_i:])

        charts.append(
            Chart(
                id=f"U{i}",
                n=n,
                forward=forward,
                backward=backward,
                contains=_hp_contains(i),
            )
        )
    return Atlas(name=f"hp{n}", n=n, charts=tuple(charts))


# ---------------------------------------------------------------------------
# Blow-up of H^n at the origin


def blowup_atlas(n: int) -> Atlas:
    """The n charts V_i of the blow-up of H^n at 0 (1-based chart indices).

    Chart i sends (q, [a]) to (a_1 a_i^-1, ..., q_i, ..., a_n a_i^-1) with the
    i-th slot holding q_i; its inverse maps b to the incidence pair
    ((b_1 b_i, ..., b_i, ..., b_n b_i), [b_1, ..., 1, ..., b_n]).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    charts = []
    for i in range(1, n + 1):
        def forward(p: BlowupPoint, _i=i) -> tuple[Quaternion, ...]:
            a = p.line.coords
            inv = a[_i - 1].inverse()
            return tuple(
                p.q[_i - 1] if k == _i - 1 else a[k] * inv for k in range(n)
            )

        def backward(b: tuple[Quaternion, ...], _i=i) -> BlowupPoint:
            bi = b[_i - 1]
            q = tuple(bi if k == _i - 1 else b[k] * bi for k in range(n))
            line = HomogeneousPoint(
                tuple(ONE if k == _i - 1 else b[k] for k in range(n))
            )
            return BlowupPoint(q, line)

        def contains(p: BlowupPoint, _i=i) -> bool:
            top = max(c.norm() for c in p.line.coords)
            return p.line.coords[_i - 1].norm() > _REL_TOL * top

        charts.append(
            Chart(id=f"V{i}", n=n, forward=forward, backward=backward, contains=contains)
        )
    return Atlas(name=f"blowup{n}", n=n, charts=tuple(charts))


def blowup_transition_formula(
    n: int, i: int, j: int, b: Sequence[Quaternion]
) -> tuple[Quaternion, ...]:
    """Closed form of the blow-up change of coordinates from chart i to chart j."""
    if i == j:
        return tuple(b)
    bj_inv = b[j - 1].inverse()
    out = []
    for k in range(1, n + 1):
        if k == i:
            out.append(bj_inv)
        elif k == j:
            out.append(b[j - 1] * b[i - 1])
        else:
            out.append(b[k - 1] * bj_inv)
    return tuple(out)


# ---------------------------------------------------------------------------
# The diffeomorphism between HP^n minus a point and the blow-up


def map_H(p: HomogeneousPoint) -> BlowupPoint:
    """Send [w, q_1, ..., q_n] to ((q_h |q|^-2 conj(w))_h, [q_h |q|^-2]_h).

    Raises:
        ExcludedPointError: at [1, 0, ..., 0], where the q-part vanishes.
    """
    w = p.coords[0]
    q = p.coords[1:]
    top = max(c.norm() for c in p.coords)
    if max(c.norm() for c in q) <= _REL_TOL * top:
        raise ExcludedPointError("the line [1, 0, ..., 0] is excluded")
    qn2 = sum(c.norm_sq() for c in q)
    line = tuple(c * (1.0 / qn2) for c in q)
    wbar = w.conj()
    return BlowupPoint(tuple(c * wbar for c in line), HomogeneousPoint(line))


def map_H_inv(p: BlowupPoint) -> HomogeneousPoint:
    """Send ((b_h u)_h, [b]) back to [conj(u), b_1 |b|^-2, ..., b_n |b|^-2]."""
    a = p.line.coords
    u = right_proportional(p.q, a, tol=1e-6)
    if u is None:
        raise DomainError("point is not an incidence pair")
    an2 = sum(c.norm_sq() for c in a)
    return HomogeneousPoint((u.conj(),) + tuple(c * (1.0 / an2) for c in a))


# ---------------------------------------------------------------------------
# Connected-sum chart computation


@dataclass(frozen=True)
class ConnectedSumReport:
    n: int
    chart: int
    max_formula_residual: float
    verdicts: list[RegularityVerdict]

    @property
    def all_regular(self) -> bool:
        return all(v.regular for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "chart": self.chart,
            "max_formula_residual": self.max_formula_residual,
            "verdicts": [v.to_json() for v in self.verdicts],
            "all_regular": self.all_regular,
        }


def connected_sum_chart_check(
    n: int,
    i: int,
    samples: int = 100,
    seed: int = 0,
    classify_samples: int = 25,
    tol: Tolerances = Tolerances(),
) -> ConnectedSumReport:
    """Verify the gluing chart map of the connected-sum construction.

    The map carried through the blow-up charts must agree with the monomial
    form (q_1 q_i, ..., q_i, ..., q_n q_i), and each component must be slice
    regular on one side or the other.
    """
    if not 1 <= i <= n:
        raise ValueError("chart index out of range")
    atlas = blowup_atlas(n)
    chart = atlas.charts[i - 1]

    def composed(x: tuple[Quaternion, ...]) -> tuple[Quaternion, ...]:
        return pi1(chart.backward(x))

    def closed_form(x: tuple[Quaternion, ...]) -> tuple[Quaternion, ...]:
        return tuple(
            x[i - 1] if k == i - 1 else x[k] * x[i - 1] for k in range(n)
        )

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = _sample_coords(rng, n, atlas.coord_range)
        worst = max(worst, _coord_distance(composed(x), closed_form(x)))

    sampler = CircularSampler(n, seed=seed + 7)
    verdicts = [
        classify(
            QFunctionN(
                n,
                lambda x, _k=k: composed(x)[_k],
                name=f"sum_chart{i}[{k}]",
            ),
            sampler,
            samples=classify_samples,
            tol=tol,
            seed_offset=k,
        )
        for k in range(n)
    ]
    return ConnectedSumReport(n=n, chart=i, max_formula_residual=worst, verdicts=verdicts)


# ---------------------------------------------------------------------------
# The Grassmannian transition map (expected-failure model)


_GR_MARGIN = 0.05


def grassmann_components() -> list[QFunctionN]:
    """The four components of the Gr(2,4) transition map in (a, b, c, d).

    Built from the bilateral 2x2 inverse: each component is the inverse of a
    Schur-type complement.  The domain keeps every entry and every complement
    bounded away from zero so the map stays well conditioned.
    """

    def complements(p: Sequence[Quaternion]) -> tuple[Quaternion, ...]:
        a, b, c, d = p
        return (
            a - b * d.inverse() * c,
            c - d * b.inverse() * a,
            b - a * c.inverse() * d,
            d - c * a.inverse() * b,
        )

    def domain(p: Sequence[Quaternion]) -> bool:
        if any(x.norm() < _GR_MARGIN for x in p):
            return False
        return all(x.norm() > _GR_MARGIN for x in complements(p))

    def component(k: int) -> QFunctionN:
        def func(p: tuple[Quaternion, ...]) -> Quaternion:
            return complements(p)[k].inverse()

        return QFunctionN(4, func, domain, name=f"gr24[{k}]")

    return [component(k) for k in range(4)]


@dataclass(frozen=True)
class GrassmannReport:
    verdicts: list[RegularityVerdict]

    @property
    def has_neither(self) -> bool:
        return any(v.classification == "Neither" for v in self.verdicts)

    @property
    def worst_residual(self) -> float:
        return max(max(v.left_residual, v.right_residual) for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "verdicts": [v.to_json() for v in self.verdicts],
            "has_neither": self.has_neither,
            "worst_residual": self.worst_residual,
        }


def grassmann_counterexample(
    samples: int = 60,
    seed: int = 17,
    tol: Tolerances = Tolerances(),
) -> GrassmannReport:
    """Classify the Gr(2,4) transition; some component must come out Neither."""
    sampler = CircularSampler(4, seed=seed)
    verdicts = [
        classify(comp, sampler, samples=samples, tol=tol, seed_offset=k)
        for k, comp in enumerate(grassmann_components())
    ]
    return GrassmannReport(verdicts=verdicts)


# ---------------------------------------------------------------------------
# Affine quotients


@dataclass(frozen=True)
class FreenessReport:
    words_checked: int
    points_checked: int
    min_displacement: float


def _group_words(
    generators: Sequence[AffineMap], labels: Sequence[str], max_len: int
) -> list[tuple[tuple[str, ...], AffineMap]]:
    letters = []
    for g, label in zip(generators, labels):
        letters.append(((label,), g))
        letters.append(((label + "'",), g.inverse()))
    identity = AffineMap.identity(generators[0].n)
    words: list[tuple[tuple[str, ...], AffineMap]] = []
    frontier = [((), identity)]
    for _ in range(max_len):
        next_frontier = []
        for word, gmap in frontier:
            for lab, letter in letters:
                candidate = letter.compose(gmap)
                cword = word + lab
                if candidate.isclose(identity, tol=1e-9):
                    continue
                if any(candidate.isclose(known, tol=1e-9) for _, known in words):
                    continue
                words.append((cword, candidate))
                next_frontier.append((cword, candidate))
        frontier = next_frontier
    return words


def affine_quotient_atlas(
    generators: Sequence[AffineMap],
    labels: Sequence[str] | None = None,
    word_len: int = 4,
    chart_word_len: int = 1,
    cell_points: int = 40,
    seed: int = 0,
    freeness_tol: float = 1e-6,
) -> tuple[Atlas, FreenessReport]:
    """Atlas of a quotient of H^n by the group generated by affine maps.

    The charts are translates of a fundamental cell by group words of length
    at most chart_word_len, so every transition is itself an element of the
    group.  The freeness check samples the unit cell (always including the
    origin) and requires every nonidentity word of length at most word_len to
    move every sampled point.

    Raises:
        FreenessViolation: if some word nearly fixes a sampled point.
    """
    if not generators:
        raise ValueError("need at least one generator")
    n = generators[0].n
    if labels is None:
        labels = [f"g{i}" for i in range(len(generators))]

    words = _group_words(generators, labels, word_len)

    rng = np.random.default_rng(seed)
    points = [tuple(ZERO for _ in range(n))]
    for _ in range(cell_points):
        vals = rng.uniform(0.0, 1.0, size=4 * n)
        points.append(
            tuple(
                Quaternion(*(float(c) for c in vals[4 * h : 4 * h + 4]))
                for h in range(n)
            )
        )

    min_disp = math.inf
    for word, gmap in words:
        for p in points:
            disp = _coord_distance(gmap.apply(p), p)
            min_disp = min(min_disp, disp)
            if disp < freeness_tol:
                raise FreenessViolation(word, [q.to_json() for q in p], disp)

    chart_maps = [((), AffineMap.identity(n))] + [
        (w, g) for w, g in words if len(w) <= chart_word_len
    ]
    charts = []
    for word, gmap in chart_maps:
        ginv = gmap.inverse()

        def forward(p: tuple[Quaternion, ...], _g=gmap) -> tuple[Quaternion, ...]:
            return _g.apply(p)

        def backward(x: tuple[Quaternion, ...], _gi=ginv) -> tuple[Quaternion, ...]:
            return _gi.apply(x)

        charts.append(
            Chart(
                id=".".join(word) or "id",
                n=n,
                forward=forward,
                backward=backward,
                contains=lambda p: True,
            )
        )

    atlas = Atlas(name="affine_quotient", n=n, charts=tuple(charts))
    report = FreenessReport(
        words_checked=len(words),
        points_checked=len(points),
        min_displacement=min_disp,
    )
    return atlas, report
