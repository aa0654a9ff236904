"""Slice regular functions of several quaternionic variables.

Stem functions valued in H tensor R_n, numerical left/right regularity
certification, quaternionic matrix determinants and inverses, and verified
atlases for the standard model manifolds.
"""
from .quat import (
    Quaternion,
    SliceDecomposition,
    slice_decompose,
    imaginary_unit,
    random_imaginary_unit,
)
from .cliff import MultivectorHQ, blade_product, clifford_conjugate, jh_apply, jhr_apply
from .stem import (
    ComplexPointN,
    StemFunction,
    QFunctionN,
    Tolerances,
    CircularSampler,
    RegularityVerdict,
    induce_left,
    induce_right,
    recover_stem_left,
    recover_stem_right,
    dbar_residual,
    classify,
    classify_components,
)
from .qmat import (
    QMat2,
    QMatN,
    AffineMap,
    det2,
    cayley_det2,
    detN,
    inv2_via_a,
    inv2_via_b,
    inv2_bilateral,
    right_proportional,
)
from .manifolds import (
    HomogeneousPoint,
    BlowupPoint,
    Chart,
    Atlas,
    AtlasReport,
    hp_atlas,
    blowup_atlas,
    map_H,
    map_H_inv,
    verify_atlas,
    connected_sum_chart_check,
    grassmann_counterexample,
    affine_quotient_atlas,
)
from .expr import parse, eval_ast, to_string, compile_expr
from . import errors

__all__ = [
    "Quaternion",
    "SliceDecomposition",
    "slice_decompose",
    "imaginary_unit",
    "random_imaginary_unit",
    "MultivectorHQ",
    "blade_product",
    "clifford_conjugate",
    "jh_apply",
    "jhr_apply",
    "ComplexPointN",
    "StemFunction",
    "QFunctionN",
    "Tolerances",
    "CircularSampler",
    "RegularityVerdict",
    "induce_left",
    "induce_right",
    "recover_stem_left",
    "recover_stem_right",
    "dbar_residual",
    "classify",
    "classify_components",
    "QMat2",
    "QMatN",
    "AffineMap",
    "det2",
    "cayley_det2",
    "detN",
    "inv2_via_a",
    "inv2_via_b",
    "inv2_bilateral",
    "right_proportional",
    "HomogeneousPoint",
    "BlowupPoint",
    "Chart",
    "Atlas",
    "AtlasReport",
    "hp_atlas",
    "blowup_atlas",
    "map_H",
    "map_H_inv",
    "verify_atlas",
    "connected_sum_chart_check",
    "grassmann_counterexample",
    "affine_quotient_atlas",
    "parse",
    "eval_ast",
    "to_string",
    "compile_expr",
    "errors",
]
