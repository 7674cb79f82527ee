"""Gauss-Legendre rules, their derived node systems and uniform asymptotic relations.

The package computes Gauss-Legendre nodes and weights to near machine
precision for degrees up to a few thousand, builds secondary and
intermediate node systems and partial moments from them, checks
uniform-in-the-interval asymptotic relations between these quantities, and
assembles two moment-preserving discretizations of the angular
Fokker-Planck operator on the resulting meshes.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .asymptotics import bessel_approx, elementary_approx, residual_scaling
from .bessel import bessel_j0, bessel_j1, j0_zeros, j0_zeros_precise, mcmahon_guess, sk_decay, sonin_check
from .errors import ComputationError, DomainError, VerificationFailure
from .fokker_planck import (
    DiscreteFPOperator,
    IVPRun,
    apply_fp,
    assemble_fp,
    fp_convergence,
    midpoint_ivp,
    moment_check,
    observation_check,
)
from .legendre import QuadratureRule, compute_rule, legendre_eval, quadrature_apply
from .nodes import NodeSystem, build_node_system, check_interlacing
from .relations import (
    RelationReport,
    SequenceTable,
    circle_theorem_residuals,
    intermediate_ratio_check,
    partial_moment_check,
    scaled_constant_fit,
    secondary_ratio_check,
    sequence,
    trapezoid_residuals,
    uniform_circle_check,
)

__all__ = [
    "ComputationError",
    "DiscreteFPOperator",
    "DomainError",
    "IVPRun",
    "NodeSystem",
    "QuadratureRule",
    "RelationReport",
    "SequenceTable",
    "VerificationFailure",
    "apply_fp",
    "assemble_fp",
    "bessel_approx",
    "bessel_j0",
    "bessel_j1",
    "build_node_system",
    "check_interlacing",
    "circle_theorem_residuals",
    "compute_rule",
    "elementary_approx",
    "fp_convergence",
    "intermediate_ratio_check",
    "j0_zeros",
    "j0_zeros_precise",
    "legendre_eval",
    "mcmahon_guess",
    "midpoint_ivp",
    "moment_check",
    "observation_check",
    "partial_moment_check",
    "quadrature_apply",
    "residual_scaling",
    "scaled_constant_fit",
    "secondary_ratio_check",
    "sequence",
    "sk_decay",
    "sonin_check",
    "trapezoid_residuals",
    "uniform_circle_check",
]
