"""Conjugate surface, associated family, motions, homotheties, and the
transport of canonical charts under each construction.

All constructions act on the factored null components of Psi, so no
resampling or interpolation is involved: the conjugate surface reflects
the q-axis, the associated family scales the two axes by e^{-theta} and
e^{theta}, and motions act componentwise on the curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .canon import CanonicalChart, map_reflect_input, map_scale_output
from .dnum import DNum
from .errors import MotionError
from .geom import SurfacePatch, make_surface
from .holo import (
    Box,
    HoloCurve,
    HoloMap,
    fn_affine_precompose,
    fn_constant,
    fn_linear_combo,
    fn_scale,
)

#: Residual tolerance for membership of A in O(R^n_1).
MOTION_TOL = 1e-10


@dataclass(frozen=True)
class Motion:
    """A Minkowski motion x -> A x + b (possibly improper)."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or b.shape != (A.shape[0],):
            raise MotionError(f"motion shapes {A.shape}, {b.shape} are inconsistent")
        eta = np.diag([-1.0] + [1.0] * (A.shape[0] - 1))
        residual = float(np.max(np.abs(A.T @ eta @ A - eta)))
        if residual > MOTION_TOL:
            raise MotionError(
                f"A is not a Minkowski motion: |A^T eta A - eta| = {residual:.3e}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @classmethod
    def identity(cls, n: int) -> "Motion":
        return cls(np.eye(n), np.zeros(n))

    @classmethod
    def boost(cls, n: int, i: int, k: int, beta: float) -> "Motion":
        """Hyperbolic rotation in the (i, k) plane; i must be the time axis 0."""
        A = np.eye(n)
        A[i, i] = A[k, k] = math.cosh(beta)
        A[i, k] = A[k, i] = math.sinh(beta)
        return cls(A, np.zeros(n))


def conjugate_surface(S: SurfacePatch) -> SurfacePatch:
    """The harmonic-conjugate surface Psi^(s) = j Psi(j s) on the domain jD.

    In null components: fminus^(a) = -fminus(-a), fplus^ = fplus; the map
    x -> y is an anti-isometry (E^ = -E at corresponding points).
    """
    box = S.domain
    new_box = Box(-box.a1, -box.a0, box.b0, box.b1)
    comps = []
    for c in S.psi.components:
        fm = fn_scale(fn_affine_precompose(c.fminus, -1.0), -1.0)
        comps.append(HoloMap(fm, c.fplus, new_box))
    return make_surface(HoloCurve(tuple(comps)))


def associated_surface(S: SurfacePatch, theta: float) -> SurfacePatch:
    """Psi_theta = e^{j theta} Psi: null axes scaled by e^{-theta}, e^{theta}.

    An isometry for every theta (E_theta = E identically).
    """
    em, ep = math.exp(-theta), math.exp(theta)
    comps = tuple(
        HoloMap(fn_scale(c.fminus, em), fn_scale(c.fplus, ep), S.domain)
        for c in S.psi.components
    )
    return make_surface(HoloCurve(comps))


def apply_motion(S: SurfacePatch, M: Motion) -> SurfacePatch:
    """Psi^ = A Psi + b componentwise; all curvature invariants and point
    classes are unchanged at corresponding points."""
    if M.n != S.n:
        raise MotionError(f"motion dimension {M.n} != surface dimension {S.n}")
    comps = []
    for k in range(S.n):
        pairs_m = [(M.A[k, i], S.psi.components[i].fminus) for i in range(S.n)]
        pairs_p = [(M.A[k, i], S.psi.components[i].fplus) for i in range(S.n)]
        shift = (M.b[k], fn_constant(1.0))
        fm = fn_linear_combo(pairs_m + [shift])
        fp = fn_linear_combo(pairs_p + [shift])
        comps.append(HoloMap(fm, fp, S.domain))
    return make_surface(HoloCurve(tuple(comps)))


def homothety(S: SurfacePatch, k: float) -> SurfacePatch:
    """Psi^ = k Psi for k > 0; E^ = k^2 E and Phi^'^2 = k^2 Phi'^2."""
    if k <= 0:
        raise ValueError("homothety coefficient must be positive")
    comps = tuple(
        HoloMap(fn_scale(c.fminus, k), fn_scale(c.fplus, k), S.domain)
        for c in S.psi.components
    )
    return make_surface(HoloCurve(comps))


def transport_chart(
    chart: CanonicalChart, construction: str, param: float | None = None
) -> CanonicalChart:
    """Transport a verified canonical chart along a construction.

    conjugate:      t = j s, realized by reflecting the q-axis map.
    associated:     t = e^{-theta/2} s, axes scaled by e^{-+theta/2}.
    homothety(k):   t = s / sqrt(k), both axes scaled by sqrt(k).
    motion:         unchanged.
    """
    if construction == "conjugate":
        new_base = DNum.from_null(-chart.base.p, chart.base.m)
        return CanonicalChart(
            sminus=map_reflect_input(chart.sminus),
            splus=chart.splus,
            base=new_base,
            conjugate_output=chart.conjugate_output,
        )
    if construction == "associated":
        if param is None:
            raise ValueError("associated transport needs theta")
        return CanonicalChart(
            sminus=map_scale_output(chart.sminus, math.exp(-param / 2.0)),
            splus=map_scale_output(chart.splus, math.exp(param / 2.0)),
            base=chart.base,
            conjugate_output=chart.conjugate_output,
        )
    if construction == "homothety":
        if param is None or param <= 0:
            raise ValueError("homothety transport needs k > 0")
        r = math.sqrt(param)
        return CanonicalChart(
            sminus=map_scale_output(chart.sminus, r),
            splus=map_scale_output(chart.splus, r),
            base=chart.base,
            conjugate_output=chart.conjugate_output,
        )
    if construction == "motion":
        return chart
    raise ValueError(f"unknown construction {construction!r}")
