"""Surface kernel: validation, curvature invariants, point classification,
and the hyperbola of normal curvature.

A surface patch is a holomorphic curve Psi with x = Re Psi, Phi = Psi',
subject to the isothermal condition Phi^2 = 0 and the time-like condition
E = ||Phi||^2 / 2 < 0.  All curvature formulas below are expressed through
Phi and Phi' only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dnum import DClass, DNum, EPS_CLS, classify
from .errors import (
    DegeneratePointError,
    GridError,
    MetricDegeneracyError,
    SurfaceConditionError,
)
from .holo import Box, HoloCurve
from .mink import DVec, dot, normsq, wedge_normsq

#: Relative tolerance for the isothermal residual |Psi'^2| on the grid.
ISOTHERMAL_TOL = 1e-9

#: Default absolute scale for deciding K == 0 (superconformal points).
EPS_K = 1e-8

#: Default finite-difference step for the laplacian curvature formula.
H_FD = 1e-3


class PointClass(enum.Enum):
    DEGENERATE = "degenerate"
    SUPERCONFORMAL = "superconformal"
    GENERIC = "generic"


@dataclass(frozen=True)
class ValidationRecord:
    max_isothermal: float
    max_normsq: float  # max over grid of ||Phi||^2; accepted iff < 0
    worst_isothermal_at: tuple[float, float]
    worst_normsq_at: tuple[float, float]
    grid_shape: tuple[int, int]


@dataclass(frozen=True)
class SurfacePatch:
    psi: HoloCurve
    phi: HoloCurve
    phi_prime: HoloCurve
    domain: Box
    validation: ValidationRecord

    @property
    def n(self) -> int:
        return self.psi.n


@dataclass(frozen=True)
class PointData:
    t: DNum
    x: np.ndarray
    phi: DVec
    phi_prime: DVec
    phi_perp: DVec
    E: float
    K: float
    cls: PointClass


@dataclass(frozen=True)
class NormalHyperbola:
    n1: np.ndarray | None
    n2: np.ndarray | None
    nu: float
    mu: float
    kappa: float
    K: float
    E: float
    frame_degenerate: bool


# -- vectorized grid evaluation ------------------------------------------

def _eval_axis(fn, xs: np.ndarray) -> np.ndarray:
    """Evaluate a RealFn1 on an array, broadcasting constant results."""
    val = fn.f(xs)
    out = np.asarray(val, dtype=float)
    if out.shape != xs.shape:
        out = np.broadcast_to(out, xs.shape).copy()
    return out


def _metric_sign(k: int) -> float:
    return -1.0 if k == 0 else 1.0


def _null_samples(curve: HoloCurve, a: np.ndarray, b: np.ndarray):
    """Per-component null samples: (fminus(a), fplus(b)) pairs."""
    return [
        (_eval_axis(c.fminus, a), _eval_axis(c.fplus, b))
        for c in curve.components
    ]


def _normsq_grid(samples, A_idx, B_idx) -> np.ndarray:
    """||w||^2 on the meshgrid: sum of signs * wm(a) * wp(b)."""
    acc = 0.0
    for k, (wm, wp) in enumerate(samples):
        acc = acc + _metric_sign(k) * wm[A_idx] * wp[B_idx]
    return acc


def grid_quantities(
    S: SurfacePatch,
    na: int,
    nb: int,
    h_fd: float = H_FD,
    richardson: bool = True,
    box: Box | None = None,
) -> dict:
    """All sweep quantities on an na x nb null-coordinate grid.

    Returns 2-D arrays (index order [b, a]) for u, v, E, K_proj, K_biv,
    K_lap, P, Q, the Gauss-equation residual, and the point-class codes.
    The laplacian entries require the 2*h_fd margin inside the patch
    domain; the caller is responsible for choosing a box that has it.
    """
    box = box or S.domain
    if na < 2 or nb < 2:
        raise GridError("grid needs at least 2 points per axis")
    a = np.linspace(box.a0, box.a1, na)
    b = np.linspace(box.b0, box.b1, nb)
    B, A = np.meshgrid(b, a, indexing="ij")

    phi_s = _null_samples(S.phi, a, b)
    phip_s = _null_samples(S.phi_prime, a, b)
    IB = np.arange(nb)[:, None]
    IA = np.arange(na)[None, :]

    norm_phi = _normsq_grid(phi_s, IA, IB)
    norm_phip = _normsq_grid(phip_s, IA, IB)
    E = 0.5 * norm_phi

    # P(a), Q(b): null components of Phi'^2
    P = sum(_metric_sign(k) * pm**2 for k, (pm, _) in enumerate(phip_s))
    Q = sum(_metric_sign(k) * pp**2 for k, (_, pp) in enumerate(phip_s))
    P2 = np.broadcast_to(P, (nb, na))
    Q2 = np.broadcast_to(Q[:, None], (nb, na))

    # conj(Phi) . Phi' and Phi . Phi' in null components
    cp_p = sum(
        _metric_sign(k) * phi_s[k][1][IB] * phip_s[k][0][IA]
        for k in range(S.n)
    )
    cp_m = sum(
        _metric_sign(k) * phi_s[k][0][IA] * phip_s[k][1][IB]
        for k in range(S.n)
    )
    dd_p = sum(
        _metric_sign(k) * phi_s[k][0][IA] * phip_s[k][0][IA]
        for k in range(S.n)
    )
    dd_m = sum(
        _metric_sign(k) * phi_s[k][1][IB] * phip_s[k][1][IB]
        for k in range(S.n)
    )
    dd_p = np.broadcast_to(dd_p, (nb, na))
    dd_m = np.broadcast_to(dd_m, (nb, na))

    # projection route: Phi'perp componentwise, then its norm square
    with np.errstate(divide="ignore", invalid="ignore"):
        c1_p, c1_m = cp_p / norm_phi, cp_m / norm_phi  # (conjPhi.Phi')/||Phi||^2
        c2_p, c2_m = dd_p / norm_phi, dd_m / norm_phi  # (Phi.Phi')/||Phi||^2
    norm_perp = 0.0
    for k in range(S.n):
        pm, pp = phi_s[k][0][IA], phi_s[k][1][IB]
        qm, qp = phip_s[k][0][IA], phip_s[k][1][IB]
        perp_p = qm - c1_p * pm - c2_p * pp  # conj(Phi)_k has null comps swapped
        perp_m = qp - c1_m * pp - c2_m * pm
        norm_perp = norm_perp + _metric_sign(k) * perp_p * perp_m
    K_proj = -4.0 * norm_perp / norm_phi**2

    # bivector route
    wedge = norm_phi * norm_phip - cp_p * cp_m
    K_biv = -4.0 * wedge / norm_phi**3

    # laplacian route: hyperbolic laplacian of ln(-||Phi||^2) via the
    # cross stencil in null coordinates (d_uu - d_vv = 4 d_a d_b)
    def lap_lnE(h):
        corners = []
        for sa in (h, -h):
            am = a + sa
            for sb in (h, -h):
                bm = b + sb
                s_ = _null_samples(S.phi, am, bm)
                corners.append(np.log(-_normsq_grid(s_, IA, IB)))
        return (corners[0] - corners[1] - corners[2] + corners[3]) / (h * h)

    lap = lap_lnE(h_fd)
    if richardson:
        lap = (4.0 * lap_lnE(h_fd / 2.0) - lap) / 3.0
    K_lap = lap / (-norm_phi)
    # ln|E| = ln(-||Phi||^2) - ln 2, so lap ln|E| / E = 2 lap / ||Phi||^2
    gauss_residual = np.abs(2.0 * lap / norm_phi + 2.0 * K_biv)

    # classification
    thr = EPS_CLS * (1.0 + np.maximum(np.abs(P2), np.abs(Q2)))
    degenerate = np.minimum(np.abs(P2), np.abs(Q2)) <= thr
    superconf = ~degenerate & (np.abs(K_biv) <= EPS_K)
    cls = np.where(degenerate, 0, np.where(superconf, 1, 2))

    # invariant semi-axes (general-type points only)
    with np.errstate(invalid="ignore"):
        amp = np.sqrt(np.where(degenerate, np.nan, P2 * Q2))
        ssum = amp / E**2
        nu = np.sqrt(np.maximum(0.0, 0.5 * (ssum - K_biv)))
        mu = np.sqrt(np.maximum(0.0, 0.5 * (ssum + K_biv)))
        kappa = 2.0 * nu * mu

    U = 0.5 * (B + A)
    V = 0.5 * (B - A)
    return {
        "a": A, "b": B, "u": U, "v": V,
        "E": E, "K_proj": K_proj, "K_biv": K_biv, "K_lap": K_lap,
        "P": P2, "Q": Q2, "gauss_residual": gauss_residual,
        "class": cls, "nu": nu, "mu": mu, "kappa": kappa,
        "norm_phip": norm_phip, "norm_perp": norm_perp,
        "phi_phip_p": dd_p, "phi_phip_m": dd_m,
    }


# -- construction and validation -----------------------------------------

def make_surface(psi: HoloCurve, domain: Box | None = None, grid: int = 33) -> SurfacePatch:
    """Validate the minimal time-like conditions and build a SurfacePatch.

    Checks on a grid x grid sample of the domain: |Psi'^2| <= 1e-9 * scale
    (isothermal) and ||Psi'||^2 < 0 strictly (time-like).  Rejection names
    the violated condition, the worst grid point, and its residual.
    Holomorphy holds by construction of HoloCurve.
    """
    domain = domain or psi.domain
    phi = psi.differentiate()
    phi_prime = phi.differentiate()
    a = np.linspace(domain.a0, domain.a1, grid)
    b = np.linspace(domain.b0, domain.b1, grid)
    IB = np.arange(grid)[:, None]
    IA = np.arange(grid)[None, :]
    phi_s = _null_samples(phi, a, b)
    norm_phi = _normsq_grid(phi_s, IA, IB)

    # Psi'^2 = Phi^2 in null components
    sq_p = sum(_metric_sign(k) * pm**2 for k, (pm, _) in enumerate(phi_s))
    sq_m = sum(_metric_sign(k) * pp**2 for k, (_, pp) in enumerate(phi_s))
    sq_p = np.broadcast_to(sq_p, (grid, grid))
    sq_m = np.broadcast_to(sq_m[:, None], (grid, grid))
    iso = np.maximum(np.abs(sq_p), np.abs(sq_m))
    scale = max(1.0, float(np.max(np.abs(norm_phi))))

    i, k = np.unravel_index(int(np.argmax(iso)), iso.shape)
    worst_iso = float(iso[i, k])
    worst_iso_at = (float(a[k]), float(b[i]))
    if worst_iso > ISOTHERMAL_TOL * scale:
        raise SurfaceConditionError(
            f"isothermal condition Psi'^2 = 0 violated: residual "
            f"{worst_iso:.3e} at null point (a, b) = {worst_iso_at}"
        )

    i, k = np.unravel_index(int(np.argmax(norm_phi)), norm_phi.shape)
    worst_norm = float(norm_phi[i, k])
    worst_norm_at = (float(a[k]), float(b[i]))
    if worst_norm >= 0.0:
        raise SurfaceConditionError(
            f"time-like condition ||Psi'||^2 < 0 violated: value "
            f"{worst_norm:.3e} at null point (a, b) = {worst_norm_at}"
        )

    record = ValidationRecord(
        max_isothermal=worst_iso,
        max_normsq=worst_norm,
        worst_isothermal_at=worst_iso_at,
        worst_normsq_at=worst_norm_at,
        grid_shape=(grid, grid),
    )
    return SurfacePatch(psi, phi, phi_prime, domain, record)


# -- per-point quantities ------------------------------------------------

def _real_part(w: DVec) -> np.ndarray:
    return np.array(w.re(), dtype=float)


def _imag_part(w: DVec) -> np.ndarray:
    return np.array(w.im(), dtype=float)


def project_normal(phi: DVec, w: DVec) -> DVec:
    """Projection of w onto the normal space at a point with tangent Phi.

    w - (w . conj Phi / ||Phi||^2) Phi - (w . Phi / ||Phi||^2) conj Phi.
    """
    ns = normsq(phi)
    if abs(ns) < 1e-14:
        raise MetricDegeneracyError(
            f"||Phi||^2 = {ns!r} is numerically zero; metric degenerate here"
        )
    c1 = dot(w, phi.conj()) / DNum(ns)
    c2 = dot(w, phi) / DNum(ns)
    return w - phi.scale(c1) - phi.conj().scale(c2)


def point_data(S: SurfacePatch, t: DNum, eps_k: float = EPS_K) -> PointData:
    """Evaluate x, Phi, Phi', Phi'perp, E, K (bivector), class at t."""
    S.domain.check(t)
    psi = S.psi.eval_unchecked(t)
    phi = S.phi.eval_unchecked(t)
    phip = S.phi_prime.eval_unchecked(t)
    ns = normsq(phi)
    if abs(ns) < 1e-14:
        raise MetricDegeneracyError(f"metric degenerate at t = {t!r}")
    E = 0.5 * ns
    K = -4.0 * wedge_normsq(phi, phip) / ns**3
    perp = project_normal(phi, phip)
    cls = _classify(phi, phip, K, eps_k)
    return PointData(
        t=t, x=_real_part(psi), phi=phi, phi_prime=phip,
        phi_perp=perp, E=E, K=K, cls=cls,
    )


def _classify(phi: DVec, phip: DVec, K: float, eps_k: float) -> PointClass:
    sq = dot(phip, phip)
    if classify(sq) is DClass.NULL:
        return PointClass.DEGENERATE
    if abs(K) <= eps_k:
        return PointClass.SUPERCONFORMAL
    return PointClass.GENERIC


def classify_point(S: SurfacePatch, t: DNum, eps_k: float = EPS_K) -> PointClass:
    S.domain.check(t)
    phi = S.phi.eval_unchecked(t)
    phip = S.phi_prime.eval_unchecked(t)
    sq = dot(phip, phip)
    if classify(sq) is DClass.NULL:
        return PointClass.DEGENERATE
    ns = normsq(phi)
    K = -4.0 * wedge_normsq(phi, phip) / ns**3
    return PointClass.SUPERCONFORMAL if abs(K) <= eps_k else PointClass.GENERIC


def gauss_K(
    S: SurfacePatch,
    t: DNum,
    method: str = "bivector",
    h_fd: float = H_FD,
    richardson: bool = True,
) -> float:
    """Gauss curvature at t by one of three routes.

    projection: -4 ||Phi'perp||^2 / ||Phi||^4
    bivector:   -4 ||Phi ^ Phi'||^2 / ||Phi||^6
    laplacian:  lap_h ln(-||Phi||^2) / (-||Phi||^2), central differences
    """
    S.domain.check(t)
    phi = S.phi.eval_unchecked(t)
    ns = normsq(phi)
    if abs(ns) < 1e-14:
        raise MetricDegeneracyError(f"metric degenerate at t = {t!r}")
    if method == "projection":
        perp = project_normal(phi, S.phi_prime.eval_unchecked(t))
        return -4.0 * normsq(perp) / ns**2
    if method == "bivector":
        return -4.0 * wedge_normsq(phi, S.phi_prime.eval_unchecked(t)) / ns**3
    if method == "laplacian":
        box = S.domain
        margin = 2.0 * h_fd
        if not (
            box.a0 + margin <= t.p <= box.a1 - margin
            and box.b0 + margin <= t.m <= box.b1 - margin
        ):
            raise GridError(
                f"laplacian method needs a {margin} interior margin around t = {t!r}"
            )

        def lnE(da, db):
            w = S.phi.eval_unchecked(DNum.from_null(t.p + da, t.m + db))
            return math.log(-normsq(w))

        def lap(h):
            return (lnE(h, h) - lnE(h, -h) - lnE(-h, h) + lnE(-h, -h)) / (h * h)

        val = lap(h_fd)
        if richardson:
            val = (4.0 * lap(h_fd / 2.0) - val) / 3.0
        return val / (-ns)
    raise ValueError(f"unknown method {method!r}")


def second_fundamental(S: SurfacePatch, t: DNum) -> tuple[np.ndarray, np.ndarray]:
    """(sigma(x_u, x_u), sigma(x_u, x_v)) = (Re Phi'perp, Im Phi'perp)."""
    pd = point_data(S, t)
    return _real_part(pd.phi_perp), _imag_part(pd.phi_perp)


def mink_normsq_real(x: np.ndarray) -> float:
    """||x||^2 = -x1^2 + sum x_k^2 for a real vector."""
    return float(-x[0] * x[0] + np.dot(x[1:], x[1:]))


def gauss_equation_residual(
    S: SurfacePatch, t: DNum, h_fd: float = H_FD, richardson: bool = True
) -> float:
    """|lap_h ln|E| / E + 2K| at t, the fundamental Gauss equation."""
    K = gauss_K(S, t, "bivector")
    Klap = gauss_K(S, t, "laplacian", h_fd=h_fd, richardson=richardson)
    # lap ln|E| / E = lap ln(-||Phi||^2)/ (||Phi||^2 / 2) = -2 K_lap
    return abs(-2.0 * Klap + 2.0 * K)


# -- normal-curvature hyperbola ------------------------------------------

def hyperbola_at(S: SurfacePatch, s: DNum, chart) -> NormalHyperbola:
    """Normal-curvature data at the canonical coordinate s of a chart.

    The chart supplies the reparametrization t(s); the second fundamental
    form is evaluated in canonical coordinates via the chain rule
    Phi~ = Phi t', Phi~' = Phi' t'^2 + Phi t''.
    """
    a = chart.sminus.inv(s.p)
    b = chart.splus.inv(s.m)
    t = DNum.from_null(a, b)
    S.domain.check(t)
    if classify_point(S, t) is PointClass.DEGENERATE:
        raise DegeneratePointError(f"degenerate point at t = {t!r}")

    d1a, d1b = chart.sminus.dfwd(a), chart.splus.dfwd(b)
    d2a, d2b = chart.sminus.d2fwd(a), chart.splus.d2fwd(b)
    t1 = DNum.from_null(1.0 / d1a, 1.0 / d1b)
    t2 = DNum.from_null(-d2a / d1a**3, -d2b / d1b**3)

    phi = S.phi.eval_unchecked(t)
    phip = S.phi_prime.eval_unchecked(t)
    phi_c = phi.scale(t1)
    phip_c = phip.scale(t1 * t1) + phi.scale(t2)

    E = 0.5 * normsq(phi_c)
    if E >= 0.0:
        raise MetricDegeneracyError(f"non-negative E = {E} at t = {t!r}")
    perp = project_normal(phi_c, phip_c)
    s_uu = _real_part(perp)
    s_uv = _imag_part(perp)

    # unit-frame values: X1 = x_u / sqrt(-E), X2 = x_v / sqrt(-E)
    sig11 = s_uu / (-E)
    sig12 = s_uv / (-E)
    nu = math.sqrt(max(0.0, mink_normsq_real(sig11)))
    mu = math.sqrt(max(0.0, mink_normsq_real(sig12)))
    K = -nu * nu + mu * mu
    kappa = 2.0 * nu * mu

    tol = 1e-10 * (1.0 + nu + mu)
    frame_degenerate = nu <= tol or mu <= tol
    n1 = None if nu <= tol else sig11 / nu
    n2 = None if mu <= tol else sig12 / mu
    return NormalHyperbola(
        n1=n1, n2=n2, nu=nu, mu=mu, kappa=kappa, K=K, E=E,
        frame_degenerate=frame_degenerate,
    )


def hyperbola_sample(
    sigma_uu: np.ndarray, sigma_uv: np.ndarray, E: float, psi: float
) -> np.ndarray:
    """sigma(X, X) on the unit tangent hyperbola at parameter psi.

    Returns sigma(X1, X1) cosh(2 psi) + sigma(X1, X2) sinh(2 psi), where
    the unit-frame values are the raw coordinate values scaled by 1/(-E).
    """
    sig11 = np.asarray(sigma_uu, dtype=float) / (-E)
    sig12 = np.asarray(sigma_uv, dtype=float) / (-E)
    return sig11 * math.cosh(2.0 * psi) + sig12 * math.sinh(2.0 * psi)


# -- sampled immersion check ---------------------------------------------

def mean_curvature_residual(x: np.ndarray, du: float, dv: float) -> float:
    """Max interior Euclidean norm of the hyperbolic laplacian of a
    sampled immersion x[v, u, component]; ~0 exactly when minimal."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 3 or x.shape[0] < 3 or x.shape[1] < 3:
        raise GridError("need a (nv, nu, n) sample with nv, nu >= 3")
    acc = 0.0
    for k in range(x.shape[2]):
        lap = kernels.hyperbolic_laplacian(x[:, :, k], du, dv)
        acc = acc + lap**2
    return float(np.max(np.sqrt(acc)))
