# oscillator.py
"""
The metaplectic (harmonic oscillator) transform f_phi of a window f.

For phi = phi0 + nu*pi with phi0 in [0, pi):

    f_phi(w) = (-i)^nu * F_{phi0} f((-1)^nu w)

where F_0 is the identity and, for phi0 in (0, pi),

    F_{phi0} f(w) = e^{-i pi/4} (sin phi0)^{-1/2}
                    * int exp(i [pi cot(phi0) (w^2 + v^2) - 2 pi w v csc(phi0)]) f(v) dv.

Piecewise quadratic windows are integrated in closed form through Fresnel
moments (scipy.special.wofz). Gaussian and first Hermite windows use their
analytic transforms.
"""

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Any, List, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, special

from config import Config
from errors import (
    InvalidWindow,
    LossOfPrecision,
    NearSingularPhase,
    ParameterOutOfRange,
    numerical_guard,
    recovery_engine,
)
from windows import Window, WindowKind, h_norm

logger = logging.getLogger(__name__)

PI = math.pi
EPS = np.finfo(float).eps
NEAR_SINGULAR = 1e-8
SMALL_VARIATION = 20.0
LINEAR_PHASE = 1e-13
ERR_TOL = 1e-11
WOFZ_REL = 4e-14
MAX_PANELS = 4096
EVAL_CHUNK = 1 << 15

GL_NODES, GL_WEIGHTS = leggauss(48)
GL12_NODES, GL12_WEIGHTS = leggauss(12)
GL20_NODES, GL20_WEIGHTS = leggauss(20)
GL16_NODES, GL16_WEIGHTS = leggauss(16)

SQRT_PI = math.sqrt(PI)
E_MINUS_I_PI_4 = complex(math.cos(PI / 4), -math.sin(PI / 4))
ROTATIONS = np.array([1.0, -1.0j, -1.0, 1.0j])


@dataclass(frozen=True)
class FresnelMomentQuery:
    """int_a^b w^k exp(i (A w^2 + B w)) dw"""
    A: float
    B: float
    k: int
    a: float
    b: float


@dataclass
class TransformResult:
    value: complex
    method: str
    est_error: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "real": self.value.real,
            "imag": self.value.imag,
            "method": self.method,
            "est_error": self.est_error,
        }


@dataclass(frozen=True)
class GridSpec:
    n_phi: int = 512
    n_w: int = 4096
    w_max: float = 64.0

    @classmethod
    def from_config(cls, config=Config) -> "GridSpec":
        grid = config.KAPPA_GRID
        return cls(grid["n_phi"], grid["n_w"], grid["w_max"])


@dataclass
class KappaEstimate:
    """Grid maximum (a lower estimate of kappa_eta) and the analytic upper certificate"""
    lower: float
    certificate: Optional[float]
    argmax_phi: float
    argmax_w: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lower": self.lower,
            "certificate": self.certificate,
            "argmax_phi": self.argmax_phi,
            "argmax_w": self.argmax_w,
        }


@dataclass
class L2Result:
    norm: float
    tail_estimate: float


@dataclass
class _Evaluation:
    values: np.ndarray
    errors: np.ndarray
    fallback: np.ndarray
    limit: np.ndarray


def sigma_phi(phi: float) -> int:
    """2 nu at phi = nu*pi, 2 nu + 1 strictly between nu*pi and (nu+1)*pi"""
    nu = math.floor(phi / PI)
    return 2 * nu if phi == nu * PI else 2 * nu + 1


def reduce_phase(phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    nu = np.floor(phi / PI)
    phi0 = phi - nu * PI
    over = phi0 >= PI
    phi0 = np.where(over, phi0 - PI, phi0)
    nu = np.where(over, nu + 1, nu)
    return phi0, nu.astype(np.int64)


# Fresnel moment kernels, vectorized over elements

def _phase(v, w, cot, sigma, kappa):
    """pi cot (w - sigma v)^2 - 2 pi w v kappa, the exact phase without cot/csc cancellation"""
    return PI * cot * (w - sigma * v) ** 2 - 2.0 * PI * w * v * kappa


def _gl_piece(l, h, c, w, cot, sigma, kappa, nodes=GL_NODES, weights=GL_WEIGHTS):
    d = 0.5 * h * (nodes[None, :] + 1.0)
    ph = _phase(l + d, w[:, None], cot[:, None], sigma[:, None], kappa[:, None])
    poly = c[0] + d * (c[1] + d * c[2])
    terms = weights[None, :] * poly * np.exp(1j * ph)
    value = 0.5 * h * terms.sum(axis=1)
    err = EPS * 0.5 * h * np.abs(terms).sum(axis=1) * (1.0 + np.abs(ph).max(axis=1))
    return value, err


def _linear_piece(h, c, ph_l, ph_r, beta):
    """Phase linear in d: ph_l + beta d"""
    el, er = np.exp(1j * ph_l), np.exp(1j * ph_r)
    ib = 1j * beta
    m0 = (er - el) / ib
    m1 = (h * er - m0) / ib
    m2 = (h * h * er - 2.0 * m1) / ib
    value = c[0] * m0 + c[1] * m1 + c[2] * m2
    scale = EPS * (1.0 + np.maximum(np.abs(ph_l), np.abs(ph_r))) / np.abs(beta)
    err = (abs(c[0]) + abs(c[1]) * h + abs(c[2]) * h * h) * scale * 4.0
    return value, err


def _fresnel_m0(abs_a, u1, u2, ph1, ph2, ph_star):
    """int_{u1}^{u2} exp(i (|A| u^2 + ph_star)) du; ph_j = ph_star + |A| u_j^2 supplied exactly"""
    c = np.sqrt(abs_a) * E_MINUS_I_PI_4
    pref = SQRT_PI / (2.0 * c)
    s1, s2 = np.sign(u1), np.sign(u2)
    w1 = special.wofz(1j * c * np.abs(u1))
    w2 = special.wofz(1j * c * np.abs(u2))
    straddle = s2 - s1
    centre = np.where(straddle != 0, straddle * np.exp(1j * np.where(straddle != 0, ph_star, 0.0)), 0.0)
    t2 = s2 * np.exp(1j * ph2) * w2
    t1 = s1 * np.exp(1j * ph1) * w1
    value = pref * (centre - t2 + t1)
    phase_scale = 1.0 + np.maximum(np.abs(ph1), np.abs(ph2))
    err = np.abs(pref) * (np.abs(centre) + np.abs(t2) + np.abs(t1)) * (EPS * phase_scale + WOFZ_REL)
    return value, err


def _fresnel_piece(l, h, c, a_coef, v_star, ph_l, ph_r, ph_star):
    """Closed-form moments about the stationary point v_star, recombined on the local variable"""
    s = l - v_star
    u1, u2 = s, s + h
    sgn = np.sign(a_coef)
    abs_a = np.abs(a_coef)
    m0_raw, e0 = _fresnel_m0(abs_a, u1, u2, sgn * ph_l, sgn * ph_r, sgn * ph_star)
    m0 = np.where(sgn < 0, np.conj(m0_raw), m0_raw)
    el, er = np.exp(1j * ph_l), np.exp(1j * ph_r)
    two_ia = 2j * a_coef
    m1 = (er - el) / two_ia - s * m0
    m2 = (h * er - m0) / two_ia - s * m1
    value = c[0] * m0 + c[1] * m1 + c[2] * m2

    inv = 1.0 / (2.0 * abs_a)
    phase_scale = 1.0 + np.maximum(np.abs(ph_l), np.abs(ph_r))
    abs_s = np.abs(s)
    e1 = 2.0 * EPS * phase_scale * inv + abs_s * e0 + EPS * abs_s * np.abs(m0)
    e2 = (h * EPS * phase_scale + e0) * inv + abs_s * e1 + EPS * abs_s * np.abs(m1)
    err = abs(c[0]) * e0 + abs(c[1]) * e1 + abs(c[2]) * e2
    return value, err


def _panel_piece(l, h, c, w, cot, sigma, kappa, variation):
    """Composite Gauss-Legendre on panels of about three radians of phase each"""
    n = len(w)
    value = np.empty(n, dtype=complex)
    err = np.empty(n)
    for i in range(n):
        panels = int(min(MAX_PANELS, max(1, math.ceil(variation[i] / 3.0))))
        edges = np.linspace(0.0, h, panels + 1)
        width = edges[1] - edges[0]
        d = (edges[:-1, None] + 0.5 * width * (GL_NODES[None, :] + 1.0)).ravel()
        wts = np.tile(GL_WEIGHTS, panels) * 0.5 * width
        ph = _phase(l + d, w[i], cot[i], sigma[i], kappa[i])
        terms = wts * (c[0] + d * (c[1] + d * c[2])) * np.exp(1j * ph)
        value[i] = terms.sum()
        err[i] = EPS * np.abs(terms).sum() * (1.0 + np.abs(ph).max())
    return value, err


def _piecewise_core(f: Window, phi0: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """F_{phi0} f(w) for phi0 in (0, pi); returns (values, error estimates, fallback mask)"""
    sin, cos = np.sin(phi0), np.cos(phi0)
    cot = cos / sin
    lower = phi0 < 0.5 * PI
    sigma = np.where(lower, 1.0, -1.0)
    kappa = np.where(lower, np.tan(0.5 * phi0), 1.0 / np.tan(0.5 * phi0))
    a_coef = PI * cot
    with np.errstate(divide="ignore", invalid="ignore"):
        v_star = np.where(cos != 0.0, w / np.where(cos != 0.0, cos, 1.0), np.inf)
        ph_star = np.where(cos != 0.0, -PI * w * w * np.where(cos != 0.0, sin / cos, 0.0), 0.0)

    total = np.zeros(len(w), dtype=complex)
    errors = np.zeros(len(w))
    fallback = np.zeros(len(w), dtype=bool)
    for l, r, c in zip(f.poly.breakpoints, f.poly.breakpoints[1:], f.poly.coeffs):
        if c == (0.0, 0.0, 0.0):
            continue
        h = r - l
        ph_l = _phase(l, w, cot, sigma, kappa)
        ph_r = _phase(r, w, cot, sigma, kappa)
        inside = (v_star > l) & (v_star < r)
        variation = np.where(inside, np.abs(ph_l - ph_star) + np.abs(ph_r - ph_star), np.abs(ph_r - ph_l))

        value = np.zeros(len(w), dtype=complex)
        err = np.zeros(len(w))
        small = variation <= SMALL_VARIATION
        linear = ~small & (np.abs(a_coef) * h * h < LINEAR_PHASE)
        fres = ~small & ~linear

        if small.any():
            value[small], err[small] = _gl_piece(l, h, c, w[small], cot[small], sigma[small], kappa[small])
        if linear.any():
            beta = -2.0 * PI * sigma[linear] * cot[linear] * (w[linear] - sigma[linear] * l) \
                - 2.0 * PI * w[linear] * kappa[linear]
            value[linear], err[linear] = _linear_piece(h, c, ph_l[linear], ph_r[linear], beta)
        if fres.any():
            value[fres], err[fres] = _fresnel_piece(
                l, h, c, a_coef[fres], v_star[fres], ph_l[fres], ph_r[fres], ph_star[fres]
            )

        bad = (err > ERR_TOL * np.maximum(1.0, np.abs(value))) & (variation <= 3.0 * MAX_PANELS)
        if bad.any() and Config.is_feature_enabled("quadrature_fallback"):
            idx = np.flatnonzero(bad)
            pv, pe = _panel_piece(l, h, c, w[idx], cot[idx], sigma[idx], kappa[idx], variation[idx])
            better = pe < err[idx]
            value[idx[better]], err[idx[better]] = pv[better], pe[better]
            fallback[idx[better]] = True
        total += value
        errors += err

    scale = E_MINUS_I_PI_4 / np.sqrt(sin)
    return scale * total, np.abs(scale) * errors, fallback


def _gaussian_core(f: Window, phi0: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Analytic transform of amplitude * exp(-pi a v^2) for phi0 in [0, pi)"""
    a = f.width
    sin, cos = np.sin(phi0), np.cos(phi0)
    den = a * sin - 1j * cos
    return E_MINUS_I_PI_4 * f.amplitude / np.sqrt(den) * np.exp(-PI * w * w * (sin - 1j * a * cos) / den)


def _evaluate(f: Window, phi, w) -> _Evaluation:
    phi_b, w_b = np.broadcast_arrays(np.asarray(phi, dtype=float), np.asarray(w, dtype=float))
    shape = phi_b.shape
    phi_f, w_f = phi_b.ravel(), w_b.ravel()
    n = phi_f.size
    values = np.zeros(n, dtype=complex)
    errors = np.zeros(n)
    fallback = np.zeros(n, dtype=bool)
    limit = np.zeros(n, dtype=bool)

    if f.kind is WindowKind.HERMITE1:
        values = np.exp(-1.5j * phi_f) * w_f * np.exp(-PI * w_f * w_f)
        return _Evaluation(values.reshape(shape), errors.reshape(shape),
                           fallback.reshape(shape), limit.reshape(shape))

    phi0, nu = reduce_phase(phi_f)
    if f.kind is not WindowKind.GAUSSIAN:
        dist = np.minimum(phi0, PI - phi0)
        limit = (dist > 0.0) & (dist < NEAR_SINGULAR)
        if limit.any():
            if not Config.is_feature_enabled("limit_branch"):
                raise ParameterOutOfRange("phase too close to a multiple of pi", operation="transform")
            warnings.warn(
                f"{int(limit.sum())} phase(s) within {NEAR_SINGULAR:g} of a multiple of pi; using the limit branch",
                NearSingularPhase,
                stacklevel=3,
            )
            recovery_engine.handle_error(
                "near_singular_phase", {"count": int(limit.sum()), "distance": float(dist[limit].min())}
            )
            upper = limit & (phi0 > 0.5 * PI)
            nu = np.where(upper, nu + 1, nu)
            phi0 = np.where(limit, 0.0, phi0)

    sign = np.where(nu % 2 == 0, 1.0, -1.0)
    rot = ROTATIONS[nu % 4]
    wr = sign * w_f

    if f.kind is WindowKind.GAUSSIAN:
        values = rot * _gaussian_core(f, phi0, wr)
        return _Evaluation(values.reshape(shape), errors.reshape(shape),
                           fallback.reshape(shape), limit.reshape(shape))

    exact = phi0 == 0.0
    if exact.any():
        values[exact] = f(wr[exact])
    generic = np.flatnonzero(~exact)
    for start in range(0, len(generic), EVAL_CHUNK):
        idx = generic[start:start + EVAL_CHUNK]
        vals, errs, fb = _piecewise_core(f, phi0[idx], wr[idx])
        values[idx], errors[idx], fallback[idx] = vals, errs, fb
    values = rot * values

    if fallback.any():
        recovery_engine.handle_error(
            "loss_of_precision", {"count": int(fallback.sum()), "condition": "fresnel moment cancellation"}
        )
    return _Evaluation(values.reshape(shape), errors.reshape(shape),
                       fallback.reshape(shape), limit.reshape(shape))


def evaluate_transform(f: Window, phi, w) -> np.ndarray:
    """f_phi(w) over broadcast arrays of phi and w"""
    if f.poly is None and not f.is_analytic:
        raise InvalidWindow("window cannot be transformed", operation="evaluate_transform")
    return _evaluate(f, phi, w).values


def transform(f: Window, phi: float, w: float) -> TransformResult:
    """Single value of f_phi(w) with the method used and an error estimate"""
    if f.poly is None and not f.is_analytic:
        raise InvalidWindow("window cannot be transformed", operation="transform")
    ev = _evaluate(f, np.array([phi]), np.array([w]))
    if f.is_analytic:
        method = "analytic"
    elif ev.limit[0]:
        method = "limit"
    elif ev.fallback[0]:
        method = "quadrature"
    else:
        method = "closed_form"
    return TransformResult(complex(ev.values[0]), method, float(ev.errors[0]))


def fresnel_moment(q: FresnelMomentQuery) -> complex:
    """int_a^b w^k exp(i (A w^2 + B w)) dw with the same branch selection as the transform kernel"""
    if q.k not in (0, 1, 2):
        raise ParameterOutOfRange(f"k must be 0, 1 or 2, got {q.k}", operation="fresnel_moment")
    a, b, A, B = float(q.a), float(q.b), float(q.A), float(q.B)
    if a == b:
        return 0j
    if b < a:
        return -fresnel_moment(FresnelMomentQuery(A, B, q.k, b, a))

    def phase(v):
        return A * v * v + B * v

    ph_a, ph_b = phase(a), phase(b)
    v_star = -B / (2.0 * A) if A != 0.0 else math.inf
    ph_star = -B * B / (4.0 * A) if A != 0.0 else 0.0
    if a < v_star < b:
        variation = abs(ph_a - ph_star) + abs(ph_b - ph_star)
    else:
        variation = abs(ph_b - ph_a)

    if variation <= SMALL_VARIATION:
        v = a + 0.5 * (b - a) * (GL_NODES + 1.0)
        ph = phase(v)
        terms = 0.5 * (b - a) * GL_WEIGHTS * v ** q.k * np.exp(1j * ph)
        value = complex(terms.sum())
        err = EPS * float(np.abs(terms).sum()) * (1.0 + float(np.abs(ph).max()))
    elif abs(A) * (b - a) ** 2 < LINEAR_PHASE or A == 0.0:
        ea, eb = np.exp(1j * ph_a), np.exp(1j * ph_b)
        beta = B + 2.0 * A * a if A != 0.0 else B
        m0 = (eb - ea) / (1j * beta)
        m1 = (b * eb - a * ea - m0) / (1j * beta)
        m2 = (b * b * eb - a * a * ea - 2.0 * m1) / (1j * beta)
        value = complex((m0, m1, m2)[q.k])
        err = EPS * (1.0 + max(abs(ph_a), abs(ph_b))) * (1.0 + max(abs(a), abs(b))) ** q.k / abs(beta) * 4.0
    else:
        sgn = 1.0 if A > 0 else -1.0
        u1, u2 = np.array([a - v_star]), np.array([b - v_star])
        m0_raw, e0 = _fresnel_m0(abs(A), u1, u2, np.array([sgn * ph_a]), np.array([sgn * ph_b]),
                                 np.array([sgn * ph_star]))
        m0 = complex(m0_raw[0]) if A > 0 else complex(np.conj(m0_raw[0]))
        ea, eb = np.exp(1j * ph_a), np.exp(1j * ph_b)
        m1 = (eb - ea) / (2j * A) + v_star * m0
        m2 = (b * eb - a * ea - m0) / (2j * A) + v_star * m1
        value = complex((m0, m1, m2)[q.k])
        scale = 1.0 + abs(v_star) + max(abs(a), abs(b)) + 1.0 / abs(A)
        err = float(e0[0]) * scale ** q.k + EPS * (1.0 + max(abs(ph_a), abs(ph_b))) * scale ** (q.k + 1)

    if err > 1e-6 * abs(value) and err > 1e-13:
        recovery_engine.handle_error("loss_of_precision", {"condition": "fresnel_moment", "estimate": err})
        raise LossOfPrecision(
            f"moment cancellation {err:.3e} exceeds 1e-6 relative",
            operation="fresnel_moment",
            details={"value": str(value), "error": err},
        )
    return value


# Quadrature oracle

def _phase_split_points(lo: float, hi: float, phase_fn, step: float = 0.5 * PI) -> List[float]:
    """Points where the accumulated phase change crosses multiples of `step`"""
    samples = max(2049, min(400_001, int(64 * (hi - lo)) + 1))
    v = np.linspace(lo, hi, samples)
    ph = phase_fn(v)
    travelled = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(ph)))])
    if travelled[-1] <= step:
        return [lo, hi]
    marks = np.arange(step, travelled[-1], step)
    cuts = np.interp(marks, travelled, v)
    return [lo] + sorted(set(float(x) for x in cuts if lo < x < hi)) + [hi]


def quadrature_transform(f: Window, phi: float, w: float, epsabs: float = 1e-13) -> complex:
    """Independent f_phi(w) by scipy.integrate.quad on phase-split panels"""
    phi0_arr, nu_arr = reduce_phase(np.array([float(phi)]))
    phi0, nu = float(phi0_arr[0]), int(nu_arr[0])
    wr = w if nu % 2 == 0 else -w
    rot = complex(ROTATIONS[nu % 4])
    if phi0 == 0.0:
        return rot * complex(f(wr))

    sin, cos = math.sin(phi0), math.cos(phi0)
    cot, csc = cos / sin, 1.0 / sin

    def phase(v):
        return PI * cot * (wr * wr + v * v) - 2.0 * PI * wr * v * csc

    if f.poly is not None:
        lo, hi = f.poly.support
        fixed = list(f.poly.breakpoints)
    elif f.is_analytic:
        reach = math.sqrt(40.0 / (PI * (f.width if f.kind is WindowKind.GAUSSIAN else 1.0)))
        lo, hi = -reach, reach
        fixed = [lo, hi]
    else:
        raise InvalidWindow("window cannot be integrated", operation="quadrature_transform")

    points = sorted(set(_phase_split_points(lo, hi, phase)) | set(fixed))
    total = 0j
    for a, b in zip(points, points[1:]):
        if b <= a:
            continue
        with numerical_guard("quadrature_transform"):
            re, _ = integrate.quad(lambda v: float(f(v)) * math.cos(phase(v)), a, b,
                                   epsabs=epsabs, epsrel=1e-12, limit=200)
            im, _ = integrate.quad(lambda v: float(f(v)) * math.sin(phase(v)), a, b,
                                   epsabs=epsabs, epsrel=1e-12, limit=200)
        total += complex(re, im)
    return rot * E_MINUS_I_PI_4 / math.sqrt(sin) * total


# Norm estimates and bounds

def bound_uniform(f: Window, eta: float, b: float = 1.0) -> float:
    """2^{eta/2} max{||h00||_sp, b^{eta-1}(||h01||_1 + ||h10||_sp),
    b^{eta-2}(||h11||_1 + ||h02||_1 + ||h00||_1 + ||h20||_sp)}"""
    if not 1.0 < eta <= 2.0:
        raise ParameterOutOfRange(f"eta must lie in (1, 2], got {eta}", operation="bound_uniform")
    if b < 1.0:
        raise ParameterOutOfRange(f"b must be >= 1, got {b}", operation="bound_uniform")
    if f.poly is None or f.has_jumps:
        raise InvalidWindow("uniform bound needs a continuous piecewise-polynomial window",
                            operation="bound_uniform")
    first = h_norm(f, 0, 0, "sp")
    second = b ** (eta - 1.0) * (h_norm(f, 0, 1, "L1") + h_norm(f, 1, 0, "sp"))
    third = b ** (eta - 2.0) * (
        h_norm(f, 1, 1, "L1") + h_norm(f, 0, 2, "L1") + h_norm(f, 0, 0, "L1") + h_norm(f, 2, 0, "sp")
    )
    return 2.0 ** (eta / 2.0) * max(first, second, third)


def uniform_certificate(f: Window, eta: float, max_log2_b: int = 24) -> Optional[float]:
    """min over b = 2^k of bound_uniform, or None when the bound does not apply"""
    if f.poly is None or f.has_jumps:
        return None
    return min(bound_uniform(f, eta, 2.0 ** k) for k in range(max_log2_b + 1))


def kappa_eta(f: Window, eta: float, grid: Optional[GridSpec] = None, threads: int = 1) -> KappaEstimate:
    """Grid max of |f_phi(w)| (1 + w^2)^{eta/2} over phi in [0, pi) and w in [-W, W]"""
    if eta <= 1.0:
        raise ParameterOutOfRange(f"eta must exceed 1, got {eta}", operation="kappa_eta")
    grid = grid or GridSpec.from_config()
    phis = np.linspace(0.0, PI, grid.n_phi, endpoint=False)
    ws = np.linspace(-grid.w_max, grid.w_max, grid.n_w + 1)
    weight = (1.0 + ws * ws) ** (eta / 2.0)

    def row_max(phi: float) -> Tuple[float, float]:
        vals = np.abs(evaluate_transform(f, phi, ws)) * weight
        k = int(np.argmax(vals))
        return float(vals[k]), float(ws[k])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row_max, phis))
    else:
        rows = [row_max(phi) for phi in phis]

    best = int(np.argmax([r[0] for r in rows]))
    certificate = None
    if Config.is_feature_enabled("tail_certificates"):
        certificate = uniform_certificate(f, eta) if eta <= 2.0 else None
    logger.debug(f"kappa_eta({f.describe()}, {eta}) grid max {rows[best][0]:.6g}")
    return KappaEstimate(rows[best][0], certificate, float(phis[best]), rows[best][1])


def schrodinger_residual(f: Window, phi: float, w: float, h: float = 1e-3) -> float:
    """|(i/2pi) d_phi u - (1/2)(-(1/4pi^2) d_w^2 + w^2) u| for u = e^{i pi sigma/4} f_phi"""
    phis = np.array([phi - h, phi, phi + h, phi, phi])
    ws = np.array([w, w, w, w - h, w + h])
    vals = evaluate_transform(f, phis, ws)
    raw = vals * np.exp(1j * PI * np.array([sigma_phi(p) for p in phis]) / 4.0)
    d_phi = (raw[2] - raw[0]) / (2.0 * h)
    d_ww = (raw[4] - 2.0 * raw[1] + raw[3]) / (h * h)
    lhs = 1j / (2.0 * PI) * d_phi
    rhs = 0.5 * (-d_ww / (4.0 * PI * PI) + w * w * raw[1])
    return float(abs(lhs - rhs))


def l2_norm_of_transform(f: Window, phi: float, w_max: float = 64.0) -> L2Result:
    """||f_phi||_2 on [-W, W] by composite Gauss-Legendre, with an envelope tail estimate"""
    phi0 = float(reduce_phase(np.array([float(phi)]))[0][0])
    if phi0 == 0.0:
        return L2Result(f.norms.l2, 0.0)
    panel = min(0.25, max(1e-3, 0.25 * math.sin(phi0)))
    panels = int(math.ceil(2.0 * w_max / panel))
    edges = np.linspace(-w_max, w_max, panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    nodes = (edges[:-1, None] + half * (GL16_NODES[None, :] + 1.0)).ravel()
    weights = np.tile(GL16_WEIGHTS, panels) * half
    values = np.abs(evaluate_transform(f, phi, nodes)) ** 2
    total = float(np.dot(weights, values))

    outer = np.abs(nodes) >= 0.5 * w_max
    envelope = float(np.max(np.sqrt(values[outer]) * np.abs(nodes[outer]))) if outer.any() else 0.0
    tail = 2.0 * envelope ** 2 / w_max
    return L2Result(math.sqrt(total), tail)
