# theta.py
"""
Jacobi theta series on G-coordinates (x + iy, phi; xi) with zeta fixed to 0:

    Theta_f = y^{1/4} e(-xi1 xi2 / 2) sum_n f_phi((n - xi2) sqrt(y)) e((n - xi2)^2 x / 2 + n xi1)

plus the product statistic, truncation control, Gamma-invariance and the
Weyl-sum and dyadic decomposition identities.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from config import ActiveConfig, Config
from errors import ParameterOutOfRange, SlowConvergence, recovery_engine
from group import (
    GAMMA1, GAMMA2, GAMMA3, GAMMA4, TWO_PI,
    GroupElement, IwasawaCoords, compose, from_iwasawa, iwasawa, right_geodesic,
)
from oscillator import evaluate_transform, reduce_phase
from weyl import WeylParams, phase_mod1, weighted_weyl_sum
from windows import Window, WindowKind, add, dilate, delta_block, dyadic_truncation

logger = logging.getLogger(__name__)

MIN_Y = 1e-6
TERM_CHUNK = 2_000_000
GAMMAS = {1: GAMMA1, 2: GAMMA2, 3: GAMMA3, 4: GAMMA4}


class TruncationPolicy(BaseModel):
    """Which n enter the theta series"""
    name: str = Field(default="default", description="Preset name recorded in manifests")
    w_max: float = Field(default=64.0, gt=0, description="Keep |n - xi2| sqrt(y) <= w_max")
    n_cap: Optional[int] = Field(default=200, ge=0, description="Keep |n| <= n_cap; None disables the cap")
    n_range: Optional[Tuple[int, int]] = Field(default=None, description="Fixed inclusive n-range overriding both")

    @classmethod
    def from_preset(cls, name: Optional[str] = None) -> "TruncationPolicy":
        name = name or ActiveConfig.DEFAULT_TRUNCATION
        preset = Config.get_truncation_preset(name)
        resolved = name if name in Config.TRUNCATION_PRESETS else Config.DEFAULT_TRUNCATION
        return cls(name=resolved, w_max=preset["w_max"], n_cap=preset["n_cap"])


@dataclass(frozen=True)
class ThetaPoint:
    x: float
    y: float
    phi: float
    xi1: float = 0.0
    xi2: float = 0.0

    def __post_init__(self):
        if not self.y > 0:
            raise ParameterOutOfRange(f"y must be positive, got {self.y}", operation="ThetaPoint")

    def to_element(self) -> GroupElement:
        return from_iwasawa(IwasawaCoords(self.x, self.y, self.phi), self.xi1, self.xi2)

    @classmethod
    def from_element(cls, g: GroupElement, phi_hint: Optional[float] = None) -> "ThetaPoint":
        """Iwasawa coordinates of g; phi is moved by 2pi multiples to the representative nearest phi_hint"""
        coords = iwasawa(g)
        phi = coords.phi
        if phi_hint is not None:
            phi += TWO_PI * round((phi_hint - phi) / TWO_PI)
        return cls(coords.x, coords.y, phi, g.xi1, g.xi2)

    def to_dict(self) -> Dict[str, float]:
        return {"x": self.x, "y": self.y, "phi": self.phi, "xi1": self.xi1, "xi2": self.xi2}


@dataclass
class ThetaPoints:
    """Columns of points for batched evaluation"""
    x: np.ndarray
    y: np.ndarray
    phi: np.ndarray
    xi1: np.ndarray
    xi2: np.ndarray

    @classmethod
    def from_points(cls, points: List[ThetaPoint]) -> "ThetaPoints":
        cols = np.array([[p.x, p.y, p.phi, p.xi1, p.xi2] for p in points], dtype=float).reshape(-1, 5)
        return cls(*(cols[:, k].copy() for k in range(5)))

    def __len__(self):
        return len(self.x)


@dataclass
class ThetaValue:
    value: complex
    n_range: Tuple[int, int]
    tail_estimate: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "real": self.value.real,
            "imag": self.value.imag,
            "n_min": self.n_range[0],
            "n_max": self.n_range[1],
            "tail_estimate": self.tail_estimate,
        }


@dataclass
class ThetaBatch:
    values: np.ndarray
    n_min: np.ndarray
    n_max: np.ndarray
    tail_estimate: np.ndarray


def _n_bounds(f: Window, pts: ThetaPoints, trunc: TruncationPolicy) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inclusive n-bounds per point and the mask of exact compact evaluations"""
    sy = np.sqrt(pts.y)
    phi0, nu = reduce_phase(np.asarray(pts.phi, dtype=float))
    exact = (phi0 == 0.0) & (f.poly is not None)
    if trunc.n_range is not None:
        lo = np.full(len(pts), int(trunc.n_range[0]), dtype=np.int64)
        hi = np.full(len(pts), int(trunc.n_range[1]), dtype=np.int64)
        return lo, hi, np.zeros(len(pts), dtype=bool)

    slow = (pts.y < MIN_Y) & ~exact
    if slow.any():
        recovery_engine.handle_error("slow_convergence", {"count": int(slow.sum()), "min_y": float(pts.y.min())})
        raise SlowConvergence(
            f"y = {float(pts.y[slow].min()):.3e} below {MIN_Y:g}; reduce to the fundamental domain first",
            operation="theta",
        )

    reach = trunc.w_max / sy
    lo = np.ceil(pts.xi2 - reach)
    hi = np.floor(pts.xi2 + reach)
    if trunc.n_cap is not None:
        lo = np.maximum(lo, -trunc.n_cap)
        hi = np.minimum(hi, trunc.n_cap)

    if exact.any():
        a, b = f.poly.support
        flip = (nu % 2) == 1
        w_lo = np.where(flip, -b, a)
        w_hi = np.where(flip, -a, b)
        lo = np.where(exact, np.ceil(pts.xi2 + w_lo / sy) - 1, lo)
        hi = np.where(exact, np.floor(pts.xi2 + w_hi / sy) + 1, hi)
    return lo.astype(np.int64), hi.astype(np.int64), exact


def _as_points(points) -> ThetaPoints:
    if isinstance(points, ThetaPoints):
        return points
    if isinstance(points, ThetaPoint):
        return ThetaPoints.from_points([points])
    if isinstance(points, (list, tuple)):
        return ThetaPoints.from_points(list(points))
    return ThetaPoints(*(np.asarray(getattr(points, k), dtype=float) for k in ("x", "y", "phi", "xi1", "xi2")))


def theta_batch(f: Window, points, trunc: Optional[TruncationPolicy] = None) -> ThetaBatch:
    """Theta_f at every point; `points` is anything with x, y, phi, xi1, xi2 columns"""
    trunc = trunc or TruncationPolicy.from_preset()
    pts = _as_points(points)
    m = len(pts)
    lo, hi, exact = _n_bounds(f, pts, trunc)
    counts = np.maximum(hi - lo + 1, 0)
    values = np.zeros(m, dtype=complex)
    tails = np.zeros(m)
    sy = np.sqrt(pts.y)

    start = 0
    while start < m:
        # grow the chunk until it holds TERM_CHUNK terms
        csum = np.cumsum(counts[start:])
        stop = start + max(1, int(np.searchsorted(csum, TERM_CHUNK, side="right")))
        sel = np.arange(start, stop)
        cnt = counts[sel]
        total = int(cnt.sum())
        if total:
            local = np.repeat(np.arange(len(sel)), cnt)
            offsets = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
            idx = sel[local]
            n = (lo[idx] + offsets).astype(float)
            w = (n - pts.xi2[idx]) * sy[idx]
            f_vals = evaluate_transform(f, pts.phi[idx], w)
            phase = phase_mod1(n, pts.x[idx], -pts.xi2[idx], pts.xi1[idx]) \
                + 0.5 * pts.xi2[idx] ** 2 * pts.x[idx]
            terms = f_vals * np.exp(2j * math.pi * phase)
            values[sel] = np.bincount(local, weights=terms.real, minlength=len(sel)) \
                + 1j * np.bincount(local, weights=terms.imag, minlength=len(sel))

            first = np.cumsum(cnt) - cnt
            has = cnt > 0
            edge_lo = np.zeros(len(sel))
            edge_hi = np.zeros(len(sel))
            edge_lo[has] = np.abs(f_vals[first[has]]) * np.abs(w[first[has]])
            edge_hi[has] = np.abs(f_vals[first[has] + cnt[has] - 1]) * np.abs(w[first[has] + cnt[has] - 1])
            tails[sel] = (edge_lo + edge_hi) / sy[sel]
        start = stop

    scale = pts.y ** 0.25
    values = scale * np.exp(-1j * math.pi * pts.xi1 * pts.xi2) * values
    tails = np.where(exact, 0.0, scale * tails)
    return ThetaBatch(values, lo, hi, tails)


def theta(f: Window, p: ThetaPoint, trunc: Optional[TruncationPolicy] = None) -> ThetaValue:
    batch = theta_batch(f, p, trunc)
    return ThetaValue(complex(batch.values[0]), (int(batch.n_min[0]), int(batch.n_max[0])),
                      float(batch.tail_estimate[0]))


def theta_product(f1: Window, f2: Window, p: ThetaPoint, trunc: Optional[TruncationPolicy] = None) -> complex:
    """Theta_{f1}(p) conj(Theta_{f2}(p))"""
    return theta(f1, p, trunc).value * theta(f2, p, trunc).value.conjugate()


def theta_product_batch(f1: Window, f2: Window, points, trunc: Optional[TruncationPolicy] = None) -> np.ndarray:
    first = theta_batch(f1, points, trunc).values
    if f2 == f1:
        return np.abs(first) ** 2 + 0j
    return first * np.conj(theta_batch(f2, points, trunc).values)


# Group actions on points

def act_left(gamma: GroupElement, p: ThetaPoint) -> ThetaPoint:
    """gamma * p"""
    return ThetaPoint.from_element(compose(gamma, p.to_element()))


def geodesic_push(p: ThetaPoint, t: float) -> ThetaPoint:
    """p * Phi^t; phi stays on the branch continuous in t"""
    return ThetaPoint.from_element(right_geodesic(p.to_element(), t), phi_hint=p.phi)


@dataclass
class InvarianceCheck:
    """Relative change of the product and the relative truncation slack of both evaluations"""
    change: float
    slack: float

    def holds(self, tol: float) -> bool:
        return self.change <= max(tol, self.slack)

    def to_dict(self) -> Dict[str, float]:
        return {"change": self.change, "slack": self.slack}


def gamma_invariance_report(f1: Window, f2: Window, p: ThetaPoint, gamma_index: int,
                            trunc: Optional[TruncationPolicy] = None) -> InvarianceCheck:
    """
    Compare Theta_{f1} conj(Theta_{f2}) at p and gamma_i p. gamma_1 moves y and
    so changes which terms are kept; its slack is four times the tail estimates.
    """
    if gamma_index not in GAMMAS:
        raise ParameterOutOfRange(f"gamma index must be 1..4, got {gamma_index}", operation="gamma_invariance_check")
    q = act_left(GAMMAS[gamma_index], p)
    a1, a2 = theta(f1, p, trunc), theta(f2, p, trunc)
    b1, b2 = theta(f1, q, trunc), theta(f2, q, trunc)
    before = a1.value * a2.value.conjugate()
    after = b1.value * b2.value.conjugate()
    scale = max(abs(before), 1e-300)
    slack = 4.0 * (abs(a2.value) * a1.tail_estimate + abs(a1.value) * a2.tail_estimate
                   + abs(b2.value) * b1.tail_estimate + abs(b1.value) * b2.tail_estimate) / scale
    return InvarianceCheck(abs(after - before) / scale, slack)


def gamma_invariance_check(f1: Window, f2: Window, p: ThetaPoint, gamma_index: int,
                           trunc: Optional[TruncationPolicy] = None) -> float:
    """Relative change of Theta_{f1} conj(Theta_{f2}) under p -> gamma_i p"""
    return gamma_invariance_report(f1, f2, p, gamma_index, trunc).change


# Identities

def _decay_reach(f: Window, cutoff: float = 1e-16) -> float:
    if f.kind is WindowKind.GAUSSIAN:
        return math.sqrt(max(0.0, -math.log(cutoff / abs(f.amplitude))) / (math.pi * f.width)) + 1.0
    if f.kind is WindowKind.HERMITE1:
        return 4.5
    return max(abs(v) for v in f.support) + 1.0


def weyl_identity_check(f: Window, N: int, x: float, c: float = 0.0, alpha: float = 0.0) -> float:
    """|N^{-1/2} S_N(x; c, alpha; f) - Theta_f(x + i N^{-2}, 0; (alpha + c x, 0))|"""
    if N < 1:
        raise ParameterOutOfRange(f"N must be positive, got {N}", operation="weyl_identity_check")
    direct = weighted_weyl_sum(WeylParams(N=N, x=x, c=c, alpha=alpha, window=f)) / math.sqrt(N)
    policy = TruncationPolicy(name="weyl-identity", w_max=_decay_reach(f), n_cap=None)
    point = ThetaPoint(x, 1.0 / (N * N), 0.0, alpha + c * x, 0.0)
    return abs(direct - theta(f, point, policy).value)


@dataclass
class DyadicCheck:
    linearity: float
    orbit: float

    def to_dict(self) -> Dict[str, float]:
        return {"linearity": self.linearity, "orbit": self.orbit}


def _fixed_range(p: ThetaPoint, w_max: float) -> Tuple[int, int]:
    reach = w_max / math.sqrt(p.y)
    return int(math.ceil(p.xi2 - reach)), int(math.floor(p.xi2 + reach))


def dyadic_decomposition_check(s: float, J: int, p: ThetaPoint, w_max: float = 64.0) -> DyadicCheck:
    """
    Linearity: Theta of chi_s^{(J)} against Theta of its left and right halves.
    Orbit: Theta of chi_{s,L}^{(J)} against sqrt(s) sum_{j<J} 2^{-j/2} Theta_Delta(p Phi^{t_j}),
    t_j = 2 log s - 2 j log 2. Both sides use one fixed n-range, on which the
    identities hold term by term.
    """
    if s < 1 or not 1 <= J <= 8:
        raise ParameterOutOfRange(f"need s >= 1 and 1 <= J <= 8, got s={s}, J={J}",
                                  operation="dyadic_decomposition_check")
    policy = TruncationPolicy(name="fixed", n_range=_fixed_range(p, w_max), n_cap=None)
    full = dyadic_truncation(s, J, "full")
    left = dyadic_truncation(s, J, "left")
    right = dyadic_truncation(s, J, "right")
    lhs = theta(full, p, policy).value
    linearity = abs(lhs - (theta(left, p, policy).value + theta(right, p, policy).value))

    delta = delta_block()
    orbit_sum = 0j
    for j in range(J):
        t = 2.0 * math.log(s) - 2.0 * j * math.log(2.0)
        orbit_sum += 2.0 ** (-j / 2.0) * theta(delta, geodesic_push(p, t), policy).value
    orbit = abs(theta(left, p, policy).value - math.sqrt(s) * orbit_sum)
    logger.debug(f"dyadic check s={s}, J={J}: linearity {linearity:.3e}, orbit {orbit:.3e}")
    return DyadicCheck(linearity, orbit)


def dilation_check(f: Window, t: float, p: ThetaPoint, w_max: float = 64.0) -> float:
    """|Theta_f(p Phi^t) - Theta_{dilate(f, t)}(p)| on one fixed n-range"""
    policy = TruncationPolicy(name="fixed", n_range=_fixed_range(p, w_max), n_cap=None)
    return abs(theta(f, geodesic_push(p, t), policy).value - theta(dilate(f, t), p, policy).value)


def linearity_check(f: Window, g: Window, p: ThetaPoint, w_max: float = 64.0) -> float:
    """|Theta_{f+g} - Theta_f - Theta_g| on one fixed n-range"""
    policy = TruncationPolicy(name="fixed", n_range=_fixed_range(p, w_max), n_cap=None)
    return abs(theta(add(f, g), p, policy).value - theta(f, p, policy).value - theta(g, p, policy).value)
