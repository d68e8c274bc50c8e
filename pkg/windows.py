# windows.py
"""
Window functions for theta sums: indicators, trapezoids, dyadic truncations
and the Gaussian / first Hermite test functions.

Compactly supported windows are stored as piecewise quadratics. Piece i covers
the half-open interval (b_i, b_{i+1}] and its coefficients (c0, c1, c2) are
local about the left endpoint, p(w) = c0 + c1 d + c2 d^2 with d = w - b_i.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Any, List, Tuple, Optional

import numpy as np
from numpy.polynomial import Polynomial

from errors import InvalidInterval, InvalidWindow, UnboundedSupport

logger = logging.getLogger(__name__)

SNAP_RTOL = 1e-13
ROOT_IMAG_TOL = 1e-12
JUMP_TOL = 1e-12

Coeffs = Tuple[float, float, float]


@dataclass(frozen=True)
class PiecewisePoly:
    """Contiguous quadratic pieces; zero outside [breakpoints[0], breakpoints[-1]]"""
    breakpoints: Tuple[float, ...]
    coeffs: Tuple[Coeffs, ...]
    # False for indicators, which vanish at both ends of their support
    closed_right_end: bool = True

    def __post_init__(self):
        if len(self.coeffs) != len(self.breakpoints) - 1:
            raise InvalidWindow(
                f"{len(self.breakpoints)} breakpoints need {len(self.breakpoints) - 1} pieces, got {len(self.coeffs)}",
                operation="PiecewisePoly",
            )
        if any(r <= l for l, r in zip(self.breakpoints, self.breakpoints[1:])):
            raise InvalidWindow("breakpoints must be strictly increasing", operation="PiecewisePoly")

    @property
    def support(self) -> Tuple[float, float]:
        return self.breakpoints[0], self.breakpoints[-1]

    def _snap(self, w: np.ndarray) -> np.ndarray:
        bp = np.asarray(self.breakpoints)
        j = np.clip(np.searchsorted(bp, w), 1, len(bp) - 1)
        lo, hi = bp[j - 1], bp[j]
        nearest = np.where(np.abs(w - lo) <= np.abs(w - hi), lo, hi)
        close = np.abs(w - nearest) <= SNAP_RTOL * np.maximum(1.0, np.abs(nearest))
        return np.where(close, nearest, w)

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        ws = self._snap(w)
        bp = np.asarray(self.breakpoints)
        c = np.asarray(self.coeffs, dtype=float)
        idx = np.searchsorted(bp, ws, side="left") - 1
        inside = (idx >= 0) & (idx < len(c))
        if not self.closed_right_end:
            inside &= ws != bp[-1]
        k = np.clip(idx, 0, len(c) - 1)
        d = ws - bp[k]
        values = c[k, 0] + d * (c[k, 1] + d * c[k, 2])
        out = np.where(inside, values, 0.0)
        return float(out) if out.ndim == 0 else out

    def pieces(self) -> List[Tuple[float, float, Polynomial]]:
        """(left, right, local polynomial in d = w - left) per piece"""
        return [
            (l, r, Polynomial(c))
            for l, r, c in zip(self.breakpoints, self.breakpoints[1:], self.coeffs)
        ]

    def to_dict(self):
        return {
            "breakpoints": list(self.breakpoints),
            "coeffs": [list(c) for c in self.coeffs],
            "closed_right_end": self.closed_right_end,
        }


def _shift_coeffs(c: Coeffs, d0: float) -> Coeffs:
    """Re-expand c0 + c1 d + c2 d^2 about d = d0"""
    c0, c1, c2 = c
    return (c0 + c1 * d0 + c2 * d0 * d0, c1 + 2.0 * c2 * d0, c2)


def _build(segments: List[Tuple[float, float, Coeffs]], closed_right_end: bool = True) -> PiecewisePoly:
    """Assemble sorted, non-overlapping (l, r, coeffs) segments, filling gaps with zeros"""
    segments = [s for s in segments if s[1] > s[0]]
    if not segments:
        raise InvalidWindow("window has empty support", operation="build")
    breakpoints = [segments[0][0]]
    coeffs: List[Coeffs] = []
    for l, r, c in segments:
        if l > breakpoints[-1]:
            coeffs.append((0.0, 0.0, 0.0))
            breakpoints.append(l)
        coeffs.append(tuple(float(v) for v in c))
        breakpoints.append(r)
    return PiecewisePoly(tuple(breakpoints), tuple(coeffs), closed_right_end)


class WindowKind(Enum):
    INDICATOR = "indicator"
    PIECEWISE = "piecewise"
    GAUSSIAN = "gaussian"
    HERMITE1 = "hermite1"


@dataclass(frozen=True)
class WindowNorms:
    l1: float
    l2: float
    linf: float
    tv: float
    compact: bool = True

    @property
    def sp(self) -> float:
        """max{2||f||_1, 3(||f||_inf + V(f))}; undefined without compact support"""
        if not self.compact:
            raise UnboundedSupport("sp norm needs compact support", operation="norms")
        return max(2.0 * self.l1, 3.0 * (self.linf + self.tv))

    def to_dict(self) -> Dict[str, Any]:
        data = {"l1": self.l1, "l2": self.l2, "linf": self.linf, "tv": self.tv}
        data["sp"] = self.sp if self.compact else None
        return data


@dataclass(frozen=True)
class Window:
    """
    A real window. Piecewise kinds carry `poly`; the Gaussian is
    amplitude * exp(-pi * width * w^2) and HERMITE1 is w * exp(-pi w^2).
    """
    kind: WindowKind
    poly: Optional[PiecewisePoly] = None
    amplitude: float = 1.0
    width: float = 1.0
    label: str = field(default="", compare=False)

    @property
    def is_piecewise(self) -> bool:
        return self.poly is not None

    @property
    def is_analytic(self) -> bool:
        return self.kind in (WindowKind.GAUSSIAN, WindowKind.HERMITE1)

    @property
    def support(self) -> Tuple[float, float]:
        if self.poly is None:
            return (-math.inf, math.inf)
        return self.poly.support

    def __call__(self, w):
        if self.poly is not None:
            return self.poly(w)
        w = np.asarray(w, dtype=float)
        if self.kind is WindowKind.GAUSSIAN:
            out = self.amplitude * np.exp(-math.pi * self.width * w * w)
        else:
            out = w * np.exp(-math.pi * w * w)
        return float(out) if out.ndim == 0 else out

    @cached_property
    def norms(self) -> WindowNorms:
        if self.kind is WindowKind.GAUSSIAN:
            a, amp = self.width, abs(self.amplitude)
            return WindowNorms(amp / math.sqrt(a), amp * (2.0 * a) ** -0.25, amp, 2.0 * amp, compact=False)
        if self.kind is WindowKind.HERMITE1:
            peak = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
            return WindowNorms(
                1.0 / math.pi, (4.0 * math.sqrt(2.0) * math.pi) ** -0.5, peak, 4.0 * peak, compact=False
            )
        pieces = [(r - l, p) for l, r, p in self.poly.pieces()]
        return WindowNorms(_l1(pieces), _l2(pieces), _linf(pieces), _tv(pieces))

    @cached_property
    def has_jumps(self) -> bool:
        if self.poly is None:
            return False
        pieces = [(r - l, p) for l, r, p in self.poly.pieces()]
        return any(j > JUMP_TOL for j in _jumps(pieces))

    def describe(self) -> str:
        return self.label or self.kind.value

    def to_dict(self) -> Dict[str, Any]:
        data = {"kind": self.kind.value, "label": self.label}
        if self.poly is not None:
            data["poly"] = self.poly.to_dict()
        else:
            data.update({"amplitude": self.amplitude, "width": self.width})
        return data


# Exact norms of lists of (length, local polynomial)

def _real_roots(p: Polynomial, h: float) -> List[float]:
    if p.degree() < 1:
        return []
    roots = p.roots()
    return sorted(
        float(z.real) for z in np.atleast_1d(roots)
        if abs(z.imag) <= ROOT_IMAG_TOL * max(1.0, abs(z.real)) and 0.0 < z.real < h
    )


def _abs_integral(p: Polynomial, h: float) -> float:
    anti = p.integ()
    cuts = [0.0] + _real_roots(p, h) + [h]
    return float(sum(abs(anti(b) - anti(a)) for a, b in zip(cuts, cuts[1:])))


def _l1(pieces) -> float:
    return sum(_abs_integral(p, h) for h, p in pieces)


def _l2(pieces) -> float:
    total = 0.0
    for h, p in pieces:
        anti = (p * p).integ()
        total += float(anti(h) - anti(0.0))
    return math.sqrt(max(total, 0.0))


def _linf(pieces) -> float:
    best = 0.0
    for h, p in pieces:
        candidates = [0.0, h] + _real_roots(p.deriv(), h)
        best = max(best, max(abs(float(p(d))) for d in candidates))
    return best


def _jumps(pieces) -> List[float]:
    """Jump magnitudes at every breakpoint, including both ends of the support"""
    if not pieces:
        return []
    out = [abs(float(pieces[0][1](0.0)))]
    for (h, p), (_, q) in zip(pieces, pieces[1:]):
        out.append(abs(float(q(0.0)) - float(p(h))))
    h_last, p_last = pieces[-1]
    out.append(abs(float(p_last(h_last))))
    return out


def _tv(pieces) -> float:
    smooth = sum(_abs_integral(p.deriv(), h) for h, p in pieces if p.degree() >= 1)
    return smooth + sum(_jumps(pieces))


def norms(f: Window) -> WindowNorms:
    """L1, L2, sup and total variation of f; `.sp` raises UnboundedSupport off compact support"""
    return f.norms


def h_norm(f: Window, p: int, q: int, norm: str = "L1") -> float:
    """||w^p f^{(q)}|| in L1 or sp, exact from the polynomial pieces"""
    if f.poly is None:
        raise InvalidWindow("h_norm needs a piecewise-polynomial window", operation="h_norm")
    if p not in (0, 1, 2) or q not in (0, 1, 2):
        raise InvalidWindow(f"p, q must lie in {{0, 1, 2}}, got ({p}, {q})", operation="h_norm")
    pieces = []
    for l, r, poly in f.poly.pieces():
        deriv = poly.deriv(q) if q else poly
        pieces.append((r - l, deriv * Polynomial([l, 1.0]) ** p))
    l1 = _l1(pieces)
    if norm.lower() == "l1":
        return l1
    if norm.lower() == "sp":
        return max(2.0 * l1, 3.0 * (_linf(pieces) + _tv(pieces)))
    raise InvalidWindow(f"unknown norm {norm!r}", operation="h_norm")


# Constructors

def trapezoid(a: float, b: float, eps: float, delta: float, label: str = "") -> Window:
    """T_{a,b}^{eps,delta}: 0 outside (a-eps, b+delta), 1 on (a, b], quadratic ramps"""
    if a > b:
        raise InvalidInterval(f"trapezoid needs a <= b, got a={a}, b={b}", operation="trapezoid")
    if eps < 0 or delta < 0:
        raise InvalidInterval("ramp widths must be nonnegative", operation="trapezoid")
    segments = []
    if eps > 0:
        segments.append((a - eps, a - eps / 2.0, (0.0, 0.0, 2.0 / eps ** 2)))
        segments.append((a - eps / 2.0, a, (0.5, 2.0 / eps, -2.0 / eps ** 2)))
    segments.append((a, b, (1.0, 0.0, 0.0)))
    if delta > 0:
        segments.append((b, b + delta / 2.0, (1.0, 0.0, -2.0 / delta ** 2)))
        segments.append((b + delta / 2.0, b + delta, (0.5, -2.0 / delta, 2.0 / delta ** 2)))
    poly = _build(segments)
    return Window(WindowKind.PIECEWISE, poly, label=label or f"T[{a:g},{b:g}]^[{eps:g},{delta:g}]")


def indicator(a: float, b: float, label: str = "") -> Window:
    """Indicator of the open interval (a, b)"""
    if a >= b:
        raise InvalidInterval(f"indicator needs a < b, got a={a}, b={b}", operation="indicator")
    poly = PiecewisePoly((float(a), float(b)), ((1.0, 0.0, 0.0),), closed_right_end=False)
    return Window(WindowKind.INDICATOR, poly, label=label or f"chi({a:g},{b:g})")


def chi(s: float = 1.0) -> Window:
    return indicator(0.0, s, label=f"chi_{s:g}")


def chi_left(s: float = 1.0) -> Window:
    """chi_{s,L} = T_{0,s/3}^{0,s/3}, the J -> infinity limit of the left truncation"""
    return trapezoid(0.0, s / 3.0, 0.0, s / 3.0, label=f"chi_{s:g},L")


def gaussian(amplitude: float = 1.0, width: float = 1.0) -> Window:
    if width <= 0:
        raise InvalidWindow(f"Gaussian width must be positive, got {width}", operation="gaussian")
    return Window(WindowKind.GAUSSIAN, amplitude=float(amplitude), width=float(width), label="gaussian")


def hermite1() -> Window:
    return Window(WindowKind.HERMITE1, label="hermite1")


def delta_block() -> Window:
    """Delta = T_{1/3,1/3}^{1/6,1/3}, the block of the dyadic partition of unity"""
    return trapezoid(1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0, label="Delta")


def delta_minus() -> Window:
    return mirror(delta_block(), label="Delta_-")


def smoothing_family(eps: float) -> Window:
    """T_{0,1}^{eps,eps}; smooths both jumps of the unit indicator"""
    if eps <= 0:
        raise InvalidWindow(f"eps must be positive, got {eps}", operation="smoothing_family")
    return trapezoid(0.0, 1.0, eps, eps, label=f"f_eps({eps:g})")


def dyadic_truncation(s: float, J: int, part: str = "full") -> Window:
    """chi_s^{(J)} and its left/right halves chi_{s,L}^{(J)}, chi_{s,R}^{(J)}"""
    if s < 1 or J < 1:
        raise InvalidWindow(f"dyadic truncation needs s >= 1 and J >= 1, got s={s}, J={J}",
                            operation="dyadic_truncation")
    a = s / (3.0 * 2 ** (J - 1))
    if part == "full":
        return trapezoid(a, s - a, a / 2.0, a / 2.0, label=f"chi_{s:g}^({J})")
    if part == "left":
        return trapezoid(a, s / 3.0, a / 2.0, s / 3.0, label=f"chi_{s:g},L^({J})")
    if part == "right":
        return trapezoid(2.0 * s / 3.0, s - a, s / 3.0, a / 2.0, label=f"chi_{s:g},R^({J})")
    raise InvalidWindow(f"unknown part {part!r}", operation="dyadic_truncation")


# Operations

def partition_sum(w, J_max: int):
    """sum_{j<J_max} Delta(2^j w) + Delta(2^j (1 - w))"""
    delta = delta_block()
    w = np.asarray(w, dtype=float)
    total = np.zeros_like(w)
    for j in range(J_max):
        scale = float(2 ** j)
        total = total + delta(scale * w) + delta(scale * (1.0 - w))
    return float(total) if total.ndim == 0 else total


def dilate(f: Window, t: float) -> Window:
    """w -> e^{-t/4} f(e^{-t/2} w), the geodesic action on windows"""
    if f.kind is WindowKind.HERMITE1:
        raise InvalidWindow("dilation of the Hermite window is not a Hermite window", operation="dilate")
    if f.kind is WindowKind.GAUSSIAN:
        return Window(WindowKind.GAUSSIAN, amplitude=f.amplitude * math.exp(-t / 4.0),
                      width=f.width * math.exp(-t), label=f.label)
    up, down = math.exp(t / 2.0), math.exp(-t / 2.0)
    amp = math.exp(-t / 4.0)
    poly = PiecewisePoly(
        tuple(b * up for b in f.poly.breakpoints),
        tuple((amp * c0, amp * c1 * down, amp * c2 * down * down) for c0, c1, c2 in f.poly.coeffs),
        f.poly.closed_right_end,
    )
    return Window(f.kind, poly, label=f.label)


def mirror(f: Window, label: str = "") -> Window:
    """w -> f(-w)"""
    if f.poly is None:
        if f.kind is WindowKind.HERMITE1:
            raise InvalidWindow("mirror of the Hermite window is its negative", operation="mirror")
        return f
    segments = []
    for l, r, (c0, c1, c2) in zip(f.poly.breakpoints, f.poly.breakpoints[1:], f.poly.coeffs):
        L = r - l
        segments.append((-r, -l, (c0 + c1 * L + c2 * L * L, -c1 - 2.0 * c2 * L, c2)))
    segments.reverse()
    poly = _build(segments, f.poly.closed_right_end)
    return Window(f.kind, poly, label=label or f"{f.describe()}(-w)")


def _piece_at(poly: PiecewisePoly, l: float, r: float) -> Coeffs:
    """Coefficients of `poly` re-expanded about l, for a sub-interval (l, r]"""
    mid = 0.5 * (l + r)
    lo, hi = poly.support
    if mid <= lo or mid >= hi:
        return (0.0, 0.0, 0.0)
    k = int(np.searchsorted(poly.breakpoints, mid, side="left")) - 1
    return _shift_coeffs(poly.coeffs[k], l - poly.breakpoints[k])


def _merge(f: Window, g: Window, cf: float, cg: float, label: str) -> Window:
    if f.poly is None or g.poly is None:
        raise InvalidWindow("sums are defined for piecewise-polynomial windows", operation="add")
    bps = sorted(set(f.poly.breakpoints) | set(g.poly.breakpoints))
    segments = []
    for l, r in zip(bps, bps[1:]):
        a, b = _piece_at(f.poly, l, r), _piece_at(g.poly, l, r)
        segments.append((l, r, tuple(cf * x + cg * y for x, y in zip(a, b))))
    f_hi, g_hi = f.poly.support[1], g.poly.support[1]
    if f_hi > g_hi:
        closed = f.poly.closed_right_end
    elif g_hi > f_hi:
        closed = g.poly.closed_right_end
    else:
        closed = f.poly.closed_right_end or g.poly.closed_right_end
    kind = WindowKind.INDICATOR if f.kind is g.kind is WindowKind.INDICATOR else WindowKind.PIECEWISE
    return Window(kind, _build(segments, closed), label=label)


def add(f: Window, g: Window) -> Window:
    """Pointwise f + g on the merged breakpoint set"""
    return _merge(f, g, 1.0, 1.0, f"{f.describe()}+{g.describe()}")


def scale(f: Window, c: float) -> Window:
    if f.kind is WindowKind.GAUSSIAN:
        return Window(WindowKind.GAUSSIAN, amplitude=c * f.amplitude, width=f.width, label=f.label)
    if f.poly is None:
        raise InvalidWindow("scaling needs a piecewise or Gaussian window", operation="scale")
    poly = PiecewisePoly(
        f.poly.breakpoints,
        tuple(tuple(c * v for v in co) for co in f.poly.coeffs),
        f.poly.closed_right_end,
    )
    kind = WindowKind.PIECEWISE if f.kind is WindowKind.INDICATOR and c != 1.0 else f.kind
    return Window(kind, poly, label=f"{c:g}*{f.describe()}")
