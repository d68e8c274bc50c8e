# weyl.py
"""
Quadratic Weyl sums S_N(x; c, alpha) = sum_{n=1}^N e((n^2/2 + c n) x + alpha n)
by a two-term phase recurrence, their window-weighted bilateral versions and
the product statistics (1/N) S_{floor(aN)} conj(S_{floor(bN)}).
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import Config
from errors import ParameterOutOfRange
from windows import Window, WindowKind

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
# terms between exact reseeds of the recurrence
BLOCK = 64
SPLITTER = 134217729.0  # 2^27 + 1
GAUSSIAN_CUTOFF = 1e-16
FLOOR_GUARD = 1e-9


class WeylParams(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    N: int = Field(ge=1, description="Length of the sum")
    x: float = Field(description="Quadratic phase parameter")
    c: float = Field(default=0.0, description="Linear shift of the quadratic phase")
    alpha: float = Field(default=0.0, description="Linear phase")
    window: Optional[Window] = Field(default=None, description="Weight f(n/N) for the bilateral sum")


# Exact products for phases mod 1

def _split(a):
    t = SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    """(p, e) with p = fl(a*b) and p + e = a*b exactly"""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _frac(p):
    return p - np.round(p)


def phase_mod1(n, x, c=0.0, alpha=0.0):
    """(n^2/2 + c n) x + alpha n reduced to [-1/2, 1/2], accurate for |n| < 2^26"""
    n = np.asarray(n, dtype=float)
    x = np.asarray(x, dtype=float)
    half_sq = 0.5 * n * n
    p1, e1 = two_prod(half_sq, x)
    cn, ecn = two_prod(np.asarray(c, dtype=float), n)
    p2, e2 = two_prod(cn, x)
    p3, e3 = two_prod(np.asarray(alpha, dtype=float), n)
    total = _frac(p1) + _frac(p2) + _frac(p3) + (e1 + e2 + e3 + ecn * x)
    return _frac(total)


def _unit(theta):
    return np.exp(1j * TWO_PI * theta)


def partial_weyl_sums(x, stops: Sequence[int], c: float = 0.0, alpha: float = 0.0) -> np.ndarray:
    """S_M(x; c, alpha) for every M in `stops`, sharing one recurrence; shape (len(x), len(stops))"""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    stops = [int(s) for s in stops]
    if any(s < 0 for s in stops):
        raise ParameterOutOfRange("stops must be nonnegative", operation="partial_weyl_sums")
    out = np.zeros((x.size, len(stops)), dtype=complex)
    if not stops or max(stops) == 0:
        return out
    n_max = max(stops)
    order = np.argsort(stops, kind="stable")
    for start in range(0, x.size, Config.CHUNK_SIZE):
        xs = x[start:start + Config.CHUNK_SIZE]
        step = _unit(xs)[:, None]
        powers = np.cumprod(np.concatenate([np.ones((xs.size, 1)), np.repeat(step, BLOCK - 1, axis=1)], axis=1),
                            axis=1)
        acc = np.zeros(xs.size, dtype=complex)
        done = 0
        k = 0
        for n0 in range(1, n_max + 1, BLOCK):
            length = min(BLOCK, n_max - n0 + 1)
            # e(phase(n0)) and the first increment e((n0 + 1/2) x + c x + alpha), both reseeded exactly
            term0 = _unit(phase_mod1(n0, xs, c, alpha))
            ratio0 = _unit(_frac(phase_mod1(n0 + 1, xs, c, alpha) - phase_mod1(n0, xs, c, alpha)))
            ratios = ratio0[:, None] * powers[:, :length]
            terms = term0[:, None] * np.concatenate(
                [np.ones((xs.size, 1)), np.cumprod(ratios[:, :length - 1], axis=1)], axis=1
            )
            partial = np.cumsum(terms, axis=1) + acc[:, None]
            while k < len(order) and stops[order[k]] <= n0 + length - 1:
                m = stops[order[k]]
                if m >= n0:
                    out[start:start + xs.size, order[k]] = partial[:, m - n0]
                else:
                    out[start:start + xs.size, order[k]] = acc
                k += 1
            acc = partial[:, -1]
            done = n0 + length - 1
        while k < len(order):
            out[start:start + xs.size, order[k]] = acc if stops[order[k]] > 0 else 0.0
            k += 1
        logger.debug(f"recurrence chunk {start}: {xs.size} values, {done} terms")
    return out


def weyl_sum(p: WeylParams) -> complex:
    """S_N(x; c, alpha) by the phase recurrence"""
    return complex(partial_weyl_sums(np.array([p.x]), [p.N], p.c, p.alpha)[0, 0])


def weyl_sum_array(x, N: int, c: float = 0.0, alpha: float = 0.0) -> np.ndarray:
    return partial_weyl_sums(x, [N], c, alpha)[:, 0]


def _summation_range(f: Window, N: int) -> range:
    if f.kind is WindowKind.GAUSSIAN:
        reach = math.sqrt(max(0.0, -math.log(GAUSSIAN_CUTOFF / abs(f.amplitude))) / (math.pi * f.width))
        n_max = int(math.ceil(N * reach))
        return range(-n_max, n_max + 1)
    if f.kind is WindowKind.HERMITE1:
        n_max = int(math.ceil(N * 3.5))
        return range(-n_max, n_max + 1)
    lo, hi = f.support
    return range(int(math.floor(lo * N)), int(math.ceil(hi * N)) + 1)


def weighted_weyl_sum(p: WeylParams) -> complex:
    """sum_n f(n/N) e((n^2/2 + c n) x + alpha n) over the support of f"""
    if p.window is None:
        return weyl_sum(p)
    span = _summation_range(p.window, p.N)
    n = np.arange(span.start, span.stop, dtype=float)
    weights = np.asarray(p.window(n / p.N), dtype=float)
    keep = weights != 0.0
    if not keep.any():
        return 0j
    n, weights = n[keep], weights[keep]
    return complex(np.sum(weights * _unit(phase_mod1(n, p.x, p.c, p.alpha))))


def floor_index(b: float, N: int) -> int:
    """floor(bN) with a guard against b*N landing just below an integer"""
    return int(math.floor(b * N + FLOOR_GUARD))


def product_statistic(N: int, b: float, x, c: float = 0.0, alpha: float = 0.0):
    """(1/N) S_N conj(S_{floor(bN)})"""
    return general_product_statistic(N, 1.0, b, x, c, alpha)


def general_product_statistic(N: int, a: float, b: float, x, c: float = 0.0, alpha: float = 0.0):
    """(1/N) S_{floor(aN)} conj(S_{floor(bN)}) for 0 < a <= b"""
    if N < 1 or not 0.0 < a <= b:
        raise ParameterOutOfRange(f"need N >= 1 and 0 < a <= b, got N={N}, a={a}, b={b}",
                                  operation="general_product_statistic")
    scalar = np.ndim(x) == 0
    sums = partial_weyl_sums(np.atleast_1d(x), [floor_index(a, N), floor_index(b, N)], c, alpha)
    values = sums[:, 0] * np.conj(sums[:, 1]) / N
    return complex(values[0]) if scalar else values


def naive_weyl_sums(x, N: int, c: float = 0.0, alpha: float = 0.0) -> np.ndarray:
    """Per-term evaluation with exact phases, the reference for the recurrence"""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = np.arange(1, N + 1, dtype=float)
    out = np.empty(x.size, dtype=complex)
    for i, xi in enumerate(x):
        out[i] = np.sum(_unit(phase_mod1(n, xi, c, alpha)))
    return out
