# measures.py
"""
Exact inverse-CDF samplers for the invariant probability measures on the
fundamental domain and their densities.

Streams are counter-based (numpy Philox keyed by (seed, stream_id)), and a
batch of M samples is split into Config.CHUNK_SIZE blocks with one stream per
block, so a batch is the same bit for bit whatever the worker count.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Any, Callable, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import integrate

from config import Config
from errors import OutsideFundamentalDomain, ParameterOutOfRange, numerical_guard
from group import in_fundamental_domain
from theta import ThetaPoint, ThetaPoints

logger = logging.getLogger(__name__)

# xi for the rational-case measure, stored exactly
ATOMS: Tuple[Tuple[float, float], ...] = ((0.0, 0.0), (0.5, 0.0), (0.0, 0.5))
MU_DENSITY = 3.0 / math.pi ** 2
MU0_ATOM_DENSITY = 1.0 / math.pi ** 2


class MeasureTag(Enum):
    RATIONAL = "rational"
    IRRATIONAL = "irrational"

    @classmethod
    def parse(cls, value) -> "MeasureTag":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ParameterOutOfRange(f"unknown case {value!r}; use rational or irrational", operation="measures")


@dataclass(frozen=True)
class RngStream:
    """One reproducible stream of uniforms on [0, 1)"""
    seed: int
    stream_id: int = 0
    path: Tuple[int, ...] = ()
    _generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ParameterOutOfRange(f"seed must fit in 64 bits, got {self.seed}", operation="RngStream")
        key = (int(self.stream_id),) + tuple(int(k) for k in self.path)
        # one uint32 word per key entry keeps distinct keys distinct
        if not all(0 <= k < 2 ** 32 for k in key):
            raise ParameterOutOfRange(f"stream id and spawn offsets must fit in 32 bits, got {key}", operation="RngStream")
        seq = np.random.SeedSequence(entropy=int(self.seed), spawn_key=key)
        object.__setattr__(self, "_generator", np.random.Generator(np.random.Philox(seq)))

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def uniforms(self, size=None):
        return self._generator.random(size)

    def spawn(self, offset: int) -> "RngStream":
        """Independent stream for chunk `offset` of this stream's work; distinct spawn keys never collide"""
        return RngStream(self.seed, self.stream_id, self.path + (int(offset),))


@dataclass
class MeasureSample:
    point: ThetaPoint
    measure_tag: MeasureTag

    def to_dict(self) -> Dict[str, Any]:
        return {**self.point.to_dict(), "tag": self.measure_tag.value}


@dataclass
class SampleBatch:
    """Column form of many MeasureSample draws"""
    points: ThetaPoints
    measure_tag: MeasureTag

    def __len__(self):
        return len(self.points)

    def to_frame(self) -> pd.DataFrame:
        p = self.points
        return pd.DataFrame({
            "x": p.x, "y": p.y, "phi": p.phi, "xi1": p.xi1, "xi2": p.xi2,
            "tag": [self.measure_tag.value] * len(p),
        })

    def samples(self) -> List[MeasureSample]:
        p = self.points
        return [MeasureSample(ThetaPoint(p.x[i], p.y[i], p.phi[i], p.xi1[i], p.xi2[i]), self.measure_tag)
                for i in range(len(p))]


# Inverse CDFs

def base_from_uniforms(x0, y0):
    """x = sin(pi x0 / 3 - pi / 6), y = sqrt(1 - x^2) / (1 - y0)"""
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    if np.any(y0 >= 1.0):
        raise ParameterOutOfRange("y0 must lie in [0, 1)", operation="base_from_uniforms")
    x = np.sin(math.pi * x0 / 3.0 - math.pi / 6.0)
    y = np.sqrt(1.0 - x * x) / (1.0 - y0)
    return x, y


def _open_uniforms(rng: RngStream, size: int) -> np.ndarray:
    """Uniforms on [0, 1) with u = 1 redrawn"""
    u = rng.uniforms(size)
    bad = u >= 1.0
    while bad.any():
        u[bad] = rng.uniforms(int(bad.sum()))
        bad = u >= 1.0
    return u


def _center(u):
    """[0, 1) -> (-1/2, 1/2]"""
    return np.where(u > 0.5, u - 1.0, u)


def _draw_block(tag: MeasureTag, rng: RngStream, size: int) -> ThetaPoints:
    x0 = rng.uniforms(size)
    y0 = _open_uniforms(rng, size)
    x, y = base_from_uniforms(x0, y0)
    phi = math.pi * rng.uniforms(size)
    if tag is MeasureTag.RATIONAL:
        atom = np.minimum((3.0 * rng.uniforms(size)).astype(int), 2)
        xi = np.array(ATOMS)[atom]
        xi1, xi2 = xi[:, 0].copy(), xi[:, 1].copy()
    else:
        xi1 = _center(rng.uniforms(size))
        xi2 = _center(rng.uniforms(size))
    return ThetaPoints(x, y, phi, xi1, xi2)


def sample_base(rng: RngStream, size: Optional[int] = None):
    """(x, y) with density (3 / pi) y^{-2} on the modular fundamental domain"""
    n = 1 if size is None else size
    x, y = base_from_uniforms(rng.uniforms(n), _open_uniforms(rng, n))
    if size is None:
        return float(x[0]), float(y[0])
    return x, y


def _single(tag: MeasureTag, rng: RngStream) -> MeasureSample:
    pts = _draw_block(tag, rng, 1)
    return MeasureSample(ThetaPoint(pts.x[0], pts.y[0], pts.phi[0], pts.xi1[0], pts.xi2[0]), tag)


def sample_mu0(rng: RngStream) -> MeasureSample:
    return _single(MeasureTag.RATIONAL, rng)


def sample_mu(rng: RngStream) -> MeasureSample:
    return _single(MeasureTag.IRRATIONAL, rng)


def chunk_plan(count: int, chunk_size: Optional[int] = None) -> List[Tuple[int, int]]:
    """(offset, size) blocks; stream k draws block k"""
    chunk_size = chunk_size or Config.CHUNK_SIZE
    return [(start, min(chunk_size, count - start)) for start in range(0, count, chunk_size)]


def map_chunks(func: Callable[[int, int, RngStream], Any], count: int, rng: RngStream,
               threads: int = 1) -> List[Any]:
    """Apply func(k, size, stream_k) to every block and return the results in block order"""
    plan = chunk_plan(count)
    jobs = [(k, size, rng.spawn(k)) for k, (_, size) in enumerate(plan)]
    if threads <= 1 or len(jobs) <= 1:
        return [func(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: func(*job), jobs))


def sample_batch(tag, count: int, rng: RngStream, threads: int = 1) -> SampleBatch:
    tag = MeasureTag.parse(tag)
    if count < 0:
        raise ParameterOutOfRange(f"count must be nonnegative, got {count}", operation="sample_batch")
    blocks = map_chunks(lambda k, size, stream: _draw_block(tag, stream, size), count, rng, threads)
    if not blocks:
        empty = np.zeros(0)
        return SampleBatch(ThetaPoints(empty, empty.copy(), empty.copy(), empty.copy(), empty.copy()), tag)
    cols = [np.concatenate([getattr(b, k) for b in blocks]) for k in ("x", "y", "phi", "xi1", "xi2")]
    logger.debug(f"sampled {count} {tag.value} points in {len(blocks)} streams")
    return SampleBatch(ThetaPoints(*cols), tag)


# Densities

def _is_atom(xi1: float, xi2: float) -> bool:
    return (xi1, xi2) in ATOMS


def density(point: ThetaPoint, tag, strict: bool = True) -> float:
    """
    3 / (pi^2 y^2) per unit d(xi) for the irrational case, 1 / (pi^2 y^2) per
    atom for the rational case. Points outside the fundamental domain raise
    OutsideFundamentalDomain, or give 0 with strict=False.
    """
    tag = MeasureTag.parse(tag)
    inside = in_fundamental_domain(point.x, point.y, point.phi, point.xi1, point.xi2)
    if inside and tag is MeasureTag.RATIONAL:
        inside = _is_atom(point.xi1, point.xi2)
    if not inside:
        if strict:
            raise OutsideFundamentalDomain(
                f"point {point.to_dict()} is not in the fundamental domain", operation="density"
            )
        return 0.0
    base = MU0_ATOM_DENSITY if tag is MeasureTag.RATIONAL else MU_DENSITY
    return base / point.y ** 2


def expectation(g: Callable[[float, float], float], epsabs: float = 1e-10) -> float:
    """E[g(x, y)] under the (x, y)-marginal (3 / pi) y^{-2} dx dy"""
    with numerical_guard("expectation"):
        value, _ = integrate.dblquad(
            lambda y, x: 3.0 / math.pi * g(x, y) / (y * y),
            -0.5, 0.5,
            lambda x: math.sqrt(1.0 - x * x), math.inf,
            epsabs=epsabs,
        )
    return value


def total_mass(tag) -> float:
    """Integral of the density over the fundamental domain"""
    tag = MeasureTag.parse(tag)
    with numerical_guard("total_mass"):
        base_mass, _ = integrate.dblquad(
            lambda y, x: 1.0 / (y * y), -0.5, 0.5, lambda x: math.sqrt(1.0 - x * x), math.inf, epsabs=1e-12
        )
    # phi in [0, pi); xi over the unit square or the three atoms
    if tag is MeasureTag.RATIONAL:
        return MU0_ATOM_DENSITY * base_mass * math.pi * len(ATOMS)
    return MU_DENSITY * base_mass * math.pi


def x_marginal_density(x):
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) <= 0.5, 3.0 / (math.pi * np.sqrt(1.0 - x * x)), 0.0)


def x_marginal_cdf(x):
    x = np.clip(np.asarray(x, dtype=float), -0.5, 0.5)
    return 3.0 / math.pi * (np.arcsin(x) + math.pi / 6.0)


def y_survival(y) -> np.ndarray:
    """P(Y > y) in closed form"""
    y = np.asarray(y, dtype=float)
    out = np.ones_like(y)
    high = y >= 1.0
    # for y >= 1 every x in [-1/2, 1/2) is admissible: P = (3 / pi) / y
    out = np.where(high, 3.0 / (math.pi * np.maximum(y, 1e-300)), out)
    mid = (y > math.sqrt(3.0) / 2.0) & ~high
    # sqrt(3)/2 < y < 1: x^2 + y^2 >= 1 cuts the range to |x| >= sqrt(1 - y^2)
    edge = np.sqrt(np.clip(1.0 - y * y, 0.0, None))
    mid_val = 3.0 / math.pi * ((1.0 - 2.0 * edge) / np.maximum(y, 1e-300) + 2.0 * np.arcsin(edge))
    return np.where(mid, mid_val, out)
