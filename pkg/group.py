# group.py
"""
Arithmetic on G = ASL(2,R): composition, Iwasawa coordinates, flows,
the generators of Gamma and reduction to the fundamental domain.

An element (M; xi) acts by (M; xi)(M'; xi') = (MM'; xi + M xi').
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

import numpy as np

from errors import DegenerateMatrix, NonConvergence, recovery_engine

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
DET_TOLERANCE = 1e-6
PHI_SNAP = 1e-14
BOUNDARY_EPS = 1e-12
MAX_REDUCTION_STEPS = 10_000


@dataclass(frozen=True)
class GroupElement:
    """(M; xi) with M = [[m11, m12], [m21, m22]] unimodular"""
    m11: float
    m12: float
    m21: float
    m22: float
    xi1: float = 0.0
    xi2: float = 0.0

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def xi(self) -> np.ndarray:
        return np.array([self.xi1, self.xi2])

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def to_dict(self):
        return {
            "m11": self.m11, "m12": self.m12, "m21": self.m21, "m22": self.m22,
            "xi1": self.xi1, "xi2": self.xi2
        }


@dataclass(frozen=True)
class IwasawaCoords:
    x: float
    y: float
    phi: float

    def to_dict(self):
        return {"x": self.x, "y": self.y, "phi": self.phi}


class Generator(Enum):
    """Generators of Gamma; GAMMA1_SQ is (-I; 0)"""
    GAMMA1 = "gamma1"
    GAMMA2 = "gamma2"
    GAMMA3 = "gamma3"
    GAMMA4 = "gamma4"
    GAMMA1_SQ = "gamma1_sq"


class ElementKind(Enum):
    GEODESIC = "geodesic"
    HOROCYCLE = "horocycle"
    GAMMA1 = "gamma1"
    GAMMA2 = "gamma2"
    GAMMA3 = "gamma3"
    GAMMA4 = "gamma4"


@dataclass
class ReductionResult:
    reduced: GroupElement
    # (generator, exponent) pairs, applied by left multiplication in order
    word: List[Tuple[Generator, int]] = field(default_factory=list)

    def to_dict(self):
        return {
            "reduced": self.reduced.to_dict(),
            "word": [(g.value, k) for g, k in self.word]
        }


IDENTITY = GroupElement(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """(MM'; xi + M xi')"""
    return GroupElement(
        g.m11 * h.m11 + g.m12 * h.m21,
        g.m11 * h.m12 + g.m12 * h.m22,
        g.m21 * h.m11 + g.m22 * h.m21,
        g.m21 * h.m12 + g.m22 * h.m22,
        g.xi1 + g.m11 * h.xi1 + g.m12 * h.xi2,
        g.xi2 + g.m21 * h.xi1 + g.m22 * h.xi2,
    )


def inverse(g: GroupElement) -> GroupElement:
    """(M^-1; -M^-1 xi)"""
    a, b, c, d = g.m22, -g.m12, -g.m21, g.m11
    return GroupElement(a, b, c, d, -(a * g.xi1 + b * g.xi2), -(c * g.xi1 + d * g.xi2))


def power(g: GroupElement, k: int) -> GroupElement:
    base = g if k >= 0 else inverse(g)
    result = IDENTITY
    for _ in range(abs(k)):
        result = compose(result, base)
    return result


def iwasawa(g: GroupElement) -> IwasawaCoords:
    """M = n_x a_y k_phi read off the bottom row (m21, m22) = y^{-1/2}(sin phi, cos phi)"""
    if abs(g.det - 1.0) > DET_TOLERANCE:
        raise DegenerateMatrix(f"det = {g.det!r} deviates from 1", operation="iwasawa")
    r2 = g.m21 * g.m21 + g.m22 * g.m22
    y = 1.0 / r2
    x = (g.m11 * g.m21 + g.m12 * g.m22) / r2
    phi = math.atan2(g.m21, g.m22) % TWO_PI
    if TWO_PI - phi < PHI_SNAP:
        phi = 0.0
    return IwasawaCoords(x, y, phi)


def from_iwasawa(coords: IwasawaCoords, xi1: float = 0.0, xi2: float = 0.0) -> GroupElement:
    """n_x a_y k_phi with k_phi = [[cos, -sin], [sin, cos]]"""
    sy = math.sqrt(coords.y)
    c, s = math.cos(coords.phi), math.sin(coords.phi)
    # n_x a_y = [[sy, x/sy], [0, 1/sy]]
    a, b, d = sy, coords.x / sy, 1.0 / sy
    return GroupElement(a * c + b * s, -a * s + b * c, d * s, d * c, xi1, xi2)


def geodesic(t: float) -> GroupElement:
    """Phi^t = (diag(e^{-t/2}, e^{t/2}); 0), Iwasawa y = e^{-t}"""
    return GroupElement(math.exp(-t / 2.0), 0.0, 0.0, math.exp(t / 2.0))


def horocycle(u: float) -> GroupElement:
    """Psi^u = (n_u; 0)"""
    return GroupElement(1.0, u, 0.0, 1.0)


def rotation(phi: float) -> GroupElement:
    return GroupElement(math.cos(phi), -math.sin(phi), math.sin(phi), math.cos(phi))


GAMMA1 = GroupElement(0.0, -1.0, 1.0, 0.0)
GAMMA2 = GroupElement(1.0, 1.0, 0.0, 1.0, 0.5, 0.0)
GAMMA3 = GroupElement(1.0, 0.0, 0.0, 1.0, 1.0, 0.0)
GAMMA4 = GroupElement(1.0, 0.0, 0.0, 1.0, 0.0, 1.0)
MINUS_I = GroupElement(-1.0, 0.0, 0.0, -1.0)


def special_element(kind, param: float = 0.0) -> GroupElement:
    """Flows and generators by kind name; param is t for geodesic, u for horocycle"""
    kind = ElementKind(kind) if not isinstance(kind, ElementKind) else kind
    if kind is ElementKind.GEODESIC:
        return geodesic(param)
    if kind is ElementKind.HOROCYCLE:
        return horocycle(param)
    return {
        ElementKind.GAMMA1: GAMMA1,
        ElementKind.GAMMA2: GAMMA2,
        ElementKind.GAMMA3: GAMMA3,
        ElementKind.GAMMA4: GAMMA4,
    }[kind]


def generator_power(gen: Generator, k: int) -> GroupElement:
    """Closed forms for the powers used by reduction words"""
    if gen is Generator.GAMMA2:
        # (T^k; (k/2, 0)) since T(1/2, 0) = (1/2, 0)
        return GroupElement(1.0, float(k), 0.0, 1.0, 0.5 * k, 0.0)
    if gen is Generator.GAMMA3:
        return GroupElement(1.0, 0.0, 0.0, 1.0, float(k), 0.0)
    if gen is Generator.GAMMA4:
        return GroupElement(1.0, 0.0, 0.0, 1.0, 0.0, float(k))
    if gen is Generator.GAMMA1_SQ:
        return MINUS_I if k % 2 else IDENTITY
    return power(GAMMA1, k % 4)


def apply_word(g: GroupElement, word: List[Tuple[Generator, int]]) -> GroupElement:
    for gen, k in word:
        g = compose(generator_power(gen, k), g)
    return g


def horocycle_lift(u: float, t: float, c: float = 0.0, alpha: float = 0.0) -> GroupElement:
    """(I; (alpha + c u, 0)) Psi^u Phi^t"""
    e = math.exp(t / 2.0)
    return GroupElement(1.0 / e, u * e, 0.0, e, alpha + c * u, 0.0)


def in_fundamental_domain(x: float, y: float, phi: float, xi1: float, xi2: float) -> bool:
    """Half-open conventions: x in [-1/2, 1/2), |z| >= 1 with Re z <= 0 on |z| = 1"""
    if not (-0.5 <= x < 0.5):
        return False
    r2 = x * x + y * y
    if r2 < 1.0 - BOUNDARY_EPS:
        return False
    if r2 <= 1.0 + BOUNDARY_EPS and x > BOUNDARY_EPS:
        return False
    if not (0.0 <= phi < math.pi):
        return False
    return -0.5 < xi1 <= 0.5 and -0.5 < xi2 <= 0.5


def _xi_shift(xi: float) -> int:
    """Integer a with xi - a in (-1/2, 1/2]"""
    return math.ceil(xi - 0.5 - 1e-9)


def reduce_to_fundamental(g: GroupElement) -> ReductionResult:
    """Gauss reduction of z by gamma2/gamma1, then -I for phi, then the xi lattice"""
    if abs(g.det - 1.0) > DET_TOLERANCE:
        raise DegenerateMatrix(f"det = {g.det!r} deviates from 1", operation="reduce_to_fundamental")

    word: List[Tuple[Generator, int]] = []
    current = g
    steps = 0
    while True:
        steps += 1
        if steps > MAX_REDUCTION_STEPS:
            recovery_engine.handle_error("non_convergence", {"steps": steps, "element": g.to_dict()})
            raise NonConvergence(
                f"reduction exceeded {MAX_REDUCTION_STEPS} steps",
                operation="reduce_to_fundamental",
                details={"steps": steps},
            )
        coords = iwasawa(current)
        n = math.floor(coords.x + 0.5 + BOUNDARY_EPS)
        # correct floor rounding so x - n lands in [-1/2, 1/2) without oscillating
        if coords.x - n >= 0.5 - BOUNDARY_EPS:
            n += 1
        elif coords.x - n < -0.5 - BOUNDARY_EPS:
            n -= 1
        if n != 0:
            word.append((Generator.GAMMA2, -n))
            current = compose(generator_power(Generator.GAMMA2, -n), current)
            coords = iwasawa(current)
        r2 = coords.x * coords.x + coords.y * coords.y
        if r2 < 1.0 - BOUNDARY_EPS or (r2 <= 1.0 + BOUNDARY_EPS and coords.x > BOUNDARY_EPS):
            word.append((Generator.GAMMA1, 1))
            current = compose(GAMMA1, current)
            continue
        break

    coords = iwasawa(current)
    if coords.phi >= math.pi:
        word.append((Generator.GAMMA1_SQ, 1))
        current = compose(MINUS_I, current)

    a = _xi_shift(current.xi1)
    if a != 0:
        word.append((Generator.GAMMA3, -a))
        current = compose(generator_power(Generator.GAMMA3, -a), current)
    b = _xi_shift(current.xi2)
    if b != 0:
        word.append((Generator.GAMMA4, -b))
        current = compose(generator_power(Generator.GAMMA4, -b), current)

    if steps > 1000:
        logger.debug(f"reduction took {steps} steps")
    return ReductionResult(current, word)


def right_geodesic(g: GroupElement, t: float) -> GroupElement:
    """g Phi^t"""
    return compose(g, geodesic(t))
