# constants.py
"""
Explicit constants behind the tail laws: D_rat and D_irr (closed form and
quadrature), zeta bounds, C_eta, K(s), K_L(s), sp-norms, the thresholds
R_0, R(b, eps) and implied constants P, the eta(eps) maps and the
leading-order tail laws.
"""

import logging
import math
from dataclasses import dataclass, asdict
from typing import Dict, Any, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from errors import ParameterOutOfRange, QuadratureFailure, numerical_guard, recovery_engine
from oscillator import GL12_NODES, GL12_WEIGHTS, GL20_NODES, GL20_WEIGHTS, evaluate_transform
from windows import Window, WindowKind, chi

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
PI2 = math.pi ** 2
# exact value at b = 1, used where the quadrature is not wanted
D_IRR_AT_ONE = 3.0
COTH_GUARD = 1e-12

# x = cot(phi) / 2 substitution for D_rat
X_SPLIT = 200.0
D_RAT_TOL = 1e-8

# D_irr grid
PHI_MIN = 1e-3
PHI_RULE_HI = leggauss(12)
PHI_RULE_LO = leggauss(8)
W_RULE = leggauss(12)
D_IRR_TOL = 1e-3

ETA_RAT_MAX = (4.0 + math.sqrt(10.0)) / 6.0
ETA_IRR_MAX = (11.0 + math.sqrt(73.0)) / 16.0


# Zeta

def alternating_zeta(eta: float, terms: int = 30) -> float:
    """sum (-1)^{n-1} n^{-eta} by the Cohen-Villegas-Zagier acceleration"""
    if eta <= 0:
        raise ParameterOutOfRange(f"eta must be positive, got {eta}", operation="alternating_zeta")
    d = (3.0 + math.sqrt(8.0)) ** terms
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    total = 0.0
    for k in range(terms):
        c = b - c
        total += c * (k + 1.0) ** (-eta)
        b = (k + terms) * (k - terms) * b / ((k + 0.5) * (k + 1.0))
    return total / d


def zeta(eta: float) -> float:
    """zeta(eta) = zeta_a(eta) / (1 - 2^{1-eta}) for eta > 1"""
    if eta <= 1.0:
        raise ParameterOutOfRange(f"zeta needs eta > 1, got {eta}", operation="zeta")
    return alternating_zeta(eta) / -math.expm1((1.0 - eta) * LOG2)


def c_of_eta0(eta0: float) -> float:
    """zeta(eta) <= c(eta0) / (eta - 1) on (1, eta0]"""
    if eta0 <= 1.0:
        raise ParameterOutOfRange(f"eta0 must exceed 1, got {eta0}", operation="c_of_eta0")
    e = eta0 - 1.0
    return alternating_zeta(eta0) * (1.0 / LOG2 + 0.5 * e + LOG2 / 12.0 * e * e)


@dataclass
class ZetaSuite:
    eta: float
    zeta: float
    zeta_alt: float
    lower: float
    upper: float
    c_of_eta0: float
    eta0: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def zeta_suite(eta: float, eta0: float = 1.25) -> ZetaSuite:
    if eta <= 1.0:
        raise ParameterOutOfRange(f"zeta_suite needs eta > 1, got {eta}", operation="zeta_suite")
    za = alternating_zeta(eta)
    e = eta - 1.0
    lower = za * (1.0 / (LOG2 * e) + 0.5)
    upper = za * (1.0 / (LOG2 * e) + 0.5 + LOG2 / 12.0 * e)
    return ZetaSuite(eta, zeta(eta), za, lower, upper, c_of_eta0(eta0), eta0)


def c_eta(eta: float) -> float:
    """C_eta = 2^{6 eta} zeta(eta)^2"""
    return 2.0 ** (6.0 * eta) * zeta(eta) ** 2


# Norm formulas

def K(s: float) -> float:
    return 48.0 + 2.0 * s + max(9.0 * s * s, 2.0 / 3.0 * s ** 3)


def K_L(s: float) -> float:
    return 36.0 + 1.25 * s + max(293.0 / 96.0 * s * s, 19.0 / 216.0 * s ** 3)


def kappa_bound(s: float, J: int, eta: float, left: bool = False) -> float:
    """K(s) 2^{(eta-1)J}, or K_L(s) 2^{(eta-1)J} for the left truncation"""
    return (K_L(s) if left else K(s)) * 2.0 ** ((eta - 1.0) * J)


def sp_norm_chi(s: float, J: Optional[int] = None) -> float:
    if J is None:
        return max(2.0 * s, 9.0)
    return max(2.0 * (1.0 - 2.0 ** -J) * s, 9.0)


def sp_norm_chi_left(s: float, J: Optional[int] = None) -> float:
    if J is None:
        return max(s, 9.0)
    return max((1.0 - 2.0 ** -J) * s, 9.0)


# D_rat

def _check_b(b: float, operation: str):
    if not b >= 1.0 or not math.isfinite(b):
        raise ParameterOutOfRange(f"b must be a finite number >= 1, got {b}", operation=operation)


def d_rat(b: float) -> float:
    """2b coth^{-1}(b) + log(b^2 - 1)/2 + (b^2/2) log(1 - 1/b^2), and 2 log 2 at b = 1"""
    _check_b(b, "d_rat")
    if b <= 1.0 + COTH_GUARD:
        return 2.0 * LOG2
    # regrouped by log(b - 1), log(b + 1), log(b) so the b -> 1 limit is stable
    u = b - 1.0
    return 0.5 * u * u * math.log(u) + (b + 0.5 + 0.5 * b * b) * math.log1p(b) - b * b * math.log(b)


def d_rat_extended(b: float) -> float:
    """d_rat continued to 0 < b < 1 by D(chi, chi_b) = b^2 D(chi, chi_{1/b})"""
    if b <= 0:
        raise ParameterOutOfRange(f"b must be positive, got {b}", operation="d_rat_extended")
    return d_rat(b) if b >= 1.0 else b * b * d_rat(1.0 / b)


def _indicator_length(f: Window) -> Optional[float]:
    """s when f is the indicator of (0, s), else None"""
    if f.kind is not WindowKind.INDICATOR or f.poly is None:
        return None
    bps = f.poly.breakpoints
    pieces = [(l, r, c) for l, r, c in zip(bps, bps[1:], f.poly.coeffs) if any(c)]
    if len(pieces) != 1:
        return None
    l, r, c = pieces[0]
    if l != 0.0 or tuple(c) != (1.0, 0.0, 0.0):
        return None
    return r


def _center_value(f: Window) -> float:
    """(f(0-) + f(0+)) / 2"""
    tiny = 1e-12
    return 0.5 * float(f(np.array([-tiny]))[0] + f(np.array([tiny]))[0])


def _reach(f: Window) -> float:
    if f.kind is WindowKind.GAUSSIAN:
        return math.sqrt(max(0.0, math.log(abs(f.amplitude) / 1e-17)) / (math.pi * f.width))
    if f.kind is WindowKind.HERMITE1:
        return 4.5
    return max(abs(v) for v in f.support)


def _oscillatory_tail(power: float, k: float, X: float) -> Tuple[float, float]:
    """(int_X^inf x^{-power} cos(k x) dx, same with sin)"""
    with numerical_guard("d_rat_pair"):
        ic, _ = integrate.quad(lambda x: x ** -power, X, np.inf, weight="cos", wvar=k)
        is_, _ = integrate.quad(lambda x: x ** -power, X, np.inf, weight="sin", wvar=k)
    return ic, is_


def _d_rat_tail(f1: Window, f2: Window, X: float) -> float:
    """Large-x part of 4 int |I_1 I_2|^2 dx, I_j(x) = int e(x v^2) f_j(v) dv"""
    s1, s2 = _indicator_length(f1), _indicator_length(f2)
    if s1 is None or s2 is None:
        a1, a2 = _center_value(f1), _center_value(f2)
        return (a1 * a2) ** 2 / X

    # Fresnel asymptotics for indicators of (0, s)
    tail = 1.0 / (16.0 * X) + (1.0 / s1 ** 2 + 1.0 / s2 ** 2) / (64.0 * PI2 * X * X)
    kappa = 2.0 * math.pi * abs(s1 * s1 - s2 * s2)
    if kappa * X < 1e-9:
        tail += 1.0 / (32.0 * PI2 * s1 * s2 * X * X)
    else:
        cross, _ = _oscillatory_tail(3.0, kappa, X)
        tail += cross / (16.0 * PI2 * s1 * s2)
    for s in (s1, s2):
        ic, is_ = _oscillatory_tail(2.5, 2.0 * math.pi * s * s, X)
        tail -= (ic - is_) / (16.0 * math.pi * s)
    return tail


def _panel_rule(lo: float, hi: float, width: float, nodes: np.ndarray, weights: np.ndarray):
    panels = max(1, int(math.ceil((hi - lo) / width)))
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (edges[:-1, None] + half[:, None] * (nodes[None, :] + 1.0)).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return x, w


def d_rat_pair(f1: Window, f2: Window, tol: float = D_RAT_TOL) -> float:
    """int_0^pi |(f1)_phi(0) (f2)_phi(0)|^2 dphi"""
    freq = 1.0 + _reach(f1) ** 2 + _reach(f2) ** 2
    width = 0.5 / freq

    def integrate_with(nodes, weights) -> float:
        x, w = _panel_rule(0.0, X_SPLIT, width, nodes, weights)
        phi = np.arctan2(1.0, 2.0 * x)
        v1 = np.abs(evaluate_transform(f1, phi, 0.0)) ** 2
        v2 = v1 if f2 == f1 else np.abs(evaluate_transform(f2, phi, 0.0)) ** 2
        # |f_phi(0)|^2 dphi over (0, pi/2], doubled by phi -> pi - phi
        return 2.0 * float(np.dot(w, v1 * v2 * 2.0 / (1.0 + 4.0 * x * x)))

    hi = integrate_with(GL20_NODES, GL20_WEIGHTS)
    lo = integrate_with(GL12_NODES, GL12_WEIGHTS)
    error = abs(hi - lo)
    if error > tol:
        recovery_engine.handle_error("quadrature_failure", {"operation": "d_rat_pair", "estimate": error})
        raise QuadratureFailure(f"D_rat quadrature error {error:.3e} exceeds {tol:g}", operation="d_rat_pair",
                                details={"estimate": error})
    return hi + _d_rat_tail(f1, f2, X_SPLIT)


def d_rat_quadrature(b: float) -> float:
    """Quadrature oracle for d_rat"""
    _check_b(b, "d_rat_quadrature")
    return d_rat_pair(chi(1.0), chi(b))


# D_irr

@dataclass
class IrrResult:
    value: float
    error_estimate: float
    tail_estimate: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def _sixth_power_limit(f1: Window, f2: Window) -> float:
    """int |f1 f2|^3 dw, the phi -> 0 value of the w-integral"""
    if f1.poly is not None and f2.poly is not None:
        lo = max(f1.support[0], f2.support[0])
        hi = min(f1.support[1], f2.support[1])
        if hi <= lo:
            return 0.0
        points = sorted(set(float(v) for v in np.concatenate([f1.poly.breakpoints, f2.poly.breakpoints])
                            if lo < v < hi))
        with numerical_guard("d_irr_pair"):
            value, _ = integrate.quad(lambda w: abs(float(f1(np.array([w]))[0] * f2(np.array([w]))[0])) ** 3,
                                      lo, hi, points=points or None, limit=200)
        return value
    reach = max(_reach(f1), _reach(f2))
    with numerical_guard("d_irr_pair"):
        value, _ = integrate.quad(lambda w: abs(float(f1(np.array([w]))[0] * f2(np.array([w]))[0])) ** 3,
                                  -reach, reach, limit=200)
    return value


def d_irr_pair(f1: Window, f2: Window, tol: float = D_IRR_TOL) -> IrrResult:
    """int_R int_0^pi |(f1)_phi(w) (f2)_phi(w)|^3 dphi dw"""
    W = max(_reach(f1), _reach(f2)) + 4.0
    edges = [PHI_MIN]
    while edges[-1] < 0.5 * math.pi:
        edges.append(min(edges[-1] * math.sqrt(2.0), 0.5 * math.pi))
    edges = np.array(edges)
    envelope = 0.0

    def w_integral(phi: float) -> float:
        nonlocal envelope
        width = min(0.05, max(3e-3, 0.3 * math.sin(phi)))
        w, weights = _panel_rule(-W, W, width, *W_RULE)
        v1 = np.abs(evaluate_transform(f1, phi, w))
        v2 = v1 if f2 == f1 else np.abs(evaluate_transform(f2, phi, w))
        envelope = max(envelope, float(v1[0] * v2[0]) * W * W, float(v1[-1] * v2[-1]) * W * W)
        return float(np.dot(weights, (v1 * v2) ** 3))

    def phi_integral(rule) -> Tuple[float, float, float]:
        nodes, weights = rule
        total = 0.0
        first = None
        for a, b in zip(edges[:-1], edges[1:]):
            half = 0.5 * (b - a)
            for t, wt in zip(nodes, weights):
                phi = a + half * (t + 1.0)
                g = w_integral(phi)
                if first is None:
                    first = (phi, g)
                total += half * wt * g
        return total, first[0], first[1]

    hi, phi1, g1 = phi_integral(PHI_RULE_HI)
    lo, _, _ = phi_integral(PHI_RULE_LO)
    limit = _sixth_power_limit(f1, f2)
    # on (0, PHI_MIN) the w-integral behaves like limit + c sqrt(phi)
    slope = (g1 - limit) / math.sqrt(phi1)
    head = PHI_MIN * limit + 2.0 / 3.0 * slope * PHI_MIN ** 1.5
    # (0, pi/2] doubled by |f_{pi - phi}(w)| = |f_phi(-w)|
    value = 2.0 * (head + hi)
    tail = math.pi * 2.0 * envelope ** 3 / (5.0 * W ** 5)
    error = 2.0 * abs(hi - lo) + tail + abs(slope) * PHI_MIN ** 1.5
    logger.info(f"D_irr({f1.describe()}, {f2.describe()}) = {value:.8f} (error {error:.2e})")
    if error > tol:
        recovery_engine.handle_error("quadrature_failure", {"operation": "d_irr_pair", "estimate": error})
        raise QuadratureFailure(f"D_irr quadrature error {error:.3e} exceeds {tol:g}", operation="d_irr_pair",
                                details={"estimate": error})
    return IrrResult(value, error, tail)


def d_irr(b: float) -> float:
    _check_b(b, "d_irr")
    return d_irr_pair(chi(1.0), chi(b)).value


# Explicit thresholds and implied constants

def eta_of_eps(case: str, eps: float) -> float:
    """eta with error exponent 2 - eps"""
    if not 0.0 < eps <= 1.0:
        raise ParameterOutOfRange(f"eps must lie in (0, 1], got {eps}", operation="eta_of_eps")
    if case == "rational":
        return (7.0 - 3.0 * eps + math.sqrt(3.0 * eps * eps - 18.0 * eps + 25.0)) / (6.0 * (2.0 - eps))
    if case == "irrational":
        return (19.0 - 8.0 * eps + math.sqrt(16.0 * eps * eps - 112.0 * eps + 169.0)) / (16.0 * (2.0 - eps))
    raise ParameterOutOfRange(f"unknown case {case!r}", operation="eta_of_eps")


def error_exponent(case: str, eta: float) -> float:
    if case == "rational":
        return 2.0 * eta / (6.0 * eta * (eta - 1.0) + 1.0)
    if case == "irrational":
        return 6.0 * eta / (16.0 * eta * (eta - 1.0) + 3.0)
    raise ParameterOutOfRange(f"unknown case {case!r}", operation="error_exponent")


def optimal_exponents(case: str, eta: float) -> Tuple[float, float]:
    """(alpha*, beta*)"""
    if case == "rational":
        d = 6.0 * eta * (eta - 1.0) + 1.0
        return 6.0 * eta / d, 2.0 * eta / d
    if case == "irrational":
        d = 16.0 * eta * (eta - 1.0) + 3.0
        return 16.0 * eta / d, 6.0 * eta / d
    raise ParameterOutOfRange(f"unknown case {case!r}", operation="optimal_exponents")


def r0_rat(b: float, eta: float) -> float:
    return (32.0 * K(b) ** 2 * c_eta(eta)) ** (1.0 / eta + 6.0 * (eta - 1.0))


def p_rat(b: float, eta: float) -> float:
    return 2.0 ** 12 * K(b) ** 4 * c_eta(eta) ** 2


def r_rat(b: float, eps: float) -> float:
    return 2.0 ** 38 * K(b) ** 4 / eps ** 2


def implied_rat(b: float, eps: float) -> float:
    return 2.0 ** 42 * K(b) ** 4 / eps ** 4


def r0_irr(b: float, eta: float) -> float:
    return (2.0 ** 5.5 * K(b) ** 2 * c_eta(eta)) ** (1.0 / eta + 16.0 / 3.0 * (eta - 1.0))


def p_irr(b: float, eta: float, d_irr_value: float) -> float:
    return max(2.0 ** 13 * K(b) ** 4 * c_eta(eta) ** 2,
               PI2 * 2.0 ** 24 * sp_norm_chi_left(b) ** 5 / d_irr_value)


def r_irr(b: float, eps: float) -> float:
    return 2.0 ** 39 * K(b) ** 4 / eps ** 2


def implied_irr(b: float, eps: float, d_irr_value: float) -> float:
    return max(2.0 ** 41 * K(b) ** 4 / eps ** 4, 2.0 ** 28 * max(b ** 5, 3.0 ** 10) / d_irr_value)


def smoothing_error_bounds(b: float, J: int) -> Dict[str, float]:
    """Bounds on |D(chi, chi_b) - D(chi^{(J)}, chi_b^{(J)})|"""
    _check_b(b, "smoothing_error_bounds")
    sp = sp_norm_chi(b)
    return {
        "rational": 2.0 ** 5 * sp ** 3 * b * 2.0 ** -J,
        "irrational": 8.0 * math.sqrt(b) * sp ** 5 * 2.0 ** (-J / 2.0),
    }


def _d_irr_for(b: float, d_irr_value: Optional[float]) -> Tuple[float, str]:
    if d_irr_value is not None:
        return d_irr_value, "given"
    if b == 1.0:
        return D_IRR_AT_ONE, "exact"
    return d_irr(b), "quadrature"


@dataclass
class ExplicitConstants:
    b: float
    eta: float
    eps: float
    K: float
    K_L: float
    C_eta: float
    zeta: float
    sp_chi_b: float
    sp_chi_b_left: float
    d_rat: float
    d_irr: float
    d_irr_source: str
    # D_irr(chi, chi_b) >= 3 is conjectured, not proven
    d_irr_conjecture_holds: bool
    eta_rat_of_eps: float
    eta_irr_of_eps: float
    R0_rat: float
    P_rat: float
    R_rat: float
    implied_rat: float
    R0_irr: float
    P_irr: float
    R_irr: float
    implied_irr: float
    corollary_R_rat: float
    corollary_implied_rat: float
    corollary_R_irr: float
    corollary_implied_irr: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def explicit_constants(b: float, eta: float, eps: float, d_irr_value: Optional[float] = None) -> ExplicitConstants:
    _check_b(b, "explicit_constants")
    if not 1.0 < eta <= 2.0:
        raise ParameterOutOfRange(f"eta must lie in (1, 2], got {eta}", operation="explicit_constants")
    if not 0.0 < eps <= 1.0:
        raise ParameterOutOfRange(f"eps must lie in (0, 1], got {eps}", operation="explicit_constants")
    dirr, source = _d_irr_for(b, d_irr_value)
    return ExplicitConstants(
        b=b, eta=eta, eps=eps,
        K=K(b), K_L=K_L(b), C_eta=c_eta(eta), zeta=zeta(eta),
        sp_chi_b=sp_norm_chi(b), sp_chi_b_left=sp_norm_chi_left(b),
        d_rat=d_rat(b), d_irr=dirr, d_irr_source=source,
        d_irr_conjecture_holds=dirr >= D_IRR_AT_ONE - 1e-3,
        eta_rat_of_eps=eta_of_eps("rational", eps), eta_irr_of_eps=eta_of_eps("irrational", eps),
        R0_rat=r0_rat(b, eta), P_rat=p_rat(b, eta), R_rat=r_rat(b, eps), implied_rat=implied_rat(b, eps),
        R0_irr=r0_irr(b, eta), P_irr=p_irr(b, eta, dirr), R_irr=r_irr(b, eps),
        implied_irr=implied_irr(b, eps, dirr),
        corollary_R_rat=2.0 ** 62 / eps ** 2, corollary_implied_rat=2.0 ** 66 / eps ** 4,
        corollary_R_irr=2.0 ** 63 / eps ** 2, corollary_implied_irr=2.0 ** 65 / eps ** 4,
    )


@dataclass
class InequalityCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-12)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def inequality_chain_report(b: float, eta: float, eps: float = 0.5) -> List[InequalityCheck]:
    """Each auxiliary inequality as lhs <= rhs"""
    _check_b(b, "inequality_chain_report")
    k4 = K(b) ** 4
    sp = sp_norm_chi(b)
    sp_l = sp_norm_chi_left(b)
    checks = [
        InequalityCheck("K^4 >= 2^14 b sp(chi_b)^3", 2.0 ** 14 * b * sp ** 3, k4),
        InequalityCheck("K^4 >= 2^10 sp(chi_b,L)^4", 2.0 ** 10 * sp_l ** 4, k4),
        InequalityCheck("K^4 >= 2^7 sqrt(b) sp(chi_b)^5", 2.0 ** 7 * math.sqrt(b) * sp ** 5, k4),
        InequalityCheck("K^2 >= 2^10 b^(1/6) sp(chi_b)^(1/2)", 2.0 ** 10 * b ** (1.0 / 6.0) * sp ** 0.5, K(b) ** 2),
        InequalityCheck("K^2 >= 2^5 b^(3/16) sp(chi_b)^(15/8)", 2.0 ** 5 * b ** (3.0 / 16.0) * sp ** (15.0 / 8.0),
                        K(b) ** 2),
        InequalityCheck("sp(chi_b,L) <= sp(chi_b)", sp_l, sp),
        InequalityCheck("eta_rat(eps) > 1 + eps/10", 1.0 + eps / 10.0, eta_of_eps("rational", eps)),
        InequalityCheck("eta_irr(eps) > 1 + 3 eps/26", 1.0 + 3.0 * eps / 26.0, eta_of_eps("irrational", eps)),
        InequalityCheck("R0_rat(b, eta(eps)) <= R_rat(b, eps)", r0_rat(b, eta_of_eps("rational", eps)),
                        r_rat(b, eps)),
        InequalityCheck("R0_irr(b, eta(eps)) <= R_irr(b, eps)", r0_irr(b, eta_of_eps("irrational", eps)),
                        r_irr(b, eps)),
    ]
    if eta <= ETA_RAT_MAX:
        checks.append(InequalityCheck("R0_rat <= 2^(25+2 sqrt 10) K^4 / (eta-1)^2", r0_rat(b, eta),
                                      2.0 ** (25.0 + 2.0 * math.sqrt(10.0)) * k4 / (eta - 1.0) ** 2))
    if eta <= ETA_IRR_MAX:
        checks.append(InequalityCheck("R0_irr <= 2^(105/4+3 sqrt 73/4) K^4 / (eta-1)^2", r0_irr(b, eta),
                                      2.0 ** (105.0 / 4.0 + 0.75 * math.sqrt(73.0)) * k4 / (eta - 1.0) ** 2))
    if eta <= 1.25:
        checks.append(InequalityCheck("C_eta >= 2^6", 2.0 ** 6, 2.0 ** (6.0 * eta) / (eta - 1.0) ** 2))
    return checks


# Tail laws

@dataclass
class TailLaw:
    case: str
    exponent: int
    leading_coefficient: float
    error_exponent: float
    implied_constant: float
    validity_threshold: float
    form: str

    def survival(self, R) -> np.ndarray:
        """Leading-order P(|statistic| > R^2)"""
        R = np.asarray(R, dtype=float)
        return self.leading_coefficient * R ** -self.exponent

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def tail_law(case: str, b: float = 1.0, form: str = "eps", eta: Optional[float] = None,
             eps: Optional[float] = None, d_irr_value: Optional[float] = None) -> TailLaw:
    """Leading coefficient 2 D(b) / pi^2 with R^-4 (rational) or R^-6 (irrational)"""
    _check_b(b, "tail_law")
    if case not in ("rational", "irrational"):
        raise ParameterOutOfRange(f"unknown case {case!r}", operation="tail_law")
    if form == "eta":
        eta = 1.5 if eta is None else eta
        if not 1.0 < eta <= 2.0:
            raise ParameterOutOfRange(f"eta must lie in (1, 2], got {eta}", operation="tail_law")
    elif form == "eps":
        eps = 0.5 if eps is None else eps
        if not 0.0 < eps <= 1.0:
            raise ParameterOutOfRange(f"eps must lie in (0, 1], got {eps}", operation="tail_law")
    else:
        raise ParameterOutOfRange(f"form must be 'eta' or 'eps', got {form!r}", operation="tail_law")

    if case == "rational":
        leading = 2.0 * d_rat(b) / PI2
        if form == "eta":
            return TailLaw(case, 4, leading, error_exponent(case, eta), p_rat(b, eta), r0_rat(b, eta), form)
        return TailLaw(case, 4, leading, 2.0 - eps, implied_rat(b, eps), r_rat(b, eps), form)

    dirr, _ = _d_irr_for(b, d_irr_value)
    leading = 2.0 * dirr / PI2
    if form == "eta":
        return TailLaw(case, 6, leading, error_exponent(case, eta), p_irr(b, eta, dirr), r0_irr(b, eta), form)
    return TailLaw(case, 6, leading, 2.0 - eps, implied_irr(b, eps, dirr), r_irr(b, eps), form)


def constants_table(b_values: Sequence[float], eta_values: Sequence[float], eps_values: Sequence[float],
                    d_irr_value: Optional[float] = None) -> pd.DataFrame:
    """One row of explicit_constants per (b, eta, eps)"""
    rows = []
    cache: Dict[float, Tuple[float, str]] = {}
    for b in b_values:
        if b not in cache:
            cache[b] = _d_irr_for(b, d_irr_value)
        value, source = cache[b]
        for eta in eta_values:
            for eps in eps_values:
                row = explicit_constants(b, eta, eps, value).to_dict()
                row["d_irr_source"] = source
                rows.append(row)
    return pd.DataFrame(rows)
