# experiments.py
"""
Monte Carlo drivers for the tail laws.

Weyl-sum histograms, sampling of the limiting product statistic under the
invariant measures, equidistribution of reduced horocycle lifts, the
fluctuation statistic, and the finite-y envelope and Markov checks. Every
driver draws through measures.map_chunks, so results depend on the seed and
never on the worker count.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Any, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from config import ActiveConfig, Config
from constants import c_eta, tail_law
from errors import InvalidWindow, ParameterOutOfRange
from group import horocycle_lift, reduce_to_fundamental
from measures import ATOMS, MeasureTag, RngStream, chunk_plan, map_chunks, sample_batch
from oscillator import GridSpec, evaluate_transform, kappa_eta
from theta import ThetaPoint, ThetaPoints, TruncationPolicy, theta_batch, theta_product_batch
from weyl import general_product_statistic, weyl_sum_array
from windows import Window, chi, smoothing_family

logger = logging.getLogger(__name__)

IRRATIONAL_ALPHA = math.sqrt(2.0)
ATOM_TOL = 1e-9


# Result types

@dataclass
class HistogramData:
    bin_edges: np.ndarray
    counts: np.ndarray
    total: int
    values: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def density(self) -> np.ndarray:
        if self.total == 0:
            return np.zeros_like(self.counts, dtype=float)
        return self.counts / (self.total * np.diff(self.bin_edges))

    def tail_mass(self, R: float) -> float:
        """Fraction of the sampled values strictly above R"""
        if self.values is None or self.total == 0:
            raise ParameterOutOfRange("histogram carries no raw values", operation="tail_mass")
        return float(np.count_nonzero(self.values > R)) / self.total

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "bin_left": self.bin_edges[:-1],
            "bin_right": self.bin_edges[1:],
            "count": self.counts.astype(np.int64),
        })


@dataclass
class TailCheck:
    """Empirical survival at one threshold against a reference probability"""
    R: float
    empirical: float
    reference: float
    stderr: float
    exceedances: int

    @property
    def z_score(self) -> float:
        if self.stderr == 0:
            return 0.0 if self.empirical == self.reference else math.inf
        return (self.empirical - self.reference) / self.stderr

    def within(self, k: float = 3.0, slack: float = 0.0) -> bool:
        return abs(self.empirical - self.reference) <= k * self.stderr + slack

    def to_dict(self) -> Dict[str, Any]:
        return {
            "R": self.R,
            "empirical": self.empirical,
            "reference": self.reference,
            "stderr": self.stderr,
            "exceedances": self.exceedances,
            "z_score": self.z_score,
        }


@dataclass
class TailCurve:
    R: np.ndarray
    empirical: np.ndarray
    asymptotic: np.ndarray
    stderr: np.ndarray
    fluct: np.ndarray
    p_exponent: float
    samples: int

    @property
    def fluct_stderr(self) -> np.ndarray:
        return self.stderr * self.R ** self.p_exponent

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "R": self.R,
            "empirical": self.empirical,
            "asymptotic": self.asymptotic,
            "stderr": self.stderr,
            "fluct": self.fluct,
        })


@dataclass
class LimitLawSample:
    """|Theta_f1 conj(Theta_f2)| at measure samples"""
    values: np.ndarray
    case: MeasureTag
    windows: Tuple[str, str]
    tail_estimate: float

    def __len__(self):
        return len(self.values)

    def survival(self, R) -> np.ndarray:
        """P(|Theta_f1 conj(Theta_f2)| > R^2)"""
        return empirical_survival(self.values, np.asarray(R, dtype=float) ** 2)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"value": self.values})


@dataclass
class EquidistRow:
    t: float
    atom_freqs: Optional[Tuple[float, float, float]]
    on_atoms: bool
    ks_x: float
    ks_y: float
    ks_phi: float
    baseline_ks_phi: float

    def to_dict(self) -> Dict[str, Any]:
        freqs = "" if self.atom_freqs is None else ";".join(f"{v:.17g}" for v in self.atom_freqs)
        return {
            "t": self.t,
            "atom_freqs": freqs,
            "ks_x": self.ks_x,
            "ks_y": self.ks_y,
            "ks_phi": self.ks_phi,
            "baseline_ks_phi": self.baseline_ks_phi,
            "on_atoms": self.on_atoms,
        }


@dataclass
class EquidistributionReport:
    case: MeasureTag
    samples: int
    rows: List[EquidistRow]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.to_dict() for row in self.rows])

    def ks_decreasing(self, column: str = "ks_phi") -> bool:
        """Last rung closer to the measure than the first"""
        values = [getattr(row, column) for row in self.rows]
        return len(values) < 2 or values[-1] <= values[0]


@dataclass
class EnvelopeResult:
    max_ratio: float
    c_eta: float
    kappa1: float
    kappa2: float
    samples: int

    @property
    def holds(self) -> bool:
        return 0.0 <= self.max_ratio <= self.c_eta

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_ratio": self.max_ratio,
            "c_eta": self.c_eta,
            "kappa1": self.kappa1,
            "kappa2": self.kappa2,
            "samples": self.samples,
            "holds": self.holds,
        }


@dataclass
class KappaTrend:
    eta: float
    frame: pd.DataFrame
    slope: float

    def to_frame(self) -> pd.DataFrame:
        return self.frame


# Shared helpers

def _stream(rng: Optional[RngStream]) -> RngStream:
    return rng if rng is not None else RngStream(Config.DEFAULT_SEED)


def _check_count(M: int, operation: str):
    if M < 0:
        raise ParameterOutOfRange(f"sample count must be nonnegative, got {M}", operation=operation)


def _draw_x(stream: RngStream, size: int, lam=None) -> np.ndarray:
    """x ~ lambda by inverse CDF; lambda is a frozen scipy.stats distribution, uniform on [0, 1) if None"""
    u = stream.uniforms(size)
    return u if lam is None else np.asarray(lam.ppf(u), dtype=float)


def _concat(blocks: List[np.ndarray], dtype=float) -> np.ndarray:
    return np.concatenate(blocks) if blocks else np.zeros(0, dtype=dtype)


def empirical_survival(values: np.ndarray, thresholds) -> np.ndarray:
    """Fraction of values strictly above each threshold"""
    values = np.sort(np.asarray(values, dtype=float))
    thresholds = np.asarray(thresholds, dtype=float)
    if values.size == 0:
        return np.zeros_like(thresholds)
    above = values.size - np.searchsorted(values, thresholds, side="right")
    return above / values.size


def binomial_stderr(p, M: int) -> np.ndarray:
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    return np.sqrt(p * (1.0 - p) / max(M, 1))


def compare_tail(values: np.ndarray, R_grid: Sequence[float], reference, power: float = 1.0) -> List[TailCheck]:
    """
    P(value > R^power) against reference(R) at every R. The standard error is
    the binomial one at the reference probability.
    """
    values = np.asarray(values, dtype=float)
    M = values.size
    checks = []
    for R in R_grid:
        threshold = float(R) ** power
        count = int(np.count_nonzero(values > threshold))
        ref = float(reference(float(R)))
        checks.append(TailCheck(float(R), count / max(M, 1), ref, float(binomial_stderr(ref, M)), count))
    return checks


def histogram_from_values(values: np.ndarray, bins: int) -> HistogramData:
    if bins < 1:
        raise ParameterOutOfRange(f"bins must be positive, got {bins}", operation="histogram")
    values = np.asarray(values, dtype=float)
    top = float(values.max()) if values.size else 1.0
    # right edge strictly above the maximum; np.histogram closes the last bin
    edges = np.linspace(0.0, max(top, 1e-12) * (1.0 + 1e-9), bins + 1)
    counts, edges = np.histogram(values, bins=edges)
    return HistogramData(edges, counts, int(values.size), values)


def _slice_points(points: ThetaPoints, start: int, stop: int) -> ThetaPoints:
    return ThetaPoints(*(getattr(points, k)[start:stop] for k in ("x", "y", "phi", "xi1", "xi2")))


def _case_params(case: MeasureTag, c: Optional[float], alpha: Optional[float]) -> Tuple[float, float]:
    if case is MeasureTag.RATIONAL:
        return (0.0 if c is None else c, 0.0 if alpha is None else alpha)
    return (0.0 if c is None else c, IRRATIONAL_ALPHA if alpha is None else alpha)


# Direct Weyl sums

def run_weyl_histogram(N: int, M: int, c: float = 0.0, alpha: float = 0.0, bins: Optional[int] = None,
                       rng: Optional[RngStream] = None, threads: int = 1, lam=None) -> HistogramData:
    """Histogram of |S_N(x; c, alpha)| / sqrt(N) over M draws of x"""
    if N < 1:
        raise ParameterOutOfRange(f"N must be positive, got {N}", operation="run_weyl_histogram")
    _check_count(M, "run_weyl_histogram")
    rng = _stream(rng)
    scale = math.sqrt(N)

    def block(k: int, size: int, stream: RngStream) -> np.ndarray:
        x = _draw_x(stream, size, lam)
        return np.abs(weyl_sum_array(x, N, c, alpha)) / scale

    values = _concat(map_chunks(block, M, rng, threads))
    logger.info(f"Weyl histogram: N={N}, M={M}, (c, alpha)=({c:g}, {alpha:g})")
    return histogram_from_values(values, bins or Config.HISTOGRAM_BINS)


def weyl_tail_checks(hist: HistogramData, R_grid: Sequence[float], case: str = "rational") -> List[TailCheck]:
    """P(|S_N| / sqrt(N) > R) against the leading term of the limiting tail"""
    law = tail_law(case)
    return compare_tail(hist.values, R_grid, lambda R: float(law.survival(R)), power=1.0)


# Limiting distribution

def run_limit_law_sampling(case, f1: Optional[Window] = None, f2: Optional[Window] = None, M: int = 0,
                           trunc: Optional[TruncationPolicy] = None, rng: Optional[RngStream] = None,
                           threads: int = 1) -> LimitLawSample:
    """|Theta_f1 conj(Theta_f2)| at M samples of the invariant measure of `case`"""
    case = MeasureTag.parse(case)
    _check_count(M, "run_limit_law_sampling")
    f1 = f1 or chi()
    f2 = f2 or f1
    trunc = trunc or TruncationPolicy.from_preset()
    rng = _stream(rng)
    batch = sample_batch(case, M, rng, threads)
    plan = chunk_plan(M)

    def block(k: int, size: int, _stream: RngStream) -> Tuple[np.ndarray, float]:
        start = plan[k][0]
        pts = _slice_points(batch.points, start, start + size)
        first = theta_batch(f1, pts, trunc)
        if f2 == f1:
            values = np.abs(first.values) ** 2
            tail = 2.0 * first.tail_estimate * np.abs(first.values)
        else:
            second = theta_batch(f2, pts, trunc)
            values = np.abs(first.values) * np.abs(second.values)
            tail = first.tail_estimate * np.abs(second.values) + second.tail_estimate * np.abs(first.values)
        return values, float(tail.max()) if tail.size else 0.0

    results = map_chunks(block, M, rng, threads)
    values = _concat([r[0] for r in results])
    tail = max((r[1] for r in results), default=0.0)
    logger.info(f"limit-law sampling: {case.value}, {f1.describe()} x {f2.describe()}, M={M}, "
                f"max truncation estimate {tail:.3e}")
    return LimitLawSample(values, case, (f1.describe(), f2.describe()), tail)


def limit_tail_checks(sample: LimitLawSample, R_grid: Sequence[float],
                      leading: Optional[float] = None) -> List[TailCheck]:
    """P(|Theta_f1 conj(Theta_f2)| > R^2) against leading * R^-4 (rational) or R^-6 (irrational)"""
    law = tail_law(sample.case.value)
    coef = law.leading_coefficient if leading is None else leading
    return compare_tail(sample.values, R_grid, lambda R: coef * R ** -law.exponent, power=2.0)


# Equidistribution of horocycle lifts

def _reduced_lifts(x: np.ndarray, t: float, c: float, alpha: float) -> ThetaPoints:
    return ThetaPoints.from_points([
        ThetaPoint.from_element(reduce_to_fundamental(horocycle_lift(float(u), t, c, alpha)).reduced)
        for u in x
    ])


def _atom_frequencies(points: ThetaPoints) -> Tuple[Tuple[float, float, float], bool]:
    xi = np.column_stack([points.xi1, points.xi2])
    hits = [np.all(np.abs(xi - np.array(atom)) <= ATOM_TOL, axis=1) for atom in ATOMS]
    on_atoms = bool(np.all(np.any(hits, axis=0))) if len(points) else True
    total = max(len(points), 1)
    return tuple(float(h.sum()) / total for h in hits), on_atoms


def _ks(a: np.ndarray, b: np.ndarray) -> float:
    if a.size == 0 or b.size == 0:
        return 0.0
    return float(stats.ks_2samp(a, b).statistic)


def run_equidistribution_check(t_ladder: Optional[Sequence[float]] = None, M: int = 0, case="rational",
                               rng: Optional[RngStream] = None, lam=None, c: Optional[float] = None,
                               alpha: Optional[float] = None, threads: int = 1) -> EquidistributionReport:
    """
    Reduce the lifts (I; (alpha + c x, 0)) Psi^x Phi^t of M draws of x to the
    fundamental domain and compare their (x, min(y, Y_CAP), phi) marginals
    with direct samples of the measure by two-sample KS distances.
    """
    case = MeasureTag.parse(case)
    _check_count(M, "run_equidistribution_check")
    ladder = list(t_ladder) if t_ladder is not None else list(Config.EQUIDIST_T_LADDER)
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ParameterOutOfRange(f"t ladder must increase, got {ladder}", operation="run_equidistribution_check")
    c, alpha = _case_params(case, c, alpha)
    rng = _stream(rng)
    cap = Config.Y_CAP

    direct = sample_batch(case, M, rng.spawn(1_000), threads).points
    baseline = sample_batch(case, M, rng.spawn(1_001), threads).points
    baseline_phi = _ks(direct.phi, baseline.phi)

    rows = []
    for i, t in enumerate(ladder):
        def block(k: int, size: int, stream: RngStream) -> ThetaPoints:
            return _reduced_lifts(_draw_x(stream, size, lam), t, c, alpha)

        blocks = map_chunks(block, M, rng.spawn(2_000 + i), threads)
        cols = [_concat([getattr(b, k) for b in blocks]) for k in ("x", "y", "phi", "xi1", "xi2")]
        lifted = ThetaPoints(*cols)
        freqs, on_atoms = None, True
        if case is MeasureTag.RATIONAL:
            freqs, on_atoms = _atom_frequencies(lifted)
        row = EquidistRow(
            t=float(t),
            atom_freqs=freqs,
            on_atoms=on_atoms,
            ks_x=_ks(lifted.x, direct.x),
            ks_y=_ks(np.minimum(lifted.y, cap), np.minimum(direct.y, cap)),
            ks_phi=_ks(lifted.phi, direct.phi),
            baseline_ks_phi=baseline_phi,
        )
        logger.debug(f"equidistribution t={t:g}: ks_phi {row.ks_phi:.4f} (baseline {baseline_phi:.4f})")
        rows.append(row)
    logger.info(f"equidistribution check: {case.value}, M={M}, {len(ladder)} rungs")
    return EquidistributionReport(case, M, rows)


# Fluctuation statistic

def tail_curve_from_values(values: np.ndarray, case: str, R_grid: Sequence[float], p_exponent: float,
                           power: float = 2.0) -> TailCurve:
    """(P(value > R^power) - leading R^-k) R^p on the grid, with binomial SE at the reference"""
    law = tail_law(case)
    R = np.asarray(R_grid, dtype=float)
    empirical = empirical_survival(values, R ** power)
    asymptotic = law.survival(R)
    stderr = binomial_stderr(asymptotic, len(values))
    fluct = (empirical - asymptotic) * R ** p_exponent
    return TailCurve(R, empirical, asymptotic, stderr, fluct, p_exponent, len(values))


def run_fluctuation_curve(case, M: int, R_max: Optional[float] = None, p_exponent: Optional[float] = None,
                          rng: Optional[RngStream] = None, points: int = 61, threads: int = 1,
                          trunc: Optional[TruncationPolicy] = None) -> TailCurve:
    """The fluctuation statistic of |Theta_chi|^2 on an R-grid up to R_max"""
    case = MeasureTag.parse(case)
    defaults = Config.get_fluctuation_config(case.value)
    R_max = defaults["R_max"] if R_max is None else R_max
    p_exponent = defaults["p_exponent"] if p_exponent is None else p_exponent
    R_min = defaults["R_min"]
    if R_max <= R_min or points < 2:
        raise ParameterOutOfRange(f"need R_max > {R_min:g} and at least 2 grid points",
                                  operation="run_fluctuation_curve")
    sample = run_limit_law_sampling(case, chi(), chi(), M, trunc, rng, threads)
    return tail_curve_from_values(sample.values, case.value, np.linspace(R_min, R_max, points), p_exponent)


def fluctuation_band_ok(curve: TailCurve, R_lo: float, R_hi: float, k: float = 5.0) -> bool:
    """Fluctuation within k pointwise SE of its SE-weighted mean on [R_lo, R_hi]"""
    mask = (curve.R >= R_lo) & (curve.R <= R_hi)
    if not mask.any():
        return True
    fluct = curve.fluct[mask]
    band = curve.fluct_stderr[mask]
    weights = 1.0 / np.maximum(band, 1e-300) ** 2
    center = float(np.sum(weights * fluct) / np.sum(weights))
    return bool(np.all(np.abs(fluct - center) <= k * band))


def expected_exceedances(case: str, M: int, R: float) -> float:
    """M times the leading-order tail at R"""
    return M * float(tail_law(case).survival(R))


# Finite-y checks

def _require_continuous(f: Window, operation: str):
    if f.poly is None or f.has_jumps:
        raise InvalidWindow(f"{f.describe()} is not a continuous compactly supported window", operation=operation)


def run_l21_envelope_check(f1: Window, f2: Window, eta: float, M: int, rng: Optional[RngStream] = None,
                           grid: Optional[GridSpec] = None, trunc: Optional[TruncationPolicy] = None,
                           threads: int = 1) -> EnvelopeResult:
    """
    max over samples with y >= 1/2 of
    |Theta_f1 conj(Theta_f2) - y^{1/2} (f1)_phi(-theta sqrt y) conj((f2)_phi(-theta sqrt y))|
    / (kappa1 kappa2 y^{-(eta - 1)/2}), with theta = xi2 - k the offset from the nearest integer.
    """
    if not 1.0 < eta <= 2.0:
        raise ParameterOutOfRange(f"eta must lie in (1, 2], got {eta}", operation="run_l21_envelope_check")
    _require_continuous(f1, "run_l21_envelope_check")
    _require_continuous(f2, "run_l21_envelope_check")
    _check_count(M, "run_l21_envelope_check")
    rng = _stream(rng)
    grid = grid or GridSpec.from_config(ActiveConfig)
    kappa1 = kappa_eta(f1, eta, grid, threads).lower
    kappa2 = kappa1 if f2 == f1 else kappa_eta(f2, eta, grid, threads).lower

    points = sample_batch(MeasureTag.IRRATIONAL, M, rng, threads).points
    keep = points.y >= 0.5
    pts = ThetaPoints(*(getattr(points, k)[keep] for k in ("x", "y", "phi", "xi1", "xi2")))
    if len(pts) == 0:
        return EnvelopeResult(0.0, c_eta(eta), kappa1, kappa2, 0)

    product = theta_product_batch(f1, f2, pts, trunc)
    sy = np.sqrt(pts.y)
    offset = pts.xi2 - np.round(pts.xi2)
    w0 = -offset * sy
    main = pts.y ** 0.5 * evaluate_transform(f1, pts.phi, w0) * np.conj(evaluate_transform(f2, pts.phi, w0))
    envelope = kappa1 * kappa2 * pts.y ** (-(eta - 1.0) / 2.0)
    ratios = np.abs(product - main) / envelope
    result = EnvelopeResult(float(ratios.max()), c_eta(eta), kappa1, kappa2, len(pts))
    logger.info(f"envelope check {f1.describe()} x {f2.describe()}, eta={eta:g}: "
                f"max ratio {result.max_ratio:.4g} vs C_eta {result.c_eta:.4g}")
    return result


def run_markov_bound_check(f1: Window, f2: Window, K_grid: Sequence[float], t: float, M: int,
                           rng: Optional[RngStream] = None, c: float = 0.0, alpha: float = 0.0,
                           threads: int = 1) -> pd.DataFrame:
    """lambda(|Theta_f1 conj(Theta_f2)(x + i e^{-t})| > K) against 2 ||f1||_2 ||f2||_2 / K"""
    _check_count(M, "run_markov_bound_check")
    if any(K <= 0 for K in K_grid):
        raise ParameterOutOfRange("K values must be positive", operation="run_markov_bound_check")
    rng = _stream(rng)
    y = math.exp(-t)
    trunc = TruncationPolicy(name="horocycle", n_cap=None)

    def block(k: int, size: int, stream: RngStream) -> np.ndarray:
        x = _draw_x(stream, size)
        pts = ThetaPoints(x, np.full(size, y), np.zeros(size), alpha + c * x, np.zeros(size))
        return np.abs(theta_product_batch(f1, f2, pts, trunc))

    values = _concat(map_chunks(block, M, rng, threads))
    scale = 2.0 * f1.norms.l2 * f2.norms.l2
    rows = []
    for K in K_grid:
        empirical = float(np.count_nonzero(values > K)) / max(M, 1)
        bound = scale / K
        rows.append({"K": float(K), "empirical": empirical, "bound": bound, "holds": empirical <= bound})
    logger.info(f"Markov bound check t={t:g}, M={M}")
    return pd.DataFrame(rows)


def run_product_tail(N: int, a: float, b: float, M: int, R_grid: Sequence[float], c: float = 0.0,
                     alpha: float = 0.0, rng: Optional[RngStream] = None, threads: int = 1) -> pd.DataFrame:
    """
    Tail of (1/N) S_{floor(aN)} conj(S_{floor(bN)}) at R^2 next to the tail of
    the (1, b/a) statistic at N' = floor(aN) and threshold R^2 / a, over the
    same draws of x.
    """
    if N < 1 or not 0.0 < a <= b:
        raise ParameterOutOfRange(f"need N >= 1 and 0 < a <= b, got N={N}, a={a}, b={b}",
                                  operation="run_product_tail")
    _check_count(M, "run_product_tail")
    N_scaled = max(1, int(math.floor(a * N + 1e-9)))
    rng = _stream(rng)

    def block(k: int, size: int, stream: RngStream) -> np.ndarray:
        x = _draw_x(stream, size)
        direct = np.abs(general_product_statistic(N, a, b, x, c, alpha))
        rescaled = np.abs(general_product_statistic(N_scaled, 1.0, b / a, x, c, alpha))
        return np.column_stack([direct, rescaled])

    blocks = map_chunks(block, M, rng, threads)
    values = np.vstack(blocks) if blocks else np.zeros((0, 2))
    R = np.asarray(R_grid, dtype=float)
    direct = empirical_survival(values[:, 0], R ** 2)
    rescaled = empirical_survival(values[:, 1], R ** 2 / a)
    return pd.DataFrame({
        "R": R,
        "direct": direct,
        "rescaled": rescaled,
        "stderr": binomial_stderr(direct, M),
    })


def run_kappa_trend(eta: float, eps_grid: Sequence[float], grid: Optional[GridSpec] = None,
                    threads: int = 1) -> KappaTrend:
    """kappa_eta of the smoothing family T_{0,1}^{eps,eps} next to eps^{-(eta - 1)}"""
    if eta <= 1.0:
        raise ParameterOutOfRange(f"eta must exceed 1, got {eta}", operation="run_kappa_trend")
    grid = grid or GridSpec.from_config(ActiveConfig)
    eps = np.asarray(sorted(eps_grid, reverse=True), dtype=float)
    kappas = np.array([kappa_eta(smoothing_family(e), eta, grid, threads).lower for e in eps])
    reference = eps ** -(eta - 1.0)
    frame = pd.DataFrame({"eps": eps, "kappa": kappas, "reference": reference, "ratio": kappas / reference})
    slope = float(np.polyfit(np.log(eps), np.log(kappas), 1)[0]) if eps.size >= 2 else math.nan
    logger.info(f"kappa trend eta={eta:g}: log-log slope {slope:.3f}")
    return KappaTrend(eta, frame, slope)


def run_rational_vs_irrational(M: int, R_grid: Sequence[float], rng: Optional[RngStream] = None,
                               threads: int = 1, k: float = 3.0) -> pd.DataFrame:
    """Survival of |Theta_chi|^2 under both measures; `separated` when the gap exceeds k joint SE"""
    rng = _stream(rng)
    rational = run_limit_law_sampling(MeasureTag.RATIONAL, chi(), chi(), M, rng=rng.spawn(0), threads=threads)
    irrational = run_limit_law_sampling(MeasureTag.IRRATIONAL, chi(), chi(), M, rng=rng.spawn(1), threads=threads)
    R = np.asarray(R_grid, dtype=float)
    p_rat = rational.survival(R)
    p_irr = irrational.survival(R)
    se_rat = binomial_stderr(p_rat, M)
    se_irr = binomial_stderr(p_irr, M)
    return pd.DataFrame({
        "R": R,
        "rational": p_rat,
        "irrational": p_irr,
        "stderr_rational": se_rat,
        "stderr_irrational": se_irr,
        "separated": (p_rat - p_irr) > k * np.sqrt(se_rat ** 2 + se_irr ** 2),
    })
