"""
Regime characterization from the coverage and posterior-weight curves: the
crossing of both curves, the danger zone where both are high, and the gap
masks that exclude it from training.

The danger zone has no formal definition; it is operationalized here as the
widest run of grid knots where both curves reach their thresholds.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .concentration import w_sigma_curve
from .curves import DiagnosticCurve
from .random import resolve_seed
from .shells import coverage_curve
from .utils.artifacts import write_csv, write_json

DEFAULT_TAU = 0.5
# Both curves must exceed this level at the crossing knot
CROSSING_FLOOR = 0.1
DANGER_ZONE_RULE = "widest-threshold-run"
_LABELS = {
    (True, False): "small",
    (True, True): "danger",
    (False, True): "large",
    (False, False): "transition",
}


@dataclass(frozen=True)
class RegimeReport:
    """Coverage and weight curves with the crossing and the danger zone

    Attributes
    ----------
    coverage_curve, weight_curve : DiagnosticCurve
        on the same noise levels
    crossing_sigma : float or None
    danger_zone : (float, float) or None
        grid knots bounding the zone
    tau_cov, tau_w : float
    """

    coverage_curve: DiagnosticCurve
    weight_curve: DiagnosticCurve
    crossing_sigma: float
    danger_zone: tuple
    tau_cov: float
    tau_w: float

    @property
    def sigma(self):
        return self.coverage_curve.sigma

    def to_dict(self):
        return {
            "sigma": self.sigma.tolist(),
            "coverage": self.coverage_curve.value.tolist(),
            "coverage_stderr": self.coverage_curve.stderr.tolist(),
            "weight": self.weight_curve.value.tolist(),
            "weight_stderr": self.weight_curve.stderr.tolist(),
            "crossing_sigma": self.crossing_sigma,
            "danger_zone": None if self.danger_zone is None else list(self.danger_zone),
            "tau_cov": self.tau_cov,
            "tau_w": self.tau_w,
            "rule": DANGER_ZONE_RULE,
        }

    def to_json(self, path, meta=None):
        return write_json(path, self.to_dict(), meta=meta)


def _check_curves(coverage, weight):
    if not np.array_equal(coverage.sigma, weight.sigma):
        raise ValueError("Coverage and weight curves should share their noise levels.")


def find_crossing(coverage, weight, floor=CROSSING_FLOOR):
    """Knot minimizing |C_sigma - W_sigma| among knots where both exceed `floor`

    Returns None when no knot qualifies.
    """
    _check_curves(coverage, weight)
    eligible = np.flatnonzero((coverage.value > floor) & (weight.value > floor))
    if eligible.size == 0:
        return None
    gaps = np.abs(coverage.value[eligible] - weight.value[eligible])
    return float(coverage.sigma[eligible[np.argmin(gaps)]])


def threshold_runs(mask):
    """(start, stop) index pairs of the maximal runs of True in a boolean vector, stop inclusive"""
    mask = np.asarray(mask, dtype=bool)
    edges = np.diff(np.concatenate([[0], mask.astype(np.int8), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1) - 1
    return list(zip(starts.tolist(), stops.tolist()))


def find_danger_zone(coverage, weight, tau_cov=DEFAULT_TAU, tau_w=DEFAULT_TAU):
    """Widest contiguous knot run with C_sigma >= tau_cov and W_sigma >= tau_w

    Runs are compared by sigma_hi / sigma_lo; ties go to the lower-noise run.

    Returns
    -------
    (sigma_lo, sigma_hi) or None
    """
    _check_curves(coverage, weight)
    sigma = coverage.sigma
    runs = threshold_runs((coverage.value >= tau_cov) & (weight.value >= tau_w))
    if not runs:
        return None
    start, stop = max(runs, key=lambda run: (sigma[run[1]] / sigma[run[0]], -run[0]))
    return float(sigma[start]), float(sigma[stop])


def regime_report(
    dataset,
    test_points,
    spec,
    sigma_grid,
    n_noise=100,
    n_base=None,
    n_weight_noise=400,
    tau_cov=DEFAULT_TAU,
    tau_w=DEFAULT_TAU,
    seed=None,
    verbose=0,
):
    """Coverage and weight curves on one grid, with the crossing and the danger zone

    Parameters
    ----------
    dataset : Dataset
    test_points : Dataset or array
        held-out points for the coverage curve
    spec : ShellSpec
    sigma_grid : SigmaGrid or array
    n_noise : int, default is 100
        noise draws per test point for the coverage
    n_base : int, optional
        base rows of the weight curve, default is min(100, n_points)
    n_weight_noise : int, default is 400
        noise draws per base row for the weight curve
    tau_cov, tau_w : float, default is 0.5
    seed : int, optional
        the coverage draws from seed + 1 so both curves use separate streams
    verbose : int, default is 0

    Returns
    -------
    RegimeReport
    """
    seed = resolve_seed(seed)
    coverage = coverage_curve(dataset, spec, test_points, sigma_grid, n_noise, seed + 1, verbose)
    weight = w_sigma_curve(dataset, sigma_grid, n_base, n_weight_noise, seed, verbose)
    report = RegimeReport(
        coverage_curve=coverage,
        weight_curve=weight,
        crossing_sigma=find_crossing(coverage, weight),
        danger_zone=find_danger_zone(coverage, weight, tau_cov, tau_w),
        tau_cov=float(tau_cov),
        tau_w=float(tau_w),
    )
    if verbose:
        print(f"crossing sigma={report.crossing_sigma}, danger zone={report.danger_zone}")
    return report


def classify_regimes(report):
    """Regime label of every knot of a report

    ``small``: weight high, coverage low; ``large``: weight low, coverage
    high; ``danger``: both high; ``transition``: both low.
    """
    high_cov = report.coverage_curve.value >= report.tau_cov
    high_w = report.weight_curve.value >= report.tau_w
    return [_LABELS[bool(w), bool(c)] for w, c in zip(high_w, high_cov)]


@dataclass(frozen=True)
class GapMask:
    """Noise intervals excluded from training

    Attributes
    ----------
    intervals : tuple of (float, float)
        closed, non-overlapping intervals
    excluded_indices : tuple of int
        schedule knots inside an interval
    excluded_sigmas : tuple of float
    """

    intervals: tuple
    excluded_indices: tuple
    excluded_sigmas: tuple

    def weight(self, sigma):
        """Training weight: 0 inside the gap, 1 elsewhere"""
        sigma = np.asarray(sigma, dtype=np.float64)
        inside = np.zeros(sigma.shape, dtype=bool)
        for low, high in self.intervals:
            inside |= (sigma >= low) & (sigma <= high)
        weight = np.where(inside, 0.0, 1.0)
        return float(weight) if weight.ndim == 0 else weight

    def to_csv(self, path, sigmas, meta=None):
        """Writes the training weight sampled at `sigmas`, columns ``sigma,weight``"""
        sigmas = np.asarray(sigmas, dtype=np.float64).reshape(-1)
        return write_csv(path, ["sigma", "weight"], zip(sigmas, self.weight(sigmas)), meta=meta)

    def to_dict(self):
        return {
            "intervals": [list(interval) for interval in self.intervals],
            "excluded_indices": list(self.excluded_indices),
            "excluded_sigmas": list(self.excluded_sigmas),
        }

    def to_json(self, path, meta=None):
        return write_json(path, self.to_dict(), meta=meta)


def gap_mask(zone, schedule, buffer=0.0):
    """Gap excluding a danger zone from a sampling schedule

    Parameters
    ----------
    zone : RegimeReport or (float, float)
        a report contributes its danger zone
    schedule : NoiseSchedule
    buffer : float, default is 0
        the zone [lo, hi] becomes [lo / (1 + buffer), hi (1 + buffer)] before
        clipping to [sigma_min, sigma_max]

    Returns
    -------
    GapMask
    """
    if isinstance(zone, RegimeReport):
        zone = zone.danger_zone
    if zone is None:
        raise ValueError("No danger zone to exclude.")
    if not buffer >= 0:
        raise ValueError(f"buffer should be nonnegative, got {buffer}.")
    low, high = (float(bound) for bound in zone)
    if not 0 < low <= high:
        raise ValueError(f"Expected a zone with 0 < sigma_lo <= sigma_hi, got ({low}, {high}).")

    low = max(low / (1 + buffer), schedule.sigma_min)
    high = min(high * (1 + buffer), schedule.sigma_max)
    if low > high:
        warnings.warn(
            f"Zone {tuple(zone)} lies outside the schedule range "
            f"[{schedule.sigma_min}, {schedule.sigma_max}]: nothing is excluded.",
            RuntimeWarning,
        )
        return GapMask((), (), ())
    inside = np.flatnonzero((schedule.sigmas >= low) & (schedule.sigmas <= high))
    return GapMask(
        ((low, high),),
        tuple(inside.tolist()),
        tuple(schedule.sigmas[inside].tolist()),
    )
