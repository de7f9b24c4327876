"""
Property suite checking every estimator of the package against closed forms,
high-precision oracles and the guarantees they are built on.

``run_validation()`` runs the full suite; ``run_validation(quick=True)`` uses
smaller sample counts and a wider Monte Carlo tolerance, so that it passes
on the same checks in a fraction of the time.
"""

import time
from dataclasses import dataclass
from decimal import Decimal, localcontext

import numpy as np

from . import config
from .concentration import validate_cosine_bound, validate_thresholds
from .datasets import Dataset, SyntheticSpec, split_train_test, synthesize
from .denoise import (
    ConstantDenoiser,
    EmpiricalDenoiser,
    GaussianDenoiser,
    GaussianModel,
    flow_denoiser,
    gauss_excess_profile,
    tweedie_jacobian_check,
)
from .random import resolve_seed
from .sampler import integrate, integrate_from, sample_terminals, swap_experiment
from .schedule import NoiseSchedule, edm_schedule, sigma_grid, t_to_sigma
from .shells import (
    ShellProjector,
    ShellSpec,
    coverage,
    coverage_bounds,
    disjointness_sigma,
    phi_table,
    shell_membership_rate,
    shell_only_loss,
)
from .spectral import CirculantModel, circulant_matrix, random_symmetric_spectrum, sensitivity_profile


@dataclass(frozen=True)
class Budget:
    """Sample counts and Monte Carlo tolerance of a validation run"""

    shell_samples: int
    coverage_points: int
    coverage_knots: int
    phi_samples: int
    threshold_sizes: tuple
    threshold_trials: int
    n_spectra: int
    trajectories: int
    cosine_draws: int
    objective_samples: int
    n_sigma: float


FULL_BUDGET = Budget(
    shell_samples=1_000_000,
    coverage_points=200,
    coverage_knots=40,
    phi_samples=20_000,
    threshold_sizes=(20, 50, 200),
    threshold_trials=5000,
    n_spectra=50,
    trajectories=256,
    cosine_draws=10_000,
    objective_samples=4000,
    n_sigma=4.0,
)

QUICK_BUDGET = Budget(
    shell_samples=100_000,
    coverage_points=60,
    coverage_knots=10,
    phi_samples=5000,
    threshold_sizes=(20, 50),
    threshold_trials=1000,
    n_spectra=10,
    trajectories=64,
    cosine_draws=2000,
    objective_samples=1000,
    n_sigma=5.0,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


@dataclass(frozen=True)
class ValidationSummary:
    """Outcome of :func:`run_validation`"""

    results: tuple
    quick: bool
    seed: int

    @property
    def passed(self):
        return all(result.passed for result in self.results)

    @property
    def failed(self):
        return tuple(result.name for result in self.results if not result.passed)

    def __str__(self):
        width = max(len(result.name) for result in self.results)
        lines = [
            f"{result.name:<{width}}  {'PASS' if result.passed else 'FAIL'}  {result.detail}"
            for result in self.results
        ]
        lines.append(f"{sum(r.passed for r in self.results)}/{len(self.results)} checks passed")
        return "\n".join(lines)

    def to_dict(self, timings=False):
        results = [result.to_dict() for result in self.results]
        if not timings:
            for result in results:
                del result["seconds"]
        return {"quick": self.quick, "seed": self.seed, "passed": self.passed, "checks": results}


_CHECKS = {}


def register_check(name):
    def decorator(func):
        _CHECKS[name] = func
        return func

    return decorator


def check_names():
    return tuple(_CHECKS)


@register_check("shell-concentration")
def check_shell_concentration(budget, seed):
    """Empirical shell mass is at least 1 - 2 exp(-c) for c = 5"""
    details, passed = [], True
    for dim in (16, 256, 3072):
        spec = ShellSpec(dim, 5.0)
        rate = shell_membership_rate(spec, budget.shell_samples, seed)
        ok = rate.mean >= spec.guaranteed_mass - (budget.n_sigma - 1) * rate.stderr
        passed &= ok
        details.append(f"d={dim}: {rate.mean:.5f}")
    return passed, ", ".join(details)


@register_check("coverage-sandwich")
def check_coverage_sandwich(budget, seed):
    """Coverage lies between its Phi bounds at every knot of a log grid"""
    spec = ShellSpec(64, 5.0)
    train, test = split_train_test(
        SyntheticSpec(
            "two-cluster",
            budget.coverage_points,
            64,
            seed=seed,
            params={"separation": 10.0, "width": 1.0},
        ),
        40,
    )
    table = phi_table(spec, budget.phi_samples, seed + 1)
    violations = 0
    grid = sigma_grid(0.05, 10.0, budget.coverage_knots)
    for k, sigma in enumerate(grid):
        bounds = coverage_bounds(train, spec, test, sigma, table, seed + 2)
        estimate = coverage(train, spec, test, sigma, 25, seed + 3, key=(k,))
        low_tol = budget.n_sigma * np.hypot(estimate.stderr, bounds.lower_stderr)
        high_tol = budget.n_sigma * np.hypot(estimate.stderr, bounds.upper_stderr)
        if bounds.lower > estimate.mean + low_tol or estimate.mean > bounds.upper + high_tol:
            violations += 1
    return violations == 0, f"{violations} violations over {len(grid)} knots"


def _mixture(n_points, dim, seed):
    means = 3.0 * np.random.default_rng(seed).standard_normal((5, dim))
    spec = SyntheticSpec(
        "gaussian-mixture", n_points, dim, seed=seed, params={"means": means, "scales": 1.0}
    )
    return synthesize(spec)


@register_check("weight-thresholds")
def check_weight_thresholds(budget, seed):
    """Self-weight failure rates at sigma_high and sigma_low stay below delta"""
    worst, passed = 0.0, True
    for n_points in budget.threshold_sizes:
        data = _mixture(n_points, 32, seed + n_points)
        for q, delta in ((0.9, 0.1), (0.95, 0.05)):
            result = validate_thresholds(data, 0, q, delta, budget.threshold_trials, seed)
            n = budget.threshold_trials
            tolerance = delta + budget.n_sigma * np.sqrt(delta * (1 - delta) / n)
            passed &= result.fail_high.mean <= tolerance and result.fail_low.mean <= tolerance
            worst = max(worst, result.fail_high.mean - delta, result.fail_low.mean - delta)
    return passed, f"largest excess over delta {worst:.4f}"


def _decimal_denoiser(values, x, sigma):
    """Empirical denoiser evaluated with 200 significant digits"""
    with localcontext() as context:
        context.prec = 200
        scale = 2 * Decimal(float(sigma)) ** 2
        logits = [
            -sum((Decimal(float(a)) - Decimal(float(b))) ** 2 for a, b in zip(x, row)) / scale
            for row in values
        ]
        top = max(logits)
        weights = [(logit - top).exp() for logit in logits]
        total = sum(weights)
        return np.array(
            [
                float(sum(w * Decimal(float(row[k])) for w, row in zip(weights, values)) / total)
                for k in range(values.shape[1])
            ]
        )


@register_check("denoiser-exactness")
def check_denoiser_exactness(budget, seed):
    """Empirical, Gaussian and flow-time denoisers against independent oracles"""
    rng = np.random.default_rng(seed)
    errors = {"empirical": 0.0, "gaussian": 0.0, "flow": 0.0}
    for n_points, dim in ((2, 1), (5, 3), (10, 4)):
        values = rng.standard_normal((n_points, dim))
        x = rng.standard_normal(dim)
        expected = _decimal_denoiser(values, x, 0.6)
        result = EmpiricalDenoiser(Dataset(values))(x, 0.6)
        scale = max(np.max(np.abs(expected)), np.max(np.abs(values)))
        errors["empirical"] = max(errors["empirical"], np.max(np.abs(result - expected)) / scale)

        factor = rng.standard_normal((dim, dim))
        covariance = factor @ factor.T
        mean = rng.standard_normal(dim)
        dense = mean + covariance @ np.linalg.solve(covariance + 0.49 * np.eye(dim), x - mean)
        result = GaussianDenoiser(GaussianModel(mean, covariance))(x, 0.7)
        errors["gaussian"] = max(
            errors["gaussian"], np.max(np.abs(result - dense)) / np.max(np.abs(dense))
        )

        t = rng.uniform(0.2, 0.8)
        expected = EmpiricalDenoiser(Dataset(values))(x, t_to_sigma(t))
        result = flow_denoiser(Dataset(values), t * x, t)
        errors["flow"] = max(errors["flow"], np.max(np.abs(result - expected)) / scale)
    passed = errors["empirical"] <= 1e-12 and errors["gaussian"] <= 1e-10 and errors["flow"] <= 1e-12
    return passed, ", ".join(f"{name} {error:.1e}" for name, error in errors.items())


@register_check("tweedie-jacobian")
def check_tweedie_jacobian(budget, seed):
    """Finite differences agree with the posterior covariance, with second-order error"""
    rng = np.random.default_rng(seed)
    worst, orders = 0.0, []
    for _ in range(3):
        data = Dataset(rng.standard_normal((5, 3)))
        x = rng.standard_normal(3)
        worst = max(worst, tweedie_jacobian_check(data, x, 1.0, fd_step=1e-5))
        coarse = tweedie_jacobian_check(data, x, 1.0, fd_step=1e-2)
        fine = tweedie_jacobian_check(data, x, 1.0, fd_step=5e-3)
        orders.append(np.log2(coarse / fine))
    passed = worst <= 1e-4 and all(abs(order - 2) <= 0.3 for order in orders)
    return passed, f"max rel err {worst:.1e}, orders {', '.join(f'{o:.2f}' for o in orders)}"


@register_check("large-sigma-excess")
def check_large_sigma_excess(budget, seed):
    """The scaled gap to the Gaussian denoiser stays bounded as sigma grows"""
    rng = np.random.default_rng(seed)
    values = rng.standard_normal((40, 8))
    values[:20, 0] += 3.0
    values[20:, 0] -= 3.0
    data = Dataset(values)
    curve = gauss_excess_profile(data, [10.0, 100.0, 1000.0], 40, seed)
    diameter = data.diameter()
    out = EmpiricalDenoiser(data)(data.values, 1e4 * diameter)
    drift = np.max(np.linalg.norm(out - data.mean(), axis=1)) / diameter
    passed = curve.value[2] <= 10 * curve.value[0] and drift <= 1e-4
    return passed, f"excess {curve.value[0]:.3g} -> {curve.value[2]:.3g}, mean drift {drift:.1e}"


@register_check("circulant-bound")
def check_circulant_bound(budget, seed):
    """|q_n| <= TV(h) / (4 n) on random spectra, and q matches a dense solve"""
    worst_slack, worst_dense = np.inf, 0.0
    for i in range(budget.n_spectra):
        dim = (8, 32, 256)[i % 3]
        model = CirculantModel(random_symmetric_spectrum(dim, seed + i))
        profile = sensitivity_profile(model, 1.0)
        slack = profile.bounds - np.abs(profile.q[profile.distances])
        worst_slack = min(worst_slack, float(np.min(slack)))
        if dim <= 64:
            dense = np.linalg.solve(circulant_matrix(model) + np.eye(dim), np.eye(dim))
            worst_dense = max(worst_dense, float(np.max(np.abs(dense[0] - profile.q))))
    passed = worst_slack >= -1e-12 and worst_dense <= 1e-10
    return passed, f"min slack {worst_slack:.2e}, dense error {worst_dense:.1e}"


@register_check("ode-integration")
def check_ode_integration(budget, seed):
    """Exact one-point flow, Gaussian closed form and the orders of both methods"""
    rng = np.random.default_rng(seed)
    x1 = rng.standard_normal(3)
    schedule = edm_schedule(80.0, 0.002, 18)
    z = rng.standard_normal(3)
    states = integrate(EmpiricalDenoiser(Dataset([x1])), schedule, z).states
    expected = x1 + np.outer(schedule.sigmas / 80.0, 80.0 * z - x1)
    linear_error = float(np.max(np.abs(states - expected)))

    isotropic = GaussianDenoiser(GaussianModel(np.zeros(4), np.eye(4)))
    z = rng.standard_normal(4)
    target = np.linalg.norm(80.0 * z) * np.sqrt((1 + 0.002**2) / (1 + 80.0**2))
    gaussian_error = {}
    for n_steps in (40, 200):
        terminal = integrate(isotropic, edm_schedule(80.0, 0.002, n_steps), z).terminal
        gaussian_error[n_steps] = abs(np.linalg.norm(terminal) / target - 1)

    model = GaussianModel([0.5, -0.5, 0.0], np.diag([0.25, 1.0, 4.0]))
    x_start = np.array([1.0, 2.0, -3.0])
    scale = np.sqrt((model.eigenvalues + 0.25) / (model.eigenvalues + 4.0))
    exact = model.mean + (x_start - model.mean) * scale
    orders = {}
    for method in ("euler", "heun"):
        errors = []
        for n_intervals in (40, 80):
            grid = NoiseSchedule(np.linspace(2.0, 0.5, n_intervals + 1))
            terminal = integrate_from(
                GaussianDenoiser(model), grid, x_start, method, final_euler=False
            ).terminal
            errors.append(np.linalg.norm(terminal - exact))
        orders[method] = np.log2(errors[0] / errors[1])

    passed = (
        linear_error <= 1e-10
        and gaussian_error[40] <= 1e-2
        and gaussian_error[200] <= 1e-3
        and abs(orders["euler"] - 1) <= 0.3
        and abs(orders["heun"] - 2) <= 0.3
    )
    return passed, (
        f"one-point {linear_error:.1e}, gaussian {gaussian_error[40]:.1e}/{gaussian_error[200]:.1e}, "
        f"orders euler {orders['euler']:.2f} heun {orders['heun']:.2f}"
    )


@register_check("memorization-flip")
def check_memorization_flip(budget, seed):
    """A Gaussian denoiser on the medium band stops the copying of training points"""
    data = synthesize(
        SyntheticSpec("two-cluster", 32, 16, seed=seed, params={"separation": 1.0, "width": 0.05})
    )
    schedule = edm_schedule(80.0, 0.002, 18)
    base = EmpiricalDenoiser(data)
    baseline, swapped = swap_experiment(
        base,
        GaussianDenoiser(data),
        data,
        schedule,
        budget.trajectories,
        boundaries=(0.14 / 60, 8.4 / 60),
        seed=seed,
    )
    same, identical = swap_experiment(
        base, base, data, schedule, 16, boundaries=(0.01, 1.0), seed=seed
    )
    bit_identical = np.array_equal(same.d1nn, identical.d1nn)
    passed = baseline.rate >= 0.9 and swapped.rate <= 0.1 and bit_identical
    return passed, (
        f"empirical {baseline.rate:.3f}, swapped {swapped.rate:.3f}, "
        f"identical insert {'bit-identical' if bit_identical else 'differs'}"
    )


@register_check("cosine-bound")
def check_cosine_bound(budget, seed):
    """The optimal flow field aligns with the conditional one as often as promised"""
    data = synthesize(
        SyntheticSpec(
            "gaussian-mixture", 10, 512, seed=seed, params={"means": np.zeros((1, 512)), "scales": 1.0}
        )
    )
    report, success = validate_cosine_bound(data, 0, 0.4, 0.01, 8.0, 5.0, budget.cosine_draws, seed)
    if report.vacuous:
        return True, "bound is vacuous"
    passed = success.mean >= 1 - report.delta_total - budget.n_sigma * success.stderr
    return passed, f"bound {report.bound:.4f}, success {success.mean:.4f}, delta {report.delta_total:.2e}"


@register_check("shell-objective")
def check_shell_objective(budget, seed):
    """Different shell projectors all reach zero shell-only loss"""
    rng = np.random.default_rng(seed)
    data = Dataset(4.0 * rng.standard_normal((12, 64)), label="points")
    spec = ShellSpec(64, 2.0)
    sigma = 0.9 * disjointness_sigma(data, spec)
    losses = [
        shell_only_loss(data, spec, denoiser, sigma, budget.objective_samples, seed)
        for denoiser in (
            ShellProjector(data, spec),
            ShellProjector(data, spec, outside=ConstantDenoiser(np.ones(64))),
        )
    ]
    zero = all(loss.mean <= budget.n_sigma * loss.stderr for loss in losses)

    pair = Dataset([[-3.0, 0.0, 0.0], [3.0, 0.0, 0.0]])
    constant = shell_only_loss(
        pair, ShellSpec(3, 0.5), ConstantDenoiser(pair.mean()), 0.5, budget.objective_samples, seed
    )
    analytic = abs(constant.mean - 9.0) <= budget.n_sigma * constant.stderr + 1e-12 * 9.0
    return zero and analytic, (
        f"projector losses {losses[0].mean:.1e}, {losses[1].mean:.1e}; constant {constant.mean:.6g}"
    )


@register_check("worker-determinism")
def check_worker_determinism(budget, seed):
    """Estimates do not depend on the number of worker threads"""
    train, test = split_train_test(
        SyntheticSpec("two-cluster", 50, 16, seed=seed, params={"separation": 4.0, "width": 1.0}), 10
    )
    denoiser = EmpiricalDenoiser(train)
    schedule = edm_schedule(10.0, 0.01, 10)
    outputs = []
    for n_workers in (1, 4):
        with config.config_context(n_workers=n_workers, chunk_size=64):
            outputs.append(
                (
                    coverage(train, ShellSpec(16, 5.0), test, 1.0, 50, seed),
                    sample_terminals(denoiser, schedule, 200, seed=seed),
                )
            )
    (cov_1, terminals_1), (cov_4, terminals_4) = outputs
    passed = cov_1 == cov_4 and np.array_equal(terminals_1, terminals_4)
    return passed, "identical" if passed else "results depend on n_workers"


def run_validation(quick=False, seed=0, checks=None, verbose=0):
    """Runs the property suite

    Parameters
    ----------
    quick : bool, default is False
        use :data:`QUICK_BUDGET` instead of :data:`FULL_BUDGET`
    seed : int, default is 0
    checks : list of str, optional
        subset of :func:`check_names`, all checks by default
    verbose : int, default is 0
        if > 0, prints every result as it completes

    Returns
    -------
    ValidationSummary
    """
    budget = QUICK_BUDGET if quick else FULL_BUDGET
    seed = resolve_seed(seed)
    names = check_names() if checks is None else tuple(checks)
    unknown = sorted(set(names) - set(_CHECKS))
    if unknown:
        raise ValueError(f"Unknown checks {unknown}, known checks are {list(_CHECKS)}.")

    results = []
    for name in names:
        start = time.perf_counter()
        passed, detail = _CHECKS[name](budget, seed)
        result = CheckResult(name, bool(passed), detail, time.perf_counter() - start)
        if verbose:
            print(f"{name}: {'PASS' if result.passed else 'FAIL'} ({detail}) [{result.seconds:.1f}s]")
        results.append(result)
    return ValidationSummary(tuple(results), bool(quick), seed)
