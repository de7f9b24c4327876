"""
Command-line front end, ``memgeom <command> [options]`` or ``python -m memgeom``.

Options come from three layers: built-in defaults, an optional JSON file
(``--config``, keys named after the long options with underscores) and the
command line, each overriding the previous one. Every artifact carries the
library version, the seed, the chunk size and a hash of the resolved options.

Exit codes: 0 on success, 1 on invalid options or input data (or a failed
``validate`` run), 2 when a computation fails.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .concentration import average_thresholds, concentration_thresholds, validate_thresholds
from .config import config_context, get_chunk_size
from .datasets import (
    DatasetError,
    SyntheticSpec,
    SYNTHETIC_KINDS,
    affine_rescale,
    load_dataset,
    save_array,
    split_train_test,
)
from .denoise import ConstantDenoiser, EmpiricalDenoiser, GaussianDenoiser, denoiser_from_dict
from .metrics import MemorizationReport
from .random import stream_rng
from .regime import GapMask, classify_regimes, gap_mask, regime_report
from .sampler import (
    METHODS,
    integrate,
    sample_terminals,
    save_trajectories,
    swap_regions,
    swapped_denoiser,
    trajectory_memorization,
)
from .schedule import edm_schedule, sigma_grid
from .shells import ShellSpec, coverage_bounds, coverage_curve, phi_table
from .spectral import (
    power_law_spectrum,
    random_symmetric_spectrum,
    sensitivity_profile,
    spectrum_concentration_sweep,
    spike_spectrum,
)
from .utils.artifacts import artifact_meta, read_json, write_csv, write_json
from .validation import run_validation

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2

COMMANDS = ("curves", "bounds", "thresholds", "sample", "swap", "gap", "spectral", "validate")
DATA_COMMANDS = ("curves", "bounds", "thresholds", "sample", "swap", "gap")
FORMATS = ("csv", "json")
DENOISER_KINDS = ("empirical", "gaussian", "constant")

# Trajectories written in full by ``sample``
N_SAVED_TRAJECTORIES = 16


class ConfigError(ValueError):
    """Invalid command-line options or configuration file"""


@dataclass
class RunConfig:
    """Resolved options of one command

    Attributes mirror the long command-line options. ``samples`` is the main
    Monte Carlo count of the command, None for the command's own default.
    """

    command: str
    data: str = None
    synthetic: object = None
    test_data: str = None
    rescale: bool = False
    n_points: int = 200
    dim: int = 64
    n_test: int = 40
    c: float = 5.0
    sigma_min: float = 0.002
    sigma_max: float = 80.0
    grid_points: int = 40
    samples: int = None
    seed: int = 0
    out: str = "memgeom-out"
    format: str = "csv"
    workers: int = None
    chunk_size: int = None
    denoiser: str = None
    denoiser_config: str = None
    method: str = "heun"
    steps: int = 18
    rho: float = 7.0
    q: float = 0.9
    delta: float = 0.1
    points: int = 5
    band: tuple = (0.14, 8.4)
    buffer: float = 0.0
    tau_cov: float = 0.5
    tau_w: float = 0.5
    power_law: tuple = (0.5, 1.0, 2.0, 4.0)
    sigma: float = 1.0
    quick: bool = False
    verbose: int = 0

    # options that change how a run goes, not what it produces
    _UNHASHED = ("out", "workers", "verbose")

    @classmethod
    def from_sources(cls, command, file_values=None, flag_values=None):
        """Defaults, overridden by `file_values`, overridden by `flag_values`"""
        known = {f.name: f for f in fields(cls) if f.name != "command"}
        values = {}
        for source in (file_values or {}, flag_values or {}):
            unknown = sorted(set(source) - set(known))
            if unknown:
                raise ConfigError(f"Unknown options {unknown}.")
            values.update(
                {name: _coerce(known[name], value) for name, value in source.items()}
            )
        return cls(command=command, **values)

    def validate(self):
        """Checks option values and that every referenced file exists"""
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}, expected one of {COMMANDS}.")
        if self.data is not None and self.synthetic is not None:
            raise ConfigError("Use either --data or --synthetic, not both.")
        for name in ("data", "test_data", "denoiser_config"):
            path = getattr(self, name)
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"--{name.replace('_', '-')}: {path} does not exist.")
        if self.test_data is not None and self.data is None:
            raise ConfigError("--test-data requires --data.")
        if self.format not in FORMATS:
            raise ConfigError(f"Unknown format {self.format!r}, expected one of {FORMATS}.")
        if self.method not in METHODS:
            raise ConfigError(f"Unknown method {self.method!r}, expected one of {METHODS}.")
        if self.denoiser is not None and self.denoiser not in DENOISER_KINDS:
            raise ConfigError(
                f"Unknown denoiser {self.denoiser!r}, expected one of {DENOISER_KINDS}."
            )
        if not self.sigma_max > self.sigma_min > 0:
            raise ConfigError(
                f"Expected sigma_max > sigma_min > 0, got {self.sigma_min} and {self.sigma_max}."
            )
        for name in ("n_points", "dim", "n_test", "grid_points", "steps", "points"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} should be positive, got {getattr(self, name)}.")
        for name in ("samples", "workers", "chunk_size"):
            value = getattr(self, name)
            if value is not None and int(value) < 1:
                raise ConfigError(f"{name} should be positive, got {value}.")
        if not (0 < self.q < 1 and 0 < self.delta < 1):
            raise ConfigError(f"q and delta should lie in (0, 1), got {self.q} and {self.delta}.")
        if len(self.band) != 2 or not 0 < self.band[0] < self.band[1]:
            raise ConfigError(f"--band needs 0 < LO < HI, got {self.band}.")
        for name in ("c", "rho", "sigma"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} should be positive, got {getattr(self, name)}.")
        if not self.buffer >= 0:
            raise ConfigError(f"buffer should be nonnegative, got {self.buffer}.")
        if isinstance(self.synthetic, str) and self.synthetic not in SYNTHETIC_KINDS:
            raise ConfigError(
                f"Unknown synthetic kind {self.synthetic!r}, expected one of {SYNTHETIC_KINDS}."
            )
        return self

    def to_dict(self):
        return asdict(self)

    def hash_payload(self):
        payload = self.to_dict()
        for name in self._UNHASHED:
            del payload[name]
        payload["chunk_size"] = get_chunk_size()
        return payload


def _coerce(field, value):
    """Converts a file or flag value to the type of its RunConfig field

    Strings are parsed the way the matching flag parses them; booleans are
    never taken as numbers and fractional values never as integers.
    """
    kind = field.type
    if value is None and field.default is None:
        return None
    try:
        if kind is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        if kind is str:
            if not isinstance(value, str):
                raise TypeError
            return value
        if isinstance(value, bool):
            raise TypeError
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if kind is float:
            return float(value)
        if kind is tuple:
            if isinstance(value, str):
                raise TypeError
            return tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(
            f"Option {field.name} expects a value of type {kind.__name__}, got {value!r}."
        ) from None
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _synthetic_option(value):
    if value.lstrip().startswith("{"):
        try:
            return json.loads(value)
        except json.JSONDecodeError as error:
            raise argparse.ArgumentTypeError(f"invalid JSON recipe: {error}")
    return value


def build_parser():
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file of options, overridden by flags")
    source = common.add_argument_group("data")
    source.add_argument("--data", help="training set, CSV or raw-f64")
    source.add_argument(
        "--synthetic",
        type=_synthetic_option,
        help=f"synthetic training set: one of {', '.join(SYNTHETIC_KINDS)} or a JSON recipe",
    )
    source.add_argument("--test-data", help="held-out points (default: last tenth of --data)")
    source.add_argument("--rescale", action="store_true", help="map coordinates to [-1, 1]")
    source.add_argument("--n-points", type=int)
    source.add_argument("--dim", type=int)
    source.add_argument("--n-test", type=int)
    grid = common.add_argument_group("noise levels")
    grid.add_argument("--c", type=float, help="shell concentration parameter")
    grid.add_argument("--sigma-min", type=float)
    grid.add_argument("--sigma-max", type=float)
    grid.add_argument("--grid-points", type=int)
    grid.add_argument("--steps", type=int, help="sampling schedule knots")
    grid.add_argument("--rho", type=float, help="sampling schedule exponent")
    run = common.add_argument_group("run")
    run.add_argument("--samples", type=int, help="Monte Carlo sample count")
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="output directory")
    run.add_argument("--format", choices=FORMATS)
    run.add_argument("--workers", type=int)
    run.add_argument("--chunk-size", type=int)
    run.add_argument("--quick", action="store_true")
    run.add_argument("-v", "--verbose", action="count")
    model = common.add_argument_group("models")
    model.add_argument("--denoiser", choices=DENOISER_KINDS)
    model.add_argument("--denoiser-config", help="JSON denoiser description")
    model.add_argument("--method", choices=METHODS)
    model.add_argument("--q", type=float)
    model.add_argument("--delta", type=float)
    model.add_argument("--points", type=int, help="rows analyzed by thresholds")
    model.add_argument("--band", type=float, nargs=2, metavar=("LO", "HI"))
    model.add_argument("--buffer", type=float)
    model.add_argument("--tau-cov", type=float)
    model.add_argument("--tau-w", type=float)
    model.add_argument("--power-law", type=float, nargs="+", metavar="P")
    model.add_argument("--sigma", type=float, help="noise level of spectral profiles")

    parser = _Parser(prog="memgeom", description="Geometric diagnostics of memorization.")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    helps = {
        "curves": "coverage and weight curves with the regime report",
        "bounds": "Phi table and coverage bounds per noise level",
        "thresholds": "weight concentration thresholds and their Monte Carlo check",
        "sample": "probability-flow samples and their memorization",
        "swap": "denoiser swap on the large, medium and small noise bands",
        "gap": "danger zone and gap training mask",
        "spectral": "off-diagonal sensitivity of circulant Gaussian denoisers",
        "validate": "property suite, exit status 1 if any check fails",
    }
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_config(argv=None):
    """Builds and validates the RunConfig of a command line"""
    flags = vars(build_parser().parse_args(argv))
    command = flags.pop("command")
    file_values = {}
    path = flags.pop("config", None)
    if path is not None:
        try:
            file_values = read_json(path)
        except (OSError, json.JSONDecodeError) as error:
            raise ConfigError(f"--config: cannot read {path}: {error}")
        if not isinstance(file_values, dict):
            raise ConfigError(f"--config: {path} should hold a JSON object.")
    return RunConfig.from_sources(command, file_values, flags).validate()


def default_recipe(kind, n_points, dim, seed):
    """Synthetic spec used when only a kind is given"""
    if kind == "two-cluster":
        params = {"separation": 10.0, "width": 1.0}
    elif kind == "gaussian-mixture":
        params = {"means": 6.0 * np.eye(5, dim), "scales": 1.0}
    elif kind == "circulant-stationary":
        params = {"spectrum": power_law_spectrum(dim, 2.0)}
    else:
        params = {}
    return SyntheticSpec(kind, n_points, dim, seed=seed, params=params)


def synthetic_spec(config):
    recipe = config.synthetic if config.synthetic is not None else "two-cluster"
    if isinstance(recipe, str):
        return default_recipe(recipe, config.n_points, config.dim, config.seed)
    recipe = dict(recipe)
    if "kind" not in recipe:
        raise ConfigError(f"--synthetic: a JSON recipe needs a 'kind' key, got {sorted(recipe)}.")
    recipe.setdefault("n_points", config.n_points)
    recipe.setdefault("dim", config.dim)
    recipe.setdefault("seed", config.seed)
    return SyntheticSpec.from_dict(recipe)


def load_inputs(config):
    """Training set and held-out points of a run

    Without --test-data, the last tenth of the rows of --data is held out.
    With --rescale both sets go through the affine map fitted on the
    training set.

    Returns
    -------
    train, test : Dataset
    """
    if config.data is not None:
        data = load_dataset(config.data)
        if config.test_data is not None:
            train, test = data, load_dataset(config.test_data)
        else:
            n_test = data.n_points // 10
            if n_test < 1:
                raise DatasetError("too few rows to hold out test points", path=config.data)
            cut = data.n_points - n_test
            train = data.subset(np.arange(cut), label=data.label)
            test = data.subset(np.arange(cut, data.n_points), label=f"{data.label}-test")
    else:
        train, test = split_train_test(synthetic_spec(config), config.n_test)
    if config.rescale:
        in_range = (train.values.min(), train.values.max())
        train, test = affine_rescale(train, in_range), affine_rescale(test, in_range)
    if test.dim != train.dim:
        raise DatasetError(
            f"test points have dimension {test.dim}, training set {train.dim}",
            path=config.test_data,
        )
    return train, test


def build_denoiser(config, train, default):
    if config.denoiser_config is not None:
        return denoiser_from_dict(read_json(config.denoiser_config), {train.label: train, "train": train})
    kind = config.denoiser or default
    if kind == "empirical":
        return EmpiricalDenoiser(train)
    if kind == "gaussian":
        return GaussianDenoiser(train)
    return ConstantDenoiser(train.mean())


def _status(path):
    print(f"wrote {path}", file=sys.stderr)
    return path


def write_table(out, stem, header, rows, config, meta):
    """Writes rows as ``stem.csv`` or ``stem.json`` depending on --format"""
    rows = [list(row) for row in rows]
    if config.format == "csv":
        return _status(write_csv(Path(out) / f"{stem}.csv", header, rows, meta=meta))
    return _status(write_json(Path(out) / f"{stem}.json", {"columns": header, "rows": rows}, meta))


def write_curve(out, stem, curve, config, meta):
    return write_table(out, stem, ["sigma", "value", "stderr", "n"], iter(curve), config, meta)


def _regime_report(config, train, test):
    grid = sigma_grid(config.sigma_min, config.sigma_max, config.grid_points)
    return regime_report(
        train,
        test,
        ShellSpec(train.dim, config.c),
        grid,
        n_noise=config.samples or 100,
        tau_cov=config.tau_cov,
        tau_w=config.tau_w,
        seed=config.seed,
        verbose=config.verbose,
    )


def _report_payload(report):
    payload = report.to_dict()
    payload["regimes"] = classify_regimes(report)
    return payload


def cmd_curves(config, train, test, meta):
    """coverage, weight and regime_report artifacts"""
    report = _regime_report(config, train, test)
    write_curve(config.out, "coverage", report.coverage_curve, config, meta)
    write_curve(config.out, "weight", report.weight_curve, config, meta)
    _status(write_json(Path(config.out) / "regime_report.json", _report_payload(report), meta))
    return EXIT_OK


def cmd_bounds(config, train, test, meta):
    """Phi table and the coverage sandwich at every grid knot"""
    spec = ShellSpec(train.dim, config.c)
    grid = sigma_grid(config.sigma_min, config.sigma_max, config.grid_points)
    table = phi_table(spec, config.samples or 20_000, config.seed)
    curve = coverage_curve(train, spec, test, grid, 100, config.seed + 1, config.verbose)
    rows = []
    for sigma, value, stderr, _ in curve:
        bounds = coverage_bounds(train, spec, test, sigma, table, config.seed + 2)
        rows.append(
            (
                sigma,
                value,
                stderr,
                bounds.lower,
                bounds.lower_stderr,
                bounds.upper,
                bounds.upper_stderr,
                bounds.raw_upper,
            )
        )
    if config.format == "csv":
        _status(table.to_csv(Path(config.out) / "phi.csv", meta=meta))
    else:
        write_table(
            config.out, "phi", ["t", "value", "stderr"], zip(table.knots, table.values, table.stderr),
            config, meta,
        )
    header = [
        "sigma",
        "coverage",
        "coverage_stderr",
        "lower",
        "lower_stderr",
        "upper",
        "upper_stderr",
        "raw_upper",
    ]
    write_table(config.out, "bounds", header, rows, config, meta)
    return EXIT_OK


def cmd_thresholds(config, train, test, meta):
    """Thresholds of random rows, their Monte Carlo check and the row averages"""
    n_points = min(config.points, train.n_points)
    rng = stream_rng(config.seed, 0)
    indices = np.sort(rng.choice(train.n_points, size=n_points, replace=False))
    rows, reports = [], []
    for index in indices.tolist():
        report = concentration_thresholds(train, index, config.q, config.delta)
        if np.isfinite(report.sigma_high) and report.sigma_low > 0:
            check = validate_thresholds(
                train, index, config.q, config.delta, config.samples or 5000, config.seed + 1 + index
            )
            checked = (
                check.fail_high.mean,
                check.fail_high.stderr,
                check.fail_low.mean,
                check.fail_low.stderr,
                check.tolerance,
                int(check.passed),
            )
        else:
            checked = (float("nan"),) * 5 + (0,)
        rows.append((index, report.sigma_high, report.k_star, report.sigma_low) + checked)
        reports.append(report.to_dict())
        if config.verbose:
            print(f"row {index}: {report!r}")
    header = [
        "point",
        "sigma_high",
        "k_star",
        "sigma_low",
        "fail_high",
        "fail_high_stderr",
        "fail_low",
        "fail_low_stderr",
        "tolerance",
        "passed",
    ]
    write_table(config.out, "thresholds", header, rows, config, meta)
    averages = average_thresholds(train, n_points=20, seed=config.seed)
    payload = {"reports": reports, "averages": averages.to_dict()}
    _status(write_json(Path(config.out) / "thresholds.json", payload, meta))
    return EXIT_OK


def _schedule(config):
    return edm_schedule(config.sigma_max, config.sigma_min, config.steps, config.rho)


def cmd_sample(config, train, test, meta):
    """samples.f64, trajectories.f64 of the first samples and memorization.json"""
    denoiser = build_denoiser(config, train, "empirical")
    schedule = _schedule(config)
    n_samples = config.samples or 256
    terminals = sample_terminals(
        denoiser, schedule, n_samples, config.method, config.seed, dim=train.dim
    )
    report = MemorizationReport.from_samples(train, terminals)
    _status(save_array(terminals, Path(config.out) / "samples.f64"))

    # chunk 0 of the sampler's streams holds the first initial noises
    n_saved = min(n_samples, N_SAVED_TRAJECTORIES, get_chunk_size())
    z = stream_rng(config.seed, 0).standard_normal((n_saved, train.dim))
    trajectory = integrate(denoiser, schedule, z, config.method)
    _status(save_trajectories(trajectory, Path(config.out) / "trajectories.f64"))

    payload = {
        "denoiser": denoiser.to_dict(),
        "schedule": schedule.to_dict(),
        "method": config.method,
        "memorization": report.to_dict(),
    }
    _status(write_json(Path(config.out) / "memorization.json", payload, meta))
    if config.verbose:
        print(repr(report))
    return EXIT_OK


def cmd_swap(config, train, test, meta):
    """Memorization with the insert denoiser on each band of the schedule"""
    base = EmpiricalDenoiser(train)
    insert = build_denoiser(config, train, "gaussian")
    schedule = _schedule(config)
    n_samples = config.samples or 256
    baseline = trajectory_memorization(base, train, schedule, n_samples, config.method, config.seed)
    rows, runs = [], {"baseline": baseline.to_dict(records=False)}
    for region, (sigma_lo, sigma_hi) in swap_regions(schedule, config.band).items():
        composite = swapped_denoiser(base, insert, schedule, config.band, region)
        swapped = trajectory_memorization(
            composite, train, schedule, n_samples, config.method, config.seed
        )
        rows.append((region, sigma_lo, sigma_hi, baseline.rate, swapped.rate, n_samples))
        runs[region] = swapped.to_dict(records=False)
        if config.verbose:
            print(f"{region}: baseline {baseline.rate:.3f}, swapped {swapped.rate:.3f}")
    header = ["region", "sigma_lo", "sigma_hi", "baseline_rate", "swapped_rate", "n_samples"]
    write_table(config.out, "swap", header, rows, config, meta)
    payload = {"insert": insert.to_dict(), "band": list(config.band), "runs": runs}
    _status(write_json(Path(config.out) / "swap.json", payload, meta))
    return EXIT_OK


def cmd_gap(config, train, test, meta):
    """Danger zone of the regime report and the gap mask on the sampling schedule"""
    report = _regime_report(config, train, test)
    schedule = _schedule(config)
    if report.danger_zone is None:
        print("no danger zone found, the gap mask is empty", file=sys.stderr)
        mask = GapMask((), (), ())
    else:
        mask = gap_mask(report, schedule, config.buffer)
    _status(write_json(Path(config.out) / "regime_report.json", _report_payload(report), meta))
    _status(mask.to_json(Path(config.out) / "gap_mask.json", meta=meta))
    sigmas = schedule.sigmas[::-1]
    write_table(config.out, "gap_weights", ["sigma", "weight"], zip(sigmas, mask.weight(sigmas)), config, meta)
    return EXIT_OK


def cmd_spectral(config, meta):
    """Sensitivity profile of every spectrum and the sweep table"""
    dim = config.dim
    spectra = {f"power-law-{p:g}": power_law_spectrum(dim, p) for p in config.power_law}
    spectra["spike"] = spike_spectrum(dim)
    spectra["random"] = random_symmetric_spectrum(dim, config.seed)
    for name, spectrum in spectra.items():
        profile = sensitivity_profile(spectrum, config.sigma)
        rows = zip(profile.distances.tolist(), np.abs(profile.q[profile.distances]), profile.bounds)
        write_table(config.out, f"sensitivity_{name}", ["n", "abs_q", "bound"], rows, config, meta)
    sweep = spectrum_concentration_sweep(spectra, config.sigma)
    header = ["name", "concentration", "tv", "decay_index", "max_offdiag"]
    write_table(config.out, "sweep", header, ([row[k] for k in header] for row in sweep), config, meta)
    return EXIT_OK


def cmd_validate(config, meta):
    """Runs the property suite; exit status 1 when a check fails"""
    summary = run_validation(quick=config.quick, seed=config.seed, verbose=config.verbose)
    print(summary)
    _status(write_json(Path(config.out) / "validation.json", summary.to_dict(), meta))
    return EXIT_OK if summary.passed else EXIT_INVALID


_DATA_HANDLERS = {
    "curves": cmd_curves,
    "bounds": cmd_bounds,
    "thresholds": cmd_thresholds,
    "sample": cmd_sample,
    "swap": cmd_swap,
    "gap": cmd_gap,
}
_HANDLERS = {"spectral": cmd_spectral, "validate": cmd_validate}


def main(argv=None):
    """Entry point; returns the exit status"""
    try:
        config = parse_config(argv)
        inputs = load_inputs(config) if config.command in DATA_COMMANDS else None
    except (ConfigError, ValueError, OSError) as error:
        print(f"memgeom: error: {error}", file=sys.stderr)
        return EXIT_INVALID

    try:
        with config_context(n_workers=config.workers, chunk_size=config.chunk_size):
            meta = artifact_meta(
                config=config.hash_payload(), seed=config.seed, chunk_size=get_chunk_size()
            )
            if inputs is not None:
                return _DATA_HANDLERS[config.command](config, *inputs, meta)
            return _HANDLERS[config.command](config, meta)
    except Exception as error:
        print(f"memgeom: {config.command} failed: {type(error).__name__}: {error}", file=sys.stderr)
        return EXIT_RUNTIME
