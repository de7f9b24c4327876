"""
Monte Carlo estimation of the shell overlap function

    Phi(t) = P(|Z| in [r_in, r_out] and |Z + t e_1| in [r_in, r_out]).

A standard normal only enters through (Z_1, |Z_2..d|^2), and
|Z + t e_1|^2 = (Z_1 + t)^2 + |Z_2..d|^2, so one bank of these two statistics
serves every t.
"""

from dataclasses import dataclass

import numpy as np

from ..random import monte_carlo_samples, resolve_seed, summarize
from ..utils.artifacts import read_csv, write_csv
from ._geometry import ShellSpec

# Log-spaced knots of the default table, on [PHI_T_MIN, 2 r_out]
PHI_N_KNOTS = 120
PHI_T_MIN = 1e-3


class NormBank:
    """Shared bank of standard normal samples, stored as (Z_1, |Z_2..d|^2)

    Parameters
    ----------
    dim : int
    n_samples : int
    seed : int
    """

    def __init__(self, dim, n_samples, seed):
        if int(dim) < 2:
            raise ValueError(f"dim should be at least 2, got {dim}.")
        self.dim = int(dim)
        self.seed = resolve_seed(seed)

        def sample(rng, start, size):
            first = rng.standard_normal(size)
            rest = rng.chisquare(self.dim - 1, size)
            return np.stack([first, rest], axis=1)

        bank = monte_carlo_samples(sample, int(n_samples), self.seed)
        self.first = bank[:, 0]
        self.rest = bank[:, 1]
        for array in (self.first, self.rest):
            array.setflags(write=False)

    @property
    def n_samples(self):
        return self.first.shape[0]

    def squared_norms(self, t=0.0):
        """|Z + t e_1|^2 for every sample of the bank"""
        return self.rest + (self.first + t) ** 2

    def own_shell(self, spec):
        return spec.contains_sq(self.squared_norms())

    def joint_shell(self, spec, t):
        """Indicator that Z lies in its own shell and in the shell centered at -t e_1"""
        return self.own_shell(spec) & spec.contains_sq(self.squared_norms(t))

    def __repr__(self):
        return f"NormBank(dim={self.dim}, n_samples={self.n_samples}, seed={self.seed})"


def _check_bank(spec, n_samples, seed, bank):
    if bank is None:
        return NormBank(spec.dim, n_samples, seed)
    if bank.dim != spec.dim:
        raise ValueError(f"Sample bank has dimension {bank.dim}, expected {spec.dim}.")
    return bank


def shell_membership_rate(spec, n_samples, seed, bank=None):
    """Fraction of standard normals whose norm lies in [r_in, r_out]

    Parameters
    ----------
    spec : ShellSpec
    n_samples : int
    seed : int
    bank : NormBank, optional
        reuse an existing bank instead of drawing `n_samples` fresh samples

    Returns
    -------
    MCEstimate
    """
    bank = _check_bank(spec, n_samples, seed, bank)
    return summarize(bank.own_shell(spec).astype(np.float64))


@dataclass(frozen=True)
class PhiEstimate:
    t: float
    value: float
    stderr: float
    n_samples: int


def phi(spec, t, n_samples, seed, bank=None):
    """Monte Carlo estimate of the two-shell overlap Phi(t)

    Parameters
    ----------
    spec : ShellSpec
    t : float
        distance between the two shell centers, in units of sigma
    n_samples : int
    seed : int
    bank : NormBank, optional
        shared samples; with the same seed, Phi(0) equals
        :func:`shell_membership_rate`

    Returns
    -------
    PhiEstimate
    """
    t = float(t)
    if not t >= 0:
        raise ValueError(f"t should be nonnegative, got {t}.")
    bank = _check_bank(spec, n_samples, seed, bank)
    if t > 2 * spec.r_out:
        return PhiEstimate(t, 0.0, 0.0, bank.n_samples)
    estimate = summarize(bank.joint_shell(spec, t).astype(np.float64))
    return PhiEstimate(t, estimate.mean, estimate.stderr, estimate.n_samples)


class PhiTable:
    """Phi evaluated on a grid of knots, with interpolation in between

    Between the first positive knot and the last one, values are interpolated
    linearly in log t; below the first positive knot (down to a knot at 0),
    linearly in t. Beyond 2 r_out, Phi vanishes exactly.

    Parameters
    ----------
    spec : ShellSpec
    knots : array of shape (n_knots, )
        strictly increasing, nonnegative
    values, stderr : array of shape (n_knots, )
    n_samples : int
    """

    def __init__(self, spec, knots, values, stderr, n_samples):
        knots = np.array(knots, dtype=np.float64).reshape(-1)
        values = np.array(values, dtype=np.float64).reshape(-1)
        stderr = np.array(stderr, dtype=np.float64).reshape(-1)
        if not (knots.shape == values.shape == stderr.shape) or knots.shape[0] < 2:
            raise ValueError("A Phi table needs at least two knots and matching columns.")
        if knots[0] < 0 or np.any(np.diff(knots) <= 0):
            raise ValueError("Phi table knots should be nonnegative and strictly increasing.")
        for array in (knots, values, stderr):
            array.setflags(write=False)
        self.spec = spec
        self.knots = knots
        self.values = values
        self.stderr = stderr
        self.n_samples = int(n_samples)

    def __len__(self):
        return self.knots.shape[0]

    def __repr__(self):
        return f"PhiTable({self.spec!r}, n_knots={len(self)}, n_samples={self.n_samples})"

    @property
    def t_max(self):
        return float(self.knots[-1])

    def _interpolate(self, t, column):
        knots = self.knots
        out = np.zeros_like(t)
        positive = knots > 0
        log_knots = np.log(knots[positive])
        first = knots[positive][0]

        logspace = (t >= first) & (t <= knots[-1])
        out[logspace] = np.interp(np.log(t[logspace]), log_knots, column[positive])
        if knots[0] == 0:
            linear = t < first
            out[linear] = np.interp(t[linear], knots[:2], column[:2])
        return out

    def evaluate(self, t, return_stderr=False):
        """Interpolated Phi at `t` (scalar or array)

        Raises
        ------
        ValueError
            t is negative, below the first knot of a table without a knot at 0,
            or between the last knot and 2 r_out (extrapolation is refused)
        """
        t = np.asarray(t, dtype=np.float64)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        support = 2 * self.spec.r_out
        if np.any(~(t >= 0)):
            raise ValueError("Phi arguments should be nonnegative.")
        if self.knots[0] > 0 and np.any(t < self.knots[0]):
            raise ValueError(
                f"Phi table starts at t={self.knots[0]}, got t={float(np.min(t))}."
            )
        outside = (t > self.t_max) & (t <= support)
        if np.any(outside):
            raise ValueError(
                f"Phi table ends at t={self.t_max}, cannot extrapolate to t={float(np.max(t[outside]))}."
            )
        inside = t <= self.t_max
        values = np.zeros_like(t)
        values[inside] = self._interpolate(t[inside], self.values)
        values[t > support] = 0.0
        if return_stderr:
            errors = np.zeros_like(t)
            errors[inside] = self._interpolate(t[inside], self.stderr)
            errors[t > support] = 0.0
            if scalar:
                return float(values[0]), float(errors[0])
            return values, errors
        return float(values[0]) if scalar else values

    def __call__(self, t):
        return self.evaluate(t)

    def to_csv(self, path, meta=None):
        """Writes the table with columns ``t,value,stderr,n``"""
        meta = dict(meta or {})
        meta.update({"dim": self.spec.dim, "c": repr(self.spec.c)})
        rows = (
            (float(t), float(v), float(e), self.n_samples)
            for t, v, e in zip(self.knots, self.values, self.stderr)
        )
        return write_csv(path, ["t", "value", "stderr", "n"], rows, meta=meta)

    @classmethod
    def from_csv(cls, path):
        header, columns, meta = read_csv(path)
        if {"t", "value", "stderr", "n"} - set(header) or not {"dim", "c"} <= set(meta):
            raise ValueError(f"{path} is not a Phi table.")
        spec = ShellSpec(int(meta["dim"]), float(meta["c"]))
        n_samples = int(columns["n"][0]) if columns["n"] else 0
        return cls(
            spec,
            [float(v) for v in columns["t"]],
            [float(v) for v in columns["value"]],
            [float(v) for v in columns["stderr"]],
            n_samples,
        )


def default_phi_knots(spec, n_knots=PHI_N_KNOTS, t_min=PHI_T_MIN):
    """t = 0 followed by `n_knots` log-spaced knots on [t_min, 2 r_out]"""
    knots = np.geomspace(t_min, 2 * spec.r_out, n_knots)
    knots[-1] = 2 * spec.r_out
    return np.concatenate([[0.0], knots])


def phi_table(spec, n_samples, seed, knots=None, bank=None):
    """Tabulates Phi on `knots` from one shared sample bank

    Parameters
    ----------
    spec : ShellSpec
    n_samples : int
    seed : int
    knots : array, optional
        defaults to :func:`default_phi_knots`
    bank : NormBank, optional

    Returns
    -------
    PhiTable
    """
    if knots is None:
        knots = default_phi_knots(spec)
    bank = _check_bank(spec, n_samples, seed, bank)
    estimates = [phi(spec, t, n_samples, seed, bank=bank) for t in np.asarray(knots, dtype=np.float64)]
    return PhiTable(
        spec,
        [e.t for e in estimates],
        [e.value for e in estimates],
        [e.stderr for e in estimates],
        bank.n_samples,
    )
