"""
Noise-level grids: the polynomial sampling schedule, log-uniform evaluation
grids and the conversion between flow time t and noise level sigma.
"""

import numpy as np

DEFAULT_RHO = 7.0


class NoiseSchedule:
    """Strictly decreasing sequence of noise levels used for sampling

    Parameters
    ----------
    sigmas : array of shape (n_steps, )
        strictly decreasing positive noise levels, sigma_max first
    rho : float or None
        exponent of the polynomial schedule the knots come from, if any
    """

    def __init__(self, sigmas, rho=None):
        sigmas = np.array(sigmas, dtype=np.float64).reshape(-1)
        if sigmas.shape[0] < 2:
            raise ValueError(f"A schedule needs at least 2 knots, got {sigmas.shape[0]}.")
        if not np.all(np.isfinite(sigmas)) or np.any(sigmas <= 0):
            raise ValueError("Schedule knots should be finite and positive.")
        if np.any(np.diff(sigmas) >= 0):
            raise ValueError("Schedule knots should be strictly decreasing.")
        sigmas.setflags(write=False)
        self.sigmas = sigmas
        self.rho = rho

    @classmethod
    def from_sigmas(cls, sigmas):
        """Schedule on an arbitrary decreasing knot sequence"""
        return cls(sigmas)

    @property
    def sigma_max(self):
        return float(self.sigmas[0])

    @property
    def sigma_min(self):
        return float(self.sigmas[-1])

    @property
    def n_steps(self):
        return self.sigmas.shape[0]

    def __len__(self):
        return self.n_steps

    def __iter__(self):
        return iter(self.sigmas.tolist())

    def __repr__(self):
        return (
            f"NoiseSchedule(sigma_max={self.sigma_max}, sigma_min={self.sigma_min}, "
            f"n_steps={self.n_steps}, rho={self.rho})"
        )

    def __eq__(self, other):
        if not isinstance(other, NoiseSchedule):
            return NotImplemented
        return np.array_equal(self.sigmas, other.sigmas)

    def split(self, index):
        """Splits the schedule at knot `index`

        Both parts keep the shared knot, so that integrating the first part and
        then the second one uses exactly the knots of the full schedule.

        Returns
        -------
        upper, lower : NoiseSchedule
        """
        if not 1 <= index <= self.n_steps - 2:
            raise ValueError(f"Split index should be in [1, {self.n_steps - 2}], got {index}.")
        return (
            NoiseSchedule(self.sigmas[: index + 1], rho=self.rho),
            NoiseSchedule(self.sigmas[index:], rho=self.rho),
        )

    def to_dict(self):
        return {"sigmas": self.sigmas.tolist(), "rho": self.rho}


def edm_schedule(sigma_max=80.0, sigma_min=0.002, n_steps=18, rho=DEFAULT_RHO):
    """Polynomial sampling schedule

    sigma_i = (sigma_max^(1/rho) + i / (n_steps - 1) * (sigma_min^(1/rho) - sigma_max^(1/rho)))^rho

    Parameters
    ----------
    sigma_max : float, default is 80
    sigma_min : float, default is 0.002
    n_steps : int, default is 18
    rho : float, default is 7

    Returns
    -------
    NoiseSchedule
        the endpoints are exactly sigma_max and sigma_min

    References
    ----------
    .. [1] T. Karras, M. Aittala, T. Aila and S. Laine, "Elucidating the Design
           Space of Diffusion-Based Generative Models", NeurIPS 2022.
    """
    if not sigma_max > sigma_min > 0:
        raise ValueError(
            f"Expected sigma_max > sigma_min > 0, got sigma_max={sigma_max}, sigma_min={sigma_min}."
        )
    if int(n_steps) != n_steps or n_steps < 2:
        raise ValueError(f"n_steps should be an integer >= 2, got {n_steps}.")
    if not rho > 0:
        raise ValueError(f"rho should be positive, got {rho}.")
    n_steps = int(n_steps)
    ramp = np.arange(n_steps) / (n_steps - 1)
    max_inv_rho = sigma_max ** (1 / rho)
    min_inv_rho = sigma_min ** (1 / rho)
    sigmas = (max_inv_rho + ramp * (min_inv_rho - max_inv_rho)) ** rho
    sigmas[0] = sigma_max
    sigmas[-1] = sigma_min
    return NoiseSchedule(sigmas, rho=float(rho))


class SigmaGrid:
    """Strictly increasing positive evaluation grid for diagnostic curves

    Parameters
    ----------
    values : array of shape (n_points, )
    """

    def __init__(self, values):
        values = np.array(values, dtype=np.float64).reshape(-1)
        if values.shape[0] < 1:
            raise ValueError("A sigma grid needs at least one point.")
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise ValueError("Sigma grid values should be finite and positive.")
        if np.any(np.diff(values) <= 0):
            raise ValueError("Sigma grid values should be strictly increasing.")
        values.setflags(write=False)
        self.values = values

    @classmethod
    def from_values(cls, values):
        return cls(np.sort(np.asarray(values, dtype=np.float64)))

    @property
    def sigma_lo(self):
        return float(self.values[0])

    @property
    def sigma_hi(self):
        return float(self.values[-1])

    def __len__(self):
        return self.values.shape[0]

    def __iter__(self):
        return iter(self.values.tolist())

    def __getitem__(self, index):
        return self.values[index]

    def __repr__(self):
        return f"SigmaGrid(sigma_lo={self.sigma_lo}, sigma_hi={self.sigma_hi}, n_points={len(self)})"


def sigma_grid(sigma_lo=0.002, sigma_hi=80.0, n_points=40):
    """Log-uniform grid of `n_points` noise levels over [sigma_lo, sigma_hi]"""
    if not sigma_hi > sigma_lo > 0:
        raise ValueError(
            f"Expected sigma_hi > sigma_lo > 0, got sigma_lo={sigma_lo}, sigma_hi={sigma_hi}."
        )
    if int(n_points) != n_points or n_points < 2:
        raise ValueError(f"n_points should be an integer >= 2, got {n_points}.")
    values = np.geomspace(sigma_lo, sigma_hi, int(n_points))
    values[0] = sigma_lo
    values[-1] = sigma_hi
    return SigmaGrid(values)


def sigma_to_t(sigma):
    """Flow time t = 1 / (1 + sigma) of a noise level sigma > 0"""
    sigma = np.asarray(sigma, dtype=np.float64)
    if np.any(~(sigma > 0)) or np.any(~np.isfinite(sigma)):
        raise ValueError("sigma should be finite and positive.")
    t = 1.0 / (1.0 + sigma)
    return float(t) if t.ndim == 0 else t


def t_to_sigma(t):
    """Noise level sigma = (1 - t) / t of a flow time t in (0, 1)"""
    t = np.asarray(t, dtype=np.float64)
    if np.any(~((t > 0) & (t < 1))):
        raise ValueError("t should lie in the open interval (0, 1).")
    sigma = (1.0 - t) / t
    return float(sigma) if sigma.ndim == 0 else sigma
