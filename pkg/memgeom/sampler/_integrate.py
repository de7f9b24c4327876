from dataclasses import dataclass

import numpy as np

from ..datasets import save_array
from ..schedule import NoiseSchedule

METHODS = ("heun", "euler")


class IntegrationError(RuntimeError):
    """The probability-flow state became non-finite

    Attributes
    ----------
    step : int
        index of the step that produced the non-finite state
    sigma : float
        noise level the step started from
    """

    def __init__(self, step, sigma):
        super().__init__(f"Non-finite state at step {step} (sigma={sigma:.6g}).")
        self.step = step
        self.sigma = sigma


@dataclass(frozen=True)
class Trajectory:
    """States x_sigma at every knot of a noise schedule

    Attributes
    ----------
    schedule : NoiseSchedule
    states : ndarray of shape (n_steps, dim) or (n_steps, n_samples, dim)
        states[0] is the initial state, states[-1] the state at sigma_min
    method : str
    """

    schedule: NoiseSchedule
    states: np.ndarray
    method: str

    @property
    def terminal(self):
        return self.states[-1]

    @property
    def initial(self):
        return self.states[0]

    def __len__(self):
        return self.states.shape[0]

    def __repr__(self):
        return (
            f"Trajectory(method={self.method!r}, n_steps={len(self)}, "
            f"shape={self.states.shape[1:]})"
        )


def check_method(method):
    if method not in METHODS:
        raise ValueError(f"Unknown integration method {method!r}, expected one of {METHODS}.")
    return method


def _slope(denoiser, x, sigma):
    return (x - denoiser(x, sigma)) / sigma


def integrate_from(denoiser, schedule, x, method="heun", final_euler=True):
    """Integrates dx/dsigma = (x - m(x, sigma)) / sigma along the schedule knots

    Parameters
    ----------
    denoiser : Denoiser
        must cover [sigma_min, sigma_max]
    schedule : NoiseSchedule
        integration runs from sigma_max down to sigma_min
    x : array of shape (dim, ) or (n, dim)
        state at sigma_max
    method : {'heun', 'euler'}, default is 'heun'
    final_euler : bool, default is True
        take the last Heun step with Euler's method

    Returns
    -------
    Trajectory

    Raises
    ------
    IntegrationError
        if a step produces a non-finite state
    """
    check_method(method)
    if not (denoiser.covers(schedule.sigma_min) and denoiser.covers(schedule.sigma_max)):
        raise ValueError(
            f"Denoiser {denoiser!r} does not cover [{schedule.sigma_min}, {schedule.sigma_max}]."
        )
    x = np.array(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise IntegrationError(0, schedule.sigma_max)

    sigmas = schedule.sigmas
    states = np.empty((schedule.n_steps,) + x.shape)
    states[0] = x
    n_intervals = schedule.n_steps - 1
    for i in range(n_intervals):
        sigma, sigma_next = sigmas[i], sigmas[i + 1]
        step = sigma_next - sigma
        slope = _slope(denoiser, x, sigma)
        x_next = x + step * slope
        last = i == n_intervals - 1
        if method == "heun" and not (last and final_euler):
            slope_next = _slope(denoiser, x_next, sigma_next)
            x_next = x + step * (slope + slope_next) / 2
        if not np.all(np.isfinite(x_next)):
            raise IntegrationError(i + 1, float(sigma))
        states[i + 1] = x_next
        x = x_next
    return Trajectory(schedule, states, method)


def integrate(denoiser, schedule, z, method="heun", final_euler=True):
    """Probability-flow sample starting from sigma_max * z

    See :func:`integrate_from` for the parameters.

    Returns
    -------
    Trajectory
        ``states[0] = sigma_max * z``
    """
    z = np.asarray(z, dtype=np.float64)
    return integrate_from(denoiser, schedule, schedule.sigma_max * z, method, final_euler)


def save_trajectories(trajectory, path):
    """Writes the states of a trajectory as raw-f64, one row per knot"""
    return save_array(trajectory.states, path)
