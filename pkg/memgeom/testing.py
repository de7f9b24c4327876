import numpy as np


def assert_array_equal(a, b, *args, **kwargs):
    np.testing.assert_array_equal(np.asarray(a), np.asarray(b), *args, **kwargs)


def assert_array_almost_equal(a, b, *args, **kwargs):
    np.testing.assert_array_almost_equal(np.asarray(a), np.asarray(b), *args, **kwargs)


def assert_allclose(
    actual,
    desired,
    rtol: float = 1e-07,
    atol: float = 0.0,
    equal_nan: bool = True,
    err_msg="",
    verbose: bool = True,
):
    """Check that two arrays agree up to `rtol` and `atol`, nan matching nan by default

    Thin wrapper around :func:`numpy.testing.assert_allclose`.
    """
    np.testing.assert_allclose(
        np.asarray(actual),
        np.asarray(desired),
        rtol=rtol,
        atol=atol,
        equal_nan=equal_nan,
        err_msg=err_msg,
        verbose=verbose,
    )


def assert_equal(actual, desired, *args, **kwargs):
    def _to_numpy(x):
        if isinstance(x, np.ndarray):
            return x[0] if x.shape == (1,) else x
        return x

    np.testing.assert_equal(_to_numpy(actual), _to_numpy(desired), *args, **kwargs)


def assert_within_stderr(estimate, target, stderr, n_sigma=4.0, err_msg=""):
    """Check that a Monte Carlo estimate is within `n_sigma` standard errors of a target

    Parameters
    ----------
    estimate : float
    target : float
    stderr : float
        combined standard error of the comparison
    n_sigma : float, default is 4
    """
    gap = abs(float(estimate) - float(target))
    tol = n_sigma * float(stderr)
    np.testing.assert_(
        gap <= tol,
        f"{err_msg} estimate {estimate!r} differs from {target!r} by {gap!r} "
        f"> {n_sigma} * stderr = {tol!r}",
    )


assert_ = np.testing.assert_
assert_raises = np.testing.assert_raises
assert_warns = np.testing.assert_warns
