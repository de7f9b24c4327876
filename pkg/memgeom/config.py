"""
The :mod:`memgeom.config` module holds the run-time settings shared by the
Monte Carlo estimators (worker count and stream chunk size).
"""

import os
import threading
import warnings
from contextlib import contextmanager


class ConfigManager:
    """Process-wide settings with optional thread-local overrides.

    ``n_workers`` only changes how fast an estimator runs. ``chunk_size``
    fixes how samples are split into random streams, so it changes the
    numbers produced for a given seed and is recorded in artifacts.
    """

    _default_n_workers = 1
    _default_chunk_size = 2048
    _n_workers = 1
    _chunk_size = 2048
    _THREAD_LOCAL_DATA = threading.local()
    _ENV_WORKERS_VAR = "MEMGEOM_N_WORKERS"
    _ENV_CHUNK_VAR = "MEMGEOM_CHUNK_SIZE"

    @classmethod
    def get_n_workers(cls):
        """Returns the number of worker threads currently in use

        Returns
        -------
        n_workers : int
        """
        return cls._THREAD_LOCAL_DATA.__dict__.get("n_workers", cls._n_workers)

    @classmethod
    def get_chunk_size(cls):
        """Returns the number of Monte Carlo samples drawn per random stream

        Returns
        -------
        chunk_size : int
        """
        return cls._THREAD_LOCAL_DATA.__dict__.get("chunk_size", cls._chunk_size)

    @classmethod
    def set_n_workers(cls, n_workers, local_threadsafe=False):
        """Changes the number of worker threads

        Parameters
        ----------
        n_workers : int
            strictly positive number of threads
        local_threadsafe : bool, optional, default is False
            If False, set the value as default for all threads
        """
        n_workers = _validate_positive_int(n_workers, "n_workers")
        cls._THREAD_LOCAL_DATA.n_workers = n_workers
        if not local_threadsafe:
            cls._n_workers = n_workers

    @classmethod
    def set_chunk_size(cls, chunk_size, local_threadsafe=False):
        """Changes the number of samples per random stream

        Parameters
        ----------
        chunk_size : int
            strictly positive number of samples
        local_threadsafe : bool, optional, default is False
            If False, set the value as default for all threads
        """
        chunk_size = _validate_positive_int(chunk_size, "chunk_size")
        cls._THREAD_LOCAL_DATA.chunk_size = chunk_size
        if not local_threadsafe:
            cls._chunk_size = chunk_size

    @classmethod
    @contextmanager
    def config_context(cls, n_workers=None, chunk_size=None, local_threadsafe=False):
        """Context manager to temporarily change the settings.

        Parameters
        ----------
        n_workers : int, optional
        chunk_size : int, optional
        local_threadsafe : bool, optional
            If True, the change does not become the default for other threads.

        Examples
        --------
        >>> import memgeom as mg
        >>> with mg.config_context(n_workers=4):
        ...     pass
        """
        old_n_workers = cls.get_n_workers()
        old_chunk_size = cls.get_chunk_size()
        if n_workers is not None:
            cls.set_n_workers(n_workers, local_threadsafe=local_threadsafe)
        if chunk_size is not None:
            cls.set_chunk_size(chunk_size, local_threadsafe=local_threadsafe)
        try:
            yield
        finally:
            cls.set_n_workers(old_n_workers, local_threadsafe=local_threadsafe)
            cls.set_chunk_size(old_chunk_size, local_threadsafe=local_threadsafe)

    @classmethod
    def initialize(cls):
        """Initialises the settings

        1) read `MEMGEOM_N_WORKERS` and `MEMGEOM_CHUNK_SIZE` from the environment
        2) fall back to the defaults, with a warning, on unparsable values
        """
        for var, setter, default in [
            (cls._ENV_WORKERS_VAR, cls.set_n_workers, cls._default_n_workers),
            (cls._ENV_CHUNK_VAR, cls.set_chunk_size, cls._default_chunk_size),
        ]:
            value = os.environ.get(var)
            if value is None:
                setter(default)
                continue
            try:
                setter(int(value))
            except ValueError:
                msg = (
                    f"{var} should be a positive integer, got {value!r}. "
                    f"Defaulting to {default}."
                )
                warnings.warn(msg, UserWarning)
                setter(default)


def _validate_positive_int(value, name):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ValueError(f"{name} should be a positive integer, got {value!r}.")
    return int(value)


ConfigManager.initialize()

get_n_workers = ConfigManager.get_n_workers
set_n_workers = ConfigManager.set_n_workers
get_chunk_size = ConfigManager.get_chunk_size
set_chunk_size = ConfigManager.set_chunk_size
config_context = ConfigManager.config_context
