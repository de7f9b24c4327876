import threading

import pytest

from .. import config
from ..testing import assert_equal


def test_set_n_workers():
    old = config.get_n_workers()
    try:
        config.set_n_workers(3)
        assert_equal(config.get_n_workers(), 3)
        with pytest.raises(ValueError):
            config.set_n_workers(0)
        with pytest.raises(ValueError):
            config.set_n_workers(1.5)
    finally:
        config.set_n_workers(old)


def test_config_context():
    old_workers = config.get_n_workers()
    old_chunk = config.get_chunk_size()
    with config.config_context(n_workers=old_workers + 2, chunk_size=17):
        assert_equal(config.get_n_workers(), old_workers + 2)
        assert_equal(config.get_chunk_size(), 17)
    assert_equal(config.get_n_workers(), old_workers)
    assert_equal(config.get_chunk_size(), old_chunk)


def test_config_context_restores_on_error():
    old_chunk = config.get_chunk_size()
    with pytest.raises(RuntimeError):
        with config.config_context(chunk_size=5):
            raise RuntimeError("boom")
    assert_equal(config.get_chunk_size(), old_chunk)


def test_local_threadsafe():
    """A thread-local override does not leak into other threads"""
    old_workers = config.get_n_workers()
    seen = {}

    def worker():
        seen["n_workers"] = config.get_n_workers()

    with config.config_context(n_workers=old_workers + 5, local_threadsafe=True):
        thread = threading.Thread(target=worker)
        thread.start()
        thread.join()
    assert_equal(seen["n_workers"], old_workers)


def test_initialize_from_environment(monkeypatch):
    old_workers = config.get_n_workers()
    old_chunk = config.get_chunk_size()
    try:
        monkeypatch.setenv("MEMGEOM_N_WORKERS", "4")
        monkeypatch.setenv("MEMGEOM_CHUNK_SIZE", "100")
        config.ConfigManager.initialize()
        assert_equal(config.get_n_workers(), 4)
        assert_equal(config.get_chunk_size(), 100)

        monkeypatch.setenv("MEMGEOM_N_WORKERS", "many")
        with pytest.warns(UserWarning):
            config.ConfigManager.initialize()
        assert_equal(config.get_n_workers(), 1)
    finally:
        config.set_n_workers(old_workers)
        config.set_chunk_size(old_chunk)
