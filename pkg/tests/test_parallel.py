import pytest

from specidx.parallel import max_workers, pmap


def test_order_preserved(monkeypatch):
    monkeypatch.setenv("SPECIDX_THREADS", "4")
    assert pmap(lambda x: x * x, range(20)) == [x * x for x in range(20)]


def test_env_caps_workers(monkeypatch):
    monkeypatch.setenv("SPECIDX_THREADS", "2")
    assert max_workers() == 2
    assert max_workers(8) == 2
    assert max_workers(1) == 1


def test_bad_env(monkeypatch):
    monkeypatch.setenv("SPECIDX_THREADS", "many")
    with pytest.raises(ValueError):
        max_workers()
