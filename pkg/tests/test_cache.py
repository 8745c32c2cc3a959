import numpy as np

from core.cache import HistoryCache, history_key
from dynamics.rocking import simulate_rocking
from pipeline.oracles import RockingOracle
from signals.synthetic import sine_record


def test_history_round_trips_through_cache(tmp_path, block):
    oracle = RockingOracle(block)
    record = sine_record(0.6, 1.0, cycles=2, dt=0.01)
    cache = HistoryCache(tmp_path / "cache")
    first = cache.get_or_compute(oracle.to_params(), record, oracle)
    second = cache.get_or_compute(oracle.to_params(), record, oracle)
    assert (cache.stats.hits, cache.stats.misses) == (1, 1)
    np.testing.assert_array_equal(first.disp, second.disp)
    np.testing.assert_array_equal(first.aux["theta_norm"], second.aux["theta_norm"])
    assert second.events == first.events
    assert second.labels == ("theta",)


def test_key_depends_on_parameters_and_record(block):
    record = sine_record(0.6, 1.0, cycles=2, dt=0.01)
    params = RockingOracle(block).to_params()
    assert history_key(params, record) == history_key(dict(params), record)
    assert history_key(params, record) != history_key({**params, "dt": 5e-5}, record)
    assert history_key(params, record) != history_key(params, record.scaled(2.0))


def test_disabled_cache_always_computes(tmp_path, block, zero_record):
    calls = []

    def compute(record):
        calls.append(record.id)
        return simulate_rocking(block, record)

    cache = HistoryCache(tmp_path, enabled=False)
    cache.get_or_compute({}, zero_record, compute)
    cache.get_or_compute({}, zero_record, compute)
    assert calls == ["ZERO", "ZERO"]
    assert not list(tmp_path.glob("*.npz"))


def test_clear(tmp_path, block, zero_record):
    cache = HistoryCache(tmp_path)
    cache.get_or_compute({}, zero_record, lambda r: simulate_rocking(block, r))
    cache.clear()
    assert not list(tmp_path.glob("*.npz"))
    assert cache.stats.total == 0
