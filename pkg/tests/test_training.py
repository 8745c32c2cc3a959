import numpy as np
import pytest

from ann.network import DenseNetwork, dumps, init_network
from ann.training import (
    GrowthPolicy,
    TrainLog,
    TrainLogEntry,
    adaptive_fit,
    evaluate_series,
    teacher_forced_error,
    train_epoch,
    train_frozen,
)
from ann.growth import widen
from core.errors import ArgumentError
from pipeline.dataset import SupervisedSeries


def series_from(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return SupervisedSeries(0.01, x if x.ndim == 2 else x[:, None], y if y.ndim == 2 else y[:, None])


@pytest.fixture
def tanh_series():
    rng = np.random.default_rng(0)
    x = rng.uniform(-1, 1, size=(200, 3))
    return series_from(x, np.tanh(x @ np.array([0.8, -0.5, 0.3])))


@pytest.fixture
def rough_series():
    x = np.linspace(-1, 1, 40)
    return series_from(x, np.sin(3 * np.pi * x) + 0.1)


def forcing_policy(**overrides):
    # never improves, so every normal epoch halves the rate below lr_min and triggers growth
    options = dict(
        lr0=0.01, lr_halve_patience=1, lr_min=0.0075, error_threshold_pct=1e-9, min_improvement=1.0,
        pretrain_epochs=0, frozen_iterations=10_000, max_growth_steps=6, max_epochs=100,
    )
    options.update(overrides)
    return GrowthPolicy(**options)


def test_zero_net_on_zero_targets():
    net = init_network(2, 1, seed=0)
    for W in net.weights:
        W[...] = 0.0
    metrics = train_epoch(net, series_from(np.ones((5, 2)), np.zeros(5)), 0.1)
    assert metrics.signed_error == 0.0
    assert metrics.abs_error == 0.0
    assert metrics.samples == 5


def test_zero_rate_leaves_network_unchanged(tanh_series):
    net = init_network(3, 1, seed=1)
    before = dumps(net)
    metrics = train_epoch(net, tanh_series, 0.0)
    assert dumps(net) == before
    reference = evaluate_series(net, tanh_series)
    assert metrics.abs_error == pytest.approx(reference.abs_error, rel=1e-12)


def test_scalar_lms_converges():
    x = np.random.default_rng(1).uniform(-1, 1, 100)
    series = series_from(x, 2 * x)
    net = DenseNetwork([np.array([[0.0]])], [np.array([0.0])])
    history = [train_epoch(net, series, 0.05).abs_error for _ in range(50)]
    assert history[-1] <= history[0] / 100


def test_empty_series_rejected():
    with pytest.raises(ArgumentError):
        train_epoch(init_network(1, 1), series_from(np.zeros((0, 1)), np.zeros((0, 1))), 0.1)


def test_policy_validation():
    with pytest.raises(ArgumentError):
        GrowthPolicy(lr0=0.0)
    with pytest.raises(ArgumentError):
        GrowthPolicy(frozen_unit="minutes")
    assert [GrowthPolicy().growth_kind(i) for i in range(1, 7)] == ["widen"] * 4 + ["deepen", "widen"]


def test_realizable_target_converges_without_growth(tanh_series):
    policy = GrowthPolicy(lr0=0.1, lr_min=0.1 / 256, pretrain_epochs=300, max_growth_steps=0, max_epochs=600)
    fit = adaptive_fit(init_network(3, 1, seed=2), [tanh_series], [], policy)
    assert fit.converged
    assert fit.growth_count == 0
    assert fit.log.events() == []
    assert fit.log.last.error <= 3.0
    assert teacher_forced_error(fit.net, [tanh_series]) <= 3.0


def test_forced_growth_sequence(rough_series):
    fit = adaptive_fit(init_network(1, 1, seed=3), [rough_series], [rough_series], forcing_policy())
    assert not fit.converged
    assert fit.growth_count == 6
    assert fit.log.events() == ["widen", "widen", "widen", "widen", "deepen", "widen"]
    frozen = [e for e in fit.log.entries if e.mode == "frozen"]
    assert len(frozen) == 6
    assert all(e.updates == 10_000 for e in frozen)
    assert fit.log.entries[-1].architecture == "1-10-10-10-1"


def test_learning_rate_restarts_after_growth(rough_series):
    fit = adaptive_fit(init_network(1, 1, seed=3), [rough_series], None, forcing_policy(max_growth_steps=3))
    frozen = [e for e in fit.log.entries if e.mode == "frozen"]
    assert [e.lr for e in frozen] == [0.01 / 2, 0.01 / 4, 0.01 / 8]


def test_parameter_count_never_shrinks(rough_series):
    fit = adaptive_fit(init_network(1, 1, seed=3), [rough_series], None, forcing_policy(max_growth_steps=3))
    counts = [e.parameters for e in fit.log.entries]
    assert counts == sorted(counts)
    log = TrainLog(list(fit.log.entries))
    shrunk = TrainLogEntry(**{**fit.log.last.__dict__, "parameters": 1})
    with pytest.raises(ArgumentError):
        log.append(shrunk)


def test_unconverged_fit_returns_best_validation_snapshot(rough_series):
    fit = adaptive_fit(init_network(1, 1, seed=3), [rough_series], [rough_series], forcing_policy(max_growth_steps=3))
    best = min(e.valid_error for e in fit.log.entries)
    assert teacher_forced_error(fit.net, [rough_series]) == best
    assert not any(m.any() for m in fit.net.frozen_weights)


def test_frozen_training_keeps_old_parameters_bit_identical(rough_series):
    grown = widen(init_network(1, 1, seed=4), seed=5)
    before = [W.copy() for W in grown.weights]
    metrics = train_frozen(grown, [rough_series], 0.05, 250)
    assert metrics.samples == 250
    changed = False
    for old, new, mask in zip(before, grown.weights, grown.frozen_weights):
        np.testing.assert_array_equal(new[mask], old[mask])
        changed |= not np.array_equal(new[~mask], old[~mask])
    assert changed


def test_frozen_epochs_unit_counts_passes(rough_series):
    policy = forcing_policy(max_growth_steps=1, frozen_iterations=2, frozen_unit="epochs")
    fit = adaptive_fit(init_network(1, 1, seed=3), [rough_series], None, policy)
    frozen = [e for e in fit.log.entries if e.mode == "frozen"]
    assert frozen[0].updates == 2 * len(rough_series)


def test_fit_is_deterministic(rough_series):
    policy = forcing_policy(max_growth_steps=2, frozen_iterations=300)
    a = adaptive_fit(init_network(1, 1, seed=6), [rough_series], None, policy)
    b = adaptive_fit(init_network(1, 1, seed=6), [rough_series], None, policy)
    assert dumps(a.net) == dumps(b.net)
    assert a.log.entries == b.log.entries


def test_one_node_network_widens(rough_series):
    policy = GrowthPolicy(
        lr0=0.1, lr_halve_patience=3, lr_min=0.1 / 4, min_improvement=0.5, pretrain_epochs=5,
        frozen_iterations=200, max_growth_steps=3, max_epochs=100, initial_hidden=(1,),
    )
    net = init_network(1, 1, seed=7, hidden=policy.initial_hidden)
    fit = adaptive_fit(net, [rough_series], None, policy)
    assert fit.log.events()[0] == "widen"
    first = next(e for e in fit.log.entries if e.event == "widen")
    assert first.architecture == "1-2-1"


def test_train_log_csv(rough_series, tmp_path):
    fit = adaptive_fit(init_network(1, 1, seed=3), [rough_series], None, forcing_policy(max_growth_steps=1))
    path = fit.log.to_csv(tmp_path / "train_log.csv")
    lines = path.read_text().splitlines()
    assert lines[0].split(",")[:4] == ["step", "epoch", "mode", "lr"]
    assert len(lines) == len(fit.log) + 1
