import numpy as np
import pytest

from ann.network import init_network
from core.errors import ArgumentError, DegenerateInputError, RolloutDivergenceError
from dynamics.history import ResponseHistory, from_displacements
from dynamics.hht import IntegratorConfig
from pipeline.bench import BenchReport, BenchRow, BenchSection, bench
from pipeline.dataset import build_dataset, feature_row, feature_width
from pipeline.evaluation import EvalReport, EvalRow, avg_error_rate, evaluate_record, rollout
from pipeline.normalizer import Normalizer, fit_normalizer
from pipeline.oracles import FrameOracle, RockingOracle
from signals.records import GroundMotionRecord


def zero_output(net):
    net.weights[-1][...] = 0.0
    net.biases[-1][...] = 0.0
    return net


def history_for(record, n, scale=1.0):
    t = record.times
    disp = np.column_stack([scale * (j + 1) * np.sin(2 * np.pi * t) for j in range(n)])
    return from_displacements(record.dt, disp, [f"floor{j + 1}" for j in range(n)])


@pytest.fixture
def record():
    t = np.arange(101) * 0.01
    return GroundMotionRecord("R", 0.01, 0.4 * np.sin(2 * np.pi * 3 * t))


def test_feature_widths():
    assert feature_width(3) == 9
    assert feature_width(1) == 5


@pytest.mark.parametrize("n", [3, 1])
def test_dataset_layout(record, n):
    normalizer = Normalizer(0.4, 118.0)
    truth = history_for(record, n)
    series = build_dataset(truth, record, n, normalizer)
    assert series.inputs.shape == (100, 2 * n + 3)
    assert series.targets.shape == (100, n)
    first = series.inputs[0]
    np.testing.assert_array_equal(first[1:3], [0.0, 0.0])
    np.testing.assert_array_equal(first[3 + n:], np.zeros(n))
    p = record.accel / 0.4
    O = truth.disp / 118.0
    t = 10
    np.testing.assert_allclose(series.inputs[t], np.concatenate([[p[t], p[t - 1], p[t - 2]], O[t], O[t - 1]]))
    np.testing.assert_allclose(series.targets[t], O[t + 1])
    np.testing.assert_allclose(feature_row(p, O, t), series.inputs[t])


def test_dataset_rejects_misaligned_history(record):
    truth = history_for(record, 3).resampled(0.02)
    with pytest.raises(ArgumentError):
        build_dataset(truth, record, 3, Normalizer(1.0, 1.0))
    with pytest.raises(ArgumentError):
        build_dataset(history_for(record, 3), record, 1, Normalizer(1.0, 1.0))


def test_normalizer_values(tmp_path):
    normalizer = Normalizer(0.5, 118.0)
    assert normalizer.response(1.18) == pytest.approx(0.01)
    values = np.array([-2.0, 0.3, 7.5])
    np.testing.assert_allclose(normalizer.ground_inverse(normalizer.ground(values)), values, rtol=1e-15)
    np.testing.assert_allclose(normalizer.response_inverse(normalizer.response(values)), values, rtol=1e-15)
    again = Normalizer.load(normalizer.save(tmp_path / "normalizer.yaml"))
    assert again == normalizer


def test_rocking_normalizer_uses_alpha(block):
    normalizer = Normalizer(1.0, RockingOracle(block).response_scale)
    assert normalizer.response(block.alpha) == pytest.approx(1.0)


def test_degenerate_normalizer(record):
    with pytest.raises(DegenerateInputError):
        Normalizer(0.0, 1.0)
    silent = GroundMotionRecord("Z", 0.01, np.zeros(5))
    with pytest.raises(DegenerateInputError):
        fit_normalizer([history_for(silent, 1)], [silent], 1.0)
    assert fit_normalizer([history_for(record, 1)], [record], 2.0).ground_scale == pytest.approx(0.4)


def test_zero_network_rolls_out_rest(record):
    net = zero_output(init_network(9, 3, seed=0))
    pred = rollout(net, record, Normalizer(0.4, 118.0), 3)
    assert pred.steps == record.npts
    np.testing.assert_array_equal(pred.disp, np.zeros((record.npts, 3)))


def test_rollout_step_limit(record):
    net = zero_output(init_network(5, 1, seed=0))
    assert rollout(net, record, Normalizer(1.0, 1.0), 1, steps=10).steps == 11
    assert rollout(net, record, Normalizer(1.0, 1.0), 1, steps=10_000).steps == record.npts


def test_rollout_uses_own_predictions(record):
    # output = O(t) + 0.001: the rollout integrates its own constant drift
    net = init_network(5, 1, seed=0, hidden=())
    net.weights[0][...] = [[0.0, 0.0, 0.0, 1.0, 0.0]]
    net.biases[0][...] = [0.001]
    pred = rollout(net, record, Normalizer(1.0, 1.0), 1)
    np.testing.assert_allclose(pred.disp[:, 0], 0.001 * np.arange(record.npts), atol=1e-13)


def test_rollout_divergence(record):
    net = init_network(5, 1, seed=0)
    net.biases[-1][...] = np.nan
    with pytest.raises(RolloutDivergenceError) as info:
        rollout(net, record, Normalizer(1.0, 1.0), 1)
    assert info.value.step == 1


def test_rollout_dims_mismatch(record):
    with pytest.raises(ArgumentError):
        rollout(init_network(5, 1), record, Normalizer(1.0, 1.0), 3)


def test_error_rate_offsets(record):
    truth = history_for(record, 3)
    assert np.all(avg_error_rate(truth, truth) == 0.0)
    peak = np.max(np.abs(truth.disp), axis=0)
    shifted = ResponseHistory(truth.dt, truth.disp + 0.05 * peak, truth.vel, truth.acc, truth.labels)
    np.testing.assert_allclose(avg_error_rate(shifted, truth), [5.0, 5.0, 5.0], rtol=1e-12)
    assert avg_error_rate(shifted, truth, dof=1) == pytest.approx(5.0)


def test_error_rate_on_silent_truth(record):
    silent = from_displacements(record.dt, np.zeros((record.npts, 1)), ["theta"])
    with pytest.raises(DegenerateInputError):
        avg_error_rate(silent, silent)


def test_evaluate_record_row(record):
    net = zero_output(init_network(9, 3, seed=0))
    truth = history_for(record, 3)
    row, pred = evaluate_record(net, record, truth, Normalizer(0.4, 118.0), "Testing")
    assert row.record_id == "R"
    # a silent prediction misses every peak entirely
    assert row.peak_error == pytest.approx((100.0, 100.0, 100.0))
    assert pred.steps == truth.steps


def test_eval_report_csv(tmp_path):
    report = EvalReport(labels=("dof1",), converged=False, architecture="9-5-3")
    report.rows.append(EvalRow("R", "Training", (1.5,), (2.0,), (0.25,), rollout_seconds=0.5, oracle_seconds=2.0))
    path = report.to_csv(tmp_path / "eval.csv")
    assert path.read_text().splitlines() == [
        "record_id,role,avg_dof1,peak_dof1,tf_dof1,oracle_s,rollout_s,speedup,architecture,converged",
        "R,Training,1.5000,2.0000,0.2500,2.000000,0.500000,4.000,,",
        "TOTAL,,1.5000,2.0000,0.2500,2.000000,0.500000,4.000,9-5-3,false",
    ]


def test_eval_report_speedup_skips_cached_histories():
    report = EvalReport(labels=("dof1",))
    assert report.speedup == 0.0
    report.rows.append(EvalRow("A", "Testing", (1.0,), (1.0,), (1.0,), rollout_seconds=0.25, oracle_seconds=1.0))
    report.rows.append(EvalRow("B", "Testing", (3.0,), (3.0,), (3.0,), rollout_seconds=0.25))
    assert [r.record_id for r in report.timed_rows] == ["A"]
    assert report.speedup == pytest.approx(4.0)
    assert report.rows[1].speedup is None
    assert report.total_row()[2:5] == ["2.0000", "2.0000", "2.0000"]


def test_bench_csv_format(tmp_path):
    report = BenchReport([BenchSection(1, [BenchRow("R", 2.0, 0.5)]), BenchSection(2)])
    lines = report.to_csv(tmp_path / "bench.csv").read_text().splitlines()
    assert lines[0] == "section,record_id,oracle_s,rollout_s,ratio"
    assert lines[1] == "single,R,2.000000,0.500000,4.000"
    assert lines[2] == "single,TOTAL,2.000000,0.500000,4.000"
    assert lines[3] == "multi-2,TOTAL,0.000000,0.000000,0.000"


def test_bench_without_records(frame):
    report = bench(FrameOracle(frame), [], init_network(9, 3), Normalizer(1.0, 1.0), workers=4)
    assert [s.label for s in report.sections] == ["single", "multi-4"]
    assert all(not s.rows and s.ratio == 0.0 for s in report.sections)


def test_frame_oracle_on_record_grid(frame, short_record):
    oracle = FrameOracle(frame, IntegratorConfig(dt=0.005))
    history = oracle(short_record)
    assert history.dt == short_record.dt
    assert history.steps == short_record.npts
    assert oracle.n == 3 and oracle.response_scale == 118.0
    assert oracle.to_params()["integrator"]["dt"] == 0.005


@pytest.mark.slow
def test_rollout_outpaces_rocking_oracle(block):
    from signals.synthetic import synthetic_record
    from signals.spectrum import scale_to_pga

    record, _ = scale_to_pga(synthetic_record(3, duration=10.0), 0.6)
    report = bench(RockingOracle(block), [record], zero_output(init_network(5, 1)), Normalizer(0.6, block.alpha),
                   workers=2)
    single = report.sections[0]
    assert single.rows[0].ratio >= 10.0
    assert len(report.sections[1].rows) == 1
