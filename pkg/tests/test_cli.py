import csv

import pytest
import yaml

from ann.network import init_network, save_network
from main import main
from pipeline.normalizer import Normalizer

QUICK_FRAME = {
    "structure": "frame",
    "workers": 1,
    "records": {"synthetic": {"count": 2, "duration": 2.0}, "training": [0], "validation": [1]},
    "training": {
        "lr0": 0.05, "lr_halve_patience": 1, "pretrain_epochs": 2, "max_epochs": 6,
        "max_growth_steps": 1, "frozen_iterations": 50,
    },
}


@pytest.fixture
def quick_config(tmp_path):
    path = tmp_path / "quick.yaml"
    path.write_text(yaml.safe_dump(QUICK_FRAME))
    return path


def run(*argv):
    return main([str(a) for a in argv])


def manifest(out):
    return yaml.safe_load((out / "manifest.yaml").read_text())


def install_network(out, d_in, d_out):
    out.mkdir(parents=True, exist_ok=True)
    save_network(init_network(d_in, d_out, seed=0), out / "network.txt")
    Normalizer(0.3, 118.0).save(out / "normalizer.yaml")


def test_simulate_writes_histories_and_manifest(quick_config, tmp_path):
    out = tmp_path / "out"
    assert run("simulate", "--config", quick_config, "--out", out) == 0
    assert (out / "frame_SYN000.csv").is_file()
    assert (out / "frame_SYN001_springs.csv").is_file()
    info = manifest(out)
    assert info["command"] == "simulate"
    assert info["exit_status"] == 0
    assert "frame_SYN000.csv" in info["artifacts"]
    assert info["cache"] == {"hits": 0, "misses": 2}
    assert info["versions"]["surrogate"] == "0.1.0"


def test_simulate_is_byte_identical(quick_config, tmp_path):
    for name in ("a", "b"):
        assert run("simulate", "--config", quick_config, "--out", tmp_path / name, "--no-cache") == 0
    for artifact in ("frame_SYN000.csv", "frame_SYN000_springs.csv"):
        assert (tmp_path / "a" / artifact).read_bytes() == (tmp_path / "b" / artifact).read_bytes()


def test_second_run_hits_cache(quick_config, tmp_path):
    out = tmp_path / "out"
    run("simulate", "--config", quick_config, "--out", out)
    run("simulate", "--config", quick_config, "--out", out)
    assert manifest(out)["cache"] == {"hits": 2, "misses": 0}


def test_rocking_simulate_from_records(tmp_path, at2_file):
    out = tmp_path / "out"
    assert run("simulate", "--which", "rocking", "--records", tmp_path / "*.AT2", "--out", out, "--workers", 1) == 0
    assert (out / "rocking_RSN0001_TEST.csv").is_file()
    assert (out / "rocking_RSN0001_TEST_impacts.csv").read_text().startswith("time,theta_dot_before")


def test_missing_record_exits_2(tmp_path):
    config = tmp_path / "missing.yaml"
    config.write_text(yaml.safe_dump({"records": {"paths": ["gone/RSN9.AT2"]}}))
    out = tmp_path / "out"
    assert run("simulate", "--config", config, "--out", out) == 2
    info = manifest(out)
    assert info["exit_status"] == 2
    assert "gone/RSN9.AT2" in info["message"]


def test_malformed_record_exits_2(tmp_path, at2_text):
    (tmp_path / "BAD.AT2").write_text(at2_text.replace("NPTS=    7", "NPTS=    9"))
    out = tmp_path / "out"
    assert run("scale", "--records", tmp_path / "*.AT2", "--out", out, "--workers", 1) == 2
    assert "NPTS=9" in manifest(out)["message"]


def test_unknown_flag_exits_2():
    assert run("simulate", "--bogus") == 2


def test_scale_and_spectrum(quick_config, tmp_path):
    out = tmp_path / "out"
    assert run("scale", "--config", quick_config, "--out", out) == 0
    with open(out / "scale_factors.csv") as f:
        rows = list(csv.DictReader(f))
    assert [r["record_id"] for r in rows] == ["SYN000", "SYN001"]
    assert [r["role"] for r in rows] == ["Training", "Validation"]
    assert all(float(r["sa_g"]) == pytest.approx(3.0, rel=1e-3) for r in rows)
    assert (out / "scaled" / "SYN000.AT2").is_file()
    lines = (out / "scaled" / "SYN000.csv").read_text().splitlines()
    assert lines[0] == "time,value"
    assert len(lines) == 202
    peak = max(abs(float(line.split(",")[1])) for line in lines[1:])
    assert peak == pytest.approx(float(rows[0]["pga_g"]), rel=1e-6)

    assert run("spectrum", "--config", quick_config, "--out", out) == 0
    assert (out / "spectrum_SYN001.csv").read_text().startswith("period,Sa")
    assert (out / "spectra.svg").is_file()


def test_eval_rejects_network_of_wrong_dims(quick_config, tmp_path):
    out = tmp_path / "out"
    install_network(out, 5, 1)
    assert run("eval", "--config", quick_config, "--out", out) == 2
    assert "expects 9->3" in manifest(out)["message"]


def test_eval_without_network_exits_2(quick_config, tmp_path):
    out = tmp_path / "out"
    assert run("eval", "--config", quick_config, "--out", out) == 2
    assert "network file not found" in manifest(out)["message"]


def test_eval_with_no_records_is_empty(tmp_path):
    out = tmp_path / "out"
    install_network(out, 9, 3)
    assert run("eval", "--records", tmp_path / "none" / "*.AT2", "--out", out, "--workers", 1) == 0
    with open(out / "eval_report.csv") as f:
        header, total = list(csv.reader(f))
    assert header[:11] == ["record_id", "role", "avg_dof1", "avg_dof2", "avg_dof3", "peak_dof1", "peak_dof2",
                           "peak_dof3", "tf_dof1", "tf_dof2", "tf_dof3"]
    assert total[0] == "TOTAL"
    assert total[-2] == "9-5-5-3"
    assert all(cell == "" for i, cell in enumerate(total) if i not in (0, len(total) - 2))


def test_train_eval_plot(quick_config, tmp_path):
    out = tmp_path / "out"
    assert run("train", "--config", quick_config, "--out", out) == 0
    for artifact in ("network.txt", "train_log.csv", "normalizer.yaml", "roles.yaml", "eval_training.csv"):
        assert (out / artifact).is_file()
    summary = yaml.safe_load((out / "train_summary.yaml").read_text())
    assert summary["architecture"].startswith("9-") and summary["architecture"].endswith("-3")

    assert run("eval", "--config", quick_config, "--out", out) == 0
    with open(out / "eval_report.csv") as f:
        roles = {r["record_id"]: r["role"] for r in csv.DictReader(f) if r["record_id"] != "TOTAL"}
    assert roles == {"SYN000": "Training", "SYN001": "Validation"}
    assert (out / "overlay_SYN001.svg").is_file()

    assert run("plot", "--config", quick_config, "--out", out, "--network", out / "network.txt") == 0
    assert (out / "hysteresis_SYN000.svg").is_file()


def test_unconverged_training_is_flagged_in_report(tmp_path):
    config = tmp_path / "short.yaml"
    settings = yaml.safe_load(yaml.safe_dump(QUICK_FRAME))
    settings["training"]["error_threshold_pct"] = 1.0e-6
    config.write_text(yaml.safe_dump(settings))
    out = tmp_path / "out"
    assert run("train", "--config", config, "--out", out) == 0
    summary = yaml.safe_load((out / "train_summary.yaml").read_text())
    assert summary["converged"] is False

    with open(out / "eval_training.csv") as f:
        rows = list(csv.DictReader(f))
    assert [r["record_id"] for r in rows] == ["SYN000", "TOTAL"]
    total = rows[-1]
    assert total["converged"] == "false"
    assert total["architecture"] == summary["architecture"]
    assert float(total["oracle_s"]) > 0
    assert float(total["rollout_s"]) > 0
    assert float(total["speedup"]) == pytest.approx(float(total["oracle_s"]) / float(total["rollout_s"]), rel=1e-2)

    assert run("eval", "--config", config, "--out", out, "--no-plots") == 0
    with open(out / "eval_report.csv") as f:
        total = list(csv.DictReader(f))[-1]
    assert total["converged"] == "false"
    assert total["architecture"] == summary["architecture"]


def test_training_is_reproducible(quick_config, tmp_path):
    for name in ("a", "b"):
        assert run("train", "--config", quick_config, "--out", tmp_path / name, "--seed", 5) == 0
    assert (tmp_path / "a" / "network.txt").read_text() == (tmp_path / "b" / "network.txt").read_text()
    assert (tmp_path / "a" / "train_log.csv").read_text() == (tmp_path / "b" / "train_log.csv").read_text()
    assert "seed 5" in (tmp_path / "a" / "network.txt").read_text()


@pytest.mark.slow
def test_bench_reports_both_sections(quick_config, tmp_path):
    out = tmp_path / "out"
    install_network(out, 9, 3)
    assert run("bench", "--config", quick_config, "--out", out, "--count", 2) == 0
    with open(out / "bench.csv") as f:
        rows = list(csv.DictReader(f))
    assert [r["section"] for r in rows] == ["single"] * 3 + ["multi-2"] * 3
    assert [r["record_id"] for r in rows if r["section"] == "single"] == ["BENCH000", "BENCH001", "TOTAL"]


def test_registered_commands_carry_their_yaml_descriptions():
    from main import SurrogateCLI

    commands = SurrogateCLI().command_manager.commands
    assert set(commands) == {"simulate", "scale", "spectrum", "train", "eval", "bench", "plot"}
    assert commands["eval"].spec["description"].startswith("Closed-loop rollout")
    assert all(command.spec["description"] for command in commands.values())
