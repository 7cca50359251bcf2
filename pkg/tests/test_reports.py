"""Output artifacts: deterministic tables, config echo, rendered figures."""

import json
import math

import numpy as np
import pytest

from fracsta.cli import RunConfig
from fracsta.core import Protocol
from fracsta.evolve import TimeGrid, propagate_state
from fracsta.lambda_system import LambdaDriveConfig, LambdaModel
from fracsta.reports import (
    format_value,
    render_sweep,
    render_trajectory,
    sweep_table,
    trajectory_table,
    write_sweep,
    write_table,
    write_trajectory,
)
from fracsta.sweeps import SweepAxis, SweepSpec, System, run_sweep
from fracsta.tripod_system import TripodDriveConfig, TripodModel

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

CONFIG_DOC = {
    "system": "lambda",
    "protocol": "f_sta",
    "omega0_T": 2.0,
    "tau_over_T": 0.7,
    "delta_T": 0.2 * math.pi,
    "alpha": math.pi / 4,
}


@pytest.fixture(scope="module")
def short_trajectory():
    cfg = LambdaDriveConfig(omega0=2.0, tau=0.7, alpha=math.pi / 4, delta=0.2 * math.pi)
    model = LambdaModel(cfg, Protocol.F_STA)
    return propagate_state(model.matrix, model.initial_state(), TimeGrid(n_steps=200))


@pytest.fixture(scope="module")
def both_sweep():
    cfg = LambdaDriveConfig(omega0=2.0, tau=0.7, alpha=math.pi / 4, delta=0.2 * math.pi)
    spec = SweepSpec(
        system=System.LAMBDA,
        protocol=Protocol.BOTH,
        swept=SweepAxis.ALPHA,
        sweep_range=(0.2, 1.2, 3),
        fixed=cfg,
        grid=TimeGrid(n_steps=600),
    )
    return run_sweep(spec)


class TestFormatting:
    def test_twelve_significant_digits(self):
        assert format_value(1.0 / 3.0) == "0.333333333333"
        assert format_value(0.2 * math.pi) == "0.628318530718"
        assert format_value(2.0) == "2"
        assert format_value(1e-7) == "1e-07"

    def test_round_trip_precision(self):
        for x in (1.0 / 3.0, 0.2 * math.pi, 123456.789, 5e-13):
            assert float(format_value(x)) == pytest.approx(x, rel=1e-11)


class TestTables:
    def test_trajectory_columns(self, short_trajectory):
        columns, rows = trajectory_table(short_trajectory)
        assert columns == ["t_over_T", "P1", "P2", "P3"]
        assert rows.shape == (201, 4)
        np.testing.assert_array_equal(rows[:, 0], short_trajectory.times)

    def test_tripod_trajectory_has_four_populations(self):
        cfg = TripodDriveConfig(omega0=2.0, tau=0.7, beta=0.9, chi=0.8, delta=0.0)
        model = TripodModel(cfg, Protocol.F_STA)
        traj = propagate_state(model.matrix, model.initial_state(), TimeGrid(n_steps=150))
        columns, rows = trajectory_table(traj)
        assert columns == ["t_over_T", "P1", "P2", "P3", "P4"]
        assert rows.shape == (151, 5)

    def test_sweep_columns_two_protocols(self, both_sweep):
        columns, rows = sweep_table(both_sweep)
        assert columns == [
            "swept_value",
            "f_sta_P1_final", "f_sta_P2_final", "f_sta_P3_final",
            "f_stirap_P1_final", "f_stirap_P2_final", "f_stirap_P3_final",
            "theory_P1", "theory_P2", "theory_P3",
        ]
        assert rows.shape == (3, 10)
        np.testing.assert_array_equal(rows[:, 1:4], both_sweep.finals[Protocol.F_STA])

    def test_sweep_columns_single_protocol(self):
        cfg = LambdaDriveConfig(omega0=2.0, tau=0.7, alpha=0.5, delta=0.0)
        spec = SweepSpec(
            system=System.LAMBDA, protocol=Protocol.F_STA, swept=SweepAxis.OMEGA0,
            sweep_range=(1.0, 3.0, 2), fixed=cfg, grid=TimeGrid(n_steps=400),
        )
        columns, rows = sweep_table(run_sweep(spec))
        assert columns == ["swept_value", "P1_final", "P2_final", "P3_final"]
        assert rows.shape == (2, 4)


class TestCsvArtifacts:
    def test_trajectory_file_layout(self, tmp_path, short_trajectory):
        run = RunConfig.from_dict(CONFIG_DOC)
        path = write_trajectory(tmp_path / "run.csv", short_trajectory,
                                config=run.to_dict(), extra={"protocol": "f_sta"})
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# fracsta ")
        assert lines[1].startswith("# config: ")
        assert any(line.startswith("# protocol: f_sta") for line in lines[:5])
        assert any(line.startswith("# max_drift: ") for line in lines[:5])
        header = next(line for line in lines if not line.startswith("#"))
        assert header == "t_over_T,P1,P2,P3"
        data = [line for line in lines if not line.startswith("#")][1:]
        assert len(data) == 201

    def test_config_echo_replays(self, tmp_path, short_trajectory):
        run = RunConfig.from_dict(CONFIG_DOC)
        path = write_trajectory(tmp_path / "run.csv", short_trajectory, config=run.to_dict())
        config_line = next(
            line for line in path.read_text().splitlines() if line.startswith("# config: ")
        )
        doc = json.loads(config_line[len("# config: "):])
        assert RunConfig.from_dict(doc) == run

    def test_byte_determinism(self, tmp_path, short_trajectory):
        run = RunConfig.from_dict(CONFIG_DOC)
        a = write_trajectory(tmp_path / "a.csv", short_trajectory, config=run.to_dict())
        b = write_trajectory(tmp_path / "b.csv", short_trajectory, config=run.to_dict())
        assert a.read_bytes() == b.read_bytes()

    def test_sweep_metadata_wins_over_extra(self, tmp_path, both_sweep):
        path = write_sweep(tmp_path / "sweep.csv", both_sweep,
                           extra={"note": "hand run", "system": "OVERRIDDEN"})
        text = path.read_text()
        assert "# note: hand run\n" in text
        assert "# system: lambda\n" in text
        assert "OVERRIDDEN" not in text
        header = next(
            line for line in text.splitlines() if not line.startswith("#")
        )
        assert header.startswith("swept_value,f_sta_P1_final")
        assert header.endswith("theory_P3")

    def test_unknown_format_rejected(self, tmp_path, short_trajectory):
        with pytest.raises(ValueError, match="unknown output format"):
            write_trajectory(tmp_path / "run.tsv", short_trajectory, fmt="tsv")


class TestJsonArtifacts:
    def test_document_shape(self, tmp_path, short_trajectory):
        run = RunConfig.from_dict(CONFIG_DOC)
        path = write_trajectory(tmp_path / "run.json", short_trajectory,
                                config=run.to_dict(), fmt="json")
        doc = json.loads(path.read_text())
        assert doc["artifact"]["name"] == "fracsta"
        assert doc["columns"] == ["t_over_T", "P1", "P2", "P3"]
        assert len(doc["rows"]) == 201
        assert doc["rows"][0][0] == float(format_value(short_trajectory.times[0]))
        assert RunConfig.from_dict(doc["config"]) == run
        assert "max_drift" in doc["metadata"]

    def test_generic_table_writer(self, tmp_path):
        path = write_table(tmp_path / "t.json", ["x", "y"],
                           np.array([[1.0, 2.0], [3.0, 4.0]]), fmt="json")
        doc = json.loads(path.read_text())
        assert doc["rows"] == [[1.0, 2.0], [3.0, 4.0]]
        assert doc["config"] is None


class TestRendering:
    def test_trajectory_png(self, tmp_path, short_trajectory):
        path = render_trajectory(tmp_path / "run.png", short_trajectory, title="bench")
        blob = path.read_bytes()
        assert blob.startswith(PNG_MAGIC)
        assert len(blob) > 1000

    def test_sweep_png_with_theory_overlay(self, tmp_path, both_sweep):
        path = render_sweep(tmp_path / "sweep.png", both_sweep,
                            xlabel="alpha", title="alpha scan")
        assert path.read_bytes().startswith(PNG_MAGIC)
