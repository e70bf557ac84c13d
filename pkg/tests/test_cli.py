"""Command-line surface."""
import pytest
import yaml
from src.main import build_parser, main
from src.utils.csv_utils import read_csv

SMALL_EXPERIMENT = {
    "interferometer": {
        "alpha": 1.0, "gamma": 1e-4, "r1": 0.5, "r2": 0.5,
        "theta1": 0.0, "theta2": 3.141592653589793, "phi": 0.3, "mu": 1.0, "eta": 1.0,
    },
    "scheme": "hd",
    "sweep": {
        "axis1": {"name": "phi", "start": 0.1, "stop": 0.5, "count": 5},
        "quantity": "delta_phi_hd",
    },
}


@pytest.fixture
def experiment(tmp_path):
    path = tmp_path / "small.yaml"
    path.write_text(yaml.safe_dump(SMALL_EXPERIMENT), encoding="utf-8")
    return path


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_moments(experiment, capsys):
    assert main(["moments", "--config", str(experiment)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split("=")[0] for line in lines] == ["m1", "m2", "n1", "n2", "var1", "var2",
                                                       "cov"]


def test_moments_with_oracle(experiment, tmp_path):
    out = tmp_path / "moments.csv"
    args = ["moments", "--config", str(experiment), "--engine", "oracle-exact", "--out", str(out)]
    assert main(args) == 0
    assert [row["quantity"] for row in read_csv(out)][:2] == ["m1", "m2"]


def test_sweep(experiment, tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(experiment), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 5
    assert {row["engine"] for row in rows} == {"analytic"}


def test_optimum(experiment, capsys):
    assert main(["optimum", "--config", str(experiment), "--grid", "64"]) == 0
    assert "phi_star=" in capsys.readouterr().out


def test_figure(tmp_path):
    assert main(["figure", "fig2", "--out", str(tmp_path)]) == 0
    assert len(read_csv(tmp_path / "fig2.csv")) == 101


def test_unknown_figure_exit_code(tmp_path):
    assert main(["figure", "fig99", "--out", str(tmp_path)]) == 2


def test_missing_config_exit_code(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "absent.yaml")]) == 2


def test_invalid_config_exit_code(tmp_path):
    path = tmp_path / "bad.yaml"
    document = {**SMALL_EXPERIMENT, "interferometer": {**SMALL_EXPERIMENT["interferometer"],
                                                       "mu": 1.5}}
    path.write_text(yaml.safe_dump(document), encoding="utf-8")
    assert main(["moments", "--config", str(path)]) == 2


def test_unknown_engine_exit_code(experiment):
    assert main(["moments", "--config", str(experiment), "--engine", "magic"]) == 2


def test_verify(tmp_path, capsys):
    out = tmp_path / "verify.csv"
    assert main(["verify", "--out", str(out)]) == 0
    assert capsys.readouterr().out.startswith("PASS")
