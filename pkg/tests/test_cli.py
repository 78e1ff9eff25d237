import json
from pathlib import Path

import pytest

from momentpde.cli import main
from momentpde.config import ConfigError, load_config, parse_config
from momentpde.models import DistributedQuadratic, Linear, LocalQuadratic
from momentpde.sdpa import read_sdpa, write_solution
from momentpde.solver import solve
from momentpde.relaxation import build_problem
from momentpde.tables import read_table_csv

DATA = Path(__file__).parent / "data"


def write_config(tmp_path, **overrides):
    raw = {"model": {"variant": "linear"}, "degrees": [2, 2, 2]}
    raw.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    return path


def test_sizes_matches_golden_file(capsys):
    assert main(["sizes"]) == 0
    out = capsys.readouterr().out
    assert out == (DATA / "sizes_golden.csv").read_text()


def test_sizes_reproducible(capsys):
    main(["sizes"])
    first = capsys.readouterr().out
    main(["sizes"])
    assert capsys.readouterr().out == first


def test_sizes_custom_triples(capsys, tmp_path):
    out_file = tmp_path / "sizes.csv"
    assert main(["sizes", "2,2,2", "0,0,0", "--out", str(out_file)]) == 0
    out = capsys.readouterr().out
    assert "2,2,2,63,12" in out
    assert "0,0,0,1,1" in out
    assert out_file.read_text() == out


def test_sizes_rejects_bad_triple(capsys):
    assert main(["sizes", "2,2"]) == 2
    assert main(["sizes", "3,2,2"]) == 2


def test_config_defaults():
    cfg = parse_config({})
    assert isinstance(cfg.model, Linear)
    assert cfg.degrees.as_tuple() == (4, 2, 2)
    assert cfg.initial.coeff(-1) == 1 and cfg.initial.coeff(0) == 1
    assert cfg.galerkin_cutoff() == 4  # twice the harmonic degree


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        parse_config({"model": {"variant": "nope"}})
    with pytest.raises(ConfigError):
        parse_config({"model": {"variant": "linear", "epsilon": 0.1}})
    with pytest.raises(ConfigError):
        parse_config({"degrees": [3, 2, 2]})
    with pytest.raises(ConfigError):
        parse_config({"solver": {"bogus": 1}})
    with pytest.raises(ConfigError):
        parse_config({"extra_key": True})
    with pytest.raises(ConfigError):
        # forcing modes beyond the harmonic degree
        parse_config(
            {"model": {"variant": "distributed", "epsilon": 0.1, "m1": 5}, "degrees": [2, 2, 2]}
        )


def test_config_model_variants():
    cfg = parse_config(
        {"model": {"variant": "distributed", "epsilon": 0.5, "m1": 1, "m2": 2},
         "degrees": [2, 2, 2]}
    )
    assert cfg.model == DistributedQuadratic(0.5, 1, 2)
    cfg = parse_config({"model": {"variant": "local", "epsilon": 2.0}})
    assert cfg.model == LocalQuadratic(2.0)


def test_solve_subcommand(tmp_path, capsys):
    cfg = write_config(tmp_path, output_dir=str(tmp_path / "out"))
    assert main(["solve", "--config", str(cfg)]) == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["status"] == "optimal"
    assert report["max_equality_residual"] <= 1e-6
    assert report["degrees"] == [2, 2, 2]
    assert "runtime_seconds" in report
    csv_text = (tmp_path / "out" / "pseudomoments.csv").read_text()
    assert csv_text.startswith("measure,ell,freqs,re,im\n")
    assert "occupation" in csv_text and "terminal" in csv_text and "initial" in csv_text


def test_solve_output_deterministic(tmp_path):
    cfg = write_config(tmp_path)
    main(["solve", "--config", str(cfg), "--output-dir", str(tmp_path / "a")])
    main(["solve", "--config", str(cfg), "--output-dir", str(tmp_path / "b")])
    assert (tmp_path / "a" / "pseudomoments.csv").read_bytes() == (
        tmp_path / "b" / "pseudomoments.csv"
    ).read_bytes()


def test_missing_config_is_a_config_error(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "nope.json")]) == 2


def test_compare_analytic(tmp_path, capsys):
    cfg = write_config(tmp_path, output_dir=str(tmp_path / "out"))
    assert main(["compare", "--config", str(cfg), "--reference", "analytic"]) == 0
    rows = (tmp_path / "out" / "accuracy.csv").read_text().splitlines()
    assert rows[0] == "threshold,matched,total,percent"
    assert len(rows) == 9  # 8 thresholds
    first = rows[1].split(",")
    assert float(first[0]) == 0.1
    assert first[1] == first[2]  # everything matches at relerr 0.1


def test_compare_csv_reference(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(tmp_path, output_dir=str(out))
    assert main(["oracle", "--config", str(cfg), "--which", "analytic"]) == 0
    ref = out / "analytic_occupation.csv"
    assert ref.exists()
    assert main(["compare", "--config", str(cfg), "--reference", str(ref)]) == 0
    assert (out / "accuracy.csv").exists()


def test_compare_galerkin(tmp_path):
    cfg = write_config(tmp_path, output_dir=str(tmp_path / "out"))
    assert main(["compare", "--config", str(cfg), "--reference", "galerkin"]) == 0


def test_compare_missing_reference_index(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(tmp_path, output_dir=str(out))
    ref = tmp_path / "partial.csv"
    ref.write_text("ell,freqs,re,im\n0,,1.0,0.0\n")
    assert main(["compare", "--config", str(cfg), "--reference", str(ref)]) == 2


def test_oracle_galerkin(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(tmp_path, output_dir=str(out))
    assert main(["oracle", "--config", str(cfg), "--which", "galerkin"]) == 0
    for measure in ("initial", "terminal", "occupation"):
        table = read_table_csv(out / f"galerkin_{measure}.csv")
        assert len(table) > 0


def test_oracle_analytic_refuses_nonzero_epsilon(tmp_path):
    cfg = write_config(
        tmp_path, model={"variant": "local", "epsilon": 0.5}, output_dir=str(tmp_path / "o")
    )
    assert main(["oracle", "--config", str(cfg), "--which", "analytic"]) == 2
    # but a nonlinear variant at epsilon = 0 is the linear flow: allowed
    cfg0 = write_config(
        tmp_path, model={"variant": "local", "epsilon": 0.0}, output_dir=str(tmp_path / "o")
    )
    assert main(["oracle", "--config", str(cfg0), "--which", "analytic"]) == 0


def test_export_and_import_solution(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(tmp_path, output_dir=str(out))
    dat = tmp_path / "problem.dat-s"
    assert main(["export-sdpa", "--config", str(cfg), "--out", str(dat)]) == 0
    data = read_sdpa(dat)
    config = load_config(cfg)
    problem = build_problem(config.model, config.degrees, config.initial)
    assert data.num_constraints == problem.num_vars

    x, _ = solve(problem)
    sol = tmp_path / "solution.txt"
    write_solution(x, sol)
    assert main(
        ["import-solution", "--config", str(cfg), "--solution", str(sol)]
    ) == 0
    assert (out / "pseudomoments.csv").exists()

    # truncated solution file is a named dimension error
    write_solution(x[:-1], sol)
    assert main(
        ["import-solution", "--config", str(cfg), "--solution", str(sol)]
    ) == 2
