"""
CSV エクスポートとサマリーレポートのテスト
"""
import json

import pandas as pd
import pytest

from collectors.simulator import rollout_error
from models.schemas import EvaluationReport, GridSearchResult, HamiltonianStats, KernelFamily, OddErrorStats
from utils.export import (
    artifact_name,
    export_hamiltonian_table,
    export_odd_error_table,
    export_rollout,
    export_score_table,
    hamiltonian_rows,
    odd_error_rows,
)
from utils.report_generator import REPORTED_VALUES, ReportConfig, ReportGenerator


def make_report(family, odd_mean, rollout=None, hamiltonian=None, defect=None, system="oscillator"):
    return EvaluationReport(
        system=system,
        family=family,
        seed=0,
        odd_error=OddErrorStats(mean=odd_mean, variance=0.0, samples=100),
        true_odd_error=OddErrorStats(mean=0.0, variance=0.0, samples=100),
        hamiltonian=hamiltonian,
        rollout=rollout or [(0.0, 0.0), (1.0, 0.1)],
        symplecticity_defect=defect,
    )


def make_data(sep_odd=0.65, sep_err=1.0, odd_err=0.1, variance=1e-9, experiment="oscillator"):
    hamiltonian = HamiltonianStats(mean=-100.0, variance=variance, true_mean=2.0, true_variance=1e-12, offset=-102.0)
    separable = make_report("separablegaussian", sep_odd, [(0.0, 0.0), (1.0, 2 * sep_err)], defect=0.5,
                            system=experiment)
    odd = make_report("oddsymplectic", 0.0, [(0.0, 0.0), (1.0, 2 * odd_err)], hamiltonian, defect=1e-4,
                      system=experiment)
    return {
        "experiment": experiment,
        "seed": 0,
        "n_samples": 15,
        "models": {
            "separablegaussian": {"sigma": 19.5, "lambda": 1e-4, "cv_mse": 0.02, "report": separable},
            "oddsymplectic": {"sigma": 12.1, "lambda": 1e-4, "cv_mse": 0.01, "report": odd},
        },
    }


class TestArtifactName:
    def test_full(self):
        assert artifact_name("rollout", "oscillator", "oddsymplectic", 0) == "rollout_oscillator_oddsymplectic_seed0.csv"

    def test_without_family(self):
        assert artifact_name("dataset", "pendulum", seed=3) == "dataset_pendulum_seed3.csv"

    def test_extension(self):
        assert artifact_name("model", "pendulum", "symplectic", 1, ext="json") == "model_pendulum_symplectic_seed1.json"


class TestTables:
    def test_odd_error_rows_have_one_true_row_per_system(self):
        reports = [
            make_report("separablegaussian", 0.65),
            make_report("oddsymplectic", 0.0),
            make_report("oddsymplectic", 0.0, system="pendulum"),
        ]
        rows = odd_error_rows(reports)
        assert [(r["system"], r["model"]) for r in rows] == [
            ("oscillator", "true"),
            ("oscillator", "separablegaussian"),
            ("oscillator", "oddsymplectic"),
            ("pendulum", "true"),
            ("pendulum", "oddsymplectic"),
        ]

    def test_hamiltonian_rows(self):
        stats = HamiltonianStats(mean=-108.5, variance=6e-9, true_mean=2.0, true_variance=5e-9, offset=-110.5)
        rows = hamiltonian_rows([make_report("oddsymplectic", 0.0, hamiltonian=stats),
                                 make_report("separablegaussian", 0.6)])
        assert [r["hamiltonian"] for r in rows] == ["real", "learned"]
        assert rows[1]["offset"] == -110.5

    def test_export_tables(self, tmp_path):
        data = make_data()
        reports = [entry["report"] for entry in data["models"].values()]
        odd = pd.read_csv(export_odd_error_table(reports, tmp_path / "odd.csv"))
        assert list(odd.columns) == ["system", "model", "mean", "variance"]
        assert len(odd) == 3
        ham = pd.read_csv(export_hamiltonian_table(reports, tmp_path / "ham.csv"))
        assert list(ham.columns) == ["system", "model", "hamiltonian", "mean", "variance", "offset"]
        assert len(ham) == 2

    def test_score_table(self, tmp_path):
        result = GridSearchResult(
            family=KernelFamily.ODD_SYMPLECTIC, sigma=3.0, lam=1e-4, score=0.01,
            table=[{"sigma": 3.0, "lambda": 1e-4, "cv_mse": 0.01}, {"sigma": 3.0, "lambda": 1e-3, "cv_mse": 0.02}],
        )
        frame = pd.read_csv(export_score_table(result, tmp_path / "scores.csv"), float_precision="round_trip")
        assert list(frame.columns) == ["sigma", "lambda", "cv_mse"]
        assert frame["lambda"].tolist() == [1e-4, 1e-3]

    def test_rollout_columns(self, oscillator, tmp_path):
        rollout = rollout_error(oscillator, oscillator, (2.0, 0.0), 0.1, 1.0)
        frame = pd.read_csv(export_rollout(rollout, tmp_path / "nested" / "rollout.csv"))
        assert list(frame.columns) == ["t", "true_x1", "true_x2", "learned_x1", "learned_x2", "err"]
        assert len(frame) == 11
        assert (frame["err"] == 0.0).all()


class TestReportGenerator:
    def test_all_checks_pass(self):
        checks = ReportGenerator().evaluate_checks(make_data())
        assert checks
        assert all(c["passed"] for c in checks), checks

    def test_rollout_ratio_check_fails(self):
        checks = ReportGenerator().evaluate_checks(make_data(odd_err=0.5))
        failed = [c["check"] for c in checks if not c["passed"]]
        assert failed == ["odd-symplectic rollout error <= 1/5 of separable"]

    def test_pendulum_uses_plain_comparison(self):
        checks = ReportGenerator().evaluate_checks(make_data(sep_odd=7.9, odd_err=0.5, experiment="pendulum"))
        assert all(c["passed"] for c in checks), checks

    def test_separable_range(self):
        checks = ReportGenerator().evaluate_checks(make_data(sep_odd=5.0))
        (check,) = [c for c in checks if c["check"].startswith("separable-Gaussian")]
        assert not check["passed"]

    def test_hamiltonian_variance(self):
        config = ReportConfig(hamiltonian_variance_tolerance=1e-10)
        checks = ReportGenerator(config).evaluate_checks(make_data(variance=1e-9))
        (check,) = [c for c in checks if c["check"].startswith("learned Hamiltonian")]
        assert not check["passed"]

    def test_markdown(self):
        text = ReportGenerator().generate_report(make_data(), "markdown").decode("utf-8")
        assert text.startswith("# ")
        assert "| oddsymplectic | 12.1 | 0.0001 |" in text
        assert "(19.5, 0.0001)" in text
        assert "FAIL" not in text

    def test_markdown_without_rollout(self):
        data = make_data()
        for entry in data["models"].values():
            entry["report"] = entry["report"].model_copy(
                update={"rollout": [], "symplecticity_defect": None, "hamiltonian": None}
            )
        text = ReportGenerator().generate_report(data, "markdown").decode("utf-8")
        assert "| separablegaussian | - | - | - |" in text
        assert "| oddsymplectic | - | - | - |" in text
        checks = ReportGenerator().evaluate_checks(data)
        assert not any("rollout" in c["check"] for c in checks)

    def test_json(self):
        payload = json.loads(ReportGenerator().generate_report(make_data(), "json"))
        assert payload["experiment"] == "oscillator"
        assert payload["models"]["oddsymplectic"]["rollout_mean_error"] == pytest.approx(0.1)
        assert "rollout" not in payload["models"]["oddsymplectic"]["report"]
        assert all(c["passed"] for c in payload["checks"])

    def test_unsupported_format(self):
        with pytest.raises(ValueError):
            ReportGenerator().generate_report(make_data(), "pdf")

    def test_reference_values(self):
        assert REPORTED_VALUES["oscillator"]["hyperparameters"]["oddsymplectic"] == (12.1, 1e-4)
        assert REPORTED_VALUES["pendulum"]["hyperparameters"]["separablegaussian"] == (12.3, 0.1)
