"""End-to-end CLI behavior: subcommands, file outputs, exit codes, and the
config/report round-trips."""

import csv
import json
import math
from pathlib import Path

import pytest

from fairmarket.cli import main
from fairmarket.config import ConfigError, load_config, parse_config

REPO_CONFIGS = Path(__file__).resolve().parent.parent / "configs"
AB_EXAMPLE = REPO_CONFIGS / "ab_example.toml"


def write_benchmark_csv(path: Path, with_category: bool = True) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["salary", "category"] if with_category else ["salary"])
        for _ in range(800):
            writer.writerow(["30000.00", "low"] if with_category else ["30000.00"])
        for _ in range(200):
            writer.writerow(["180000.00", "high"] if with_category else ["180000.00"])


class TestAnalyze:
    def test_benchmark_values(self, tmp_path, capsys):
        csv_path = tmp_path / "sample.csv"
        write_benchmark_csv(csv_path)
        assert main(["analyze", str(csv_path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["n"] == 1000
        assert doc["theil"] == pytest.approx(0.381908, abs=1e-6)
        assert doc["gini"] == pytest.approx(0.4, abs=1e-9)
        assert doc["maximin"] == "30000.00"
        assert doc["mean_salary"] == "60000.00"
        assert doc["categories"]["entropy_nats"] == pytest.approx(0.500402, abs=1e-6)
        assert doc["categories"]["log_multiplicity_nats"] == pytest.approx(
            215.820671344458 * math.log(10), abs=1e-6
        )
        between = doc["categories"]["theil_between"]
        within = doc["categories"]["theil_within"]
        weights = doc["categories"]["theil_weights"]
        total = between + sum(w * t for w, t in zip(weights, within))
        assert total == pytest.approx(doc["theil"], abs=1e-12)

    def test_equal_salaries(self, tmp_path, capsys):
        csv_path = tmp_path / "equal.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["salary"])
            for _ in range(10):
                writer.writerow(["42000.00"])
        assert main(["analyze", str(csv_path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["theil"] == 0.0
        assert doc["gini"] == 0.0
        assert "categories" not in doc

    def test_zero_salary_names_row(self, tmp_path, capsys):
        csv_path = tmp_path / "bad.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as handle:
            handle.write("salary\n100.00\n0.00\n")
        assert main(["analyze", str(csv_path)]) == 2
        err = capsys.readouterr().err
        assert ":3:" in err  # header is line 1, offending row is line 3

    def test_malformed_value_names_row_and_column(self, tmp_path, capsys):
        csv_path = tmp_path / "bad.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as handle:
            handle.write("salary\n100.00\nnot-money\n")
        assert main(["analyze", str(csv_path)]) == 2
        err = capsys.readouterr().err
        assert ":3:" in err and "salary" in err

    def test_missing_column(self, tmp_path, capsys):
        csv_path = tmp_path / "headerless.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as handle:
            handle.write("wage\n100.00\n")
        assert main(["analyze", str(csv_path)]) == 2

    def test_fit_flag_adds_lognormal_block(self, tmp_path, capsys):
        csv_path = tmp_path / "sample.csv"
        write_benchmark_csv(csv_path, with_category=False)
        assert main(["analyze", str(csv_path), "--fit"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc["lognormal_fit"]) == {"mu", "sigma", "ks"}


class TestSimulate:
    def test_ab_example(self, tmp_path, capsys):
        traj = tmp_path / "t.csv"
        final = tmp_path / "f.json"
        code = main(
            [
                "simulate",
                str(AB_EXAMPLE),
                "--trajectory",
                str(traj),
                "--final-state",
                str(final),
            ]
        )
        assert code == 0
        state = json.loads(final.read_text())
        assert state["status"] == "CONVERGED"
        assert state["budget"] == "60000000.00"
        for company in state["companies"]:
            salaries = [c["salary"] for c in company["classes"]]
            assert salaries == ["45000.00", "45000.00", "120000.00"]
            assert company["budget"] == "60000000.00"
        rows = traj.read_text().strip().splitlines()
        assert rows[0] == "round,trades,mean_entropy_nats,mean_log_w_nats"
        assert rows[1].startswith("0,0,")

    def test_byte_identical_reruns(self, tmp_path):
        paths = []
        for run in ("one", "two"):
            traj = tmp_path / f"t_{run}.csv"
            final = tmp_path / f"f_{run}.json"
            assert (
                main(
                    [
                        "simulate",
                        str(AB_EXAMPLE),
                        "--trajectory",
                        str(traj),
                        "--final-state",
                        str(final),
                    ]
                )
                == 0
            )
            paths.append((traj.read_bytes(), final.read_bytes()))
        assert paths[0] == paths[1]

    def test_seed_flag_changes_outputs(self, tmp_path):
        outputs = []
        for seed in ("7", "8"):
            traj = tmp_path / f"t{seed}.csv"
            final = tmp_path / f"f{seed}.json"
            main(
                [
                    "simulate",
                    str(REPO_CONFIGS / "ensemble64.toml"),
                    "--seed",
                    seed,
                    "--trajectory",
                    str(traj),
                    "--final-state",
                    str(final),
                ]
            )
            outputs.append(final.read_bytes())
        assert outputs[0] != outputs[1]

    def test_resume_round_trip_is_quiescent(self, tmp_path):
        final = tmp_path / "f.json"
        resumed = tmp_path / "f2.json"
        main(
            [
                "simulate",
                str(AB_EXAMPLE),
                "--trajectory",
                str(tmp_path / "t.csv"),
                "--final-state",
                str(final),
            ]
        )
        code = main(
            [
                "simulate",
                "--resume",
                str(final),
                "--trajectory",
                str(tmp_path / "t2.csv"),
                "--final-state",
                str(resumed),
            ]
        )
        assert code == 0
        state = json.loads(resumed.read_text())
        assert state["total_trades"] == 0
        assert state["status"] == "CONVERGED"

    def test_round_limit_exit_code(self, tmp_path):
        config = tmp_path / "limited.toml"
        config.write_text(
            AB_EXAMPLE.read_text().replace("max_rounds = 100", "max_rounds = 1")
        )
        code = main(
            [
                "simulate",
                str(config),
                "--trajectory",
                str(tmp_path / "t.csv"),
                "--final-state",
                str(tmp_path / "f.json"),
            ]
        )
        assert code == 3

    def test_missing_seed_is_an_error(self, tmp_path, capsys):
        config = tmp_path / "seedless.toml"
        config.write_text(AB_EXAMPLE.read_text().replace("seed = 7\n", ""))
        code = main(
            [
                "simulate",
                str(config),
                "--trajectory",
                str(tmp_path / "t.csv"),
                "--final-state",
                str(tmp_path / "f.json"),
            ]
        )
        assert code == 2
        assert "seed" in capsys.readouterr().err

    def test_single_company_rejected(self, tmp_path, capsys):
        config = tmp_path / "solo.toml"
        config.write_text(
            "companies = 1\nn_per_company = 2\nbudget = \"4.00\"\n"
            "epsilon = \"0.01\"\nseed = 1\nmax_rounds = 5\nquiet_rounds = 1\n"
            "[[classes]]\ncount = 2\nsalary = \"2.00\"\n"
        )
        assert (
            main(
                [
                    "simulate",
                    str(config),
                    "--trajectory",
                    str(tmp_path / "t.csv"),
                    "--final-state",
                    str(tmp_path / "f.json"),
                ]
            )
            == 2
        )
        assert "companies" in capsys.readouterr().err


class TestSolve:
    def test_probabilities_sum_to_one(self, tmp_path):
        out = tmp_path / "sol.csv"
        mult = tmp_path / "mult.json"
        code = main(
            [
                "solve",
                "--grid-min", "1200", "--grid-max", "3000000",
                "--grid-levels", "512",
                "--mean", "60000",
                "--output", str(out),
                "--multipliers", str(mult),
            ]
        )
        assert code == 0
        rows = out.read_text().strip().splitlines()[1:]
        assert len(rows) == 512
        total = sum(float(r.split(",")[1]) for r in rows)
        assert total == pytest.approx(1.0, abs=1e-9)
        payload = json.loads(mult.read_text())
        assert payload["residual_norm"] <= 1e-10
        assert len(payload["multipliers"]) == 1

    def test_no_constraints_uniform(self, tmp_path):
        out = tmp_path / "sol.csv"
        main(
            [
                "solve",
                "--grid-min", "1", "--grid-max", "10", "--grid-levels", "8",
                "--output", str(out),
                "--multipliers", str(tmp_path / "m.json"),
            ]
        )
        probs = [float(r.split(",")[1]) for r in out.read_text().strip().splitlines()[1:]]
        assert all(p == pytest.approx(1 / 8, abs=1e-12) for p in probs)

    def test_infeasible_exit_code(self, tmp_path, capsys):
        code = main(
            [
                "solve",
                "--grid-min", "1", "--grid-max", "10",
                "--mean", "50",
                "--output", str(tmp_path / "s.csv"),
                "--multipliers", str(tmp_path / "m.json"),
            ]
        )
        assert code == 2


class TestFit:
    def test_fit_json(self, tmp_path, capsys):
        csv_path = tmp_path / "sample.csv"
        write_benchmark_csv(csv_path, with_category=False)
        assert main(["fit", str(csv_path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["input"]["rows"] == 1000
        assert doc["sigma"] > 0
        assert 0 <= doc["ks"] <= 1


class TestFinalStateRoundTrip:
    def test_ensemble_survives_render_and_parse(self):
        from fractions import Fraction

        from fairmarket import NegotiationPolicy, StopRule, run_to_equilibrium
        from fairmarket.config import build_ensemble
        from fairmarket.reporting import (
            ensemble_from_final_state,
            final_state_document,
            render_json,
        )

        config = load_config(AB_EXAMPLE)
        ensemble = build_ensemble(config, config.seed)
        trajectory = run_to_equilibrium(ensemble, config.policy, config.stop)
        document = final_state_document(
            trajectory, config.alpha, config.epsilon,
            config.max_rounds, config.quiet_rounds,
        )
        parsed = json.loads(render_json(document))
        rebuilt, alpha, epsilon, max_rounds, quiet_rounds = (
            ensemble_from_final_state(parsed)
        )
        assert rebuilt.companies == trajectory.final.companies
        assert rebuilt.seed == trajectory.final.seed
        assert (alpha, epsilon) == (Fraction(1, 2), 100)
        assert (max_rounds, quiet_rounds) == (100, 3)


class TestConfigParsing:
    def test_bundled_example_loads(self):
        config = load_config(AB_EXAMPLE)
        assert config.companies == 2
        assert config.budget == 6_000_000_000
        assert config.overrides[1] == (3_000_000, 3_000_000, 18_000_000)

    def test_float_money_rejected(self):
        with pytest.raises(ConfigError, match="float"):
            parse_config(
                {
                    "companies": 2,
                    "n_per_company": 1,
                    "budget": 60000.0,
                    "epsilon": "1.00",
                    "seed": 1,
                    "max_rounds": 1,
                    "quiet_rounds": 1,
                    "classes": [{"count": 1, "salary": "1.00"}],
                }
            )

    def test_class_counts_must_sum(self):
        with pytest.raises(ConfigError, match="classes"):
            parse_config(
                {
                    "companies": 2,
                    "n_per_company": 10,
                    "budget": "100.00",
                    "epsilon": "0.01",
                    "seed": 1,
                    "max_rounds": 1,
                    "quiet_rounds": 1,
                    "classes": [{"count": 4, "salary": "10.00"}],
                }
            )

    def test_unbalanced_explicit_salaries_rejected(self, tmp_path, capsys):
        config = tmp_path / "unbalanced.toml"
        config.write_text(
            "companies = 2\nn_per_company = 2\nbudget = \"100.00\"\n"
            "epsilon = \"0.01\"\nseed = 1\nmax_rounds = 5\nquiet_rounds = 1\n"
            "[[classes]]\ncount = 2\nsalary = \"49.00\"\n"
        )
        assert (
            main(
                [
                    "simulate",
                    str(config),
                    "--trajectory",
                    str(tmp_path / "t.csv"),
                    "--final-state",
                    str(tmp_path / "f.json"),
                ]
            )
            == 2
        )
        assert "budget" in capsys.readouterr().err
