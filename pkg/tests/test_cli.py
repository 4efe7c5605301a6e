import json

import pytest

from gtlab import cli, suites


BASE_CONFIG = {"suites": ["inequalities"], "trials": 40, "dims": [2, 3],
               "seed": 1}


def run_cli(tmp_path, config, command="verify", fmt="json", out_name="report"):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config))
    out = tmp_path / out_name
    code = cli.main([command, "--config", str(cfg), "--format", fmt,
                     "--out", str(out)])
    return code, out.read_text() if out.exists() else None


class TestConfigParsing:
    def test_shorthand_and_object_forms(self):
        config = cli.parse_config(json.dumps({
            "suites": [{"name": "studies", "trials": 7}, "counterexamples"],
            "trials": 5, "seed": 2}))
        assert [r.name for r in config.requests] == ["studies", "counterexamples"]
        assert config.requests[0].params.trials == 7
        assert config.requests[1].params.trials == 5

    def test_family_filter(self):
        config = cli.parse_config(json.dumps({"suites": ["all"], "seed": 0}),
                                  family="studies")
        assert [r.name for r in config.requests] == ["studies"]

    def test_unknown_suite_position_annotated(self):
        with pytest.raises(cli.ConfigError, match=r"suites\[1\].name"):
            cli.parse_config(json.dumps({"suites": ["studies", "bogus"]}))

    def test_malformed_json_has_position(self):
        with pytest.raises(cli.ConfigError, match="line 1"):
            cli.parse_config("{not json")

    def test_bad_types_rejected(self):
        with pytest.raises(cli.ConfigError, match="trials"):
            cli.parse_config(json.dumps({"suites": [], "trials": "many"}))
        with pytest.raises(cli.ConfigError, match="dims"):
            cli.parse_config(json.dumps({"suites": [], "dims": [0]}))
        with pytest.raises(cli.ConfigError, match="unknown"):
            cli.parse_config(json.dumps({"suites": [], "extra": 1}))

    def test_seed_env_fallback(self, monkeypatch):
        monkeypatch.setenv("GTLAB_SEED", "777")
        config = cli.parse_config(json.dumps({"suites": []}))
        assert config.seed == 777


class TestRunAndEmit:
    def test_empty_suite_list(self, tmp_path):
        code, text = run_cli(tmp_path, {"suites": [], "seed": 1})
        assert code == 0
        report = json.loads(text)
        assert report["cases"] == []
        assert report["summary"]["total"] == 0

    def test_deterministic_reports_byte_identical(self, tmp_path):
        code1, text1 = run_cli(tmp_path, BASE_CONFIG, out_name="r1.json")
        code2, text2 = run_cli(tmp_path, BASE_CONFIG, out_name="r2.json")
        assert code1 == code2 == 0
        assert text1 == text2

    def test_json_round_trip(self, tmp_path):
        _, text = run_cli(tmp_path, BASE_CONFIG)
        document = cli.document_from_dict(json.loads(text))
        assert emitted_equal(document, text)

    def test_csv_row_count(self, tmp_path):
        _, text = run_cli(tmp_path, BASE_CONFIG, fmt="csv")
        json_code, json_text = run_cli(tmp_path, BASE_CONFIG, fmt="json",
                                       out_name="again.json")
        cases = json.loads(json_text)["cases"]
        rows = [line for line in text.splitlines() if line]
        assert len(rows) == len(cases) + 1
        assert rows[0] == "name,equation,lhs,rhs,margin,pass,trials"

    def test_forced_failure_exit_one(self, tmp_path):
        config = dict(BASE_CONFIG)
        config["tolerances"] = {"Eq.AB": -1.0}
        code, text = run_cli(tmp_path, config)
        assert code == 1
        report = json.loads(text)
        assert report["summary"]["failed"] >= 1
        failed = [c for c in report["cases"] if not c["passed"]]
        assert failed and failed[0]["equation"] == "Eq.AB"

    def test_config_error_exit_two(self, tmp_path):
        code, _ = run_cli(tmp_path, {"suites": ["bogus"]})
        assert code == 2

    def test_missing_config_exit_two(self, tmp_path):
        code = cli.main(["verify", "--config", str(tmp_path / "absent.json")])
        assert code == 2

    def test_resource_guard_exit_three(self, tmp_path):
        config = {"suites": ["concentration"], "trials": 30, "seed": 1,
                  "series_length": 16}
        code, _ = run_cli(tmp_path, config, command="tail")
        assert code == 3

    def test_ratio_subcommand_emits_target_case(self, tmp_path):
        config = {"suites": ["studies"], "trials": 20000, "seed": 3}
        code, text = run_cli(tmp_path, config, command="ratio")
        assert code == 0
        cases = json.loads(text)["cases"]
        ratio_cases = [c for c in cases if c["equation"] == "Eq.R"]
        assert ratio_cases
        assert abs(ratio_cases[0]["lhs"] - 4.0 / 3.0) < 0.05

    def test_hunt_serializes_witness(self, tmp_path):
        config = {"suites": ["counterexamples"], "trials": 50000, "seed": 4}
        code, text = run_cli(tmp_path, config, command="hunt")
        assert code == 0
        cases = {c["equation"]: c for c in json.loads(text)["cases"]}
        for tag in ("Eq.4.1d", "ABC.trace"):
            case = cases[tag]
            assert case["extra"]["found"] is True
            assert case["lhs"] > case["rhs"]
            assert "matrices" in case["extra"]

    def test_report_subcommand_reemits(self, tmp_path):
        _, text = run_cli(tmp_path, BASE_CONFIG)
        report_path = tmp_path / "saved.json"
        report_path.write_text(text)
        code = cli.main(["report", "--config", str(report_path),
                         "--format", "csv", "--out",
                         str(tmp_path / "re.csv")])
        assert code == 0
        assert (tmp_path / "re.csv").read_text().startswith("name,equation")

    def test_report_subcommand_rejects_non_report(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(BASE_CONFIG))
        assert cli.main(["report", "--config", str(cfg)]) == 2

    def test_family_restriction_yields_empty(self, tmp_path):
        code, text = run_cli(tmp_path, {"suites": ["studies"], "seed": 1},
                             command="verify")
        assert code == 0
        assert json.loads(text)["cases"] == []


def emitted_equal(document, text):
    return cli.emit(document, "json") == text


class TestRegistry:
    EXPECTED_TAGS = {
        # 2x2 reduction, hyperbolic forms, scalar bound
        "Eq.AB", "Eq.1", "Eq.1a", "Eq.1aA", "Eq.1b",
        # product-word lemmas and the limit formula
        "Lemma.1", "Lemma.2", "Lemma.3", "Eq.LT",
        # singular-value dominance and convex transfer
        "Eq.2.6", "Eq.H", "Eq.W2", "Eq.ALT", "Lemma.5",
        # spectral functionals and norm variants
        "Eq.4", "Eq.4.2", "Eq.4.1", "Eq.4.1w", "Eq.5", "Eq.5a",
        "Eq.Sn", "Eq.Sn1",
        # non-Hermitian extension, three-matrix bound, equality order
        "Eq.4.1a", "Eq.4.1b", "Eq.4.1c", "EqualityOrder",
        # covariance experiment and tail machinery
        "Eq.S", "Eq.S3", "Eq.SP", "Eq.C", "Eq.rf", "Eq.rf1", "Eq.J",
        "Eq.GTE", "Eq.4.29", "Eq.RU",
        # sign-series bounds
        "Eq.OB", "Eq.DDN", "Eq.DD1", "Eq.RUvsOB",
        # ensemble averages and hunts
        "Eq.R", "Eq.R.quadrature", "Limit.sqrt2", "Eq.4.1d", "ABC.trace",
    }

    def test_registry_is_exhaustive(self):
        assert set(suites.REGISTRY) == self.EXPECTED_TAGS

    def test_each_tag_maps_to_one_operation(self):
        for tag, (suite, operation, _) in suites.REGISTRY.items():
            assert suite in suites.SUITE_NAMES
            assert isinstance(operation, str) and "." in operation

    def test_suite_tags_cover_runners(self):
        runnable = {tag for tag, (_, _, runner) in suites.REGISTRY.items()
                    if runner is not None}
        listed = {tag for tags in suites.SUITE_TAGS.values() for tag in tags}
        assert runnable == listed

    def test_report_cases_tagged_from_registry(self, tmp_path):
        _, text = run_cli(tmp_path, BASE_CONFIG)
        for case in json.loads(text)["cases"]:
            assert case["equation"] in suites.REGISTRY

    def test_summary_counts_match_cases(self, tmp_path):
        _, text = run_cli(tmp_path, BASE_CONFIG)
        report = json.loads(text)
        statuses = [c["status"] for c in report["cases"]]
        assert report["summary"]["total"] == len(statuses)
        assert report["summary"]["passed"] == statuses.count("pass")
        assert report["summary"]["failed"] == statuses.count("fail")
        assert report["summary"]["indeterminate"] \
            == statuses.count("indeterminate")
