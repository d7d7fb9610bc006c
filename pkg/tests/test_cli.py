"""Command-line interface: argument parsing, report schemas, exit codes
and the domain cache."""

import json
import pickle

import pytest
from importlib import resources

from congfund.cli import (
    cached_domain,
    execute_plan,
    main,
    parse_invocation,
)
from congfund.errors import UsageError


def cert_path(name):
    return str(resources.files("congfund.data.certificates")
               .joinpath(name))


class TestParsing:
    def test_psl_order_plan(self):
        plan = parse_invocation(
            ["psl-order", "--d", "7", "--ideal", "(1+s)/2"])
        assert plan.command == "psl-order"
        assert plan.options["d"] == 7
        assert plan.options["ideal"] == "(1+s)/2"

    def test_missing_subcommand(self):
        with pytest.raises(UsageError):
            parse_invocation([])

    def test_unknown_flag(self):
        with pytest.raises(UsageError):
            parse_invocation(["psl-order", "--d", "7", "--nope"])

    def test_missing_required(self):
        with pytest.raises(UsageError):
            parse_invocation(["psl-order", "--d", "7"])


class TestExitCodes:
    def test_usage_error_is_2(self, capsys):
        assert main(["frobnicate"]) == 2
        assert main([]) == 2

    def test_success_is_0(self, capsys):
        assert main(["psl-order", "--d", "7", "--ideal", "(1+s)/2"]) == 0
        assert capsys.readouterr().out.strip() == "6"

    def test_verify_link_pass(self, capsys):
        assert main(["verify-link", cert_path("d7_3link.json")]) == 0
        assert capsys.readouterr().out.strip() == "3-Link"

    def test_verify_link_failure_is_1(self, tmp_path, capsys):
        with open(cert_path("d7_3link.json")) as fh:
            data = json.load(fh)
        data["expected_order"] = 7
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        assert main(["verify-link", str(bad)]) == 1

    def test_budget_exhausted_is_3(self, capsys):
        assert main(["bi-order", "--d", "1", "--ideal", "5+2*s",
                     "--budget", "200"]) == 3


class TestReports:
    def test_psl_order_json(self, capsys):
        assert main(["psl-order", "--d", "1", "--ideal", "2",
                     "--format", "json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["schema"] == "congfund-report-1"
        assert report["order"] == 48
        assert report["norm"] == 4

    def test_gamma1_order(self, capsys):
        assert main(["psl-order", "--d", "23", "--ideal", "5",
                     "--gamma1", "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)["order"] == 312

    def test_bi_order_report(self):
        plan = parse_invocation(["bi-order", "--d", "2",
                                 "--ideal", "1+s"])
        report, code = execute_plan(plan)
        assert code == 0
        assert report["bi_order"] == report["psl_order"] == 12
        assert report["triples"] == [(3, 1, 1)]


class TestDomainCache:
    def test_round_trip_identical(self, domain_cache_dir, tmp_path):
        first = cached_domain(1, str(tmp_path))
        second = cached_domain(1, str(tmp_path))
        assert pickle.dumps(first) == pickle.dumps(second)
        assert second.covolume == first.covolume
        assert (tmp_path / "domain-v1-d1.pickle").exists()

    def test_env_var_overrides(self, monkeypatch, domain_cache_dir,
                               capsys):
        monkeypatch.setenv("CF_CACHE_DIR", domain_cache_dir)
        assert main(["domain", "--d", "1", "--format", "json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["cusps"] == 1
        assert abs(report["covolume"] - 0.305322) < 1e-6


class TestSurvey:
    def test_small_survey_rows(self, domain_cache_dir, capsys):
        assert main(["survey", "--d", "1", "--max-norm", "5",
                     "--cache-dir", domain_cache_dir,
                     "--format", "json"]) == 0
        report = json.loads(capsys.readouterr().out)
        by_norm = {}
        for row in report["rows"]:
            by_norm.setdefault(row["norm"], []).append(row)
        assert [r["result"] for r in by_norm[2]] == ["Orbifold"]
        assert [r["result"] for r in by_norm[4]] == ["6-Link"]
        assert sorted(r["result"] for r in by_norm[5]) == \
            ["6-Link", "6-Link"]
