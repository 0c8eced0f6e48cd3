import json

import pytest

from dseqtop.cli import main, parse_dseq
from dseqtop.errors import MalformedSequenceError, SpecParseError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


class TestParseDseq:
    def test_repeat_with_flags(self):
        b = parse_dseq("ratios:2,3;repeat growth=bounded basic")
        assert b.term(3) == 12 and b.growth == "bounded" and b.basic

    def test_factorial(self):
        assert parse_dseq("factorial").term(3) == 24

    def test_ratio_below_two(self):
        with pytest.raises(MalformedSequenceError):
            parse_dseq("ratios:1,3")

    def test_grammar_violation(self):
        with pytest.raises(SpecParseError):
            parse_dseq("spam")


class TestCommands:
    def test_term(self, capsys):
        code, report = run_json(capsys, "term", "--dseq", "factorial", "--n", "4")
        assert code == 0 and report["result"]["term"] == 120
        assert report["command"] == "term"

    def test_expand_worked_example(self, capsys):
        code, report = run_json(capsys, "expand", "--dseq", "factorial",
                                "--value", "10")
        assert code == 0
        assert report["result"]["digits"] == [0, -1, 2]

    def test_value_round_trip(self, capsys):
        code, report = run_json(capsys, "value", "--dseq", "factorial",
                                "--digits", "0,-1,2")
        assert code == 0 and report["result"]["value"] == 10

    def test_enum_chars(self, capsys):
        code, report = run_json(capsys, "enum-chars", "--dseq", "factorial",
                                "--level", "2")
        values = {c["value"] for c in report["result"]["characters"]}
        assert code == 0
        assert values == {"0/1", "1/6", "-1/6", "1/3", "-1/3", "1/2"}

    def test_lambda_member(self, capsys):
        code, report = run_json(capsys, "lambda-member", "--dseq", "factorial",
                                "--level", "2", "--x", "12")
        assert code == 0 and report["result"]["member"] is True

    def test_tau_member_includes_cutoff(self, capsys):
        code, report = run_json(capsys, "tau-member", "--dseq", "factorial",
                                "--m", "1", "--x", "24")
        assert code == 0 and report["result"]["member"] is True
        assert report["provenance"]["cutoff_bound"] == 96

    def test_gamma_member(self, capsys):
        code, report = run_json(capsys, "gamma-member", "--dseq", "factorial",
                                "--family", "0,2,4:1;0,1,3:1", "--x", "0")
        assert code == 0 and report["result"]["member"] is True

    def test_graev_member_yes(self, capsys):
        code, report = run_json(capsys, "graev-member", "--dseq",
                                "ratios:2,3;repeat", "--x", "24")
        assert code == 0
        assert report["result"]["status"] == "YES"
        assert report["result"]["certificate"]["terms"] == [
            {"sign": 1, "index": 3, "slot": 1},
            {"sign": 1, "index": 3, "slot": 2}]

    def test_graev_member_unknown_strict_exit(self, capsys):
        args = ["graev-member", "--dseq", "ratios:2,3;repeat", "--x", "5",
                "--max-k", "2", "--max-index", "5", "--max-abs", "50"]
        code, _, _ = run(capsys, *args)
        assert code == 0
        code, _, _ = run(capsys, "--strict", *args)
        assert code == 1

    def test_build_a(self, capsys):
        code, report = run_json(capsys, "build-a", "--dseq", "ratios:2,3;repeat",
                                "--count", "5")
        assert code == 0
        assert report["result"]["N"] == 3
        assert report["result"]["elements"] == [12, 24, 36, 72, 144]

    def test_graev_polar(self, capsys):
        code, report = run_json(capsys, "graev-polar", "--dseq",
                                "ratios:2,3;repeat", "--window", "4",
                                "--count", "10")
        assert code == 0
        assert len(report["result"]["characters"]) == 12

    def test_polar(self, capsys):
        code, report = run_json(capsys, "polar", "--dseq", "factorial",
                                "--set", "1", "--window", "2")
        values = {c["value"] for c in report["result"]["characters"]}
        assert code == 0 and values == {"0/1", "1/6", "-1/6"}

    def test_hull(self, capsys):
        code, report = run_json(capsys, "hull", "--dseq", "factorial",
                                "--set", "0", "--window", "2", "--range", "10")
        assert code == 0 and report["result"]["hull"] == [-6, 0, 6]

    def test_qc_check(self, capsys):
        code, report = run_json(capsys, "qc-check", "--dseq", "factorial",
                                "--set", "0,1", "--window", "2", "--range", "10")
        assert code == 0
        assert report["result"]["quasiconvex"] is False
        assert report["result"]["witness"] is not None

    def test_kill_fixture(self, capsys):
        code, report = run_json(capsys, "kill", "--dseq",
                                "ratios:2,3;repeat growth=bounded basic",
                                "--xs", "terms", "--rounds", "2")
        assert code == 0
        rounds = report["result"]["rounds"]
        assert [(r["n"], r["m"]) for r in rounds] == [(1, 1), (3, 3)]
        assert {r["witness"] for r in rounds} == {"1/3"}

    def test_verify_lemma1(self, capsys):
        code, report = run_json(capsys, "verify", "lemma1", "--max-den", "40",
                                "--max-m", "6", "--max-n", "4")
        assert code == 0 and report["result"]["verdict"] == "PASS"
        assert report["command"] == "verify lemma1"

    def test_verify_chain(self, capsys):
        code, report = run_json(capsys, "verify", "chain", "--alphabet", "2,3",
                                "--max-product", "30")
        assert code == 0 and report["result"]["verdict"] == "PASS"
        assert report["result"]["survivors_below_resolution"] == ["0/1"]

    def test_verify_lqc_mod(self, capsys):
        code, report = run_json(capsys, "verify", "lqc-mod", "--dseq",
                                "ratios:2,3;repeat", "--window", "4",
                                "--count", "20")
        assert code == 0 and report["result"]["verdict"] == "PASS"
        assert report["result"]["N"] == 3


class TestContract:
    def test_input_error_exit_code(self, capsys):
        code, out, err = run(capsys, "term", "--dseq", "ratios:1,2", "--n", "3")
        assert code == 2 and out == "" and "error" in err

    def test_kill_horizon_error_is_input_error(self, capsys):
        code, _, err = run(capsys, "kill", "--dseq", "ratios:2,3;repeat",
                           "--xs", "2,6,12", "--rounds", "4")
        assert code == 2 and "error" in err

    def test_deterministic_output(self, capsys):
        args = ["kill", "--dseq", "ratios:2,3;repeat", "--xs", "terms",
                "--rounds", "4"]
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second

    def test_summary_on_stderr_json_on_stdout(self, capsys):
        code, out, err = run(capsys, "term", "--dseq", "factorial", "--n", "3")
        json.loads(out)
        assert err.strip() != ""

    def test_reports_echo_parameters(self, capsys):
        _, report = run_json(capsys, "hull", "--dseq", "factorial",
                             "--set", "0", "--window", "2", "--range", "10")
        assert report["params"] == {"dseq": "factorial", "set": [0],
                                    "window": 2, "range": 10}
