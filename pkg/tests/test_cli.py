import io
import json
import re
from pathlib import Path

import jsonschema
import pytest

from qfid.channel import dump_channel, make_channel
from qfid.cli import EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, run

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "output_schema.json").read_text())


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--format", "json")
    return code, json.loads(out) if out else None, err


@pytest.fixture
def dep004(tmp_path):
    path = tmp_path / "dep004.json"
    dump_channel(make_channel("depolarizing", 0.04), path)
    return str(path)


COMMANDS = [
    ("bound", "--n", "25", "--t", "3", "--p", "0.01"),
    ("bound", "--n", "25", "--t", "3", "--p", "0.01", "--tprime", "2"),
    ("bound", "--code", "five_qubit", "--channel", "amplitude_damping:0.1"),
    ("code-info", "five_qubit.stab"),
    ("code-info", "steane.stab", "--weight-budget", "2"),
    ("decode-table", "four_two_two"),
    ("channel-info", "random:7:3"),
    ("simulate", "--code", "five_qubit", "--channel", "depolarizing:0.04", "--state", "basis:0", "--mode", "bounded:0"),
    ("sweep", "--alpha", "0.2", "--p", "0.01", "--n", "10:50:10"),
]


class TestExamples:
    def test_bound(self):
        code, out, _ = call("bound", "--n", "25", "--t", "3", "--p", "0.01")
        assert code == EXIT_OK
        assert "epsilon: 0.000131995" in out and "fidelity_lb: 0.999868" in out

    def test_code_info(self):
        code, rep, _ = call_json("code-info", "five_qubit.stab")
        r = rep["results"]
        assert code == EXIT_OK
        assert (r["n"], r["k"], r["d"], r["d_prime"], r["t"], r["pure"]) == (5, 1, 3, 3, 1, True)

    def test_simulate_with_channel_file(self, dep004):
        code, rep, _ = call_json("simulate", "--code", "five_qubit.stab", "--channel", dep004, "--state", "basis:0")
        assert code == EXIT_OK
        res = rep["results"]
        assert res["verdict"] == "bound holds"
        assert res["min_average_fidelity"] >= 1 - 9.274e-3

    def test_channel_info(self):
        _, rep, _ = call_json("channel-info", "depolarizing:0.04")
        assert rep["results"]["p"] == pytest.approx(0.03)
        assert rep["results"]["valid"]

    def test_decode_table_rows(self):
        _, rep, _ = call_json("decode-table", "five_qubit")
        leaders = [e["leader"] for e in rep["results"]["entries"]]
        assert len(leaders) == 16 and "IIIII" in leaders

    def test_multiple_states_report_minimum(self):
        _, rep, _ = call_json(
            "simulate", "--code", "five_qubit", "--channel", "x_rotation:0.1", "--state", "basis:0", "--seed", "3"
        )
        res = rep["results"]
        assert [s["state"] for s in res["states"]] == ["basis:0", "random:3"]
        assert res["min_average_fidelity"] == min(s["average_fidelity"] for s in res["states"])


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            (),
            ("frobnicate",),
            ("bound", "--n", "5"),
            ("bound", "--n", "5", "--t", "9", "--p", "0.1"),
            ("bound", "--n", "5", "--t", "1", "--p", "2"),
            ("code-info", "missing.stab"),
            ("channel-info", "depolarizing:7"),
            ("simulate", "--code", "five_qubit", "--channel", "identity", "--state", "basis:1x"),
            ("sweep", "--alpha", "0", "--p", "0.1"),
            ("bound", "--bogus"),
        ],
    )
    def test_input_errors(self, argv):
        code, out, err = call(*argv)
        assert code == EXIT_INPUT
        assert err.startswith("error:") and out == ""

    def test_parse_error_has_line_and_column(self, tmp_path):
        bad = tmp_path / "bad.stab"
        bad.write_text("XZZXI\nIXZQX\n")
        code, _, err = call("code-info", str(bad))
        assert code == EXIT_INPUT and "line 2, column 4" in err

    def test_violation_exits_two(self):
        code, rep, err = call_json("simulate", "--code", "steane", "--channel", "x_rotation:0.1", "--state", "basis:0")
        assert code == EXIT_VIOLATION
        assert rep["results"]["verdict"] == "BOUND VIOLATED"
        assert "below a bound" in err


class TestOutputContract:
    @pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
    def test_schema(self, argv):
        code, rep, _ = call_json(*argv)
        assert code == EXIT_OK
        jsonschema.validate(rep, SCHEMA)
        assert rep["command"] == argv[0]

    @pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
    def test_deterministic_bytes(self, argv):
        assert call(*argv, "--format", "json")[1] == call(*argv, "--format", "json")[1]

    @pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
    def test_text_agrees_with_json(self, argv):
        _, rep, _ = call_json(*argv)
        text = call(*argv)[1]
        shown = {float(x) for x in re.findall(r"-?\d+(?:\.\d+)?(?:e[-+]?\d+)?", text)}

        def leaves(x):
            if isinstance(x, dict):
                for v in x.values():
                    yield from leaves(v)
            elif isinstance(x, list):
                for v in x:
                    yield from leaves(v)
            elif isinstance(x, float):
                yield x

        for v in leaves(rep["results"]):
            assert float(f"{v:.10g}") in shown, v

    def test_csv(self):
        code, out, _ = call("sweep", "--alpha", "0.2", "--p", "0.01", "--n", "10:30:10", "--format", "csv")
        lines = out.strip().splitlines()
        assert code == EXIT_OK
        assert lines[0] == "n,t,epsilon,asymptotic,chain,feasible"
        assert len(lines) == 4

    @pytest.mark.parametrize(
        "argv",
        [
            ("sweep", "--alpha", "0.2", "--p", "0.01"),
            ("bound", "--n", "25", "--t", "3", "--p", "0.01"),
            ("simulate", "--code", "four_two_two", "--channel", "bit_flip:0.05"),
        ],
        ids=lambda a: a[0],
    )
    def test_plot_written(self, argv, tmp_path):
        path = tmp_path / "fig.png"
        code, rep, _ = call_json(*argv, "--plot", str(path))
        assert code == EXIT_OK
        jsonschema.validate(rep, SCHEMA)
        assert rep["results"]["figure"] == str(path)
        assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_plot_is_reproducible(self, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        call("sweep", "--alpha", "0.2", "--p", "0.01", "--plot", str(a))
        call("sweep", "--alpha", "0.2", "--p", "0.01", "--plot", str(b))
        assert a.read_bytes() == b.read_bytes()
