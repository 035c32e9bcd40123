#!/usr/bin/env python3
"""
End-to-end tests for the command line: reports, generated files and exit codes.
"""

import io
import runpy
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest import mock

import pandas as pd

# Add src to path for testing
src_path = str(Path(__file__).parent.parent / 'src')
sys.path.insert(0, src_path)

import main as cli
from graph_io import parse_graph, parse_ov
from report_models import VerifyRecord

P4 = "p dg 4 3\ne 1 2\ne 2 3\ne 3 4\n"
FINITE_EXAMPLE = "p dg 3 2\ne 1 2\ne 3 2\nc 1 B\nc 2 R\nc 3 R\n"


def failing_check():
    return [VerifyRecord(check="envelope-half", instance="planted", seed=0, n=2, m=1,
                         truth=1, value=3, lower=1, ok=False, message="value too large")]


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name: str, text: str) -> str:
        path = self.dir / name
        path.write_text(text)
        return str(path)

    def run_cli(self, *argv, stdin: str = None):
        out, err = io.StringIO(), io.StringIO()
        original_stdin = sys.stdin
        if stdin is not None:
            sys.stdin = io.StringIO(stdin)
        try:
            with redirect_stdout(out), redirect_stderr(err):
                code = cli.main(list(argv))
        finally:
            sys.stdin = original_stdin
        return code, out.getvalue()

    @staticmethod
    def report(text: str) -> dict:
        return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


class TestEstimateCommands(CliTestCase):

    def test_approx_half_on_path(self):
        code, out = self.run_cli("approx", "--mode", "half", self.write("p4.txt", P4))
        self.assertEqual(code, 0)
        report = self.report(out)
        self.assertEqual(report["command"], "approx")
        self.assertEqual(report["mode"], "half")
        self.assertLessEqual(int(report["lower"]), 3)
        self.assertTrue(3 <= int(report["value"]) <= 5)
        self.assertEqual(report["timed_out"], "false")
        self.assertIn("wall_time_s", report)

    def test_approx_exact32_from_stdin(self):
        code, out = self.run_cli("approx", "--mode", "exact32", "--k", "1", stdin=P4)
        self.assertEqual(code, 0)
        self.assertEqual(self.report(out)["value"], "3")

    def test_approx_infinite(self):
        diamond = "p dg 4 4\ne 1 2\ne 1 3\ne 2 4\ne 3 4\n"
        code, out = self.run_cli("approx", stdin=diamond)
        self.assertEqual(code, 0)
        self.assertEqual(self.report(out)["value"], "inf")

    def test_exact(self):
        code, out = self.run_cli("exact", stdin=FINITE_EXAMPLE)
        self.assertEqual(code, 0)
        report = self.report(out)
        self.assertEqual(report["value"], "inf")
        self.assertEqual(report["bichromatic"], "inf")

    def test_bichrom_finite(self):
        code, out = self.run_cli("bichrom", "finite", stdin=FINITE_EXAMPLE)
        self.assertEqual(code, 0)
        self.assertEqual(self.report(out)["finite"], "false")

    def test_bichrom_approx(self):
        colored = "p dg 4 3 w\ne 1 2 5\ne 2 3 1\ne 3 4 1\nc 1 R\nc 2 R\nc 3 B\nc 4 B\n"
        code, out = self.run_cli("bichrom", "approx", stdin=colored)
        self.assertEqual(code, 0)
        report = self.report(out)
        self.assertEqual(report["M"], "1")
        self.assertTrue(int(report["lower"]) <= 7 <= int(report["value"]) <= 2 * 7 + 1)

    def test_gadget_piped_into_exact(self):
        code, gadget_text = self.run_cli("gen", "gadget", "--kind", "bichrom-dag", "--t", "2",
                                         "--n", "16", "--planted", "--seed", "1")
        self.assertEqual(code, 0)
        self.assertIn("# certificate yes=5 no=3 t=2", gadget_text)
        code, out = self.run_cli("exact", stdin=gadget_text)
        self.assertEqual(code, 0)
        report = self.report(out)
        self.assertGreaterEqual(int(report["value"]), 5)
        self.assertEqual(int(report["bichromatic"]), 5)


class TestGenerateCommands(CliTestCase):

    def test_random_to_file(self):
        target = self.dir / "out" / "dag.txt"
        code, _ = self.run_cli("gen", "random", "--n", "12", "--m", "20", "--seed", "3",
                               "--max-weight", "4", "--output", str(target))
        self.assertEqual(code, 0)
        parsed = parse_graph(target.read_text())
        self.assertEqual((parsed.graph.n, parsed.graph.m), (12, 20))
        self.assertEqual(len(parsed.colors), 12)

    def test_random_is_seeded(self):
        first = self.run_cli("gen", "random", "--n", "9", "--seed", "8", "--cycle-bias", "0.4")[1]
        second = self.run_cli("gen", "random", "--n", "9", "--seed", "8", "--cycle-bias", "0.4")[1]
        self.assertEqual(first, second)

    def test_ov(self):
        code, out = self.run_cli("gen", "ov", "--n", "5", "--d", "6", "--planted", "--seed", "2")
        self.assertEqual(code, 0)
        ov = parse_ov(out)
        self.assertTrue(ov.planted)
        self.assertEqual((len(ov.A), len(ov.B), ov.d), (5, 5, 6))


class TestExitCodes(CliTestCase):

    def test_usage_errors(self):
        for argv in ([], ["approx", "--mode", "third"], ["gen", "gadget", "--n", "8"],
                     ["verify", "--sizes", "12by20"], ["frobnicate"]):
            with self.subTest(argv=argv):
                self.assertEqual(self.run_cli(*argv)[0], cli.EXIT_USAGE)

    def test_input_the_command_cannot_take(self):
        cyclic = "p dg 2 2\ne 1 2\ne 2 1\n"
        self.assertEqual(self.run_cli("approx", stdin=cyclic)[0], cli.EXIT_USAGE)
        self.assertEqual(self.run_cli("bichrom", "approx", stdin=P4)[0], cli.EXIT_USAGE)
        self.assertEqual(self.run_cli("exact", "--oracle-max-n", "3", stdin=P4)[0], cli.EXIT_USAGE)
        self.assertEqual(self.run_cli("gen", "gadget", "--kind", "mindiam", "--t", "1", "--n", "8")[0],
                         cli.EXIT_USAGE)

    def test_io_errors(self):
        self.assertEqual(self.run_cli("approx", str(self.dir / "missing.txt"))[0], cli.EXIT_IO)
        self.assertEqual(self.run_cli("approx", stdin="p dg 2 1\ne 1 9\n")[0], cli.EXIT_IO)
        self.assertEqual(self.run_cli("exact", "--config", str(self.dir / "none.json"), stdin=P4)[0],
                         cli.EXIT_IO)

    def test_help(self):
        code, out = self.run_cli("--help")
        self.assertEqual(code, 0)
        self.assertIn("approx", out)

    def test_runner_script(self):
        root = Path(__file__).parent.parent
        out = io.StringIO()
        argv = ["run_mindiam.py", "gen", "ov", "--n", "3", "--seed", "1"]
        with mock.patch.object(sys, "argv", argv), mock.patch.object(sys, "path", [str(root)] + sys.path):
            with redirect_stdout(out), self.assertRaises(SystemExit) as ctx:
                runpy.run_path(str(root / "run_mindiam.py"), run_name="__main__")
        self.assertEqual(ctx.exception.code, 0)
        self.assertEqual(len(parse_ov(out.getvalue()).A), 3)


class TestHarnessCommands(CliTestCase):

    def test_verify_passes(self):
        target = self.dir / "verify.csv"
        code, out = self.run_cli("verify", "--seeds", "3", "--sizes", "6x8", "12x20",
                                 "--no-gadgets", "--output", str(target))
        self.assertEqual(code, 0)
        report = self.report(out)
        self.assertEqual(report["status"], "passed")
        self.assertEqual(report["checks"], "12")
        self.assertEqual(report["violations"], "0")
        frame = pd.read_csv(target)
        self.assertEqual(len(frame), 12)
        self.assertTrue(frame["ok"].all())

    def test_verify_violation_exit_code(self):
        with mock.patch.object(cli, "build_verify_tasks",
                               return_value=[("planted-failure", failing_check, ())]):
            code, out = self.run_cli("verify", "--seeds", "1")
        self.assertEqual(code, cli.EXIT_VIOLATION)
        self.assertEqual(self.report(out)["status"], "failed")

    def test_bench(self):
        target = self.dir / "bench.xlsx"
        code, out = self.run_cli("bench", "--sizes", "20x40", "--seeds", "1", "2",
                                 "--modes", "half", "bichrom", "--oracle", "--output", str(target))
        self.assertEqual(code, 0)
        self.assertEqual(out.count("instance=dag-20-40"), 4)
        frame = pd.read_excel(target, sheet_name="Benchmark")
        self.assertEqual(len(frame), 4)
        self.assertEqual(set(frame["mode"]), {"half", "bichrom"})
        self.assertTrue((frame["oracle"] <= frame["value"]).all())


if __name__ == '__main__':
    unittest.main()
