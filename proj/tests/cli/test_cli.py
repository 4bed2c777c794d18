"""End-to-end checks of the dobrushin command line tool."""

import argparse
import csv
import hashlib
import json
import math
import shutil
import subprocess
import sys
import unittest
from pathlib import Path

ARGS = None


def run(*argv, check=None):
    proc = subprocess.run([ARGS.cli, *map(str, argv)], capture_output=True, text=True)
    if check is not None and proc.returncode != check:
        raise AssertionError(
            f"{argv}: exit {proc.returncode}, expected {check}\n{proc.stdout}\n{proc.stderr}")
    return proc


def scenario(name):
    return ARGS.scenarios / f"{name}.json"


class CliTest(unittest.TestCase):
    def setUp(self):
        self.work = ARGS.work / self.id().rsplit(".", 1)[-1]
        shutil.rmtree(self.work, ignore_errors=True)
        self.work.mkdir(parents=True)

    def report(self, out):
        return json.loads((out / "report.json").read_text())

    def test_list(self):
        out = run("list", check=0).stdout
        names = [line for line in out.splitlines() if line and not line[0].isspace()]
        self.assertEqual(len(names), 9)
        for name in ("delta", "certify", "mean", "weak_mean", "doeblin", "ergodize", "rho",
                     "spectral", "qubit_example"):
            self.assertIn(name, names)

    def test_certify_two_state(self):
        out = self.work / "certify"
        run("--out", out, "certify", scenario("two_state_certify"), check=0)
        r = self.report(out)
        self.assertEqual(r["status"], "certified")
        c = r["result"]["certificate"]
        self.assertEqual(c["mode"], "uniform")
        self.assertEqual(c["t0"], 1.0)
        self.assertAlmostEqual(c["q"], math.exp(-2), delta=1e-14)
        self.assertAlmostEqual(c["alpha"], 2.0, delta=1e-12)
        self.assertAlmostEqual(c["C"], 2 * math.exp(2), delta=1e-12)

    def test_determinism_and_hash(self):
        a, b = self.work / "a", self.work / "b"
        for name in ("two_state_certify", "five_state_delta", "perturbation_rho", "qubit_example"):
            run("--out", a / name, "run", scenario(name), check=0)
            run("--out", b / name, "run", scenario(name), check=0)
            first = (a / name / "report.json").read_bytes()
            self.assertEqual(first, (b / name / "report.json").read_bytes(), name)
            digest = hashlib.sha256(scenario(name).read_bytes()).hexdigest()
            self.assertEqual(json.loads(first)["provenance"]["config_sha256"], digest, name)

    def test_seed_flag_recorded(self):
        out = self.work / "seeded"
        run("--seed", 17, "--out", out, "run", scenario("five_state_delta"), check=0)
        self.assertEqual(self.report(out)["provenance"]["seed"], 17)

    def test_no_certificate_exit_code(self):
        out = self.work / "pauli"
        run("--out", out, "run", scenario("pauli_certify"), check=2)
        r = self.report(out)
        self.assertEqual(r["status"], "no_certificate")
        self.assertTrue(r["result"]["reason"])

    def test_malformed_configs(self):
        bad = self.work / "syntax.json"
        bad.write_text('{\n  "analysis": "certify",\n  "space": {"classical": {"n": 2}},,\n}\n')
        proc = run("--out", self.work / "o1", "run", bad, check=1)
        self.assertIn("line 3", proc.stderr + proc.stdout)

        cases = {
            "field.json": ({"analysis": "certify", "space": {"classical": {"n": 2}},
                            "semigroup": {"rate_matrix": [[-1, 1], [1, -1]]},
                            "projection": {"blocks": [[0, 1]], "weights": [[0.5, 0.5]]},
                            "params": {"bogus": 1}}, "params.bogus"),
            "dimension.json": ({"analysis": "certify", "space": {"classical": {"n": 3}},
                                "semigroup": {"rate_matrix": [[-1, 1], [1, -1]]},
                                "projection": {"blocks": [[0, 1, 2]],
                                               "weights": [[0.2, 0.3, 0.5]]}},
                               "semigroup.rate_matrix"),
            "analysis.json": ({"analysis": "nope"}, "analysis"),
        }
        for name, (cfg, where) in cases.items():
            path = self.work / name
            path.write_text(json.dumps(cfg))
            proc = run("--out", self.work / name, "run", path, check=1)
            self.assertIn(where, proc.stderr + proc.stdout, name)
        run("--out", self.work / "missing", "run", self.work / "does_not_exist.json", check=1)
        run("--bogus-flag", "list", check=1)
        run("--help", check=0)

    def test_subcommand_overrides_config_analysis(self):
        out = self.work / "x"
        run("--out", out, "mean", scenario("two_state_certify"), check=0)
        r = self.report(out)
        self.assertEqual(r["analysis"], "mean")
        self.assertEqual(r["result"]["certificate"]["mode"], "uniform_mean")

    def test_curve_csv(self):
        out = self.work / "curve"
        run("--out", out, "run", scenario("two_state_certify"), check=0)
        raw = (out / "curve.csv").read_bytes()
        self.assertTrue(raw.startswith(b"t,measured_norm,envelope_bound\r\n"))
        rows = list(csv.reader(raw.decode().splitlines()))[1:]
        self.assertEqual(len(rows), 200)
        for t, measured, bound in rows:
            self.assertLessEqual(float(measured), float(bound) + 1e-13)
            self.assertAlmostEqual(float(measured), math.exp(-2 * float(t)), delta=1e-9)

    def test_qubit_example_csv(self):
        out = self.work / "qubit"
        run("--out", out, "run", scenario("qubit_example"), check=0)
        with open(out / "example.csv", newline="") as f:
            rows = list(csv.reader(f))
        header, body = rows[0], rows[1:]
        self.assertEqual(header[:4], ["n", "norm_phi_n_minus_P", "norm_cesaro_minus_P",
                                      "delta_P_cesaro"])
        taus = [float(h.rsplit("_", 1)[1]) for h in header[4:]]
        self.assertEqual(taus, [0.25, 0.5, 0.75, 0.8])
        self.assertEqual(len(body), 100)
        for row in body:
            n = int(row[0])
            chi = 1.0 / n if n % 2 else 0.0
            self.assertAlmostEqual(float(row[1]), 1.0, delta=1e-12)
            self.assertAlmostEqual(float(row[2]), chi, delta=1e-12)
            self.assertAlmostEqual(float(row[3]), chi, delta=1e-12)
            for tau, cell in zip(taus, row[4:]):
                # n (1 - tau) = 1 is admissible; allow for rounding at the boundary.
                expected = n % 2 == 0 or n * (1 - tau) >= 1 - 1e-12
                self.assertEqual(cell, "true" if expected else "false", (n, tau))

    def test_delta_oracle(self):
        out = self.work / "delta"
        run("--oracle", "--out", out, "delta", scenario("five_state_delta"), check=0)
        res = self.report(out)["result"]
        self.assertTrue(res["delta"]["exact"])
        self.assertEqual(res["delta"]["method"], "block_exact")
        oracle = res["oracle"]
        self.assertEqual(oracle["method"], "vertex_enumeration")
        self.assertTrue(oracle["agrees"])
        self.assertLessEqual(oracle["abs_diff"], 1e-10)

        plain = self.work / "plain"
        run("--out", plain, "delta", scenario("five_state_delta"), check=0)
        self.assertNotIn("oracle", self.report(plain)["result"])

    def test_jobs_match_sequential(self):
        names = ["two_state_certify", "two_state_mean", "two_state_weak_mean", "identity_ergodize"]
        par, seq = self.work / "par", self.work / "seq"
        run("--jobs", 3, "--out", par, "run", *map(scenario, names), check=0)
        for name in names:
            run("--out", seq / name, "run", scenario(name), check=0)
            self.assertEqual((par / name / "report.json").read_bytes(),
                             (seq / name / "report.json").read_bytes(), name)

    def test_every_scenario_runs(self):
        expected = {"pauli_certify": 2}
        for path in sorted(ARGS.scenarios.glob("*.json")):
            out = self.work / path.stem
            run("--out", out, "run", path, check=expected.get(path.stem, 0))
            self.assertTrue((out / "report.json").exists(), path.stem)


def main():
    global ARGS
    parser = argparse.ArgumentParser()
    parser.add_argument("--cli", required=True)
    parser.add_argument("--scenarios", type=Path, required=True)
    parser.add_argument("--schemas", type=Path, required=True)
    parser.add_argument("--work", type=Path, required=True)
    ARGS, rest = parser.parse_known_args()
    unittest.main(argv=[sys.argv[0], *rest], verbosity=2)


if __name__ == "__main__":
    main()
