"""Validate scenario configs and generated reports against the published schemas."""

import argparse
import copy
import json
import shutil
import subprocess
import sys
from pathlib import Path

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--cli", required=True)
    parser.add_argument("--scenarios", type=Path, required=True)
    parser.add_argument("--schemas", type=Path, required=True)
    parser.add_argument("--work", type=Path, required=True)
    args = parser.parse_args()

    config_schema = json.loads((args.schemas / "config.schema.json").read_text())
    report_schema = json.loads((args.schemas / "report.schema.json").read_text())
    validator = jsonschema.Draft202012Validator
    validator.check_schema(config_schema)
    validator.check_schema(report_schema)
    configs = validator(config_schema)
    reports = validator(report_schema)

    shutil.rmtree(args.work, ignore_errors=True)
    args.work.mkdir(parents=True)
    failures = []
    scenarios = sorted(args.scenarios.glob("*.json"))
    if not scenarios:
        failures.append("no scenarios found")

    for path in scenarios:
        cfg = json.loads(path.read_text())
        for err in configs.iter_errors(cfg):
            failures.append(f"{path.name}: config {list(err.path)}: {err.message}")
        out = args.work / path.stem
        for extra in ([], ["--oracle"]):
            proc = subprocess.run([args.cli, *extra, "--out", str(out), "run", str(path)],
                                  capture_output=True, text=True)
            if proc.returncode not in (0, 2):
                failures.append(f"{path.name}: exit {proc.returncode}: {proc.stderr.strip()}")
                continue
            report = json.loads((out / "report.json").read_text())
            for err in reports.iter_errors(report):
                failures.append(f"{path.name} {extra}: report {list(err.path)}: {err.message}")

    # The config schema rejects what the parser rejects.
    base = json.loads((args.scenarios / "two_state_certify.json").read_text())
    broken = {
        "unknown top-level field": lambda c: c.update(extra=1),
        "unknown analysis": lambda c: c.update(analysis="nope"),
        "unknown param": lambda c: c.update(params={"bogus": 1}),
        "negative n": lambda c: c["space"]["classical"].update(n=-1),
        "two semigroup kinds": lambda c: c["semigroup"].update(discrete_operator=[[1]]),
    }
    for what, mutate in broken.items():
        cfg = copy.deepcopy(base)
        mutate(cfg)
        if configs.is_valid(cfg):
            failures.append(f"config schema accepted: {what}")
        path = args.work / "broken.json"
        path.write_text(json.dumps(cfg))
        proc = subprocess.run([args.cli, "--out", str(args.work / "broken"), "run", str(path)],
                              capture_output=True, text=True)
        if proc.returncode != 1:
            failures.append(f"cli accepted: {what} (exit {proc.returncode})")

    for f in failures:
        print("FAIL", f)
    print(f"{len(scenarios)} scenarios, {len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
