#!/usr/bin/env python3
"""Run the CLI over the shipped configs and validate every JSON it writes."""

import argparse
import csv
import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema

RUNS = [
    ("simulate", "default.yaml", ["--N", "1024"]),
    ("simulate", "dispersive.yaml", ["--N", "1024"]),
    ("simulate", "two_component.yaml", ["--N", "1024"]),
    ("simulate", "smooth.yaml", ["--N", "1024"]),
    ("criterion", "default.yaml", []),
    ("criterion", "two_component.yaml", []),
    ("lemmas", "lemmas.yaml", []),
    ("sweep", "sweep_small.yaml", []),
    ("sweep", "sweep_amplitude.yaml", ["--N", "1024"]),
]

SCHEMA_FOR = {
    "summary.json": "run_summary",
    "criterion.json": "criterion",
    "lemmas.json": "lemmas",
    "sweep.json": "sweep",
    "timing.json": "timing",
}


def load_schemas(root):
    schemas = {}
    for name in set(SCHEMA_FOR.values()):
        schema = json.loads((root / f"{name}.schema.json").read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        schemas[name] = jsonschema.Draft202012Validator(schema)
    return schemas


def check_csv(path):
    with path.open(newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        return [f"{path.name}: empty"]
    header = rows[0]
    problems = []
    if any(not h or h[0].isdigit() or h[0] == "-" for h in header):
        problems.append(f"{path.name}: first row is not a header: {header}")
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            problems.append(f"{path.name}:{i}: {len(row)} cells for {len(header)} columns")
            break
    return problems


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tool", required=True)
    ap.add_argument("--schemas", required=True, type=pathlib.Path)
    ap.add_argument("--configs", required=True, type=pathlib.Path)
    ap.add_argument("--work", required=True, type=pathlib.Path)
    args = ap.parse_args()

    schemas = load_schemas(args.schemas)
    shutil.rmtree(args.work, ignore_errors=True)
    failures = []
    validated = 0
    for i, (command, config, extra) in enumerate(RUNS):
        out = args.work / f"{i:02d}_{command}_{pathlib.Path(config).stem}"
        cmd = [args.tool, command, "--config", str(args.configs / config), "--out", str(out), *extra]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        if proc.returncode != 0:
            failures.append(f"{' '.join(cmd)}: exit {proc.returncode}\n{proc.stderr}")
            continue
        for path in sorted(out.iterdir()):
            if path.suffix == ".json":
                schema = SCHEMA_FOR.get(path.name)
                if schema is None:
                    failures.append(f"{path}: no schema")
                    continue
                errors = sorted(schemas[schema].iter_errors(json.loads(path.read_text())), key=str)
                failures.extend(f"{path}: {e.json_path}: {e.message}" for e in errors)
                validated += 1
            elif path.suffix == ".csv":
                failures.extend(f"{out.name}/{p}" for p in check_csv(path))

    # The schemas must also reject a malformed summary.
    summaries = sorted(args.work.glob("*_simulate_*/summary.json"))
    if summaries:
        doc = json.loads(summaries[0].read_text())
        doc["blowup"]["trigger"] = "exploded"
        if schemas["run_summary"].is_valid(doc):
            failures.append("run_summary schema accepted an unknown trigger")

    for f in failures:
        print("FAIL", f)
    print(f"{validated} JSON documents checked, {len(failures)} problems")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
