#!/usr/bin/env python3
"""Run calabi-lab in json and csv modes and validate the output.

usage: validate_report_schema.py CLI SCHEMA
"""
import csv
import io
import json
import subprocess
import sys

import jsonschema

RUNS = [
    (["verify", "--n", "3", "--trials", "2", "--seed", "5"], {0}),
    (["verify", "--n", "2", "--trials", "1"], {1}),
    (["spectrum", "--space", "chsc:n=3,c=1"], {0}),
    (["spectrum", "--space", "quadric:n=4"], {0}),
    (["spectrum", "--space", "product:[chsc:n=1;flat:k=1]"], {0}),
    (["thresholds", "--n", "5"], {0}),
    (["thresholds", "--n", "6", "--p", "1", "--q", "1"], {0}),
    (["certify", "--space", "quadric:n=4", "--mode", "calabi"], {0}),
    (["certify", "--space", "random-ke:n=3,seed=2", "--mode", "ke"], {0}),
    (["certify", "--space", "chsc:n=2,c=1", "--inject-sign-bug"], {0}),
]

CSV_HEADER = ["record", "name", "anchor", "status", "key", "value"]


def run(cli, args, fmt):
    proc = subprocess.run([cli, *args, "--format", fmt], capture_output=True, text=True)
    return proc.returncode, proc.stdout


def main():
    cli, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as fh:
        schema = json.load(fh)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args, codes in RUNS:
        label = " ".join(args)
        code, out = run(cli, args, "json")
        errors = []
        if code not in codes:
            errors.append(f"exit code {code}, expected {sorted(codes)}")
        try:
            doc = json.loads(out)
            errors += [e.message for e in validator.iter_errors(doc)]
            if doc["aggregate"]["status"] != ("pass" if code == 0 else "fail"):
                errors.append("aggregate status disagrees with the exit code")
        except (ValueError, KeyError) as exc:
            errors.append(f"unreadable json: {exc}")
        code_csv, out_csv = run(cli, args, "csv")
        rows = list(csv.reader(io.StringIO(out_csv)))
        if not rows or rows[0] != CSV_HEADER:
            errors.append("csv header mismatch")
        elif any(len(r) != len(CSV_HEADER) for r in rows):
            errors.append("csv row with the wrong column count")
        elif rows[-1][0] != "aggregate":
            errors.append("csv does not end with the aggregate row")
        if code_csv != code:
            errors.append("csv and json exit codes differ")
        print(("ok      " if not errors else "INVALID ") + label)
        for e in errors:
            print("    " + e)
        failures += bool(errors)
    print(f"{len(RUNS) - failures}/{len(RUNS)} reports valid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
