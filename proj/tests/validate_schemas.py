"""Validates example configs and CLI reports against schemas/, and checks exit codes.

usage: validate_schemas.py <cli> <source dir> <work dir>
"""

import glob
import json
import os
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource


def main() -> int:
    cli, src, work = sys.argv[1:4]
    with open(os.path.join(src, "schemas", "config.schema.json")) as f:
        config_schema = json.load(f)
    with open(os.path.join(src, "schemas", "report.schema.json")) as f:
        report_schema = json.load(f)
    registry = Registry().with_resource(config_schema["$id"], Resource.from_contents(config_schema))
    config_validator = jsonschema.Draft202012Validator(config_schema)
    report_validator = jsonschema.Draft202012Validator(report_schema, registry=registry)

    failures = 0
    for path in sorted(glob.glob(os.path.join(src, "tools", "configs", "*.json"))):
        with open(path) as f:
            config = json.load(f)
        config_validator.validate(config)
        out = os.path.join(work, "report_" + os.path.basename(path))
        code = subprocess.run([cli, "run", "--config", path, "--json", out, "--quiet"],
                              stdout=subprocess.DEVNULL).returncode
        if code != 0:
            print(f"FAIL {path}: exit {code}")
            failures += 1
            continue
        with open(out) as f:
            report = json.load(f)
        report_validator.validate(report)
        config_validator.validate(report["config"])
        print(f"ok {os.path.basename(path)}: {report['torsion']['label']}")

    bad = os.path.join(work, "bad_config.json")
    with open(bad, "w") as f:
        json.dump({"model": "sphere4", "profile": {"kind": "constant", "lambda": 1, "mu": 1}, "probs": 3}, f)
    expectations = [
        ([cli, "run", "--config", bad], 2),
        ([cli, "run"], 2),
        ([cli, "frobnicate"], 2),
        ([cli, "run", "--config", os.path.join(src, "tools", "configs", "sphere4_bs.json"), "--tol", "1e-300",
          "--quiet"], 1),
        ([cli, "list-suites"], 0),
    ]
    for argv, want in expectations:
        got = subprocess.run(argv, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL).returncode
        status = "ok" if got == want else "FAIL"
        failures += got != want
        print(f"{status} exit {got} (want {want}): {' '.join(argv[1:])}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
