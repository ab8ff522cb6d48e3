#!/usr/bin/env python3
# Copyright 2026 The CurriAlign Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Runs every JSON-producing CLI subcommand and validates its output.

Usage: check_cli_schemas.py PATH_TO_CLI

Each document is checked against schemas/<subcommand>.schema.json with a
draft 2020-12 validator. Exits nonzero on the first invalid or failed run.
"""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
SCHEMAS = ROOT / "schemas"


def run(cli, args):
    proc = subprocess.run([cli, "--format", "json", *args], cwd=ROOT,
                          capture_output=True, text=True, timeout=120)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr.strip()}")
    return json.loads(proc.stdout)


def main():
    if len(sys.argv) != 2:
        print(__doc__.strip().splitlines()[2], file=sys.stderr)
        return 64
    cli = sys.argv[1]
    with tempfile.TemporaryDirectory() as tmp:
        model = str(pathlib.Path(tmp) / "baseline.json")
        workspace = str(pathlib.Path(tmp) / "ws")
        cases = [
            ("ingest", ["ingest", "courses", str(DATA / "kth_curriculum.jsonl")]),
            ("ingest", ["--workspace", workspace, "ingest", "roles", str(DATA / "roles_nice2025.csv")]),
            ("train-baseline", ["train-baseline", str(DATA / "finetune_corpus.jsonl"), "--model", model]),
            ("classify", ["classify", "--backend", "baseline", "--model", model,
                          "--text", "symmetric ciphers and key exchange"]),
            ("classify", ["--replay", str(DATA / "replay"), "classify", "--backend", "remote",
                          "--courses", str(DATA / "kth_curriculum.jsonl"), "--course", "bnss"]),
            ("analyze", ["analyze", str(DATA / "kth_curriculum.jsonl")]),
            ("analyze", ["analyze", str(DATA / "kth_curriculum.jsonl"), "--select", "nss,anss,bnss,pet"]),
            ("optimize", ["optimize", str(DATA / "kth_curriculum.jsonl"), "--k", "4",
                          "--roles", str(DATA / "roles_nice2025.csv"),
                          "--role", "Vulnerability Analysis"]),
            ("optimize", ["optimize", str(DATA / "kth_curriculum.jsonl"), "--k", "3",
                          "--method", "local_search", "--roles", str(DATA / "roles_nice2025.csv"),
                          "--demand", str(DATA / "demand_fitted.jsonl"), "--market"]),
            ("agreement", ["agreement", str(DATA / "annotations_courses.csv")]),
            ("agreement", ["agreement", str(DATA / "annotations_kds.csv")]),
            ("eval-kfold", ["eval-kfold", str(DATA / "finetune_corpus.jsonl"), "--k", "5"]),
        ]
        failures = 0
        for name, args in cases:
            schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
            validator = jsonschema.Draft202012Validator(schema)
            try:
                doc = run(cli, args)
            except (RuntimeError, json.JSONDecodeError) as exc:
                print(f"FAIL {name}: {exc}")
                failures += 1
                continue
            errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
            if errors:
                failures += 1
                for e in errors[:5]:
                    print(f"FAIL {name} {list(e.path)}: {e.message[:200]}")
            else:
                print(f"ok   {name} {' '.join(args[-3:])}")
        return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
