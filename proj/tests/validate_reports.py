#!/usr/bin/env python3
# Runs the CLI, checks exit codes and validates every --json report against the schema.
import json
import subprocess
import sys

import jsonschema

eds, schema_path, data = sys.argv[1], sys.argv[2], sys.argv[3]
schema = json.load(open(schema_path))
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

cases = [
    (["identities", "finsler_identities"], 0, "identities"),
    (["identities", data + "/landsberg.eds"], 0, "identities"),
    (["identities", data + "/finsler.eds", "--solve", "J,K3"], 0, "identities"),
    (["involutivity", data + "/landsberg.eds"], 0, "involutivity"),
    (["involutivity", "scenario:landsberg"], 0, "involutivity"),
    (["involutivity", "scenario:jet_lc_printed"], 0, "involutivity"),
    (["scenario", "contact_checks"], 0, "scenario"),
    (["scenario", "coframe_change"], 0, "scenario"),
    (["solve-lc", "--order", "5", "--seed", "3"], 0, "jets"),
    (["solve-lc", "--order", "4", "--variant", "paper"], 0, "jets"),
    (["verify-unicorn", "--source", "cosh", "--grid", "3,3,4,0.5"], 1, "unicorn"),
    (["verify-unicorn", "--source", "jet", "--order", "6", "--points"], 1, "unicorn"),
    (["audit-c2"], 0, "scenario"),
    (["involutivity", "/nonexistent.eds"], 2, "error"),
    (["scenario", "bogus"], 2, "error"),
    (["verify-unicorn", "--fd-order", "3"], 2, "error"),
]

failed = 0
for args, code, kind in cases:
    p = subprocess.run([eds, "--json"] + args, capture_output=True, text=True, timeout=300)
    problems = []
    if p.returncode != code:
        problems.append(f"exit {p.returncode}, want {code}")
    try:
        doc = json.loads(p.stdout)
        errs = list(validator.iter_errors(doc))
        if errs:
            problems.append("schema: " + errs[0].message[:200])
        if doc.get("kind") != kind:
            problems.append(f"kind {doc.get('kind')}, want {kind}")
    except json.JSONDecodeError as e:
        problems.append(f"bad json: {e}")
    status = "ok" if not problems else "FAIL " + "; ".join(problems)
    print(" ".join(args), "->", status)
    failed += bool(problems)

# a report that must not validate
bad = {"kind": "involutivity", "characters": "two"}
if validator.is_valid(bad):
    print("schema accepts a malformed report")
    failed += 1

sys.exit(1 if failed else 0)
