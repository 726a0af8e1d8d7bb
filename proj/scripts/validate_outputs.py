#!/usr/bin/env python3
"""Run the demo pipeline and validate every JSON output against schemas/."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

SCHEMAS = Path(__file__).resolve().parent.parent / "schemas"


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: validate_outputs.py <path to innov>", file=sys.stderr)
        return 2
    exe = sys.argv[1]
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "demo"
        subprocess.run([exe, "demo", "--out", str(out)], check=True, stdout=subprocess.DEVNULL)
        failed = 0
        for schema_path in sorted(SCHEMAS.glob("*.schema.json")):
            target = out / schema_path.name.replace(".schema", "")
            schema = json.loads(schema_path.read_text())
            jsonschema.Draft202012Validator.check_schema(schema)
            try:
                jsonschema.validate(json.loads(target.read_text()), schema, cls=jsonschema.Draft202012Validator)
                print(f"ok   {target.name}")
            except (OSError, jsonschema.ValidationError) as err:
                failed += 1
                print(f"FAIL {target.name}: {err}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
