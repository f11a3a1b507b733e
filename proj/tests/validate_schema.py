"""Runs each CLI subcommand with small parameters and validates the JSON
report against schema/report.schema.json. Exit 77 when jsonschema is missing."""

import json
import subprocess
import sys

try:
    import jsonschema
except ImportError:
    sys.exit(77)

cli, schema_path = sys.argv[1], sys.argv[2]
with open(schema_path) as fh:
    schema = json.load(fh)

runs = [
    ["sieve", "--n", "50"],
    ["ramanujan", "--q-max", "6", "--n-max", "4"],
    ["ramanujan", "--q-max", "6", "--n-max", "4", "--check"],
    ["moments", "--q", "2,4,8", "--m-rule", "8*q^2"],
    ["approx-error", "--n", "512", "--k", "0,2,4"],
    ["improving", "--n", "32,64", "--trials", "3"],
    ["highlow", "--n", "512", "--j", "1,2"],
    ["sparse", "--n0", "8", "--fixtures", "3"],
    ["sparse", "--n0", "12", "--fixtures", "1", "--family", "clustered"],
]
for args in runs:
    out = subprocess.run([cli, *args], check=True, capture_output=True, text=True).stdout
    jsonschema.validate(json.loads(out), schema)
    print("valid:", " ".join(args))

# the schema must reject a report with an unknown row column
bad = json.loads(subprocess.run([cli, "sieve", "--n", "10"], check=True, capture_output=True, text=True).stdout)
bad["rows"][0]["extra"] = 1
try:
    jsonschema.validate(bad, schema)
except jsonschema.ValidationError:
    print("rejected: unknown column")
else:
    sys.exit("schema accepted an unknown column")
