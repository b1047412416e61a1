#!/usr/bin/env python3
"""Normalize a stake snapshot into the `id,weight` CSV read by swiperkit.

The source is a local path or an http(s) URL you supply; nothing is fetched
unless you name it. Supported inputs:

  * CSV with a header row (pick columns with --id-field / --weight-field)
  * JSON: an array of objects, or an object whose --list-key field holds one

Weights are copied as exact decimal strings. Rows are written in input order
unless --sort is given.

Example:
  scripts/fetch_snapshot.py --source validators.json --list-key validators \\
      --id-field address --weight-field voting_power --name aptos
"""

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
import urllib.request
from pathlib import Path

DECIMAL = re.compile(r"^\d+(\.\d+)?$|^\d+/[1-9]\d*$")


def read_source(source):
    if re.match(r"^https?://", source):
        with urllib.request.urlopen(source) as response:
            return response.read().decode("utf-8")
    return Path(source).read_text(encoding="utf-8")


def rows_from_json(text, list_key, id_field, weight_field):
    data = json.loads(text)
    if list_key:
        for key in list_key.split("."):
            data = data[key]
    if not isinstance(data, list):
        sys.exit("JSON input must be an array of objects (use --list-key)")
    for entry in data:
        yield str(entry[id_field]), str(entry[weight_field])


def rows_from_csv(text, id_field, weight_field):
    for entry in csv.DictReader(io.StringIO(text)):
        yield entry[id_field].strip(), entry[weight_field].strip()


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--source", required=True, help="local path or http(s) URL")
    parser.add_argument("--name", required=True, help="output stem, e.g. aptos")
    parser.add_argument("--format", choices=["json", "csv"], help="input format (default: by extension)")
    parser.add_argument("--list-key", default="", help="dotted path to the array inside a JSON object")
    parser.add_argument("--id-field", default="id")
    parser.add_argument("--weight-field", default="weight")
    parser.add_argument("--drop-zero", action="store_true", help="omit parties with zero weight")
    parser.add_argument("--sort", action="store_true", help="order rows by id")
    parser.add_argument("--out-dir", default=str(Path(__file__).resolve().parent.parent / "data" / "snapshots"))
    args = parser.parse_args()

    text = read_source(args.source)
    fmt = args.format or ("csv" if args.source.lower().endswith(".csv") else "json")
    if fmt == "json":
        rows = list(rows_from_json(text, args.list_key, args.id_field, args.weight_field))
    else:
        rows = list(rows_from_csv(text, args.id_field, args.weight_field))

    seen = set()
    for party, weight in rows:
        if not DECIMAL.match(weight):
            sys.exit(f"party {party!r}: weight {weight!r} is not a non-negative decimal or p/q")
        if party in seen:
            sys.exit(f"duplicate party id {party!r}")
        seen.add(party)
    if args.drop_zero:
        rows = [(p, w) for p, w in rows if Fraction(w) != 0]
    if args.sort:
        rows.sort()

    out = Path(args.out_dir) / f"{args.name}.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["id", "weight"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} parties to {out}")


if __name__ == "__main__":
    main()
