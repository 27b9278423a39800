"""Regenerate src/redgreen/fixtures/*.json from the builders.

    python3 scripts/make_fixtures.py [--check]

With --check nothing is written; the exit status is 1 if any file is stale.
"""

import argparse
import pathlib
import sys

from redgreen.catalog import builtin_payloads

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "src" / "redgreen" / "fixtures"


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    stale = []
    FIXTURES.mkdir(exist_ok=True)
    for name, text in sorted(builtin_payloads().items()):
        path = FIXTURES / name
        if path.exists() and path.read_text() == text:
            continue
        stale.append(name)
        if not args.check:
            path.write_text(text)
    verb = "stale" if args.check else "wrote"
    for name in stale:
        print(f"{verb} {name}")
    return 1 if (args.check and stale) else 0


if __name__ == "__main__":
    sys.exit(main())
