"""Regenerate the committed fixtures in tests/data.

The golden report comes from the 64x64 oracle, never from the structured
solver, so a regression in the structured path cannot leak into its own
reference.  Run from the repository root:

    python scripts/make_golden.py
"""

from pathlib import Path

from tensoreq.cli import main

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def run(*argv: str) -> None:
    code = main(list(argv))
    if code != 0:
        raise SystemExit(f"{' '.join(argv)} exited with {code}")


if __name__ == "__main__":
    DATA.mkdir(parents=True, exist_ok=True)
    inst = DATA / "seed42_minkowski.json"
    run("random", "--seed", "42", "--metric", "minkowski", "-o", str(inst))
    run("oracle", str(inst), "-o", str(DATA / "seed42_minkowski.golden.json"))
