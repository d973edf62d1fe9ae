"""Regenerate the bundled scenario JSON files from the builders.

Run from the repository root after changing anything in tsnsim.scenarios:

    python3 scripts/regen_scenario_data.py

The test suite asserts that every bundled file matches its builder output
byte for byte, so a drifted file shows up as a test failure, not silently.
"""

from pathlib import Path

from tsnsim.scenarios import CASE_MATRIX, build_scenario, to_json

OUT = Path(__file__).resolve().parent.parent / "src" / "tsnsim" / "data" / "scenarios"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, case in CASE_MATRIX:
        path = OUT / f"{name}-{case}.json"
        path.write_text(to_json(build_scenario(name, case)))
        print(f"wrote {path.relative_to(OUT.parent.parent.parent.parent)}")


if __name__ == "__main__":
    main()
