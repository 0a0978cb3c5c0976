"""Regenerate tests/goldens/ from the current library.

Run after an intentional change to numerical output, then review the diff.
The golden test compares numerically, so small last-digit changes pass.
"""

import sys
from pathlib import Path
from typing import Dict, List

from loguru import logger

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "goldens"

# file name -> ggkp arguments (the output path is appended)
GOLDEN_CASES: Dict[str, List[str]] = {
    "grid_default.csv": ["grid", "--nx", "9", "--nk", "9", "--format", "csv"],
    "grid_half.json": [
        "grid", "--char", "1/2,1/2;1/2,1/2", "--nx", "5", "--nk", "5", "--format", "json",
    ],
    "grid_default.pgm": ["grid", "--nx", "16", "--nk", "8", "--format", "pgm"],
    "grid_xi.csv": ["grid", "--xi", "--nx", "8", "--nk", "8"],
    "element_1_0.json": ["element", "1", "0", "--oracle"],
    "limit_scan.csv": ["limit-scan", "--scales", "1", "2", "4"],
    "overlap.json": ["overlap", "--resolution", "128"],
}


def main() -> int:
    from ggkp.cli.main import main as ggkp

    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for name, args in GOLDEN_CASES.items():
        code = ggkp([*args, "--out", str(GOLDEN_DIR / name)])
        if code != 0:
            logger.error(f"{name}: ggkp exited with {code}")
            return code
        logger.info(f"regenerated {name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
