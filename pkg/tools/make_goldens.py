"""Regenerate the committed golden outputs for every migration-matrix case.

Run from the repository root after an intentional emitter change:
    python tools/make_goldens.py
"""

import sys
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from conftest import GOLDEN, matrix_cases  # noqa: E402


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for existing in GOLDEN.glob("*.py"):
        existing.unlink()
    cases = matrix_cases()
    for key, _stem, text in cases:
        (GOLDEN / f"{key}.py").write_text(text, encoding="utf-8")
    print(f"wrote {len(cases)} golden files to {GOLDEN}")


if __name__ == "__main__":
    main()
