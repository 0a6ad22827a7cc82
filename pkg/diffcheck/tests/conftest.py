import subprocess
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).parents[2]
FIXTURES = REPO_ROOT / "tests" / "fixtures"

# fixture stem -> (native framework, native style)
NATIVE_DIALECT = {
    "alexnet_pt_subclassing": ("pt", "subclassing"),
    "vgg16_pt_subclassing": ("pt", "subclassing"),
    "tf_tutorial_sequential": ("tf", "sequential"),
    "lstm_tf_subclassing": ("tf", "subclassing"),
    "cnn_rnn_tf_subclassing": ("tf", "subclassing"),
}
FULL_MATRIX = ["alexnet_pt_subclassing", "vgg16_pt_subclassing",
               "tf_tutorial_sequential"]
SUBCLASSING_ONLY = ["lstm_tf_subclassing", "cnn_rnn_tf_subclassing"]
STYLES = ("sequential", "subclassing")
_STYLE_FLAG = {"sequential": "seq", "subclassing": "subc"}


def migrate(src: Path, framework: str, style: str, out: Path) -> Path:
    """Invoke the migration tool's CLI (its external interface)."""
    cmd = [sys.executable, "-m", "nnmigrate.cli", str(src),
           "--to", framework, "--to-style", _STYLE_FLAG[style],
           "-o", str(out)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise AssertionError(f"migration failed: {' '.join(cmd)}\n{proc.stderr}")
    return out


def build_matrix_pairs(workdir: Path):
    """(case id, source file, migrated file) for all 28 matrix scenarios."""
    pairs = []
    for stem, (f0, native_style) in NATIVE_DIALECT.items():
        f1 = "pt" if f0 == "tf" else "tf"
        combos = ([(a, b) for a in STYLES for b in STYLES]
                  if stem in FULL_MATRIX else [("subclassing", "subclassing")])
        fixture = FIXTURES / f"{stem}.py"
        for a, b in combos:
            if a == native_style:
                src = fixture
            else:
                src = migrate(fixture, f0, a, workdir / f"{stem}__{f0}-{a}.py")
            fwd = migrate(src, f1, b,
                          workdir / f"{stem}__{f0}-{a}__to__{f1}-{b}.py")
            bwd = migrate(fwd, f0, a,
                          workdir / f"{stem}__{f1}-{b}__to__{f0}-{a}.py")
            pairs.append((f"{stem}:{f0}-{a}->{f1}-{b}", src, fwd))
            pairs.append((f"{stem}:{f1}-{b}->{f0}-{a}", fwd, bwd))
    return pairs


@pytest.fixture(scope="session")
def matrix_pairs(tmp_path_factory):
    workdir = tmp_path_factory.mktemp("migrated")
    return build_matrix_pairs(workdir)
