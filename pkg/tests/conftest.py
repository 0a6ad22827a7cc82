import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nnmigrate import detect_dialect, extract, parse_source

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

# (fixture stem, input dims without batch, module count)
CORPUS = [
    ("alexnet_pt_subclassing", (32, 32, 3), 15),
    ("vgg16_pt_subclassing", (32, 32, 3), 25),
    ("tf_tutorial_sequential", (32, 32, 3), 8),
    ("lstm_tf_subclassing", (20,), 6),
    ("cnn_rnn_tf_subclassing", (20,), 11),
]

# Matrix fixtures migrated across all eight scenarios vs. subclassing only.
FULL_MATRIX = ["alexnet_pt_subclassing", "vgg16_pt_subclassing",
               "tf_tutorial_sequential"]
SUBCLASSING_ONLY = ["lstm_tf_subclassing", "cnn_rnn_tf_subclassing"]


NATIVE_DIALECT = {
    "alexnet_pt_subclassing": ("pt", "subclassing"),
    "vgg16_pt_subclassing": ("pt", "subclassing"),
    "tf_tutorial_sequential": ("tf", "sequential"),
    "lstm_tf_subclassing": ("tf", "subclassing"),
    "cnn_rnn_tf_subclassing": ("tf", "subclassing"),
}

STYLES = ("sequential", "subclassing")


def fixture_text(stem: str) -> str:
    return (FIXTURES / f"{stem}.py").read_text(encoding="utf-8")


def fixture_pivot(stem: str):
    tree = parse_source(fixture_text(stem))
    return extract(tree, detect_dialect(tree))


@pytest.fixture(scope="session")
def corpus_pivots():
    return {stem: fixture_pivot(stem) for stem, _, _ in CORPUS}


def matrix_cases():
    """All migration-matrix scenarios: the three chain-style networks across
    the eight framework/style combinations, the recurrent and non-sequential
    ones across subclassing<->subclassing in both directions (28 total)."""
    from nnmigrate import EmitTarget, migrate_source

    cases = []
    for stem, _, _ in CORPUS:
        f0, native_style = NATIVE_DIALECT[stem]
        f1 = "pt" if f0 == "tf" else "tf"
        if stem in FULL_MATRIX:
            pairs = [(a, b) for a in STYLES for b in STYLES]
        else:
            pairs = [("subclassing", "subclassing")]
        source = fixture_text(stem)
        for a, b in pairs:
            if a == native_style:
                src_text = source
            else:
                src_text = migrate_source(source, EmitTarget(f0, a)).text
            fwd = migrate_source(src_text, EmitTarget(f1, b))
            bwd = migrate_source(fwd.text, EmitTarget(f0, a))
            cases.append((f"{stem}__{f0}-{a}__to__{f1}-{b}", stem, fwd.text))
            cases.append((f"{stem}__{f1}-{b}__to__{f0}-{a}", stem, bwd.text))
    return cases
