"""The checked-in vector files must match what the Python oracles produce."""

import pathlib
import subprocess
import sys

import pytest

VECTORS = pathlib.Path(__file__).resolve().parents[2] / "tests" / "vectors"

pytest.importorskip("cryptography")


@pytest.mark.parametrize("name", ["x3dh", "kdf"])
def test_vectors_are_reproducible(name):
    out = subprocess.run(
        [sys.executable, str(VECTORS / f"gen_{name}_vectors.py")],
        check=True,
        capture_output=True,
        text=True,
    ).stdout
    assert out == (VECTORS / f"{name}_vectors.txt").read_text()
