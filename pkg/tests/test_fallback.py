"""Pure-Python arithmetic path: gmpy2 and python-flint blocked at import time."""
import subprocess
import sys
from pathlib import Path

import pytest

SCENES = Path(__file__).resolve().parent.parent / "scenes"

BLOCK = "import sys; sys.modules['gmpy2'] = None; sys.modules['flint'] = None\n"

PROBE = BLOCK + """
from fractions import Fraction
import forge.graded, forge.polycalc.algebra as alg
assert forge.graded.rational is Fraction, forge.graded.rational
assert alg.flint is None
print("fallback")
"""

RUN = """
import sys
from forge.cli import main
sys.exit(main(sys.argv[1:]))
"""


def _python(code, *args):
    return subprocess.run([sys.executable, "-c", code, *args], capture_output=True,
                          timeout=300)


def test_fallback_backends_load():
    proc = _python(PROBE)
    assert proc.returncode == 0, proc.stderr.decode()
    assert proc.stdout.strip() == b"fallback"


@pytest.mark.parametrize("scene", ["curved_d2.json", "r2_symplectic.json",
                                   "two_step_linfty.json", "trace_r2.json"])
def test_reports_identical_without_native_backends(scene):
    args = ["run", "--scene", str(SCENES / scene)]
    native = _python(RUN, *args)
    fallback = _python(BLOCK + RUN, *args)
    assert native.returncode == fallback.returncode
    assert native.stdout == fallback.stdout
    assert native.stdout
