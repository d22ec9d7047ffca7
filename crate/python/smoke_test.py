"""Smoke test for the hamflux Python extension.

Build first with

    cargo build -p hamflux-py --features extension-module

then run `python3 python/smoke_test.py`. The script copies the built library
next to a temporary `hamflux.so` and imports it from there; set HAMFLUX_LIB to
point at a specific build.
"""

import importlib
import os
import shutil
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_library() -> Path:
    if "HAMFLUX_LIB" in os.environ:
        return Path(os.environ["HAMFLUX_LIB"])
    for profile in ("release", "debug"):
        for name in ("libhamflux_py.so", "libhamflux_py.dylib"):
            candidate = ROOT / "target" / profile / name
            if candidate.exists():
                return candidate
    sys.exit("hamflux extension not built; see the module docstring")


def load():
    target = Path(tempfile.mkdtemp()) / "hamflux.so"
    shutil.copy(locate_library(), target)
    sys.path.insert(0, str(target.parent))
    return importlib.import_module("hamflux")


def main() -> None:
    hf = load()

    sl2 = hf.matrix_algebra(2)
    a = sl2.analyze()
    dims = a.dims()
    assert (dims["sp"], dims["ham"], dims["rad"], dims["v_h"], dims["v_omega"]) == (3, 3, 0, 1, 4), dims
    assert all(a.checks().values())
    # E12 and E21 in M_2 = R^4
    e12, e21 = [0, 1, 0, 0], [0, 0, 1, 0]
    assert a.poisson_bracket(e12, e21) == [Fraction(-1), 0, 0, Fraction(1)]

    heis = hf.heisenberg_example()
    ha = heis.analyze()
    assert ha.poisson_bracket(["1", 0, 0], [0, "1", 0]) == [0, 0, 1]
    report = heis.momentum()
    assert report["equivariantizable"] is False
    assert report["tau"] == [[0, 1, "1", 2]]
    cen = heis.extend("cen")
    assert cen.dim_h == 3
    assert cen.bracket([0, 1, 0], [0, 0, 1]) == [1, 0, 0]
    again = hf.Problem.from_json(cen.to_json())
    assert again.to_json() == cen.to_json()

    assert sl2.momentum()["equivariantizable"] is True
    baer = sl2.extend("baer")
    assert baer.analyze().dims()["sp"] == baer.dim_h

    broken = (ROOT / "fixtures" / "broken_jacobi.json").read_text()
    try:
        hf.Problem.from_json(broken)
    except hf.ValidationError as e:
        assert "Jacobi" in str(e)
    else:
        raise AssertionError("broken Jacobi document was accepted")

    problem = hf.Problem.load(str(ROOT / "fixtures" / "heisenberg_noether_violation.json"))
    try:
        problem.noether()
    except hf.MathError as e:
        assert "hypothesis" in str(e)
    else:
        raise AssertionError("violated hypothesis was not reported")

    r = hf.random_problem(3, 2, 5)
    assert (r.dim_h, r.dim_v) == (3, 2)
    print("python smoke test passed")


if __name__ == "__main__":
    main()
