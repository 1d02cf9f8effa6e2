"""Smoke test for the lgeu_py extension.

Build first with
    cargo build --release -p lgeu-py --features extension-module
or point LGEU_PY_LIB at a built shared library.
"""

import importlib.util
import math
import os
import shutil
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def locate_library():
    env = os.environ.get("LGEU_PY_LIB")
    if env:
        return Path(env)
    for profile in ("release", "debug"):
        for name in ("liblgeu_py.so", "liblgeu_py.dylib", "lgeu_py.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                return path
    sys.exit("lgeu_py library not found; run cargo build --release -p lgeu-py --features extension-module")


def load():
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = Path(tempfile.mkdtemp()) / ("lgeu_py" + suffix)
    shutil.copy(locate_library(), target)
    spec = importlib.util.spec_from_file_location("lgeu_py", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    lg = load()

    assert lg.tgamma(0.0, 0.0) == 1.0
    assert abs(lg.tgamma(0.0, 1.0) - 1.0 / math.log(10.0)) < 1e-15
    assert lg.phi(0.25) == 1.0 and lg.phi(2.0) == 0.0

    w = lg.initial_condition(n=32, ic="shell")
    assert len(w) == 32 * 32
    r = lg.rhs(w, gamma=1.5)
    assert max(abs(v) for v in r) < 1e-10

    out = lg.simulate(n=32, t_max=0.2, ic="random_band", seed=3)
    assert out["blow_up"] is None
    assert out["final_t"] == 0.2
    assert len(out["final_field"]) == 32 * 32
    l2 = out["l2"]
    assert max(abs(v / l2[0] - 1.0) for v in l2) < 1e-8

    rep = lg.verify("embedding", n=32, p_max=16)
    assert 0.0 < rep["max_ratio"] < 1.0 and rep["rows"]

    sh = lg.sharpness(64.0)
    assert sh["p"] == [4.0, 8.0, 16.0, 32.0, 64.0]

    try:
        lg.simulate(gamma=-1)
    except ValueError as e:
        assert "gamma" in str(e)
    else:
        raise AssertionError("negative gamma accepted")

    print("lgeu_py smoke test OK")


if __name__ == "__main__":
    main()
