import os
import subprocess
import sys


def backend_of(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("MIPT_LE_BACKEND", None)
    else:
        env["MIPT_LE_BACKEND"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "import mipt_le; print(mipt_le.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
    )
    return out


def test_default_prefers_numba():
    res = backend_of(None)
    assert res.returncode == 0
    assert res.stdout.strip() == "numba"


def test_numpy_fallback_selectable():
    res = backend_of("numpy")
    assert res.returncode == 0
    assert res.stdout.strip() == "numpy"


def test_explicit_numba():
    res = backend_of("numba")
    assert res.returncode == 0
    assert res.stdout.strip() == "numba"


def test_unknown_backend_rejected():
    res = backend_of("fortran")
    assert res.returncode != 0
    assert "MIPT_LE_BACKEND" in res.stderr


def test_kernels_expose_same_api():
    from mipt_le import _kernels_numba, _kernels_numpy

    for name in ("evolve", "measure_z", "apply_gate2q", "pauli_expect"):
        assert hasattr(_kernels_numpy, name)
        assert hasattr(_kernels_numba, name)
