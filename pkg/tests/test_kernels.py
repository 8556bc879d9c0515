import hashlib
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from abundancy import _kernels


def test_conv_pass_is_sigma():
    # one pass with r=1 over all-ones gives sigma(n)
    t = np.ones(30, dtype=np.int64)
    out = _kernels.conv_pass(t, 1)
    sigma = [sum(d for d in range(1, n + 1) if n % d == 0) for n in range(1, 31)]
    assert out.tolist() == sigma


def test_conv_pass_r0_is_divisor_count():
    t = np.ones(24, dtype=np.int64)
    out = _kernels.conv_pass(t, 0)
    tau = [sum(1 for d in range(1, n + 1) if n % d == 0) for n in range(1, 25)]
    assert out.tolist() == tau


def test_kahan_cumsum_matches_fsum():
    rng = np.random.default_rng(7)
    a = rng.normal(size=5000) * 10.0 ** rng.integers(-8, 8, size=5000)
    out = _kernels.kahan_cumsum(a)
    for idx in (0, 17, 4999):
        ref = math.fsum(a[: idx + 1])
        assert abs(out[idx] - ref) <= 1e-9 * max(1.0, abs(ref))


def test_kahan_sum_close_to_fsum():
    rng = np.random.default_rng(11)
    a = rng.normal(size=100_000)
    assert abs(_kernels.kahan_sum(a) - math.fsum(a)) < 1e-9


def test_dd_cumsum_tighter_than_kahan():
    rng = np.random.default_rng(3)
    a = rng.normal(size=20_000)
    dd = _kernels.dd_cumsum(a)
    ref = math.fsum(a)
    assert abs(dd[-1] - ref) <= 4 * abs(ref) * 2.0**-52


def test_orbit_counts():
    # identity on 4 points: 4 orbits; 4-cycle: 1; two 2-cycles: 2
    ident = [0, 1, 2, 3]
    cyc = [1, 2, 3, 0]
    swaps = [1, 0, 3, 2]
    ks = _kernels.orbit_counts(
        np.array([[ident], [cyc], [swaps]], dtype=np.int64)
    )
    assert ks.tolist() == [4, 1, 2]
    # jointly the two involutions below still generate a transitive action
    both = np.array([[swaps, [3, 2, 1, 0]]], dtype=np.int64)
    assert _kernels.orbit_counts(both)[0] == 1


def test_local_moments_first_term_bound():
    for p in (2, 3, 5):
        out = _kernels.local_moments(np.array([p], dtype=np.float64), 2, 2, 1e-10)
        assert out[0] >= 1.0 - 1.0 / p


_PARITY_SCRIPT = r"""
import hashlib
import numpy as np
from abundancy import _kernels

rng = np.random.default_rng(123)
a = rng.normal(size=50_000)
t = np.ones(2000, dtype=np.int64)
conv = _kernels.conv_pass(_kernels.conv_pass(t, 1), 2)
kah = _kernels.kahan_cumsum(a)
dig = hashlib.sha256()
dig.update(conv.tobytes())
dig.update(kah.tobytes())
dig.update(np.float64(_kernels.kahan_sum(a)).tobytes())
print(_kernels.USING_NUMBA, dig.hexdigest())
"""


def _run_parity(no_numba: bool) -> tuple[str, str]:
    env = dict(os.environ)
    env["ABUNDANCY_NO_NUMBA"] = "1" if no_numba else "0"
    res = subprocess.run(
        [sys.executable, "-c", _PARITY_SCRIPT],
        capture_output=True, text=True, env=env, check=True,
    )
    used, digest = res.stdout.split()
    return used, digest


def test_numba_and_numpy_paths_bit_identical():
    used_jit, dig_jit = _run_parity(no_numba=False)
    used_np, dig_np = _run_parity(no_numba=True)
    assert used_np == "False"
    assert dig_jit == dig_np
    if used_jit == "False":
        pytest.skip("numba unavailable; both runs took the numpy path")


def test_moment_kernel_paths_agree_within_eps():
    script = r"""
import numpy as np
from abundancy import _kernels
ps = np.array([2, 3, 5, 7, 11, 101, 997], dtype=np.float64)
out = _kernels.local_moments(ps, 3, 2, 1e-12)
print(" ".join(repr(float(x)) for x in out))
"""
    env = dict(os.environ)
    env["ABUNDANCY_NO_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", script],
                         capture_output=True, text=True, env=env, check=True)
    theirs = [float(x) for x in res.stdout.split()]
    ps = np.array([2, 3, 5, 7, 11, 101, 997], dtype=np.float64)
    ours = _kernels.local_moments(ps, 3, 2, 1e-12)
    # per-prime truncation depth may differ between paths, value must not
    assert np.allclose(ours, theirs, rtol=0, atol=1e-10)
