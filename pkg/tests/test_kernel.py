import os
import random
import subprocess
import sys

import pytest

from mirrorcp import _kernel, _kernel_py
from mirrorcp._coeff import Q, ZERO
from mirrorcp.series import FIELD_BITS, pack_exponents


def random_terms(rng, nvars, maxdeg, nterms):
    out = {}
    for _ in range(nterms):
        exps = [0] * nvars
        for _ in range(rng.randint(0, maxdeg)):
            exps[rng.randrange(nvars)] += 1
        out[pack_exponents(exps)] = Q(rng.randint(-9, 9), rng.randint(1, 9))
    return {k: v for k, v in out.items() if v}


def test_mul_acc_truncates_and_accumulates():
    rng = random.Random(5)
    nvars, maxdeg = 2, 4
    shift = FIELD_BITS * nvars
    a = random_terms(rng, nvars, maxdeg, 8)
    b = random_terms(rng, nvars, maxdeg, 8)
    acc = dict(random_terms(rng, nvars, maxdeg, 3))
    start = dict(acc)
    _kernel_py.mul_acc(acc, a, b, shift, maxdeg)
    want = dict(start)
    for ka, va in a.items():
        for kb, vb in b.items():
            if (ka >> shift) + (kb >> shift) > maxdeg:
                continue
            k = ka + kb
            want[k] = want.get(k, ZERO) + va * vb
    _kernel_py.prune(acc)
    want = {k: v for k, v in want.items() if v}
    assert acc == want
    assert all((k >> shift) <= maxdeg for k in acc)


def test_scale_acc_and_prune():
    rng = random.Random(9)
    a = random_terms(rng, 3, 5, 10)
    acc = {}
    _kernel_py.scale_acc(acc, a, Q(2, 3))
    _kernel_py.scale_acc(acc, a, Q(-2, 3))
    _kernel_py.prune(acc)
    assert acc == {}


@pytest.mark.skipif(_kernel.IMPL != "cython", reason="compiled kernel not built")
def test_compiled_matches_pure():
    from mirrorcp import _kernel_cy

    rng = random.Random(13)
    nvars, maxdeg = 3, 6
    shift = FIELD_BITS * nvars
    for _ in range(25):
        a = random_terms(rng, nvars, maxdeg, 12)
        b = random_terms(rng, nvars, maxdeg, 12)
        acc_py = dict(random_terms(rng, nvars, maxdeg, 4))
        acc_cy = dict(acc_py)
        _kernel_py.mul_acc(acc_py, a, b, shift, maxdeg)
        _kernel_cy.mul_acc(acc_cy, a, b, shift, maxdeg)
        _kernel_py.prune(acc_py)
        _kernel_cy.prune(acc_cy)
        assert acc_py == acc_cy
        s_py, s_cy = {}, {}
        _kernel_py.scale_acc(s_py, a, Q(-7, 5))
        _kernel_cy.scale_acc(s_cy, a, Q(-7, 5))
        assert s_py == s_cy


def test_env_var_forces_pure_kernel():
    env = dict(os.environ, MIRRORCP_PURE_KERNEL="1")
    out = subprocess.run(
        [sys.executable, "-c", "from mirrorcp import _kernel; print(_kernel.IMPL)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
