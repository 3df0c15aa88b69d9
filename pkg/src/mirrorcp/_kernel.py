"""Kernel selection: compiled extension when present, pure Python otherwise.

Set MIRRORCP_PURE_KERNEL=1 to force the pure kernel (used by the benchmark and
the kernel-equivalence tests). The choice can only affect speed; both kernels
produce bit-identical results, which tests/test_kernel.py asserts.
"""

import os

if os.environ.get("MIRRORCP_PURE_KERNEL") == "1":
    from . import _kernel_py as impl
else:
    try:
        from . import _kernel_cy as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as impl

IMPL = impl.IMPL
mul_acc = impl.mul_acc
scale_acc = impl.scale_acc
prune = impl.prune
