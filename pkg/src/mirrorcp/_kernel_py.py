"""Pure-Python kernel for the hot truncated-polynomial loops.

Terms are dicts mapping a packed integer key to an exact rational. The key
packs one 6-bit field per variable plus the total degree in the top field, so
the product key is plain integer addition and the truncation test is one shift
(see series.py for the packing). The compiled kernel in _kernel_cy.pyx
implements the same three functions with identical results bit for bit.
"""

IMPL = "python"


def mul_acc(acc, a, b, shift, maxdeg):
    """acc += a*b, dropping products of total degree > maxdeg."""
    if len(a) > len(b):
        a, b = b, a
    get = acc.get
    items = list(b.items())
    for ka, va in a.items():
        rem = maxdeg - (ka >> shift)
        for kb, vb in items:
            if (kb >> shift) > rem:
                continue
            k = ka + kb
            prev = get(k)
            if prev is None:
                acc[k] = va * vb
            else:
                acc[k] = prev + va * vb


def scale_acc(acc, a, c):
    """acc += c*a."""
    get = acc.get
    for k, v in a.items():
        prev = get(k)
        if prev is None:
            acc[k] = c * v
        else:
            acc[k] = prev + c * v


def prune(d):
    """Drop exact zeros produced by cancellation (zero is never stored)."""
    dead = [k for k, v in d.items() if not v]
    for k in dead:
        del d[k]
    return d
