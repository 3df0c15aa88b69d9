# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for the hot truncated-polynomial loops.

Same contract as _kernel_py (see there): dict-of-packed-key arithmetic with
exact rational values. Coefficient arithmetic stays in Python objects (gmpy2
rationals or Fractions); the win is C-level iteration, key arithmetic, and
dict access, which dominate the pure-Python inner loop.
"""

IMPL = "cython"


def mul_acc(dict acc, dict a, dict b, long shift, long maxdeg):
    """acc += a*b, dropping products of total degree > maxdeg."""
    cdef long ka, kb, k, rem
    cdef object va, vb, prev
    if len(a) > len(b):
        a, b = b, a
    cdef list items = list(b.items())
    cdef Py_ssize_t nb = len(items)
    cdef Py_ssize_t i
    cdef tuple it
    for ka, va in a.items():
        rem = maxdeg - (ka >> shift)
        for i in range(nb):
            it = <tuple> items[i]
            kb = <long> it[0]
            if (kb >> shift) > rem:
                continue
            vb = it[1]
            k = ka + kb
            prev = acc.get(k)
            if prev is None:
                acc[k] = va * vb
            else:
                acc[k] = prev + va * vb


def scale_acc(dict acc, dict a, object c):
    """acc += c*a."""
    cdef long k
    cdef object v, prev
    for k, v in a.items():
        prev = acc.get(k)
        if prev is None:
            acc[k] = c * v
        else:
            acc[k] = prev + c * v


def prune(dict d):
    """Drop exact zeros produced by cancellation (zero is never stored)."""
    cdef list dead = [k for k, v in d.items() if not v]
    cdef object k
    for k in dead:
        del d[k]
    return d
