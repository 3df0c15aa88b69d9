"""Curve-count tables and the associativity-based reconstruction oracle.

Everything here is independent of the period pipeline: counts are produced
from the associativity equations alone, seeded by the single normalization
N(1; 0,...,0,2) = 1 (curves of degree one through two generic codimension-n
cycles), and packaged as a potential for coefficientwise comparison.
"""

import math

from ._coeff import ONE, Q, ZERO, factorial
from .linalg import solve_unique
from .reports import check, poly_witness
from .series import TPoly


class GWTable:
    """Counts keyed by (degree d, touch multidegree (m_2..m_n))."""

    def __init__(self, n, d_max, entries):
        self.n = n
        self.d_max = d_max
        self.entries = dict(entries)

    def get(self, d, m):
        return self.entries.get((d, tuple(m)), ZERO)

    def nonzero(self):
        return {key: v for key, v in self.entries.items() if v}

    def __eq__(self, other):
        if not isinstance(other, GWTable):
            return NotImplemented
        return self.n == other.n and self.nonzero() == other.nonzero()

    def __repr__(self):
        return "GWTable(n=%d, d_max=%d, %d entries)" % (self.n, self.d_max, len(self.entries))


class SigmaTable:
    """Normalized instanton coefficients keyed by (m_1, (m_2..m_n))."""

    def __init__(self, n, entries):
        self.n = n
        self.entries = dict(entries)

    def get(self, m1, m):
        return self.entries.get((m1, tuple(m)), ZERO)


class Potential:
    """A truncated potential function in the flat coordinates y^0..y^n."""

    def __init__(self, n, phi):
        self.n = n
        self.phi = phi

    @property
    def maxdeg(self):
        return self.phi.maxdeg


def classical_cubic(n, maxdeg):
    """The cubic pairing term: one sixth of the sum over index triples
    adding to n (the only triples pairing to a nonzero constant)."""
    out = TPoly.zero(n + 1, maxdeg)
    for a in range(n + 1):
        for b in range(a, n + 1):
            c = n - a - b
            if c < b:
                continue
            if a == b == c:
                coeff = Q(1, 6)
            elif a == b or b == c:
                coeff = Q(1, 2)
            else:
                coeff = ONE
            exps = [0] * (n + 1)
            exps[a] += 1
            exps[b] += 1
            exps[c] += 1
            out = out.add(TPoly.monomial(exps, coeff, n + 1, maxdeg))
    return out


def dimension_weight(n, m):
    """Sum of (k-1) * m_k over the touch multidegree."""
    if len(m) != max(n - 1, 0):
        raise ValueError("multidegree has %d parts, expected %d" % (len(m), n - 1))
    return sum((k - 1) * mk for k, mk in zip(range(2, n + 1), m))


def degree_for(n, m):
    """The curve degree forced by the dimension count, or None.

    A monomial with touch multidegree m can only carry degree-d counts when
    sum (k-1) m_k = (n+1) d + n - 3 for a positive integer d.
    """
    num = dimension_weight(n, m) - n + 3
    if num <= 0 or num % (n + 1):
        return None
    return num // (n + 1)


def _weighted(total, weights):
    if not weights:
        return [()] if total == 0 else []
    head = weights[0]
    out = []
    for cnt in range(total // head + 1):
        for rest in _weighted(total - cnt * head, weights[1:]):
            out.append((cnt,) + rest)
    return out


def touch_multidegrees(n, d):
    """All multidegrees (m_2..m_n) allowed at curve degree d."""
    w = (n + 1) * d + n - 3
    if w < 0:
        return []
    return _weighted(w, [k - 1 for k in range(2, n + 1)])


def _fblock(poly, d, triple):
    """Third-derivative block of a level-d slice e^(d y1) * poly.

    Indices are in 1..n; each index 1 pulls down a factor d, the rest
    differentiate the polynomial part (variable k maps to slot k-2).
    """
    out = poly
    ones = 0
    for idx in triple:
        if idx == 1:
            ones += 1
        else:
            out = out.partial(idx - 2)
    if ones and not out.is_zero():
        out = out.scale(Q(d ** ones))
    return out


def _linear_part(basis_poly, d, n, quad):
    """Level-d unknown-linear slice of an antisymmetrized associativity sum."""
    a, b, c, e4 = quad
    out = TPoly.zero(basis_poly.nvars, basis_poly.maxdeg)
    for sign, triple in (
        (1, (a + b, c, e4) if a + b <= n else None),
        (1, (a, b, c + e4) if c + e4 <= n else None),
        (-1, (a + e4, c, b) if a + e4 <= n else None),
        (-1, (a, e4, c + b) if c + b <= n else None),
    ):
        if triple is None:
            continue
        block = _fblock(basis_poly, d, triple)
        if block.is_zero():
            continue
        out = out.add(block if sign > 0 else block.neg())
    return out


def _known_part(levels, d, n, quad, nvars, maxdeg):
    """Lower-level quadratic slice of the same antisymmetrized sum."""
    a, b, c, e4 = quad
    out = TPoly.zero(nvars, maxdeg)
    for d1 in range(1, d):
        d2 = d - d1
        p1, p2 = levels[d1], levels[d2]
        for e in range(1, n):
            left = _fblock(p1, d1, (a, b, e))
            if not left.is_zero():
                right = _fblock(p2, d2, (n - e, c, e4))
                if not right.is_zero():
                    out = out.add(left.mul(right))
            left = _fblock(p1, d1, (a, e4, e))
            if not left.is_zero():
                right = _fblock(p2, d2, (n - e, c, b))
                if not right.is_zero():
                    out = out.sub(left.mul(right))
    return out


def reconstruct(n, d_max):
    """Solve the associativity equations level by level in the curve degree.

    At each degree the unknown counts enter linearly (paired against the
    constant classical blocks) and lower degrees contribute known quadratic
    terms; the resulting overdetermined linear system has a unique solution
    once the degree-one seed N(1; 0,..,0,2) = 1 is appended.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        entries = {(1, ()): ONE} if d_max >= 1 else {}
        return GWTable(1, d_max, entries)
    nvars = n - 1
    maxdeg = max((n + 1) * d_max + n - 3, 1)
    quadruples = [
        (a, b, c, e4)
        for a in range(1, n + 1)
        for b in range(1, n + 1)
        for c in range(1, n + 1)
        for e4 in range(b + 1, n + 1)
    ]
    levels = {}
    entries = {}
    for d in range(1, d_max + 1):
        unknowns = touch_multidegrees(n, d)
        basis = []
        for m in unknowns:
            denom = ONE
            for mk in m:
                denom = denom * factorial(mk)
            exps = list(m)
            basis.append(TPoly.monomial(exps, Q(1) / denom, nvars, maxdeg))
        rows = []
        rhs = []
        for quad in quadruples:
            cols = [_linear_part(bp, d, n, quad) for bp in basis]
            const = _known_part(levels, d, n, quad, nvars, maxdeg)
            keys = set(const.terms)
            for p in cols:
                keys |= set(p.terms)
            for key in sorted(keys):
                row = [p.terms.get(key, ZERO) for p in cols]
                r = -const.terms.get(key, ZERO)
                if any(row) or r:
                    rows.append(row)
                    rhs.append(r)
        if d == 1:
            seed = tuple([0] * (n - 2) + [2])
            row = [ONE if m == seed else ZERO for m in unknowns]
            rows.append(row)
            rhs.append(ONE)
        values = solve_unique(rows, rhs)
        level_poly = TPoly.zero(nvars, maxdeg)
        for m, bp, v in zip(unknowns, basis, values):
            entries[(d, m)] = v
            if v:
                level_poly = level_poly.add(bp.scale(v))
        levels[d] = level_poly
    return GWTable(n, d_max, entries)


def kontsevich_cp2(d_max):
    """Closed-form planar recursion, an independent cross-check for n = 2."""
    ns = {}
    if d_max >= 1:
        ns[1] = ONE
    for d in range(2, d_max + 1):
        total = ZERO
        for d1 in range(1, d):
            d2 = d - d1
            total = total + ns[d1] * ns[d2] * (
                Q(d1 * d1 * d2 * d2 * math.comb(3 * d - 4, 3 * d1 - 2))
                - Q(d1 ** 3 * d2 * math.comb(3 * d - 4, 3 * d1 - 1))
            )
        ns[d] = total
    return GWTable(2, d_max, {(d, (3 * d - 1,)): v for d, v in ns.items()})


def oracle_potential(table, maxdeg):
    """Assemble the potential the table predicts, truncated at maxdeg.

    The degree-d slice contributes d^m1 / m1! per extra unit-class insertion;
    terms of total degree below three are gauge and never materialize.
    """
    n = table.n
    nvars = n + 1
    terms = classical_cubic(n, maxdeg)
    for (d, m), val in sorted(table.entries.items()):
        if not val:
            continue
        base = sum(m)
        denom = ONE
        for mk in m:
            denom = denom * factorial(mk)
        for m1 in range(max(0, 3 - base), maxdeg - base + 1):
            coeff = val * Q(d ** m1) / (factorial(m1) * denom)
            exps = [0, m1] + list(m)
            terms = terms.add(TPoly.monomial(exps, coeff, nvars, maxdeg))
    return Potential(n, terms)


def compare(phi_a, phi_b, name="oracle-compare"):
    """Coefficientwise equality of two potentials (gauge already dropped)."""
    pa = phi_a.phi if isinstance(phi_a, Potential) else phi_a
    pb = phi_b.phi if isinstance(phi_b, Potential) else phi_b
    diff = pa.sub(pb)
    if diff.is_zero():
        return check(name, True, compared_terms=len(pa.terms))
    exps, _ = next(iter(diff.iter_terms()))
    return check(name, False, witness=poly_witness(exps, pa.coeff(exps), pb.coeff(exps)))
