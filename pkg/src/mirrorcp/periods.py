"""Period series of the oscillating-integral family and their operators.

The base period is stored through its hbar/nilpotent coefficients only (see
series.HVec); the multivalued prefactor is implicit, so every operator below
is the prefactor-conjugated form acting directly on stored coefficients:

- multiplication by the superpotential:    (k,j) c -> (n+1)c at (k+1,j+1),
                                            and -j*c at (k,j+1)
- hbar derivative:                          (k,j) c -> j*c at (k,j-1),
                                            and -(n+1)c at (k+1,j-1)
- the order-lowering operator whose (n+1)-st power regrades the base series
  by one full hbar block (pf_operator):     (k,j) c -> c at (k+1,j),
                                            and -(j/(n+1))c at (k,j)

The deformation family enters through the s-coefficients (exponential of the
deformation divided into powers of the superpotential) and the theta columns,
which span the moving subspace.
"""

from . import _kernel
from ._coeff import ONE, Q, ZERO
from .reports import check, slot_witness
from .series import (
    AlphaPoly,
    HVec,
    TPoly,
    TruncationMismatchError,
    WindowOverflowError,
    alpha_inverse,
    alpha_mul,
    alpha_power,
)


def default_depth(t_degree):
    return t_degree + 2


def default_window(n, t_degree, depth=None):
    """Window covering theta-column growth plus slack, per the sizing rule."""
    if depth is None:
        depth = default_depth(t_degree)
    jmax = 2 * n + t_degree * (n - 1) + 2
    jmin = -((n + 1) * depth + 2)
    return (jmin, jmax)


class PeriodSeries(HVec):
    """HVec whose coefficients carry no deformation-variable dependence."""


def xi_series(n, depth, nvars=None, maxdeg=0, window=None):
    """Base period series, unit-normalized.

    Term d lives at hbar level -(n+1)d with nilpotent coefficient
    inverse(prod_{i=1..d} (a+i))^(n+1); the d=0 term is 1 at (0,0). Stored
    terms run d = 0..depth, so levels at or above -(n+1)(depth+1)+1 are
    complete (exact_min records this, clipped to the window bottom).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if nvars is None:
        nvars = n + 1
    if window is None:
        window = (-((n + 1) * depth + 2), 1)
    jmin, jmax = window
    if jmin > -(n + 1) * depth:
        raise WindowOverflowError(
            "window too shallow: bottom %d cannot hold %d instanton terms; "
            "lower the bottom or reduce the depth" % (jmin, depth)
        )
    out = PeriodSeries(n, nvars, maxdeg, window)
    rising = AlphaPoly.unit(n)
    for d in range(depth + 1):
        if d == 0:
            coeffs = AlphaPoly.unit(n)
        else:
            rising = alpha_mul(rising, AlphaPoly(n, [Q(d), ONE] + [ZERO] * (n - 1)))
            coeffs = alpha_power(alpha_inverse(rising), n + 1)
        for k, c in enumerate(coeffs.coeffs):
            if c:
                out.set_entry(k, -(n + 1) * d, TPoly.constant(c, nvars, maxdeg))
    out.exact_min = max(jmin, -(n + 1) * (depth + 1) + 1)
    return out


def mult_by_f(v, n):
    """Multiply a period vector by the superpotential (stored-frame rule)."""
    if v.n != n:
        raise TruncationMismatchError("vector has n=%d, expected %d" % (v.n, n))
    out = HVec.zero(n, v.nvars, v.maxdeg, v.window)
    out.dropped = v.dropped
    acc = {}
    for (k, j), poly in v.coeffs.items():
        if j + 1 > v.jmax:
            raise WindowOverflowError(
                "superpotential multiplication needs a spare top slot "
                "(level %d, top %d)" % (j + 1, v.jmax)
            )
        if k + 1 <= n:
            cur = acc.get((k + 1, j + 1))
            term = poly.scale(n + 1)
            acc[(k + 1, j + 1)] = term if cur is None else cur.add(term)
        if j != 0:
            cur = acc.get((k, j + 1))
            term = poly.scale(-j)
            acc[(k, j + 1)] = term if cur is None else cur.add(term)
    for slot, poly in acc.items():
        if not poly.is_zero():
            out.coeffs[slot] = poly
    out.exact_min = max(v.jmin, v.exact_min + 1)
    return out


def f_periods(n, l_max, depth, nvars=None, maxdeg=0, window=None):
    """Powers of the superpotential paired against the base period.

    Returns [phi^0, ..., phi^l_max], phi^0 the base series, each next one a
    superpotential multiplication. phi^l tops out at hbar level l with leading
    nilpotent term (n+1)^l at (l, l) while l <= n.
    """
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    if nvars is None:
        nvars = n + 1
    if window is None:
        window = (-((n + 1) * depth + 2), l_max + 1)
    out = [xi_series(n, depth, nvars, maxdeg, window)]
    for _ in range(l_max):
        out.append(mult_by_f(out[-1], n))
    return out


def s_coefficients(n, t_degree, l_max, nvars=None):
    """Division of the deformation exponential into superpotential powers.

    Returns a map l -> {negative hbar degree -r: polynomial}, where the level
    -r part of s^l is (1/r!) times the sum over ordered length-r variable
    choices (m_1..m_r), each in 0..n, with m_1+...+m_r = l. Homogeneous of
    t-degree r, so r <= t_degree and effectively l <= t_degree*n.
    """
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    if nvars is None:
        nvars = n + 1
    variables = [TPoly.variable(m, nvars, t_degree) for m in range(n + 1)]
    # h[r][l]: ordered-sum polynomial before the 1/r! weight
    prev = {0: TPoly.constant(ONE, nvars, t_degree)}
    out = {l: {} for l in range(l_max + 1)}
    out[0][0] = TPoly.constant(ONE, nvars, t_degree)
    rfact = 1
    for r in range(1, t_degree + 1):
        rfact *= r
        cur = {}
        for l_prev, h in prev.items():
            for m in range(n + 1):
                l = l_prev + m
                if l > l_max:
                    break
                term = h.mul(variables[m])
                got = cur.get(l)
                cur[l] = term if got is None else got.add(term)
        weight = Q(1, rfact)
        for l, h in cur.items():
            if not h.is_zero():
                out[l][-r] = h.scale(weight)
        prev = cur
    return out


class ThetaFamily:
    """Columns spanning the moving subspace, plus the data that built them."""

    def __init__(self, n, t_degree, window, j_max, depth, columns):
        self.n = n
        self.t_degree = t_degree
        self.jmin, self.jmax = window
        self.j_max = j_max
        self.depth = depth
        self.columns = columns

    @property
    def window(self):
        return (self.jmin, self.jmax)

    def column(self, j):
        return self.columns[j]


def theta_columns(n, t_degree, window=None, j_max=None, depth=None):
    """Build columns theta_j = sum_m s^m * phi^(j+m), j = 0..j_max.

    Column j at t=0 is phi^j; the t-degree-e part lives at hbar levels
    <= j + e(n-1), which the default window tops with slack. Products are
    accumulated directly into the column window, so the tall intermediate
    phi^l vectors never need to fit in it.
    """
    if j_max is None:
        j_max = 2 * n
    if j_max < n:
        raise ValueError("j_max must be >= n")
    if depth is None:
        depth = default_depth(t_degree)
    if window is None:
        window = default_window(n, t_degree, depth)
    jmin, jmax = window
    nvars = n + 1
    l_top = j_max + t_degree * n
    phi = f_periods(n, l_top, depth, nvars=nvars, maxdeg=t_degree)
    s = s_coefficients(n, t_degree, t_degree * n, nvars=nvars)

    columns = []
    for j in range(j_max + 1):
        acc = {}  # slot -> raw term dict
        dropped = 0
        for m in range(t_degree * n + 1):
            levels = s.get(m)
            if not levels:
                continue
            source = phi[j + m]
            for neg_r, h in levels.items():
                for (k, jj), poly in source.coeffs.items():
                    target = jj + neg_r
                    if target > jmax:
                        raise WindowOverflowError(
                            "theta column %d needs hbar top >= %d" % (j, target)
                        )
                    if target < jmin:
                        dropped += 1
                        continue
                    c = poly.terms.get(0, ZERO)
                    if not c:
                        continue
                    slot = acc.setdefault((k, target), {})
                    _kernel.scale_acc(slot, h.terms, c)
        col = HVec.zero(n, nvars, t_degree, window)
        for slot, terms in acc.items():
            _kernel.prune(terms)
            if terms:
                col.coeffs[slot] = TPoly(nvars, t_degree, terms)
        xi_floor = max(jmin, -(n + 1) * (depth + 1) + 1)
        col.exact_min = max(jmin, xi_floor + j + t_degree * (n - 1))
        col.dropped = dropped
        columns.append(col)
    return ThetaFamily(n, t_degree, window, j_max, depth, columns)


def hbar_derivative(v, n):
    """Stored-frame hbar derivative; bottom truncation is recorded."""
    if v.n != n:
        raise TruncationMismatchError("vector has n=%d, expected %d" % (v.n, n))
    out = HVec.zero(n, v.nvars, v.maxdeg, v.window)
    acc = {}
    dropped = v.dropped
    for (k, j), poly in v.coeffs.items():
        if j - 1 < v.jmin:
            dropped += 1
        else:
            if j != 0:
                cur = acc.get((k, j - 1))
                term = poly.scale(j)
                acc[(k, j - 1)] = term if cur is None else cur.add(term)
            if k + 1 <= n:
                cur = acc.get((k + 1, j - 1))
                term = poly.scale(-(n + 1))
                acc[(k + 1, j - 1)] = term if cur is None else cur.add(term)
    for slot, poly in acc.items():
        if not poly.is_zero():
            out.coeffs[slot] = poly
    out.exact_min = max(v.jmin, v.exact_min - 1)
    out.dropped = dropped
    return out


def pf_operator(v, n):
    """Order-lowering operator: (k,j) c -> c at (k+1,j), -(j/(n+1))c at (k,j)."""
    out = HVec.zero(n, v.nvars, v.maxdeg, v.window)
    out.exact_min = v.exact_min
    out.dropped = v.dropped
    acc = {}
    for (k, j), poly in v.coeffs.items():
        if j != 0:
            cur = acc.get((k, j))
            term = poly.scale(Q(-j, n + 1))
            acc[(k, j)] = term if cur is None else cur.add(term)
        if k + 1 <= n:
            cur = acc.get((k + 1, j))
            acc[(k + 1, j)] = poly if cur is None else cur.add(poly)
    for slot, poly in acc.items():
        if not poly.is_zero():
            out.coeffs[slot] = poly
    return out


def pf_check(xi, n):
    """(n+1)-st power of the order-lowering operator regrades the base series.

    Applies the operator n+1 times to xi and compares against xi shifted down
    one full hbar block, exactly, down to the window bottom plus (n+1).
    """
    lhs = xi
    for _ in range(n + 1):
        lhs = pf_operator(lhs, n)
    rhs = xi.shift_hbar(-(n + 1))
    floor = max(xi.exact_min, xi.jmin + n + 1)
    witness = lhs.eq_witness(rhs, jfloor=floor)
    return check(
        "pf",
        witness is None,
        witness=None if witness is None else slot_witness(*witness),
        floor=floor,
    )


def griffiths_check(family):
    """Each deformation derivative of a column is the next column, one hbar
    level down: d theta_j / dt^a = shift(-1) theta_(j+a), checked exactly up
    to t-degree t_degree-1 for all j+a <= j_max."""
    n = family.n
    cap = family.t_degree - 1
    for j in range(family.j_max + 1):
        col = family.column(j)
        for a in range(n + 1):
            if j + a > family.j_max:
                continue
            lhs = col.t_partial(a)
            rhs = family.column(j + a).shift_hbar(-1)
            witness = lhs.eq_witness(rhs, tcap=cap)
            if witness is not None:
                return check(
                    "griffiths",
                    False,
                    witness=dict(slot_witness(*witness), column=j, direction=a),
                    cap=cap,
                )
    return check("griffiths", True, cap=cap)
