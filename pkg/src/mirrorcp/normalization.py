"""Splitting against the opposite subspace and the normalized period solve.

The grading rule: slot (k, j) belongs to the opposite part (S0) iff j <= k-1,
and to the complement (T) iff j >= k. The normalized period is the unique
combination sum u_(j,i)(t) * hbar^i * theta_j whose T-part equals the T-part
of the base period; it is found degree by degree in t, each step one exact
linear solve against the constant (t=0) operator, whose invertibility is what
transversality_check certifies.
"""

from . import _kernel
from ._coeff import ONE, Q, ZERO
from .linalg import invert_matrix, rank_profile
from .reports import check, slot_witness
from .series import (
    FIELD_BITS,
    CoordMap,
    HVec,
    SubstitutionTable,
    TPoly,
    WindowOverflowError,
    invert_coord_map,
    substitute,
)


class S0Grading:
    """Classifier for the opposite-subspace splitting at fixed n."""

    def __init__(self, n):
        self.n = n

    @staticmethod
    def is_opposite(k, j):
        return j <= k - 1

    @staticmethod
    def classify(k, j):
        return "S0" if j <= k - 1 else "T"


def project(v, part):
    """Keep only the S0 slots (j <= k-1) or only the T slots (j >= k)."""
    if part not in ("S0", "T"):
        raise ValueError("part must be 'S0' or 'T'")
    keep_opposite = part == "S0"
    out = {}
    for (k, j), poly in v.coeffs.items():
        if (j <= k - 1) == keep_opposite:
            out[(k, j)] = poly
    return HVec(v.n, v.nvars, v.maxdeg, v.window, out, v.exact_min, v.dropped)


def _generators_and_slots(n, m_cap):
    gens = [(j, i) for j in range(n + 1) for i in range(m_cap - j + 1)]
    slots = [(k, m) for k in range(n + 1) for m in range(k, m_cap + 1)]
    return gens, slots


def transversality_check(theta, m_cap=None):
    """Certify that the t=0 generators cover the T-part uniquely.

    Builds the constant matrix pairing generators hbar^i * theta_j(0)
    (j <= n, i+j <= m_cap) against T-slots (k, m), k <= m <= m_cap, and
    reports its rank profile. m_cap defaults to window_top - n. The raw
    matrix and index lists ride along under "_"-keys for reuse by the solve.
    """
    n = theta.n
    if m_cap is None:
        m_cap = theta.jmax - n
    if m_cap < n:
        raise WindowOverflowError(
            "window top %d leaves no room above the column range; raise the top" % theta.jmax
        )
    for j in range(n + 1):
        col = theta.column(j)
        if col.exact_min > -m_cap:
            raise WindowOverflowError(
                "window depth insufficient: column %d exact only above level %d, "
                "solve reads down to %d; rerun with a deeper bottom" % (j, col.exact_min, -m_cap)
            )
    gens, slots = _generators_and_slots(n, m_cap)
    constants = [theta.column(j).at_t_zero() for j in range(n + 1)]
    rows = []
    for (k, m) in slots:
        row = []
        for (j, i) in gens:
            row.append(constants[j].get((k, m - i), ZERO))
        rows.append(row)
    rank, pivots = rank_profile(rows)
    size = len(slots)
    ok = rank == size == len(gens)
    # leading entries: generator (j, i) tops out at slot (j, i+j) with (n+1)^j
    leading = [[j, i, (n + 1) ** j] for (j, i) in gens[: min(8, len(gens))]]
    rep = check(
        "transversality",
        ok,
        witness=None if ok else {"rank": rank, "size": size},
        size=size,
        rank=rank,
        m_cap=m_cap,
        leading=leading,
    )
    rep["_matrix"] = rows
    rep["_generators"] = gens
    rep["_slots"] = slots
    return rep


class NormalizedPeriod:
    """Solve output: the normalized period and everything read off it."""

    def __init__(self, psi, u, xi, diagnostics, reports=None):
        self.psi = psi
        self.u = u
        self.xi = xi  # base period embedded in the solve window (constant part)
        self.diagnostics = diagnostics
        self.reports = [] if reports is None else reports
        self.y_of_t = None
        self.t_of_y = None


def solve_normalized_period(theta, m_cap=None):
    """Find u with the T-part of (sum u_(j,i) hbar^i theta_j - base) zero.

    Degree-by-degree: the degree-d defect is a T-slot vector of homogeneous
    polynomials, and the correction is minus the inverted t=0 matrix applied
    to it. Assembly multiplies each column by its correction first and shifts
    after, which keeps all intermediates inside the window.
    """
    tv = transversality_check(theta, m_cap)
    if tv["status"] != "pass":
        raise RuntimeError("transversality failed: %s" % tv.get("witness"))
    gens = tv["_generators"]
    slots = tv["_slots"]
    minv = invert_matrix(tv["_matrix"])

    n, t_degree = theta.n, theta.t_degree
    nvars = n + 1
    jmin, jmax = theta.window
    shift = FIELD_BITS * nvars

    col0 = theta.column(0)
    psi_raw = {slot: dict(poly.terms) for slot, poly in col0.coeffs.items()}
    exact_min = col0.exact_min
    dropped = col0.dropped

    u = {g: TPoly.zero(nvars, t_degree) for g in gens}
    u[(0, 0)] = TPoly.constant(ONE, nvars, t_degree)

    for d in range(1, t_degree + 1):
        defect = []
        any_defect = False
        for slot in slots:
            raw = psi_raw.get(slot)
            part = None
            if raw:
                part = {key: v for key, v in raw.items() if (key >> shift) == d and v}
                if part:
                    any_defect = True
                else:
                    part = None
            defect.append(part)
        if not any_defect:
            continue
        for gi, g in enumerate(gens):
            row = minv[gi]
            acc = {}
            for si, part in enumerate(defect):
                if part is None:
                    continue
                c = row[si]
                if c:
                    _kernel.scale_acc(acc, part, -c)
            _kernel.prune(acc)
            if not acc:
                continue
            correction = TPoly(nvars, t_degree, acc)
            u[g] = u[g].add(correction)
            j, i = g
            col = theta.column(j)
            for (k, jj), poly in col.coeffs.items():
                target = jj + i
                if target < jmin:
                    dropped += 1
                    continue
                if target > jmax:
                    # reachable only if the product survives truncation,
                    # which the support bounds rule out; keep the contract
                    probe = {}
                    _kernel.mul_acc(probe, poly.terms, correction.terms, shift, t_degree)
                    _kernel.prune(probe)
                    if probe:
                        raise WindowOverflowError(
                            "normalization write at level %d above top %d" % (target, jmax)
                        )
                    continue
                slot_acc = psi_raw.setdefault((k, target), {})
                _kernel.mul_acc(slot_acc, poly.terms, correction.terms, shift, t_degree)
            exact_min = max(exact_min, col.exact_min + i)

    coeffs = {}
    for slot, raw in psi_raw.items():
        _kernel.prune(raw)
        if raw:
            coeffs[slot] = TPoly(nvars, t_degree, raw)
    psi = HVec(n, nvars, t_degree, (jmin, jmax), coeffs, exact_min, dropped)

    xi = HVec(n, nvars, t_degree, (jmin, jmax))
    for slot, c in col0.at_t_zero().items():
        xi.coeffs[slot] = TPoly.constant(c, nvars, t_degree)
    xi.exact_min = col0.exact_min
    residual = normalization_check(psi, xi)
    if residual["status"] != "pass":
        raise RuntimeError("normalization defect nonzero: %s" % residual["witness"])

    diagnostics = {
        "window": [jmin, jmax],
        "m_cap": tv["detail"]["m_cap"],
        "solver_size": len(slots),
        "exact_min": exact_min,
        "dropped": dropped,
    }
    public_tv = {k: v for k, v in tv.items() if not k.startswith("_")}
    return NormalizedPeriod(psi, u, xi, diagnostics, reports=[public_tv, residual])


def normalization_check(psi, xi):
    """T-part of (psi - base period) must vanish at every stored slot."""
    diff = project(psi.sub(xi), "T")
    for slot, poly in sorted(diff.coeffs.items()):
        exps, c = next(iter(poly.iter_terms()))
        return check("normalization", False, witness=slot_witness(slot, exps, c, ZERO))
    return check("normalization", True)


def extract_mirror_coordinates(np_):
    """Read the mirror coordinates off the opposite-part leading slots.

    Component k is the slot (k, k-1) polynomial of (psi - base); its linear
    part is diag((n+1)^k) times a unipotent correction, so the map inverts.
    Fills np_.y_of_t and np_.t_of_y, returns the forward map.
    """
    psi, xi = np_.psi, np_.xi
    n = psi.n
    diff = psi.sub(xi)
    images = [diff.coeff(k, k - 1) for k in range(n + 1)]
    y_map = CoordMap(images)
    np_.y_of_t = y_map
    np_.t_of_y = invert_coord_map(y_map)
    return y_map


def reparametrize(np_):
    """Substitute t = t(y) into the normalized period.

    In the new coordinates the slot (k, k-1) polynomial of (psi - base) is
    exactly the k-th coordinate monomial (asserted); that linearity is what
    makes the new coordinates flat.
    """
    if np_.t_of_y is None:
        extract_mirror_coordinates(np_)
    psi = np_.psi
    table = SubstitutionTable(np_.t_of_y.images)
    out = {}
    for slot, poly in psi.coeffs.items():
        sub = substitute(poly, table)
        if not sub.is_zero():
            out[slot] = sub
    psi_y = HVec(psi.n, psi.nvars, psi.maxdeg, psi.window, out, psi.exact_min, psi.dropped)
    n = psi.n
    diff = psi_y.sub(np_.xi)
    for k in range(n + 1):
        expected = TPoly.variable(k, psi.nvars, psi.maxdeg)
        if diff.coeff(k, k - 1) != expected:
            raise AssertionError(
                "flat-coordinate slot (%d,%d) is not the coordinate monomial" % (k, k - 1)
            )
    return psi_y
