"""Flat structure constants, the potential, and its verification battery.

All data here lives in the flat coordinates y^0..y^n produced by the
normalization step. Degree caps follow from what is complete after
truncation: the period is complete through t-degree D, each coordinate
derivative costs one degree, and the potential gains three back when the
lowered tensor is integrated.
"""

from ._coeff import ONE, Q, ZERO, factorial, rat_str
from .gw import GWTable, Potential, SigmaTable, classical_cubic, degree_for
from .normalization import (
    extract_mirror_coordinates,
    project,
    reparametrize,
    solve_normalized_period,
)
from .periods import ThetaFamily, hbar_derivative
from .reports import check, poly_witness, slot_witness
from .series import HVec, TPoly


def euler_field(n, nvars, maxdeg):
    """Grading field components: (a-1) y^a, with an extra -(n+1) along a=1."""
    comps = []
    for a in range(n + 1):
        if a == 1:
            comps.append(TPoly.constant(Q(-(n + 1)), nvars, maxdeg))
        else:
            comps.append(TPoly.variable(a, nvars, maxdeg).scale(Q(a - 1)))
    return comps


def _euler_apply(comps, poly):
    out = TPoly.zero(poly.nvars, poly.maxdeg)
    for k, ek in enumerate(comps):
        if ek.is_zero():
            continue
        d = poly.partial(k)
        if not d.is_zero():
            out = out.add(d.mul(ek))
    return out


class ConnectionData:
    """Structure constants A[(a, b, c)]: the coefficient of direction c in
    the product of directions a and b. Entries are truncated at tcap, the
    degree through which two coordinate derivatives of the period are
    complete. The pairing is the anti-diagonal delta and direction 0 is the
    unit."""

    def __init__(self, n, entries, tcap, reports):
        self.n = n
        self.A = entries
        self.tcap = tcap
        self.reports = reports
        self.identity_index = 0

    def entry(self, a, b, c):
        return self.A[(a, b, c)]

    def metric(self, a, b):
        return ONE if a + b == self.n else ZERO


def _truncate_hvec(v, cap):
    out = {}
    for slot, poly in v.coeffs.items():
        t = poly.truncated(cap)
        if not t.is_zero():
            out[slot] = t
    return HVec(v.n, v.nvars, v.maxdeg, v.window, out, v.exact_min, v.dropped)


def connection_from_period(psi_y):
    """Read the structure constants off the derivatives of the period.

    For each pair, one hbar shift of the second derivative must land back in
    the span of first derivatives (checked two ways: its T-part vanishes, and
    subtracting the coefficient combination leaves nothing through tcap).
    """
    n = psi_y.n
    nvars, maxdeg = psi_y.nvars, psi_y.maxdeg
    tcap = maxdeg - 2
    partials = [psi_y.t_partial(a) for a in range(n + 1)]
    partials_t = [_truncate_hvec(p, tcap) for p in partials]
    zero = HVec.zero(n, nvars, maxdeg, psi_y.window)
    entries = {}
    image_wit = None
    residual_wit = None
    for a in range(n + 1):
        for b in range(a, n + 1):
            v = partials[a].t_partial(b).shift_hbar(1)
            if image_wit is None:
                wit = project(v, "T").eq_witness(zero, tcap=tcap)
                if wit is not None:
                    image_wit = dict(slot_witness(*wit), pair=[a, b])
            rhs = zero
            for c in range(n + 1):
                poly = v.coeff(c, c - 1).truncated(tcap)
                entries[(a, b, c)] = poly
                entries[(b, a, c)] = poly
                if not poly.is_zero():
                    rhs = rhs.add(partials_t[c].scale(poly))
            if residual_wit is None:
                wit = v.eq_witness(rhs, tcap=tcap)
                if wit is not None:
                    residual_wit = dict(slot_witness(*wit), pair=[a, b])
    reports = [
        check("connection-image", image_wit is None, witness=image_wit, cap=tcap),
        check("connection-residual", residual_wit is None, witness=residual_wit, cap=tcap),
    ]
    return ConnectionData(n, entries, tcap, reports)


def verify_flatness(conn):
    """Coordinate curl and commutator of the structure matrices both vanish."""
    n = conn.n
    curl_cap = conn.tcap - 1
    comm_cap = conn.tcap
    curl_wit = None
    comm_wit = None
    for a in range(n + 1):
        for b in range(a + 1, n + 1):
            for c in range(n + 1):
                for dd in range(n + 1):
                    if curl_wit is None:
                        lhs = conn.A[(b, dd, c)].partial(a)
                        rhs = conn.A[(a, dd, c)].partial(b)
                        if not lhs.eq_up_to(rhs, curl_cap):
                            diff = lhs.sub(rhs).truncated(curl_cap)
                            exps, _ = next(iter(diff.iter_terms()))
                            curl_wit = dict(
                                poly_witness(exps, lhs.coeff(exps), rhs.coeff(exps)),
                                indices=[a, b, c, dd],
                            )
                    if comm_wit is None:
                        acc = TPoly.zero(conn.A[(0, 0, 0)].nvars, conn.A[(0, 0, 0)].maxdeg)
                        for e in range(n + 1):
                            acc = acc.add(conn.A[(a, e, c)].mul(conn.A[(b, dd, e)]))
                            acc = acc.sub(conn.A[(b, e, c)].mul(conn.A[(a, dd, e)]))
                        if not acc.truncated(comm_cap).is_zero():
                            exps, v = next(iter(acc.truncated(comm_cap).iter_terms()))
                            comm_wit = dict(
                                poly_witness(exps, v, ZERO), indices=[a, b, c, dd]
                            )
    return [
        check("flatness-curl", curl_wit is None, witness=curl_wit, cap=curl_cap),
        check("flatness-commutator", comm_wit is None, witness=comm_wit, cap=comm_cap),
    ]


def lower_index(conn):
    """Lower the output index with the anti-diagonal pairing and certify full
    symmetry of the resulting 3-tensor."""
    n = conn.n
    tensor = {}
    for a in range(n + 1):
        for b in range(n + 1):
            for c in range(n + 1):
                tensor[(a, b, c)] = conn.A[(a, b, n - c)]
    wit = None
    for a in range(n + 1):
        for b in range(n + 1):
            for c in range(n + 1):
                if wit is not None:
                    break
                for perm in ((b, a, c), (a, c, b)):
                    if not tensor[(a, b, c)].eq_up_to(tensor[perm], conn.tcap):
                        diff = tensor[(a, b, c)].sub(tensor[perm]).truncated(conn.tcap)
                        exps, _ = next(iter(diff.iter_terms()))
                        wit = dict(
                            poly_witness(
                                exps,
                                tensor[(a, b, c)].coeff(exps),
                                tensor[perm].coeff(exps),
                            ),
                            indices=[a, b, c],
                        )
                        break
    return tensor, check("tensor-symmetry", wit is None, witness=wit, cap=conn.tcap)


def potential_from_tensor(tensor, n, tcap):
    """Integrate the symmetric 3-tensor three times.

    Each candidate monomial is integrated along its three lowest coordinate
    directions (multiplicity-corrected), then every third derivative is
    re-verified against the tensor. Degrees below three never occur, so the
    additive gauge is fixed by construction.
    """
    nvars = n + 1
    maxdeg = tcap + 3
    retagged = {
        key: TPoly(nvars, maxdeg, dict(poly.truncated(tcap).terms))
        for key, poly in tensor.items()
    }
    candidates = set()
    for (a, b, c), poly in retagged.items():
        if not (a <= b <= c):
            continue
        for exps, _ in poly.iter_terms():
            nu = list(exps)
            nu[a] += 1
            nu[b] += 1
            nu[c] += 1
            candidates.add(tuple(nu))
    phi = TPoly.zero(nvars, maxdeg)
    for nu in sorted(candidates):
        support = [i for i, e in enumerate(nu) for _ in range(e)]
        a, b, c = support[0], support[1], support[2]
        mu = list(nu)
        mu[a] -= 1
        mu[b] -= 1
        mu[c] -= 1
        denom = nu[a] * (nu[b] - (1 if b == a else 0)) * (
            nu[c] - (1 if c == a else 0) - (1 if c == b else 0)
        )
        val = retagged[(a, b, c)].coeff(mu) / Q(denom)
        if val:
            phi = phi.add(TPoly.monomial(nu, val, nvars, maxdeg))
    wit = None
    for a in range(n + 1):
        for b in range(a, n + 1):
            for c in range(b, n + 1):
                third = phi.partial(a).partial(b).partial(c)
                want = retagged[(a, b, c)]
                if not third.eq_up_to(want, tcap):
                    diff = third.sub(want).truncated(tcap)
                    exps, _ = next(iter(diff.iter_terms()))
                    wit = dict(
                        poly_witness(exps, third.coeff(exps), want.coeff(exps)),
                        indices=[a, b, c],
                    )
                    break
    report = check("potential-integration", wit is None, witness=wit, cap=tcap)
    return Potential(n, phi), report


def identity_check(psi_y):
    """The derivative along y^0 is one downward hbar shift of the period."""
    cap = psi_y.maxdeg - 1
    wit = psi_y.shift_hbar(-1).eq_witness(psi_y.t_partial(0), tcap=cap)
    return check(
        "identity-direction",
        wit is None,
        witness=None if wit is None else slot_witness(*wit),
        cap=cap,
    )


def euler_checks(psi_y, conn, potential=None):
    """Grading checks: the hbar derivative of the period agrees with the
    grading field applied to it, structure constants are homogeneous of
    weight c-a-b, the pairing has pure weight 2-n, and the non-classical
    potential part has weight n-3."""
    n = psi_y.n
    reports = []

    comps = euler_field(n, psi_y.nvars, psi_y.maxdeg)
    lhs = hbar_derivative(psi_y, n)
    acc = HVec.zero(n, psi_y.nvars, psi_y.maxdeg, psi_y.window)
    for a in range(n + 1):
        acc = acc.add(psi_y.t_partial(a).scale(comps[a]))
    rhs = acc.shift_hbar(-1)
    cap = psi_y.maxdeg - 1
    wit = lhs.eq_witness(rhs, tcap=cap)
    reports.append(
        check(
            "euler-period",
            wit is None,
            witness=None if wit is None else slot_witness(*wit),
            cap=cap,
        )
    )

    gcap = conn.tcap - 1
    gwit = None
    for (a, b, c), poly in sorted(conn.A.items()):
        if gwit is not None:
            break
        got = _euler_apply(comps, poly)
        want = poly.scale(Q(c - a - b))
        if not got.eq_up_to(want, gcap):
            diff = got.sub(want).truncated(gcap)
            exps, _ = next(iter(diff.iter_terms()))
            gwit = dict(
                poly_witness(exps, got.coeff(exps), want.coeff(exps)), indices=[a, b, c]
            )
    reports.append(check("euler-connection", gwit is None, witness=gwit, cap=gcap))

    metric_ok = all(
        (1 - a) + (1 - b) == 2 - n
        for a in range(n + 1)
        for b in range(n + 1)
        if a + b == n
    )
    reports.append(check("metric-grading", metric_ok, weight=2 - n))

    if potential is not None:
        # degrees <= 2 are gauge, and the constant -(n+1) d/dy^1 component
        # feeds degree 3 into them, so the grading starts at degree 3
        phi = potential.phi
        pcomps = euler_field(n, phi.nvars, phi.maxdeg)
        inst = phi.sub(classical_cubic(n, phi.maxdeg))
        got = _euler_apply(pcomps, inst)
        want = inst.scale(Q(n - 3))
        pcap = phi.maxdeg - 1
        pwit = None
        for exps, _ in got.sub(want).iter_terms():
            deg = sum(exps)
            if 3 <= deg <= pcap:
                pwit = poly_witness(exps, got.coeff(exps), want.coeff(exps))
                break
        reports.append(check("euler-potential", pwit is None, witness=pwit, cap=pcap))
    return reports


def wdvv_check(potential, name="wdvv"):
    """Associativity of the induced product, as the quartic identity on third
    derivatives contracted through the anti-diagonal pairing."""
    phi = potential.phi if isinstance(potential, Potential) else potential
    nvars = phi.nvars
    n = nvars - 1
    cap = phi.maxdeg - 4
    third = {}
    for a in range(n + 1):
        for b in range(a, n + 1):
            pa = phi.partial(a).partial(b)
            for c in range(b, n + 1):
                third[(a, b, c)] = pa.partial(c)

    def f(a, b, c):
        return third[tuple(sorted((a, b, c)))]

    wit = None
    for a in range(n + 1):
        for c in range(n + 1):
            for b in range(n + 1):
                for dd in range(b + 1, n + 1):
                    if wit is not None:
                        break
                    lhs = TPoly.zero(nvars, phi.maxdeg)
                    rhs = TPoly.zero(nvars, phi.maxdeg)
                    for e in range(n + 1):
                        lhs = lhs.add(f(a, b, e).mul(f(n - e, c, dd)))
                        rhs = rhs.add(f(a, dd, e).mul(f(n - e, c, b)))
                    if not lhs.eq_up_to(rhs, cap):
                        diff = lhs.sub(rhs).truncated(cap)
                        exps, _ = next(iter(diff.iter_terms()))
                        wit = dict(
                            poly_witness(exps, lhs.coeff(exps), rhs.coeff(exps)),
                            indices=[a, b, c, dd],
                        )
    return check(name, wit is None, witness=wit, cap=cap)


def sigma_extract(potential):
    """Split off the classical cubic and normalize the rest into counts.

    Every surviving monomial must avoid y^0, sit at the unique curve degree
    its multidegree allows, and depend on y^1 only through the exponential of
    degree times y^1. The normalized table reads each count at the smallest
    unit-class exponent above the gauge cutoff.
    """
    phi = potential.phi
    n = potential.n
    maxdeg = phi.maxdeg
    inst = phi.sub(classical_cubic(n, maxdeg))
    sigma_entries = {}
    groups = {}
    support_wit = None
    for exps, coeff in inst.iter_terms():
        if exps[0] != 0:
            if support_wit is None:
                support_wit = dict(poly_witness(exps, coeff, ZERO), reason="unit-variable")
            continue
        m1 = exps[1]
        m = tuple(exps[2:])
        d = degree_for(n, m)
        mult = factorial(m1)
        for mk in m:
            mult = mult * factorial(mk)
        sigma_entries[(m1, m)] = coeff * mult
        if d is None:
            if support_wit is None:
                support_wit = dict(poly_witness(exps, coeff, ZERO), reason="degree")
            continue
        groups.setdefault(m, {})[m1] = coeff * mult
    reports = [check("sigma-support", support_wit is None, witness=support_wit)]

    gw_entries = {}
    exp_wit = None
    for m, col in sorted(groups.items()):
        d = degree_for(n, m)
        base = sum(m)
        m1_star = max(0, 3 - base)
        nval = col.get(m1_star)
        if nval is None:
            exp_wit = {"m": list(m), "m1": m1_star, "lhs": "0", "rhs": "nonzero"}
            break
        count = nval / Q(d ** m1_star)
        gw_entries[(d, m)] = count
        for m1 in range(m1_star, maxdeg - base + 1):
            want = count * Q(d ** m1)
            got = col.get(m1, ZERO)
            if got != want:
                exp_wit = {
                    "m": list(m),
                    "m1": m1,
                    "lhs": rat_str(got),
                    "rhs": rat_str(want),
                }
                break
        if exp_wit is not None:
            break
    reports.append(check("sigma-exponential", exp_wit is None, witness=exp_wit))
    d_max = max((d for (d, _) in gw_entries), default=0)
    return SigmaTable(n, sigma_entries), GWTable(n, d_max, gw_entries), reports


def frame_invariance_test(theta, c_alpha, baseline):
    """Rescaling every column by one unipotent unit c(alpha) must reproduce
    the flat coordinates, structure constants, and potential bit for bit."""
    if c_alpha.coeffs[0] != ONE:
        raise ValueError("frame unit must have constant term 1")
    cols = [col.scale_alpha(c_alpha) for col in theta.columns]
    fam = ThetaFamily(theta.n, theta.t_degree, theta.window, theta.j_max, theta.depth, cols)
    np_ = solve_normalized_period(fam)
    extract_mirror_coordinates(np_)
    psi_y = reparametrize(np_)
    conn = connection_from_period(psi_y)
    tensor, _ = lower_index(conn)
    pot, _ = potential_from_tensor(tensor, fam.n, conn.tcap)
    same_y = np_.y_of_t == baseline["y"]
    same_a = conn.A == baseline["A"]
    same_phi = pot.phi == baseline["phi"]
    return check(
        "frame-invariance",
        same_y and same_a and same_phi,
        coordinates=same_y,
        connection=same_a,
        potential=same_phi,
        unit=[rat_str(c) for c in c_alpha.coeffs],
    )
