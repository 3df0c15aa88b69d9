import pytest

from mirrorcp import (
    AlphaPoly,
    ConnectionData,
    Potential,
    Q,
    TPoly,
    euler_checks,
    frame_invariance_test,
    identity_check,
    lower_index,
    potential_from_tensor,
    sigma_extract,
    verify_flatness,
    wdvv_check,
)
from mirrorcp.reports import all_pass


def test_connection_entries_and_reports(small2_run):
    conn = small2_run.conn
    assert conn.tcap == 4
    keys = {(a, b, c) for a in range(3) for b in range(3) for c in range(3)}
    assert set(conn.A) == keys
    assert all(p.degree() <= conn.tcap for p in conn.A.values())
    assert all_pass(conn.reports)
    # the unit direction acts as the identity
    for b in range(3):
        for c in range(3):
            want = TPoly.constant(Q(1 if b == c else 0), 3, conn.A[(0, b, c)].maxdeg)
            assert conn.A[(0, b, c)] == want


def test_flatness_pass_and_corruption(small2_run):
    conn = small2_run.conn
    assert all_pass(verify_flatness(conn))
    bad = dict(conn.A)
    bump = TPoly.monomial((0, 1, 1), Q(1), 3, bad[(1, 2, 0)].maxdeg)
    bad[(1, 2, 0)] = bad[(1, 2, 0)].add(bump)
    reps = verify_flatness(ConnectionData(2, bad, conn.tcap, []))
    assert any(r["status"] == "fail" for r in reps)


def test_lowered_tensor_matches_connection(small2_run):
    conn = small2_run.conn
    tensor, rep = lower_index(conn)
    assert rep["status"] == "pass"
    for a in range(3):
        for b in range(3):
            for c in range(3):
                assert tensor[(a, b, c)] == conn.A[(a, b, 2 - c)]
    assert tensor == small2_run.tensor


def test_potential_integration_catches_inconsistency(small2_run):
    conn = small2_run.conn
    good = small2_run.tensor
    pot, rep = potential_from_tensor(good, 2, conn.tcap)
    assert rep["status"] == "pass"
    assert pot.phi == small2_run.potential.phi
    bad = dict(good)
    bump = TPoly.monomial((0, 0, 2), Q(1), 3, bad[(1, 1, 1)].maxdeg)
    bad[(1, 1, 1)] = bad[(1, 1, 1)].add(bump)
    _, rep = potential_from_tensor(bad, 2, conn.tcap)
    assert rep["status"] == "fail"


def test_identity_and_euler(small2_run):
    assert identity_check(small2_run.psi_y)["status"] == "pass"
    reps = euler_checks(small2_run.psi_y, small2_run.conn, small2_run.potential)
    assert [r["name"] for r in reps] == [
        "euler-period",
        "euler-connection",
        "metric-grading",
        "euler-potential",
    ]
    assert all_pass(reps)


def test_wdvv_pass_and_corruption(small2_run):
    pot = small2_run.potential
    assert wdvv_check(pot)["status"] == "pass"
    bump = TPoly.monomial((0, 2, 2), Q(1), 3, pot.phi.maxdeg)
    assert wdvv_check(Potential(2, pot.phi.add(bump)))["status"] == "fail"


def test_sigma_tables(small2_run):
    sigma, gw, reps = sigma_extract(small2_run.potential)
    assert all_pass(reps)
    assert gw.nonzero() == {(1, (2,)): Q(1), (2, (5,)): Q(1)}
    assert sigma.entries[(1, (2,))] == Q(1)
    assert sigma.entries[(2, (2,))] == Q(1)
    assert gw == small2_run.gw


def test_frame_unit_must_be_unipotent(small2_run):
    theta = small2_run.theta
    baseline = {
        "y": small2_run.normalized.y_of_t,
        "A": small2_run.conn.A,
        "phi": small2_run.potential.phi,
    }
    with pytest.raises(ValueError):
        frame_invariance_test(theta, AlphaPoly(2, [Q(2), Q(1), Q(0)]), baseline)
    unit = AlphaPoly(2, [Q(1), Q(-3, 2), Q(5, 7)])
    rep = frame_invariance_test(theta, unit, baseline)
    assert rep["status"] == "pass"
    assert rep["detail"]["coordinates"] and rep["detail"]["potential"]
