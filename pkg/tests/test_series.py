import random

import pytest

from mirrorcp._coeff import ONE, Q, ZERO
from mirrorcp.series import (
    AlphaPoly,
    CoordMap,
    HVec,
    SubstitutionTable,
    TPoly,
    TruncationMismatchError,
    WindowOverflowError,
    alpha_inverse,
    alpha_mul,
    alpha_power,
    invert_coord_map,
    key_degree,
    pack_exponents,
    substitute,
    tpoly_exp,
    unpack_key,
)


def random_tpoly(rng, nvars, maxdeg, nterms=6, allow_const=True):
    p = TPoly.zero(nvars, maxdeg)
    for _ in range(nterms):
        exps = [0] * nvars
        budget = rng.randint(0 if allow_const else 1, maxdeg)
        for _ in range(budget):
            exps[rng.randrange(nvars)] += 1
        c = Q(rng.randint(-9, 9), rng.randint(1, 9))
        p = p.add(TPoly.monomial(exps, c, nvars, maxdeg))
    return p


def naive_mul(a, b):
    out = {}
    for ea, ca in a.iter_terms():
        for eb, cb in b.iter_terms():
            exps = tuple(x + y for x, y in zip(ea, eb))
            if sum(exps) > a.maxdeg:
                continue
            out[exps] = out.get(exps, ZERO) + ca * cb
    return {k: v for k, v in out.items() if v}


def test_pack_roundtrip():
    rng = random.Random(7)
    for _ in range(200):
        nvars = rng.randint(1, 4)
        exps = [rng.randint(0, 7) for _ in range(nvars)]
        key = pack_exponents(exps)
        assert unpack_key(key, nvars) == tuple(exps)
        assert key_degree(key, nvars) == sum(exps)


def test_pack_addition_is_monomial_product():
    a = pack_exponents([1, 2, 0])
    b = pack_exponents([0, 3, 4])
    assert unpack_key(a + b, 3) == (1, 5, 4)


def test_tpoly_mul_matches_naive_and_truncates():
    rng = random.Random(11)
    for _ in range(40):
        nvars = rng.randint(1, 3)
        maxdeg = rng.randint(2, 6)
        a = random_tpoly(rng, nvars, maxdeg)
        b = random_tpoly(rng, nvars, maxdeg)
        prod = a.mul(b)
        want = naive_mul(a, b)
        got = {exps: c for exps, c in prod.iter_terms()}
        assert got == want
        assert all(sum(e) <= maxdeg for e in got)


def test_tpoly_ring_laws():
    rng = random.Random(13)
    for _ in range(20):
        a = random_tpoly(rng, 2, 5)
        b = random_tpoly(rng, 2, 5)
        c = random_tpoly(rng, 2, 5)
        assert a.mul(b) == b.mul(a)
        assert a.mul(b.add(c)) == a.mul(b).add(a.mul(c))
        assert a.mul(b).mul(c) == a.mul(b.mul(c))


def test_tpoly_partial_leibniz():
    rng = random.Random(17)
    for _ in range(20):
        # Leibniz holds only below the cap: the product drops degree maxdeg+1
        # terms whose derivatives would land at maxdeg
        a = random_tpoly(rng, 2, 6)
        b = random_tpoly(rng, 2, 6)
        for var in range(2):
            lhs = a.mul(b).partial(var)
            rhs = a.partial(var).mul(b).add(a.mul(b.partial(var)))
            assert lhs.eq_up_to(rhs, a.maxdeg - 1)


def test_tpoly_meta_mismatch():
    a = TPoly.constant(ONE, 2, 4)
    b = TPoly.constant(ONE, 2, 5)
    with pytest.raises(TruncationMismatchError):
        a.add(b)


def test_tpoly_truncation_guard():
    with pytest.raises(ValueError):
        TPoly.zero(2, 32)


def test_tpoly_exp_homomorphism():
    rng = random.Random(19)
    for _ in range(10):
        a = random_tpoly(rng, 2, 5, allow_const=False)
        b = random_tpoly(rng, 2, 5, allow_const=False)
        assert tpoly_exp(a.add(b)) == tpoly_exp(a).mul(tpoly_exp(b))
    with pytest.raises(ValueError):
        tpoly_exp(TPoly.constant(ONE, 2, 5))


def test_substitute_is_ring_map():
    # images with min degree >= 1 keep truncation compatible on both paths
    rng = random.Random(23)
    images = [random_tpoly(rng, 2, 5, allow_const=False) for _ in range(2)]
    table = SubstitutionTable(images)
    a = random_tpoly(rng, 2, 5)
    b = random_tpoly(rng, 2, 5)
    assert substitute(a.add(b), table) == substitute(a, table).add(substitute(b, table))
    assert substitute(a.mul(b), table) == substitute(a, table).mul(substitute(b, table))


def test_substitute_identity():
    rng = random.Random(29)
    nvars, maxdeg = 3, 5
    table = SubstitutionTable([TPoly.variable(i, nvars, maxdeg) for i in range(nvars)])
    p = random_tpoly(rng, nvars, maxdeg)
    assert substitute(p, table) == p


def test_invert_coord_map_two_sided():
    rng = random.Random(31)
    nvars, maxdeg = 2, 6
    for _ in range(8):
        images = []
        for i in range(nvars):
            img = TPoly.variable(i, nvars, maxdeg).scale(Q(rng.randint(1, 4)))
            tail = random_tpoly(rng, nvars, maxdeg, nterms=3, allow_const=False)
            # force min degree 2 in the tail so the map is linear plus higher
            tail = tail.sub(tail.homogeneous_part(1))
            images.append(img.add(tail))
        fwd = CoordMap(images)
        inv = invert_coord_map(fwd)
        assert fwd.compose(inv) == CoordMap.identity(nvars, maxdeg)
        assert inv.compose(fwd) == CoordMap.identity(nvars, maxdeg)


def test_alpha_ops():
    a = AlphaPoly(2, [ONE, Q(2), Q(3)])
    assert alpha_mul(a, alpha_inverse(a)) == AlphaPoly.unit(2)
    assert alpha_power(a, 3) == alpha_mul(a, alpha_mul(a, a))
    with pytest.raises(ValueError):
        alpha_inverse(AlphaPoly(2, [ZERO, ONE, ZERO]))


def test_alpha_inverse_example():
    # (1 + a)^(-2) over Q[a]/a^2 is 1 - 2a
    sq = alpha_power(AlphaPoly(1, [ONE, ONE]), 2)
    assert alpha_inverse(sq) == AlphaPoly(1, [ONE, Q(-2)])


def test_hvec_window_edges():
    v = HVec.zero(1, 2, 3, (-4, 2))
    v.set_entry(0, 2, TPoly.constant(ONE, 2, 3))
    with pytest.raises(WindowOverflowError):
        v.set_entry(0, 3, TPoly.constant(ONE, 2, 3))
    before = v.dropped
    v.set_entry(1, -5, TPoly.constant(ONE, 2, 3))
    assert v.dropped == before + 1
    assert (1, -5) not in v.coeffs


def test_hvec_shift_and_exactness():
    v = HVec.zero(1, 2, 3, (-4, 2))
    v.set_entry(0, -4, TPoly.constant(ONE, 2, 3))
    v.set_entry(1, 0, TPoly.constant(Q(5), 2, 3))
    v.exact_min = -4
    down = v.shift_hbar(-1)
    assert down.dropped == v.dropped + 1
    # the floor moves with the content, clipped at the window bottom
    assert down.exact_min == -4
    assert down.coeff(1, -1).terms == {0: Q(5)}
    up = v.shift_hbar(1)
    assert up.exact_min == -3
    with pytest.raises(WindowOverflowError):
        v.shift_hbar(3)


def test_hvec_scale_alpha_matches_sum_of_powers():
    rng = random.Random(37)
    n = 2
    v = HVec.zero(n, 3, 4, (-3, 3))
    for k in range(n + 1):
        for j in range(-3, 4):
            if rng.random() < 0.4:
                v.set_entry(k, j, random_tpoly(rng, 3, 4, nterms=2))
    unit = AlphaPoly(n, [ONE, Q(1, 2), Q(-3)])
    got = v.scale_alpha(unit)
    want = v.scale(unit.coeffs[0])
    power = v
    for r in range(1, n + 1):
        power = power.apply_alpha()
        want = want.add(power.scale(unit.coeffs[r]))
    assert got.eq_witness(want, jfloor=-3) is None


def test_hvec_add_takes_worst_exactness():
    a = HVec.zero(1, 2, 3, (-4, 2))
    b = HVec.zero(1, 2, 3, (-4, 2))
    a.exact_min = -4
    b.exact_min = -2
    assert a.add(b).exact_min == -2
