"""End-to-end orchestration: periods to potential, with the check battery.

The structural checks (transversality, normalization residual, connection
image and residual, tensor symmetry, potential integration) always run and
always count toward the outcome; the named groups in CHECK_GROUPS can be
switched off to save time. sigma extraction always runs because the curve
counts come out of it, but its reports are only included when selected.
"""

import random
import time

from ._coeff import ONE, Q
from .frobenius import (
    connection_from_period,
    euler_checks,
    frame_invariance_test,
    identity_check,
    lower_index,
    potential_from_tensor,
    sigma_extract,
    verify_flatness,
    wdvv_check,
)
from .gw import compare, oracle_potential, reconstruct
from .normalization import (
    extract_mirror_coordinates,
    reparametrize,
    solve_normalized_period,
)
from .periods import (
    default_depth,
    default_window,
    griffiths_check,
    pf_check,
    theta_columns,
    xi_series,
)
from .reports import all_pass, check
from .series import AlphaPoly

CHECK_GROUPS = ("pf", "flatness", "euler", "identity", "wdvv", "sigma", "frame", "stability")

FRAME_TRIALS = 3


class ConfigError(ValueError):
    """Invalid run configuration (maps to exit status 2)."""


class RunConfig:
    """Validated pipeline configuration with derived window defaults."""

    def __init__(
        self,
        n,
        t_degree,
        depth=None,
        window_top=None,
        checks="all",
        compare_oracle=False,
        seed=0,
        oracle_dmax=None,
    ):
        if not isinstance(n, int) or n < 1:
            raise ConfigError("n must be an integer >= 1")
        if not isinstance(t_degree, int) or t_degree < 3:
            raise ConfigError("degree must be an integer >= 3")
        if t_degree > 30:
            raise ConfigError("degree must be <= 30 (packed-exponent limit)")
        self.n = n
        self.t_degree = t_degree
        if depth is None:
            depth = default_depth(t_degree)
        elif not isinstance(depth, int) or depth < 1:
            raise ConfigError("hbar depth must be an integer >= 1")
        self.depth = depth
        jmin, jmax = default_window(n, t_degree, depth)
        if window_top is not None:
            if not isinstance(window_top, int):
                raise ConfigError("window top must be an integer")
            jmax = window_top
        if jmin > jmax:
            raise ConfigError("window is empty: bottom %d above top %d" % (jmin, jmax))
        self.window = (jmin, jmax)
        self.checks = parse_checks(checks)
        self.compare_oracle = bool(compare_oracle)
        if not isinstance(seed, int):
            raise ConfigError("seed must be an integer")
        self.seed = seed
        if oracle_dmax is not None and (not isinstance(oracle_dmax, int) or oracle_dmax < 1):
            raise ConfigError("oracle dmax must be an integer >= 1")
        self.oracle_dmax = oracle_dmax

    def echo(self):
        return {
            "n": self.n,
            "degree": self.t_degree,
            "depth": self.depth,
            "window": list(self.window),
            "checks": sorted(self.checks),
            "compare_oracle": self.compare_oracle,
            "seed": self.seed,
        }


def parse_checks(value):
    if value is None or value == "all":
        return frozenset(CHECK_GROUPS)
    if value == "none":
        return frozenset()
    if isinstance(value, str):
        names = [part.strip() for part in value.split(",") if part.strip()]
    else:
        names = list(value)
    bad = [name for name in names if name not in CHECK_GROUPS]
    if bad:
        raise ConfigError(
            "unknown checks: %s (known: %s)" % (", ".join(bad), ", ".join(CHECK_GROUPS))
        )
    return frozenset(names)


def oracle_depth_for(n, t_degree):
    """Largest curve degree whose lowest-degree monomial fits the potential.

    The potential carries terms through t_degree + 1; a degree-d count first
    appears at total degree ceilered by the dimension constraint, so the
    oracle must cover every d below this bound for the comparison to close.
    """
    return ((n - 1) * (t_degree + 1) + 3 - n) // (n + 1)


def random_frame_unit(n, rng):
    coeffs = [ONE]
    for _ in range(n):
        num = rng.randint(1, 9) * rng.choice((-1, 1))
        den = rng.randint(1, 9)
        coeffs.append(Q(num, den))
    return AlphaPoly(n, coeffs)


class PipelineResult:
    def __init__(self, config, theta, normalized, psi_y, conn, tensor, potential, sigma, gw, checks, timings):
        self.config = config
        self.theta = theta
        self.normalized = normalized
        self.psi_y = psi_y
        self.conn = conn
        self.tensor = tensor
        self.potential = potential
        self.sigma = sigma
        self.gw = gw
        self.checks = checks
        self.timings = timings

    @property
    def ok(self):
        return all_pass(self.checks)


def _core_run(n, t_degree, window, depth):
    """theta -> normalized period -> flat frame -> connection -> potential."""
    fam = theta_columns(n, t_degree, window=window, depth=depth)
    np_ = solve_normalized_period(fam)
    extract_mirror_coordinates(np_)
    psi_y = reparametrize(np_)
    conn = connection_from_period(psi_y)
    tensor, symmetry_rep = lower_index(conn)
    pot, integration_rep = potential_from_tensor(tensor, n, conn.tcap)
    return fam, np_, psi_y, conn, tensor, symmetry_rep, pot, integration_rep


def run_pipeline(config):
    n, t_degree = config.n, config.t_degree
    selected = config.checks
    checks = []
    timings = {}
    t_total = time.perf_counter()

    t0 = time.perf_counter()
    fam, np_, psi_y, conn, tensor, symmetry_rep, pot, integration_rep = _core_run(
        n, t_degree, config.window, config.depth
    )
    timings["core"] = _ms(t0)

    t0 = time.perf_counter()
    if "pf" in selected:
        xi = xi_series(n, config.depth, nvars=n + 1, maxdeg=t_degree, window=config.window)
        checks.append(pf_check(xi, n))
        checks.append(griffiths_check(fam))
    checks.extend(np_.reports)
    checks.extend(conn.reports)
    if "flatness" in selected:
        checks.extend(verify_flatness(conn))
    checks.append(symmetry_rep)
    checks.append(integration_rep)
    if "identity" in selected:
        checks.append(identity_check(psi_y))
    if "euler" in selected:
        checks.extend(euler_checks(psi_y, conn, pot))
    if "wdvv" in selected:
        checks.append(wdvv_check(pot))
    sigma, gw_table, sigma_reps = sigma_extract(pot)
    if "sigma" in selected:
        checks.extend(sigma_reps)
    timings["checks"] = _ms(t0)

    if "frame" in selected:
        t0 = time.perf_counter()
        rng = random.Random(config.seed)
        baseline = {"y": np_.y_of_t, "A": conn.A, "phi": pot.phi}
        for trial in range(FRAME_TRIALS):
            unit = random_frame_unit(n, rng)
            rep = frame_invariance_test(fam, unit, baseline)
            rep.setdefault("detail", {})["trial"] = trial
            checks.append(rep)
        timings["frame"] = _ms(t0)

    if "stability" in selected:
        t0 = time.perf_counter()
        checks.append(_stability_check(config, np_, conn, pot))
        timings["stability"] = _ms(t0)

    if config.compare_oracle:
        t0 = time.perf_counter()
        d_need = config.oracle_dmax
        if d_need is None:
            d_need = oracle_depth_for(n, t_degree)
        table = reconstruct(n, max(d_need, 1))
        oracle = oracle_potential(table, pot.phi.maxdeg)
        checks.append(compare(pot.phi, oracle.phi))
        timings["oracle"] = _ms(t0)

    timings["total"] = _ms(t_total)
    return PipelineResult(
        config, fam, np_, psi_y, conn, tensor, pot, sigma, gw_table, checks, timings
    )


def _stability_check(config, np_, conn, pot):
    """Re-run with a deeper bottom and a higher top; the flat coordinates,
    structure constants, and potential must come back bit for bit."""
    jmin, jmax = config.window
    window2 = (jmin * 3 // 2, jmax + 3)
    _, np2, _, conn2, _, _, pot2, _ = _core_run(
        config.n, config.t_degree, window2, config.depth
    )
    same_y = np2.y_of_t == np_.y_of_t
    same_a = conn2.A == conn.A
    same_phi = pot2.phi == pot.phi
    return check(
        "stability",
        same_y and same_a and same_phi,
        coordinates=same_y,
        connection=same_a,
        potential=same_phi,
        window=list(window2),
    )


def _ms(t0):
    return round((time.perf_counter() - t0) * 1000.0, 3)
