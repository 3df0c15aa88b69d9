"""Exact truncated-series arithmetic.

Four value types carry the whole computation:

- AlphaPoly: the nilpotent algebra Q[a]/a^(n+1) (a is the nilpotent generator).
- TPoly: multivariate polynomial over Q truncated at a total degree; sparse.
- HVec: triple-graded coefficient container, map (nilpotent degree k,
  hbar degree j) -> TPoly, over an hbar window [jmin, jmax]. The multivalued
  frame prefactor is implicit and never stored; operators act on the stored
  coefficients through the rules in periods.py.
- CoordMap: tuple of TPoly components with zero constant term, formally
  invertible when the linear part is.

All values are immutable by convention (operations return new objects) and all
arithmetic is exact; zero coefficients are never stored.

TPoly terms are dicts keyed by a packed integer: 6 bits per variable exponent
plus the total degree in the top field. Product keys are then plain integer
addition and the truncation test is one shift; this is what the kernels in
_kernel_py/_kernel_cy exploit. The packing caps the truncation degree at 31
(fields stay below 64 even in products), far above any run this package
targets.
"""

from . import _kernel
from ._coeff import ONE, Q, ZERO, factorial, rat_str

FIELD_BITS = 6
MAX_TRUNCATION = 31


class TruncationMismatchError(ValueError):
    """Operands carry different variable counts or truncation degrees."""


class WindowOverflowError(RuntimeError):
    """An operation tried to write above the top of the hbar window.

    Top-edge loss would silently corrupt the normalization equations, so it is
    always an error; the message carries a resize hint. Bottom-edge loss is
    allowed and recorded (it only limits how deep verifications can quantify).
    """


# ---------------------------------------------------------------------------
# packed monomial keys
# ---------------------------------------------------------------------------


def pack_exponents(exps):
    key = 0
    total = 0
    for i, e in enumerate(exps):
        key |= e << (FIELD_BITS * i)
        total += e
    return key | (total << (FIELD_BITS * len(exps)))


def unpack_key(key, nvars):
    mask = (1 << FIELD_BITS) - 1
    return tuple((key >> (FIELD_BITS * i)) & mask for i in range(nvars))


def key_degree(key, nvars):
    return key >> (FIELD_BITS * nvars)


# ---------------------------------------------------------------------------
# Q[a]/a^(n+1)
# ---------------------------------------------------------------------------


class AlphaPoly:
    """Element of Q[a]/a^(n+1); coeffs[k] is the degree-k coefficient."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n, coeffs):
        coeffs = [Q(c) for c in coeffs]
        if len(coeffs) != n + 1:
            raise ValueError("need exactly n+1 coefficients")
        self.n = n
        self.coeffs = coeffs

    @classmethod
    def unit(cls, n):
        return cls(n, [ONE] + [ZERO] * n)

    def __eq__(self, other):
        return (
            isinstance(other, AlphaPoly)
            and self.n == other.n
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return "AlphaPoly(n=%d, %s)" % (self.n, [rat_str(c) for c in self.coeffs])


def alpha_mul(a, b):
    """Product in Q[a]/a^(n+1): convolution truncated at degree n."""
    if a.n != b.n:
        raise TruncationMismatchError("mismatched n: %d vs %d" % (a.n, b.n))
    n = a.n
    out = [ZERO] * (n + 1)
    for i, ai in enumerate(a.coeffs):
        if not ai:
            continue
        for j in range(n + 1 - i):
            bj = b.coeffs[j]
            if bj:
                out[i + j] += ai * bj
    return AlphaPoly(n, out)


def alpha_inverse(a):
    """Inverse of a unit of Q[a]/a^(n+1); a.coeffs[0] must be nonzero.

    Triangular solve: the degree-k coefficient of a*b is forced once the lower
    ones are known. alpha_mul(a, alpha_inverse(a)) is the unit exactly.
    """
    if not a.coeffs[0]:
        raise ValueError("not a unit: zero constant term")
    n = a.n
    inv0 = ONE / a.coeffs[0]
    out = [inv0] + [ZERO] * n
    for k in range(1, n + 1):
        s = ZERO
        for i in range(1, k + 1):
            if a.coeffs[i]:
                s += a.coeffs[i] * out[k - i]
        out[k] = -inv0 * s
    return AlphaPoly(n, out)


def alpha_power(a, m):
    out = AlphaPoly.unit(a.n)
    for _ in range(m):
        out = alpha_mul(out, a)
    return out


# ---------------------------------------------------------------------------
# truncated multivariate polynomials
# ---------------------------------------------------------------------------


class TPoly:
    """Polynomial over Q in nvars variables, truncated at total degree maxdeg.

    terms maps packed keys to nonzero rationals. Products silently drop terms
    above maxdeg (that is the truncation contract); everything else is exact.
    """

    __slots__ = ("nvars", "maxdeg", "terms")

    def __init__(self, nvars, maxdeg, terms=None):
        if nvars < 1:
            raise ValueError("nvars must be >= 1")
        if not 0 <= maxdeg <= MAX_TRUNCATION:
            raise ValueError("truncation degree out of range (max %d)" % MAX_TRUNCATION)
        self.nvars = nvars
        self.maxdeg = maxdeg
        self.terms = {} if terms is None else terms

    # -- constructors

    @classmethod
    def zero(cls, nvars, maxdeg):
        return cls(nvars, maxdeg)

    @classmethod
    def constant(cls, c, nvars, maxdeg):
        c = Q(c)
        return cls(nvars, maxdeg, {0: c} if c else {})

    @classmethod
    def monomial(cls, exps, c, nvars, maxdeg):
        if len(exps) != nvars:
            raise ValueError("exponent tuple length != nvars")
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent")
        if sum(exps) > maxdeg:
            raise ValueError("monomial exceeds truncation degree")
        c = Q(c)
        return cls(nvars, maxdeg, {pack_exponents(exps): c} if c else {})

    @classmethod
    def variable(cls, i, nvars, maxdeg):
        exps = [0] * nvars
        exps[i] = 1
        return cls.monomial(tuple(exps), ONE, nvars, maxdeg)

    # -- inspection

    @property
    def shift(self):
        return FIELD_BITS * self.nvars

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, exps):
        return self.terms.get(pack_exponents(exps), ZERO)

    def degree(self):
        """Largest stored total degree (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        s = self.shift
        return max(k >> s for k in self.terms)

    def iter_terms(self):
        """Deterministic (sorted-key) iteration as (exponent tuple, coeff)."""
        for k in sorted(self.terms):
            yield unpack_key(k, self.nvars), self.terms[k]

    def _check_meta(self, other):
        if self.nvars != other.nvars or self.maxdeg != other.maxdeg:
            raise TruncationMismatchError(
                "mismatched truncation metadata: (%d,%d) vs (%d,%d)"
                % (self.nvars, self.maxdeg, other.nvars, other.maxdeg)
            )

    def __eq__(self, other):
        return (
            isinstance(other, TPoly)
            and self.nvars == other.nvars
            and self.maxdeg == other.maxdeg
            and self.terms == other.terms
        )

    def eq_up_to(self, other, cap):
        """Equality of all terms with total degree <= cap."""
        self._check_meta(other)
        s = self.shift
        for k, v in self.terms.items():
            if (k >> s) <= cap and other.terms.get(k, ZERO) != v:
                return False
        for k, v in other.terms.items():
            if (k >> s) <= cap and k not in self.terms:
                return False
        return True

    def __repr__(self):
        if not self.terms:
            return "TPoly(0)"
        bits = []
        for exps, c in list(self.iter_terms())[:6]:
            bits.append("%s*%s" % (rat_str(c), exps))
        if len(self.terms) > 6:
            bits.append("... %d terms" % len(self.terms))
        return "TPoly(%s)" % " + ".join(bits)

    # -- arithmetic

    def add(self, other):
        self._check_meta(other)
        out = dict(self.terms)
        _kernel.scale_acc(out, other.terms, ONE)
        _kernel.prune(out)
        return TPoly(self.nvars, self.maxdeg, out)

    def sub(self, other):
        self._check_meta(other)
        out = dict(self.terms)
        _kernel.scale_acc(out, other.terms, -ONE)
        _kernel.prune(out)
        return TPoly(self.nvars, self.maxdeg, out)

    def neg(self):
        return TPoly(self.nvars, self.maxdeg, {k: -v for k, v in self.terms.items()})

    def scale(self, c):
        c = Q(c)
        if not c:
            return TPoly(self.nvars, self.maxdeg)
        return TPoly(self.nvars, self.maxdeg, {k: c * v for k, v in self.terms.items()})

    def mul(self, other):
        self._check_meta(other)
        out = {}
        _kernel.mul_acc(out, self.terms, other.terms, self.shift, self.maxdeg)
        _kernel.prune(out)
        return TPoly(self.nvars, self.maxdeg, out)

    def mul_acc_into(self, acc_terms, other):
        """acc_terms += self*other at the raw-dict level (hot path helper)."""
        self._check_meta(other)
        _kernel.mul_acc(acc_terms, self.terms, other.terms, self.shift, self.maxdeg)

    def partial(self, var):
        """Exact partial derivative; complete up to degree maxdeg-1."""
        if not 0 <= var < self.nvars:
            raise ValueError("variable index out of range")
        out = {}
        field = FIELD_BITS * var
        mask = (1 << FIELD_BITS) - 1
        drop = (1 << field) | (1 << self.shift)
        for k, v in self.terms.items():
            e = (k >> field) & mask
            if e:
                out[k - drop] = v * e
        return TPoly(self.nvars, self.maxdeg, out)

    def homogeneous_part(self, d):
        s = self.shift
        return TPoly(
            self.nvars, self.maxdeg, {k: v for k, v in self.terms.items() if (k >> s) == d}
        )

    def truncated(self, cap):
        """Copy with terms of total degree > cap removed (metadata unchanged)."""
        s = self.shift
        return TPoly(
            self.nvars, self.maxdeg, {k: v for k, v in self.terms.items() if (k >> s) <= cap}
        )

    def min_degree(self):
        if not self.terms:
            return None
        s = self.shift
        return min(k >> s for k in self.terms)


def tpoly_exp(a):
    """exp(a) = sum a^r / r!, truncated; a must have zero constant term."""
    if a.terms.get(0):
        raise ValueError("exp needs a zero constant term")
    out = TPoly.constant(ONE, a.nvars, a.maxdeg)
    term = out
    for r in range(1, a.maxdeg + 1):
        term = term.mul(a).scale(Q(1, r))
        if term.is_zero():
            break
        out = out.add(term)
    return out


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


class SubstitutionTable:
    """Images of monomials under a variable substitution, computed on demand.

    images[i] replaces variable i; every image must have a zero constant term
    so that truncation at the shared maxdeg commutes with substitution. The
    table is shared across many polynomials (one per pipeline stage), which is
    what keeps substitution cheap.
    """

    def __init__(self, images):
        if not images:
            raise ValueError("empty substitution")
        meta = (images[0].nvars, images[0].maxdeg)
        for img in images:
            if (img.nvars, img.maxdeg) != meta:
                raise TruncationMismatchError("substitution images disagree on metadata")
            if img.terms.get(0):
                raise ValueError("substitution image has a nonzero constant term")
        self.images = images
        self.nvars = meta[0]
        self.maxdeg = meta[1]
        self._cache = {0: TPoly.constant(ONE, meta[0], meta[1])}

    def image(self, key):
        got = self._cache.get(key)
        if got is not None:
            return got
        # peel one variable and recurse; graded, so depth <= maxdeg
        for i in range(self.nvars):
            if (key >> (FIELD_BITS * i)) & ((1 << FIELD_BITS) - 1):
                parent = key - (1 << (FIELD_BITS * i)) - (1 << (FIELD_BITS * self.nvars))
                img = self.image(parent).mul(self.images[i])
                self._cache[key] = img
                return img
        raise AssertionError("unreachable: nonzero key with all-zero fields")


def substitute(p, table):
    """Evaluate p with variable i replaced by table.images[i]."""
    if p.nvars != table.nvars or p.maxdeg != table.maxdeg:
        raise TruncationMismatchError("substitution metadata mismatch")
    acc = {}
    for k, c in p.terms.items():
        _kernel.scale_acc(acc, table.image(k).terms, c)
    _kernel.prune(acc)
    return TPoly(p.nvars, p.maxdeg, acc)


# ---------------------------------------------------------------------------
# coordinate maps
# ---------------------------------------------------------------------------


class CoordMap:
    """Tuple of nvars TPoly components with zero constant term."""

    __slots__ = ("nvars", "maxdeg", "images")

    def __init__(self, images):
        if not images:
            raise ValueError("empty coordinate map")
        self.nvars = images[0].nvars
        self.maxdeg = images[0].maxdeg
        if len(images) != self.nvars:
            raise ValueError("coordinate map needs one component per variable")
        for img in images:
            if img.nvars != self.nvars or img.maxdeg != self.maxdeg:
                raise TruncationMismatchError("components disagree on metadata")
            if img.terms.get(0):
                raise ValueError("coordinate map component has nonzero constant term")
        self.images = list(images)

    @classmethod
    def identity(cls, nvars, maxdeg):
        return cls([TPoly.variable(i, nvars, maxdeg) for i in range(nvars)])

    def linear_matrix(self):
        """Rows k: coefficient of variable a in component k."""
        rows = []
        for img in self.images:
            row = []
            for a in range(self.nvars):
                exps = [0] * self.nvars
                exps[a] = 1
                row.append(img.coeff(tuple(exps)))
            rows.append(row)
        return rows

    def compose(self, inner):
        """self(inner(t)): substitute inner's components into self's."""
        table = SubstitutionTable(inner.images)
        return CoordMap([substitute(img, table) for img in self.images])

    def __eq__(self, other):
        return isinstance(other, CoordMap) and self.images == other.images


def invert_coord_map(cmap):
    """Formal inverse: returns inv with cmap(inv(y)) = y up to maxdeg.

    Requires an invertible linear part. Fixed-point iteration
    t <- Linv*(y - nonlinear(t)) gains one exact degree per round.
    """
    from .linalg import invert_matrix  # local import; linalg has no series deps

    nvars, maxdeg = cmap.nvars, cmap.maxdeg
    lin = cmap.linear_matrix()
    lin_inv = invert_matrix(lin)  # raises SingularMatrixError if not invertible

    variables = [TPoly.variable(i, nvars, maxdeg) for i in range(nvars)]

    def apply_matrix(mat, vec):
        out = []
        for row in mat:
            acc = TPoly.zero(nvars, maxdeg)
            for a, c in enumerate(row):
                if c:
                    acc = acc.add(vec[a].scale(c))
            out.append(acc)
        return out

    linear_of = apply_matrix(lin, variables)
    nonlinear = [cmap.images[k].sub(linear_of[k]) for k in range(nvars)]

    current = apply_matrix(lin_inv, variables)
    for _ in range(max(0, maxdeg - 1)):
        table = SubstitutionTable(current)
        shifted = [variables[k].sub(substitute(nonlinear[k], table)) for k in range(nvars)]
        nxt = apply_matrix(lin_inv, shifted)
        if nxt == current:
            break
        current = nxt

    inv = CoordMap(current)
    if cmap.compose(inv) != CoordMap.identity(nvars, maxdeg):
        raise AssertionError("coordinate map inversion failed to close")
    return inv


# ---------------------------------------------------------------------------
# windowed hbar vectors
# ---------------------------------------------------------------------------


class HVec:
    """Map (k, j) -> TPoly over the hbar window jmin <= j <= jmax, 0 <= k <= n.

    exact_min is the lowest hbar level whose stored coefficient is complete
    given bottom-edge truncation so far; verifications quantify over levels at
    or above it. dropped counts bottom-edge truncation events (recorded, never
    an error). Writing above jmax raises WindowOverflowError.
    """

    __slots__ = ("n", "nvars", "maxdeg", "jmin", "jmax", "coeffs", "exact_min", "dropped")

    def __init__(self, n, nvars, maxdeg, window, coeffs=None, exact_min=None, dropped=0):
        jmin, jmax = window
        if jmin > jmax:
            raise ValueError("empty window")
        self.n = n
        self.nvars = nvars
        self.maxdeg = maxdeg
        self.jmin = jmin
        self.jmax = jmax
        self.coeffs = {} if coeffs is None else coeffs
        self.exact_min = jmin if exact_min is None else exact_min
        self.dropped = dropped

    @property
    def window(self):
        return (self.jmin, self.jmax)

    def _like(self, coeffs, exact_min=None, dropped=None):
        return HVec(
            self.n,
            self.nvars,
            self.maxdeg,
            (self.jmin, self.jmax),
            coeffs,
            self.exact_min if exact_min is None else exact_min,
            self.dropped if dropped is None else dropped,
        )

    @classmethod
    def zero(cls, n, nvars, maxdeg, window):
        return cls(n, nvars, maxdeg, window)

    def _check_meta(self, other):
        if (
            self.n != other.n
            or self.nvars != other.nvars
            or self.maxdeg != other.maxdeg
            or self.window != other.window
        ):
            raise TruncationMismatchError("mismatched hbar-vector metadata")

    def coeff(self, k, j):
        got = self.coeffs.get((k, j))
        if got is None:
            return TPoly.zero(self.nvars, self.maxdeg)
        return got

    def set_entry(self, k, j, poly):
        """In-place slot write, construction-time only (values stay immutable)."""
        if not 0 <= k <= self.n:
            raise ValueError("nilpotent degree out of range")
        if j > self.jmax:
            raise WindowOverflowError(
                "write at hbar level %d above window top %d; rerun with a higher top"
                % (j, self.jmax)
            )
        if j < self.jmin:
            self.dropped += 1
            return
        if poly.is_zero():
            self.coeffs.pop((k, j), None)
        else:
            self.coeffs[(k, j)] = poly

    def iter_slots(self):
        for slot in sorted(self.coeffs):
            yield slot, self.coeffs[slot]

    def is_zero(self):
        return not self.coeffs

    def add(self, other):
        self._check_meta(other)
        out = dict(self.coeffs)
        for slot, poly in other.coeffs.items():
            cur = out.get(slot)
            merged = poly if cur is None else cur.add(poly)
            if merged.is_zero():
                out.pop(slot, None)
            else:
                out[slot] = merged
        return self._like(
            out,
            exact_min=max(self.exact_min, other.exact_min),
            dropped=self.dropped + other.dropped,
        )

    def sub(self, other):
        return self.add(other.scale(-ONE))

    def scale(self, factor):
        """Multiply every slot by a rational or by a TPoly (truncated)."""
        if isinstance(factor, TPoly):
            out = {}
            for slot, poly in self.coeffs.items():
                prod = poly.mul(factor)
                if not prod.is_zero():
                    out[slot] = prod
            return self._like(out)
        c = Q(factor)
        if not c:
            return self._like({})
        return self._like({slot: poly.scale(c) for slot, poly in self.coeffs.items()})

    def shift_hbar(self, m):
        """Regrade (k, j) -> (k, j+m); top overflow errors, bottom drops."""
        if m == 0:
            return self._like(dict(self.coeffs))
        out = {}
        dropped = self.dropped
        for (k, j), poly in self.coeffs.items():
            jj = j + m
            if jj > self.jmax:
                raise WindowOverflowError(
                    "shift lands at hbar level %d above window top %d; "
                    "rerun with a higher top" % (jj, self.jmax)
                )
            if jj < self.jmin:
                dropped += 1
                continue
            out[(k, jj)] = poly
        return self._like(out, exact_min=max(self.jmin, self.exact_min + m), dropped=dropped)

    def apply_alpha(self):
        """Multiply by the nilpotent generator: (k, j) -> (k+1, j), top degree dies."""
        out = {}
        for (k, j), poly in self.coeffs.items():
            if k < self.n:
                out[(k + 1, j)] = poly
        return self._like(out)

    def scale_alpha(self, unit):
        """Multiply by an AlphaPoly (constant in t and hbar)."""
        if unit.n != self.n:
            raise TruncationMismatchError("mismatched n")
        out = HVec.zero(self.n, self.nvars, self.maxdeg, self.window)
        out.exact_min = self.exact_min
        out.dropped = self.dropped
        power = self
        total = out
        for r, c in enumerate(unit.coeffs):
            if r > 0:
                power = power.apply_alpha()
            if c:
                total = total.add(power.scale(c))
        total.exact_min = self.exact_min
        return total

    def embed(self, window):
        """Widen the window (both edges), filling zeros."""
        jmin, jmax = window
        if jmin > self.jmin or jmax < self.jmax:
            raise ValueError("embed only widens the window")
        return HVec(
            self.n,
            self.nvars,
            self.maxdeg,
            window,
            dict(self.coeffs),
            self.exact_min,
            self.dropped,
        )

    def t_partial(self, var):
        out = {}
        for slot, poly in self.coeffs.items():
            d = poly.partial(var)
            if not d.is_zero():
                out[slot] = d
        return self._like(out)

    def t_homogeneous(self, d):
        out = {}
        for slot, poly in self.coeffs.items():
            h = poly.homogeneous_part(d)
            if not h.is_zero():
                out[slot] = h
        return self._like(out)

    def at_t_zero(self):
        """Map slot -> constant coefficient (only nonzero ones)."""
        out = {}
        for slot, poly in self.coeffs.items():
            c = poly.terms.get(0, ZERO)
            if c:
                out[slot] = c
        return out

    def eq_witness(self, other, tcap=None, jfloor=None):
        """First difference as (slot, exponents, left, right), or None.

        Compares slots with hbar level >= jfloor (default: both exactness
        floors) and term degree <= tcap (default: no cap).
        """
        self._check_meta(other)
        if jfloor is None:
            jfloor = max(self.exact_min, other.exact_min)
        slots = set(self.coeffs) | set(other.coeffs)
        for slot in sorted(slots):
            if slot[1] < jfloor:
                continue
            a = self.coeff(*slot)
            b = other.coeff(*slot)
            keys = set(a.terms) | set(b.terms)
            for k in sorted(keys):
                if tcap is not None and key_degree(k, self.nvars) > tcap:
                    continue
                va = a.terms.get(k, ZERO)
                vb = b.terms.get(k, ZERO)
                if va != vb:
                    return (slot, unpack_key(k, self.nvars), va, vb)
        return None

    def __repr__(self):
        return "HVec(n=%d, window=[%d,%d], %d slots, exact_min=%d)" % (
            self.n,
            self.jmin,
            self.jmax,
            len(self.coeffs),
            self.exact_min,
        )
