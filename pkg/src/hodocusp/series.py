"""Truncated power series in one and two variables.

Coefficients are either exact (Fraction, or CubicRadical elements of one
fixed cube-root extension) or float64; a single series never mixes the two
kinds. Zero coefficients are never stored, so equality compares canonical
forms. All operations re-truncate to the total-degree cap and are pure:
series are immutable after construction.

Each series carries an effective order ``eff <= cap``: the highest total
degree whose coefficients are trusted. Derivatives decrement it; sums take
the min; products and compositions use valuation-aware rules so that e.g.
multiplying by h loses nothing at the cap.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DegeneracyError, DomainError, UsageError
from .scalars import CubicRadical, cbrt_exact, real_cbrt, scalar_float

EXACT = "exact"
FLOAT = "float"

DEFAULT_CAP = 8
EXACT_CAP_CEILING = 16

# relative size at which the top-degree band is considered to lie about the
# truncated tail; see validity_radius
VALIDITY_REL_TOL = 1e-12


def _norm_scalar(v, mode):
    if mode == FLOAT:
        return float(v)
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, CubicRadical):
        return v
    raise UsageError(f"exact series cannot hold a {type(v).__name__} coefficient")


def _is_zero(v):
    return v == 0


class Series2:
    """Truncated power series in an ordered pair of variables."""

    __slots__ = ("names", "cap", "mode", "eff", "_c", "_fcache")

    def __init__(self, names, cap=DEFAULT_CAP, coeffs=None, *, mode=EXACT, eff=None):
        names = tuple(names)
        if len(names) != 2 or names[0] == names[1]:
            raise UsageError(f"need two distinct variable names, got {names!r}")
        if cap < 0:
            raise UsageError("cap must be nonnegative")
        if mode not in (EXACT, FLOAT):
            raise UsageError(f"unknown scalar mode {mode!r}")
        self.names = names
        self.cap = cap
        self.mode = mode
        self.eff = cap if eff is None else min(eff, cap)
        c = {}
        if coeffs:
            for (i, j), v in coeffs.items():
                if i < 0 or j < 0:
                    raise UsageError(f"negative exponent ({i},{j})")
                if i + j > cap:
                    continue
                v = _norm_scalar(v, mode)
                if not _is_zero(v):
                    c[(i, j)] = v
        self._c = c
        self._fcache = None

    # -- trusted fast constructor for internal use -------------------------

    @classmethod
    def _raw(cls, names, cap, coeffs, mode, eff):
        s = object.__new__(cls)
        s.names = names
        s.cap = cap
        s.mode = mode
        s.eff = min(eff, cap)
        s._c = coeffs
        s._fcache = None
        return s

    # -- inspection ---------------------------------------------------------

    def coefficient(self, i, j):
        zero = 0.0 if self.mode == FLOAT else Fraction(0)
        return self._c.get((i, j), zero)

    def __getitem__(self, key):
        return self.coefficient(*key)

    def terms(self):
        """Deterministically ordered (i, j, coeff) triples."""
        for (i, j) in sorted(self._c, key=lambda k: (k[0] + k[1], k[0])):
            yield i, j, self._c[(i, j)]

    def is_zero(self):
        return not self._c

    def valuation(self):
        """Lowest total degree of a stored term; cap+1 for the zero series."""
        if not self._c:
            return self.cap + 1
        return min(i + j for (i, j) in self._c)

    def __eq__(self, other):
        if not isinstance(other, Series2):
            return NotImplemented
        return (
            self.names == other.names
            and self.cap == other.cap
            and self.mode == other.mode
            and self._c == other._c
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"Series2({self.names[0]},{self.names[1]}; cap={self.cap}, "
            f"{self.mode}, eff={self.eff}, {len(self._c)} terms)"
        )

    # -- ring operations ----------------------------------------------------

    def _check_compat(self, other):
        if self.names != other.names:
            raise UsageError(f"variable mismatch: {self.names} vs {other.names}")
        if self.cap != other.cap:
            raise UsageError(f"cap mismatch: {self.cap} vs {other.cap}")
        if self.mode != other.mode:
            raise UsageError(f"scalar mode mismatch: {self.mode} vs {other.mode}")

    def __add__(self, other):
        if not isinstance(other, Series2):
            return NotImplemented
        self._check_compat(other)
        c = dict(self._c)
        for k, v in other._c.items():
            w = c.get(k)
            if w is None:
                c[k] = v
            else:
                w = w + v
                if _is_zero(w):
                    del c[k]
                else:
                    c[k] = w
        return Series2._raw(self.names, self.cap, c, self.mode, min(self.eff, other.eff))

    def __sub__(self, other):
        if not isinstance(other, Series2):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Series2._raw(
            self.names, self.cap, {k: -v for k, v in self._c.items()}, self.mode, self.eff
        )

    def scale(self, scalar):
        scalar = _norm_scalar(scalar, self.mode)
        if _is_zero(scalar):
            return Series2._raw(self.names, self.cap, {}, self.mode, self.eff)
        return Series2._raw(
            self.names,
            self.cap,
            {k: scalar * v for k, v in self._c.items()},
            self.mode,
            self.eff,
        )

    def __mul__(self, other):
        if isinstance(other, Series2):
            self._check_compat(other)
            cap = self.cap
            c = {}
            for (i1, j1), v1 in self._c.items():
                d1 = i1 + j1
                for (i2, j2), v2 in other._c.items():
                    if d1 + i2 + j2 > cap:
                        continue
                    k = (i1 + i2, j1 + j2)
                    w = c.get(k)
                    c[k] = v1 * v2 if w is None else w + v1 * v2
            c = {k: v for k, v in c.items() if not _is_zero(v)}
            eff = min(
                self.cap,
                self.eff + other.valuation(),
                other.eff + self.valuation(),
            )
            return Series2._raw(self.names, cap, c, self.mode, eff)
        try:
            return self.scale(other)
        except UsageError:
            return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = const2(self.names, self.cap, 1, mode=self.mode)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    # -- calculus -----------------------------------------------------------

    def derivative(self, name):
        """Partial derivative; cap unchanged, effective order drops by one."""
        if name not in self.names:
            raise UsageError(f"no variable {name!r} in {self.names}")
        axis = self.names.index(name)
        c = {}
        for (i, j), v in self._c.items():
            e = (i, j)[axis]
            if e == 0:
                continue
            k = (i - 1, j) if axis == 0 else (i, j - 1)
            c[k] = v * e
        return Series2._raw(self.names, self.cap, c, self.mode, max(self.eff - 1, 0))

    # -- structure ----------------------------------------------------------

    def swap(self):
        """Exchange the two variables."""
        return Series2._raw(
            (self.names[1], self.names[0]),
            self.cap,
            {(j, i): v for (i, j), v in self._c.items()},
            self.mode,
            self.eff,
        )

    def recap(self, cap):
        """Change the total-degree cap, dropping terms if lowered."""
        c = {k: v for k, v in self._c.items() if k[0] + k[1] <= cap}
        return Series2._raw(self.names, cap, c, self.mode, min(self.eff, cap))

    def at_zero(self, axis) -> "Series1":
        """Restriction to one variable, setting the other to zero."""
        if axis not in (0, 1):
            raise UsageError("axis must be 0 or 1")
        other = 1 - axis
        c = {k[axis]: v for k, v in self._c.items() if k[other] == 0}
        return Series1._raw(self.names[axis], self.cap, c, self.mode, self.eff)

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return Series2._raw(
            self.names,
            self.cap,
            {k: scalar_float(v) for k, v in self._c.items()},
            FLOAT,
            self.eff,
        )

    # -- numerics -----------------------------------------------------------

    def _float_terms(self):
        if self._fcache is None:
            bands = {}
            for (i, j), v in self._c.items():
                bands.setdefault(i + j, []).append((i, j, scalar_float(v)))
            self._fcache = [bands[d] for d in sorted(bands)]
        return self._fcache

    def validity_radius(self) -> float:
        """Largest radius at which the top-degree band stays negligible.

        Truncated series lie about their domain; the band of total degree
        equal to the cap is used as a proxy for the dropped tail. Returns
        inf when that band is empty (the series is a lower-degree
        polynomial, trusted everywhere).
        """
        bands = self._float_terms()
        if not bands:
            return math.inf
        top = [t for t in self._c if t[0] + t[1] == self.cap]
        if not top:
            return math.inf
        lead_deg = self.valuation()
        top_mag = sum(abs(scalar_float(self._c[t])) for t in top)
        lead_mag = sum(
            abs(scalar_float(v)) for (i, j), v in self._c.items() if i + j == lead_deg
        )
        if lead_deg == self.cap:
            return 0.0
        # top_mag * r**cap < tol * lead_mag * r**lead_deg
        r = (VALIDITY_REL_TOL * lead_mag / top_mag) ** (1.0 / (self.cap - lead_deg))
        return r

    def evaluate(self, x, y, check=True) -> float:
        """Evaluate at float arguments, summing total-degree bands upward."""
        x = float(x)
        y = float(y)
        if check:
            r = max(abs(x), abs(y))
            vr = self.validity_radius()
            if r > vr:
                raise DomainError(
                    f"evaluation point radius {r:.6g} exceeds validity radius "
                    f"{vr:.6g} of {self!r}"
                )
        xp = [1.0]
        yp = [1.0]
        for _ in range(self.cap):
            xp.append(xp[-1] * x)
            yp.append(yp[-1] * y)
        total = 0.0
        for band in self._float_terms():
            total += math.fsum(c * xp[i] * yp[j] for i, j, c in band)
        return total


class Series1:
    """Truncated power series in one variable."""

    __slots__ = ("name", "cap", "mode", "eff", "_c", "_fcache")

    def __init__(self, name, cap=DEFAULT_CAP, coeffs=None, *, mode=EXACT, eff=None):
        if not isinstance(name, str) or not name:
            raise UsageError("need a variable name")
        if cap < 0:
            raise UsageError("cap must be nonnegative")
        if mode not in (EXACT, FLOAT):
            raise UsageError(f"unknown scalar mode {mode!r}")
        self.name = name
        self.cap = cap
        self.mode = mode
        self.eff = cap if eff is None else min(eff, cap)
        c = {}
        if coeffs:
            for j, v in coeffs.items():
                if j < 0:
                    raise UsageError("negative exponent")
                if j > cap:
                    continue
                v = _norm_scalar(v, mode)
                if not _is_zero(v):
                    c[j] = v
        self._c = c
        self._fcache = None

    @classmethod
    def _raw(cls, name, cap, coeffs, mode, eff):
        s = object.__new__(cls)
        s.name = name
        s.cap = cap
        s.mode = mode
        s.eff = min(eff, cap)
        s._c = coeffs
        s._fcache = None
        return s

    def coefficient(self, j):
        zero = 0.0 if self.mode == FLOAT else Fraction(0)
        return self._c.get(j, zero)

    def __getitem__(self, j):
        return self.coefficient(j)

    def terms(self):
        for j in sorted(self._c):
            yield j, self._c[j]

    def is_zero(self):
        return not self._c

    def valuation(self):
        return min(self._c) if self._c else self.cap + 1

    def __eq__(self, other):
        if not isinstance(other, Series1):
            return NotImplemented
        return (
            self.name == other.name
            and self.cap == other.cap
            and self.mode == other.mode
            and self._c == other._c
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"Series1({self.name}; cap={self.cap}, {self.mode}, "
            f"eff={self.eff}, {len(self._c)} terms)"
        )

    def _check_compat(self, other):
        if self.name != other.name:
            raise UsageError(f"variable mismatch: {self.name} vs {other.name}")
        if self.cap != other.cap:
            raise UsageError(f"cap mismatch: {self.cap} vs {other.cap}")
        if self.mode != other.mode:
            raise UsageError(f"scalar mode mismatch: {self.mode} vs {other.mode}")

    def __add__(self, other):
        if not isinstance(other, Series1):
            return NotImplemented
        self._check_compat(other)
        c = dict(self._c)
        for k, v in other._c.items():
            w = c.get(k)
            if w is None:
                c[k] = v
            else:
                w = w + v
                if _is_zero(w):
                    del c[k]
                else:
                    c[k] = w
        return Series1._raw(self.name, self.cap, c, self.mode, min(self.eff, other.eff))

    def __sub__(self, other):
        if not isinstance(other, Series1):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Series1._raw(
            self.name, self.cap, {k: -v for k, v in self._c.items()}, self.mode, self.eff
        )

    def scale(self, scalar):
        scalar = _norm_scalar(scalar, self.mode)
        if _is_zero(scalar):
            return Series1._raw(self.name, self.cap, {}, self.mode, self.eff)
        return Series1._raw(
            self.name,
            self.cap,
            {k: scalar * v for k, v in self._c.items()},
            self.mode,
            self.eff,
        )

    def __mul__(self, other):
        if isinstance(other, Series1):
            self._check_compat(other)
            c = {}
            for j1, v1 in self._c.items():
                for j2, v2 in other._c.items():
                    if j1 + j2 > self.cap:
                        continue
                    k = j1 + j2
                    w = c.get(k)
                    c[k] = v1 * v2 if w is None else w + v1 * v2
            c = {k: v for k, v in c.items() if not _is_zero(v)}
            eff = min(self.cap, self.eff + other.valuation(), other.eff + self.valuation())
            return Series1._raw(self.name, self.cap, c, self.mode, eff)
        try:
            return self.scale(other)
        except UsageError:
            return NotImplemented

    __rmul__ = __mul__

    def derivative(self):
        c = {}
        for j, v in self._c.items():
            if j:
                c[j - 1] = v * j
        return Series1._raw(self.name, self.cap, c, self.mode, max(self.eff - 1, 0))

    def rename(self, name):
        return Series1._raw(name, self.cap, dict(self._c), self.mode, self.eff)

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return Series1._raw(
            self.name,
            self.cap,
            {k: scalar_float(v) for k, v in self._c.items()},
            FLOAT,
            self.eff,
        )

    def _float_coeffs(self):
        if self._fcache is None:
            self._fcache = [scalar_float(self._c.get(j, 0)) for j in range(self.cap + 1)]
        return self._fcache

    def validity_radius(self) -> float:
        if not self._c:
            return math.inf
        top = self._c.get(self.cap)
        if top is None:
            return math.inf
        lead_deg = self.valuation()
        if lead_deg == self.cap:
            return 0.0
        lead = abs(scalar_float(self._c[lead_deg]))
        return (VALIDITY_REL_TOL * lead / abs(scalar_float(top))) ** (
            1.0 / (self.cap - lead_deg)
        )

    def evaluate(self, x, check=True) -> float:
        x = float(x)
        if check:
            vr = self.validity_radius()
            if abs(x) > vr:
                raise DomainError(
                    f"evaluation point |{x:.6g}| exceeds validity radius "
                    f"{vr:.6g} of {self!r}"
                )
        acc = 0.0
        for c in reversed(self._float_coeffs()):
            acc = acc * x + c
        return acc


# -- constructors ------------------------------------------------------------


def zero2(names, cap, mode=EXACT):
    return Series2(names, cap, {}, mode=mode)


def const2(names, cap, value, mode=EXACT):
    return Series2(names, cap, {(0, 0): value}, mode=mode)


def monomial2(names, cap, i, j, value=1, mode=EXACT):
    return Series2(names, cap, {(i, j): value}, mode=mode)


def variable2(names, cap, which, mode=EXACT):
    """The identity series of one of the pair's variables."""
    if which not in names:
        raise UsageError(f"no variable {which!r} in {names}")
    if names.index(which) == 0:
        return monomial2(names, cap, 1, 0, 1, mode=mode)
    return monomial2(names, cap, 0, 1, 1, mode=mode)


def lift1to2(s: Series1, names, axis) -> Series2:
    """Embed a one-variable series as a two-variable series along an axis."""
    names = tuple(names)
    if s.name != names[axis]:
        raise UsageError(f"series in {s.name!r} cannot sit on axis {axis} of {names}")
    if axis == 0:
        c = {(j, 0): v for j, v in s._c.items()}
    else:
        c = {(0, j): v for j, v in s._c.items()}
    return Series2._raw(names, s.cap, c, s.mode, s.eff)


# -- composition --------------------------------------------------------------


def compose2(a: Series2, s_first: Series2, s_second: Series2) -> Series2:
    """a(s_first, s_second); both substituted series need zero constant term.

    The result lives in the (shared) variable pair of the substituted series.
    """
    s_first._check_compat(s_second)
    if a.cap != s_first.cap:
        raise UsageError(f"cap mismatch: {a.cap} vs {s_first.cap}")
    if a.mode != s_first.mode:
        raise UsageError(f"scalar mode mismatch: {a.mode} vs {s_first.mode}")
    for s, which in ((s_first, a.names[0]), (s_second, a.names[1])):
        if (0, 0) in s._c:
            raise UsageError(
                f"substituted series for {which!r} must have zero constant term"
            )
    names, cap, mode = s_first.names, a.cap, a.mode
    out = zero2(names, cap, mode)
    pow1 = {0: const2(names, cap, 1, mode)}
    pow2 = {0: const2(names, cap, 1, mode)}

    def power(table, base, n):
        if n not in table:
            table[n] = power(table, base, n - 1) * base
        return table[n]

    for (i, j), v in a._c.items():
        # min total degree of the substituted monomial is i + j, so higher
        # a-terms cannot reach the cap
        if i + j > cap:
            continue
        term = power(pow1, s_first, i) * power(pow2, s_second, j)
        out = out + term.scale(v)

    m1 = min((i + j - 1 for (i, j) in a._c if i >= 1), default=None)
    m2 = min((i + j - 1 for (i, j) in a._c if j >= 1), default=None)
    eff = a.eff
    if m1 is not None:
        eff = min(eff, s_first.eff + m1)
    if m2 is not None:
        eff = min(eff, s_second.eff + m2)
    return Series2._raw(names, cap, out._c, mode, eff)


def substitute(a: Series2, which: str, s: Series2) -> Series2:
    """Substitute one variable of ``a`` by the series ``s``.

    ``s`` is expressed in the target variable pair, which must contain the
    untouched variable of ``a``.
    """
    if which not in a.names:
        raise UsageError(f"no variable {which!r} in {a.names}")
    kept = a.names[1 - a.names.index(which)]
    if kept not in s.names:
        raise UsageError(
            f"target pair {s.names} must contain the untouched variable {kept!r}"
        )
    kept_id = variable2(s.names, s.cap, kept, mode=s.mode)
    if a.names.index(which) == 0:
        return compose2(a, s, kept_id)
    return compose2(a, kept_id, s)


def compose1(f: Series1, g: Series1) -> Series1:
    """f(g) for a one-variable series g with zero constant term."""
    if f.cap != g.cap:
        raise UsageError(f"cap mismatch: {f.cap} vs {g.cap}")
    if f.mode != g.mode:
        raise UsageError(f"scalar mode mismatch: {f.mode} vs {g.mode}")
    if 0 in g._c:
        raise UsageError("substituted series must have zero constant term")
    out = Series1(g.name, g.cap, {}, mode=g.mode)
    p = Series1(g.name, g.cap, {0: 1}, mode=g.mode)
    deg = 0
    for j in range(0, f.cap + 1):
        while deg < j:
            p = p * g
            deg += 1
        v = f._c.get(j)
        if v is not None:
            out = out + p.scale(v)
    eff = f.eff
    m = min((j - 1 for j in f._c if j >= 1), default=None)
    if m is not None:
        eff = min(eff, g.eff + m)
    return Series1._raw(g.name, g.cap, out._c, g.mode, eff)


# -- inversion ---------------------------------------------------------------


def reversion(f: Series1, new_name: str = "W") -> Series1:
    """Compositional inverse of f (f(0) = 0, f'(0) != 0): f(g(W)) = W."""
    if not f.is_zero() and 0 in f._c:
        raise UsageError("reversion needs a series with zero constant term")
    f1 = f._c.get(1)
    if f1 is None or _is_zero(f1):
        raise DegeneracyError("reversion needs a nonzero linear coefficient")
    cap, mode = f.cap, f.mode
    one = Fraction(1) if mode == EXACT else 1.0
    g = {1: one / f1}
    fw = Series1._raw(new_name, cap, {j: v for j, v in f._c.items()}, mode, f.eff)
    for k in range(2, cap + 1):
        partial = Series1._raw(new_name, cap, dict(g), mode, cap)
        comp = compose1(fw, partial)
        # with g correct below order k, the first defect of f(g) - W is at
        # order k and is linear in the missing g_k
        r = comp._c.get(k, 0 if mode == EXACT else 0.0)
        gk = -r / f1
        if not _is_zero(gk):
            g[k] = gk
    return Series1._raw(new_name, cap, g, mode, f.eff)


def implicit_solve(f: Series2, solve_for: str, value_name: str) -> Series2:
    """Solve value = f(vars) for one variable as a series in (other, value).

    Needs f(0,0) = 0 and a nonzero first-order coefficient in the solved
    variable. The output pair keeps the solved variable's position, renamed
    to ``value_name``.
    """
    if solve_for not in f.names:
        raise UsageError(f"no variable {solve_for!r} in {f.names}")
    if value_name in f.names:
        raise UsageError(f"value name {value_name!r} collides with {f.names}")
    swapped = f.names.index(solve_for) == 1
    if swapped:
        f = f.swap()
    if (0, 0) in f._c:
        raise UsageError("implicit solve needs f(0,0) = 0")
    c10 = f._c.get((1, 0))
    if c10 is None or _is_zero(c10):
        raise DegeneracyError(
            f"implicit solve for {solve_for!r} needs a nonzero linear coefficient"
        )
    other = f.names[1]
    names = (value_name, other)
    cap, mode = f.cap, f.mode
    value_id = variable2(names, cap, value_name, mode=mode)
    other_id = variable2(names, cap, other, mode=mode)
    sol = zero2(names, cap, mode)
    if mode == FLOAT:
        c10_inv = 1.0 / c10
    elif isinstance(c10, Fraction):
        c10_inv = Fraction(1) / c10
    else:
        c10_inv = c10.inverse()
    # each pass raises the order of the defect by at least one
    for _ in range(cap + 1):
        fs = compose2(f, sol, other_id)
        new = sol + (value_id - fs).scale(c10_inv)
        if new == sol:
            break
        sol = new
    out = Series2._raw(names, cap, sol._c, mode, min(f.eff, sol.eff))
    return out.swap() if swapped else out


def cube_root_normalize(x0: Series1, new_name: str = "W") -> Series1:
    """Find V(W) with x0(V(W)) = W**3 + O(W**(cap+1)).

    ``x0`` must vanish to second order with a nonzero cubic coefficient c3.
    In exact mode the leading slope (1/c3)**(1/3) is kept as an element of
    Q(cbrt(1/c3)); in float mode it is the real cube root.
    """
    for j in (0, 1, 2):
        if j in x0._c:
            raise UsageError(
                f"cube-root normalization needs zero coefficients at degrees 0..2, "
                f"found degree {j}"
            )
    c3 = x0._c.get(3)
    if c3 is None or _is_zero(c3):
        raise DegeneracyError("cube-root normalization needs a nonzero cubic coefficient")
    cap, mode = x0.cap, x0.mode
    if mode == EXACT:
        if not isinstance(c3, Fraction):
            raise UsageError("cube-root normalization expects a rational cubic coefficient")
        a1 = cbrt_exact(Fraction(1) / c3)
    else:
        a1 = real_cbrt(1.0 / c3)
    a = {1: a1}
    xw = Series1._raw(new_name, cap, dict(x0._c), mode, x0.eff)
    # 3*c3*a1**2 = 3/a1, so each order divides by that unit
    for m in range(2, cap - 1):
        partial = Series1._raw(new_name, cap, dict(a), mode, cap)
        comp = compose1(xw, partial)
        r = comp._c.get(m + 2)
        if r is None or _is_zero(r):
            continue
        a[m] = -r * a1 / 3 if mode == EXACT else -r * a1 / 3.0
    eff = min(x0.eff, cap - 2) if cap >= 2 else x0.eff
    return Series1._raw(new_name, cap, a, mode, eff)


# -- serialization -------------------------------------------------------------


def _radical_info(coeffs):
    rad = None
    for v in coeffs:
        if isinstance(v, CubicRadical):
            if rad is None:
                rad = v.rad
            elif rad != v.rad:
                raise UsageError("series mixes different radicands")
    return rad


def _term_fields(v, rad):
    if rad is None:
        return f"{v.numerator} {v.denominator}"
    if isinstance(v, CubicRadical):
        a0, a1, a2 = v.a0, v.a1, v.a2
    else:
        a0, a1, a2 = Fraction(v), Fraction(0), Fraction(0)
    return (
        f"{a0.numerator} {a0.denominator} {a1.numerator} {a1.denominator} "
        f"{a2.numerator} {a2.denominator}"
    )


def series2_text(s: Series2) -> str:
    """Plain-text table: one term per line, deterministic order."""
    lines = [
        "# series2 v1",
        f"# names: {s.names[0]} {s.names[1]}",
        f"# cap: {s.cap}",
        f"# eff: {s.eff}",
        f"# mode: {s.mode}",
    ]
    if s.mode == FLOAT:
        lines.append("# term: i j value")
        for i, j, v in s.terms():
            lines.append(f"{i} {j} {v!r}")
    else:
        rad = _radical_info(s._c.values())
        if rad is None:
            lines.append("# term: i j num den")
        else:
            lines.append(f"# radicand: {rad}")
            lines.append("# term: i j n0 d0 n1 d1 n2 d2   (a0 + a1 c + a2 c^2, c = cbrt(radicand))")
        for i, j, v in s.terms():
            lines.append(f"{i} {j} {_term_fields(v, rad)}")
    return "\n".join(lines) + "\n"


def series1_text(s: Series1) -> str:
    lines = [
        "# series1 v1",
        f"# name: {s.name}",
        f"# cap: {s.cap}",
        f"# eff: {s.eff}",
        f"# mode: {s.mode}",
    ]
    if s.mode == FLOAT:
        lines.append("# term: j value")
        for j, v in s.terms():
            lines.append(f"{j} {v!r}")
    else:
        rad = _radical_info(s._c.values())
        if rad is None:
            lines.append("# term: j num den")
        else:
            lines.append(f"# radicand: {rad}")
            lines.append("# term: j n0 d0 n1 d1 n2 d2   (a0 + a1 c + a2 c^2, c = cbrt(radicand))")
        for j, v in s.terms():
            lines.append(f"{j} {_term_fields(v, rad)}")
    return "\n".join(lines) + "\n"
