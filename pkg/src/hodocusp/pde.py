"""Boundary data and series solutions of the hodograph potential equation.

The potential B(h, v) solves  h*B_hh + 2*B_h = alpha(h)*B_vv  with
alpha(0) = 4. Writing B = sum_k h**k B_k(v), the equation becomes the
recurrence

    B_{k+1} = [4*B_k'' + sum_{l=1..k} alpha_l * B_{k-l}''] / ((k+1)(k+2)),

so the whole series is determined by the boundary row B_0(v). For
alpha == 4 the substitution C = h*B, u = v/2 turns the equation into
h*C_hh = C_uu, whose solutions with analytic seed g1(u) are the series

    G(h, u) = g1(u)*h + sum_{k>=1} g1^(2k)(u) / (k! (k+1)!) * h**(k+1).

This module owns both sides of that bridge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegeneracyError, UsageError
from .scalars import QComplex, parse_exact, parse_point
from .series import (
    EXACT,
    EXACT_CAP_CEILING,
    FLOAT,
    Series2,
    variable2,
)


class ProblemData:
    """Boundary Taylor data b0_j, the alpha coefficients, and the base point.

    ``alpha`` holds alpha_j for j >= 1 (alpha(0) = 4 is fixed) and is always a
    finite polynomial truncation: absent entries mean exact zeros. ``b0`` is
    different: entries beyond the list are unknown data unless
    ``b0_polynomial=True`` declares the list to be the complete polynomial.
    """

    __slots__ = ("b0", "alpha", "v_star", "b0_polynomial")

    def __init__(self, b0, alpha=(), v_star=0, b0_polynomial=False):
        self.b0 = tuple(parse_exact(x, f"b0[{i}]") for i, x in enumerate(b0))
        self.alpha = tuple(parse_exact(x, f"alpha[{i + 1}]") for i, x in enumerate(alpha))
        self.v_star = parse_exact(v_star, "v_star")
        self.b0_polynomial = bool(b0_polynomial)

    def b0_at(self, j: int) -> Fraction:
        if j < len(self.b0):
            return self.b0[j]
        if self.b0_polynomial:
            return Fraction(0)
        raise UsageError(f"boundary coefficient b0_{j} is not specified")

    def alpha_at(self, l: int) -> Fraction:
        if l < 1:
            raise UsageError("alpha indices start at 1")
        return self.alpha[l - 1] if l - 1 < len(self.alpha) else Fraction(0)

    def missing_b0(self, order: int) -> list[int]:
        """Indices required to determine all coefficients of total degree <= order."""
        if self.b0_polynomial:
            return []
        return [j for j in range(2 * order + 1) if j >= len(self.b0)]

    @property
    def t_star(self) -> Fraction:
        return self.b0_at(1)

    @property
    def x_star(self) -> Fraction:
        return self.t_star * self.v_star - self.b0_at(0)

    @property
    def b11(self) -> Fraction:
        return 12 * self.b0_at(3)

    def require_singular(self):
        """Cusp constructions need b02 = 0 (vanishing Jacobian) and b03 != 0."""
        if self.b0_at(2) != 0:
            raise DegeneracyError(
                "degenerate: b02 must be 0 (the hodograph Jacobian must vanish "
                "at the base point)"
            )
        if self.b0_at(3) == 0:
            raise DegeneracyError("degenerate: b03 must be nonzero")

    def __eq__(self, other):
        if not isinstance(other, ProblemData):
            return NotImplemented
        return (
            self.b0 == other.b0
            and self.alpha == other.alpha
            and self.v_star == other.v_star
            and self.b0_polynomial == other.b0_polynomial
        )

    def __repr__(self):
        return (
            f"ProblemData(b0=<{len(self.b0)} coeffs>, alpha=<{len(self.alpha)}>, "
            f"v_star={self.v_star}, polynomial={self.b0_polynomial})"
        )


def canonical_problem() -> ProblemData:
    """The reference cusp instance: b03 = 1/12 (so b11 = 1), alpha == 4."""
    return ProblemData(
        b0=(0, 0, 0, Fraction(1, 12)), alpha=(), v_star=0, b0_polynomial=True
    )


@dataclass(frozen=True)
class PotentialSolution:
    """Triangle of potential coefficients b_{kj} plus the full working rows."""

    series: Series2
    problem: ProblemData
    order: int
    rows: tuple  # rows[k][j] = b_{kj}, j up to 2*order - 2*k

    @property
    def mode(self):
        return self.series.mode

    def row_coefficient(self, k: int, j: int):
        if k < len(self.rows) and j < len(self.rows[k]):
            return self.rows[k][j]
        return 0.0 if self.mode == FLOAT else Fraction(0)


def _second_derivative_row(row):
    return [(j + 1) * (j + 2) * row[j + 2] for j in range(len(row) - 2)]


def expand_potential(problem: ProblemData, order: int, mode=EXACT) -> PotentialSolution:
    """Expand the potential in powers of h from the boundary row.

    Determining every coefficient of total degree <= order requires boundary
    data b0_j up to j = 2*order (row k at degree j pulls on b0_{j+2k}).
    """
    if order < 1:
        raise UsageError("order must be at least 1")
    if mode == EXACT and order > EXACT_CAP_CEILING:
        raise UsageError(f"exact mode is capped at order {EXACT_CAP_CEILING}")
    missing = problem.missing_b0(order)
    if missing:
        raise UsageError(
            "insufficient boundary data for order "
            f"{order}: missing b0 indices {missing} (supply them or set "
            "b0_polynomial=True to declare a zero tail)"
        )
    width = 2 * order + 1
    if mode == FLOAT:
        row0 = [float(problem.b0_at(j)) for j in range(width)]
        alpha = [float(problem.alpha_at(l)) for l in range(1, order + 1)]
    else:
        row0 = [problem.b0_at(j) for j in range(width)]
        alpha = [problem.alpha_at(l) for l in range(1, order + 1)]
    rows = [row0]
    dd = [_second_derivative_row(row0)]
    for k in range(order):
        nxt_len = width - 2 * (k + 1)
        if nxt_len <= 0:
            rows.append([])
            dd.append([])
            continue
        acc = [4 * dd[k][j] for j in range(nxt_len)]
        for l in range(1, k + 1):
            al = alpha[l - 1]
            if al:
                src = dd[k - l]
                for j in range(nxt_len):
                    acc[j] += al * src[j]
        den = (k + 1) * (k + 2)
        nxt = [a / den for a in acc]
        rows.append(nxt)
        dd.append(_second_derivative_row(nxt))
    coeffs = {}
    for k in range(order + 1):
        row = rows[k]
        for j in range(min(len(row), order - k + 1)):
            coeffs[(k, j)] = row[j]
    series = Series2(("h", "V"), order, coeffs, mode=mode)
    return PotentialSolution(series, problem, order, tuple(tuple(r) for r in rows))


def alpha_series(problem: ProblemData, names, cap, mode=EXACT) -> Series2:
    """alpha(h) = 4 + sum alpha_l h**l as a series in the given pair."""
    c = {(0, 0): Fraction(4)}
    for l in range(1, cap + 1):
        al = problem.alpha_at(l)
        if al:
            c[(l, 0)] = al
    s = Series2(names, cap, c, mode=EXACT)
    return s.to_float() if mode == FLOAT else s


def potential_residual(sol: PotentialSolution) -> Series2:
    """Series residual h*B_hh + 2*B_h - alpha(h)*B_vv; zero to effective order."""
    B = sol.series
    h = variable2(B.names, B.cap, "h", mode=B.mode)
    al = alpha_series(sol.problem, B.names, B.cap, B.mode)
    return h * B.derivative("h").derivative("h") + B.derivative("h").scale(2) - al * B.derivative("V").derivative("V")


def h_scaled(series: Series2) -> Series2:
    """C = h*B at cap+1; turns the potential equation into h*C_hh = alpha*C_vv."""
    up = series.recap(series.cap + 1)
    h = variable2(up.names, up.cap, up.names[0], mode=up.mode)
    return h * up


def h_unscaled(series: Series2) -> Series2:
    """Inverse of h_scaled; the input must be divisible by h."""
    stray = [(i, j) for (i, j, v) in series.terms() if i == 0]
    if stray:
        raise UsageError(f"series is not divisible by {series.names[0]}: terms {stray}")
    c = {(i - 1, j): v for (i, j, v) in series.terms()}
    return Series2(
        series.names, series.cap - 1, c, mode=series.mode, eff=series.eff - 1
    )


def scaled_residual(C: Series2, problem: ProblemData) -> Series2:
    """Series residual h*C_hh - alpha(h)*C_vv."""
    h = variable2(C.names, C.cap, C.names[0], mode=C.mode)
    al = alpha_series(problem, C.names, C.cap, C.mode)
    return h * C.derivative(C.names[0]).derivative(C.names[0]) - al * C.derivative(
        C.names[1]
    ).derivative(C.names[1])


@dataclass(frozen=True)
class RelationCheck:
    name: str
    lhs: Fraction
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def relation_checklist(sol: PotentialSolution) -> list[RelationCheck]:
    """The eight closed-form links between low rows and the boundary data.

    Row 1 is 2*B0'' and row 2 is (8*B0'''' + alpha1*B0'')/6, which pins
    b_{1j} and b_{2j} to single boundary coefficients; checked exactly.
    Note the (1,4) slot: the recurrence gives 60*b06 (not b05).
    """
    if sol.mode != EXACT:
        raise UsageError("the relation checklist requires exact mode")
    if sol.order < 3:
        raise UsageError("the relation checklist needs order >= 3")
    p = sol.problem
    a1 = p.alpha_at(1)
    specs = [
        ("b10 = 4*b02", (1, 0), 4 * p.b0_at(2)),
        ("b11 = 12*b03", (1, 1), 12 * p.b0_at(3)),
        ("b12 = 24*b04", (1, 2), 24 * p.b0_at(4)),
        ("b13 = 40*b05", (1, 3), 40 * p.b0_at(5)),
        ("b14 = 60*b06", (1, 4), 60 * p.b0_at(6)),
        ("b20 = 32*b04 + alpha1*b02/3", (2, 0), 32 * p.b0_at(4) + a1 * p.b0_at(2) / 3),
        ("b21 = 160*b05 + alpha1*b03", (2, 1), 160 * p.b0_at(5) + a1 * p.b0_at(3)),
        ("b22 = 480*b06 + 2*alpha1*b04", (2, 2), 480 * p.b0_at(6) + 2 * a1 * p.b0_at(4)),
    ]
    return [
        RelationCheck(name, sol.row_coefficient(k, j), rhs)
        for name, (k, j), rhs in specs
    ]


# -- analytic seed functions ---------------------------------------------------


@dataclass(frozen=True)
class PolyTerm:
    """Polynomial component, coefficients ascending."""

    coeffs: tuple

    def differentiated(self):
        return PolyTerm(tuple((j + 1) * c for j, c in enumerate(self.coeffs[1:])))

    def value_at(self, u):
        # start from the zero of u's kind so constant rows stay QComplex
        acc = QComplex(0) if isinstance(u, QComplex) else 0j
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def derivative_at(self, u, m):
        acc = QComplex(0) if isinstance(u, QComplex) else 0j
        for j in range(len(self.coeffs) - 1, m - 1, -1):
            acc = acc * u + self.coeffs[j] * math.perm(j, m)
        return acc


@dataclass(frozen=True)
class PoleTerm:
    """Rational component c / (a - u)**n."""

    a: object
    c: object
    n: int = 1

    def differentiated(self):
        return PoleTerm(self.a, self.n * self.c, self.n + 1)

    def _consts_for(self, u):
        a, c = self.a, self.c
        if not isinstance(u, QComplex):
            if isinstance(a, QComplex):
                a = a.to_complex()
            if isinstance(c, QComplex):
                c = c.to_complex()
            else:
                c = complex(c)
        return a, c

    def value_at(self, u):
        a, c = self._consts_for(u)
        return c / (a - u) ** self.n

    def derivative_at(self, u, m):
        # d^m/du^m (a-u)^(-n) = (n)(n+1)...(n+m-1) (a-u)^(-n-m)
        rising = 1
        for i in range(m):
            rising *= self.n + i
        a, c = self._consts_for(u)
        return c * rising / (a - u) ** (self.n + m)


class SeedFunction:
    """g1(u) as a finite sum of polynomial and simple-pole components."""

    __slots__ = ("terms", "exact")

    def __init__(self, terms):
        terms = tuple(terms)
        if not terms:
            raise UsageError("seed function needs at least one component")
        exact = True
        for t in terms:
            if isinstance(t, PolyTerm):
                exact &= all(isinstance(c, (int, Fraction)) for c in t.coeffs)
            elif isinstance(t, PoleTerm):
                exact &= isinstance(t.a, QComplex) and isinstance(
                    t.c, (int, Fraction, QComplex)
                )
            else:
                raise UsageError(f"unknown seed component {type(t).__name__}")
        self.terms = terms
        self.exact = exact

    @classmethod
    def from_config(cls, obj, field="g1"):
        """Mini-grammar: list of {poly: [c0, c1, ...]} / {pole: {a: .., c: ..}}."""
        if isinstance(obj, dict):
            obj = [obj]
        if not isinstance(obj, (list, tuple)):
            raise UsageError(f"{field}: expected a list of components")
        terms = []
        for idx, comp in enumerate(obj):
            where = f"{field}[{idx}]"
            if not isinstance(comp, dict) or len(comp) != 1:
                raise UsageError(f"{where}: each component is one of poly:/pole:")
            (kind, body), = comp.items()
            if kind == "poly":
                if not isinstance(body, (list, tuple)):
                    raise UsageError(f"{where}: poly needs a coefficient list")
                terms.append(
                    PolyTerm(tuple(parse_exact(c, f"{where}.poly[{i}]") for i, c in enumerate(body)))
                )
            elif kind == "pole":
                if not isinstance(body, dict) or "a" not in body or "c" not in body:
                    raise UsageError(f"{where}: pole needs keys a and c")
                a = parse_point(body["a"], f"{where}.pole.a")
                c = parse_point(body["c"], f"{where}.pole.c")
                if isinstance(c, QComplex) and c.is_real():
                    c = c.re
                terms.append(PoleTerm(a, c, 1))
            else:
                raise UsageError(f"{where}: unknown component kind {kind!r}")
        return cls(terms)

    def differentiated(self) -> "SeedFunction":
        """Symbolic derivative, component by component."""
        out = []
        for t in self.terms:
            d = t.differentiated()
            if isinstance(d, PolyTerm) and not d.coeffs:
                continue
            out.append(d)
        if not out:
            out = [PolyTerm((Fraction(0),))]
        return SeedFunction(out)

    def value_at(self, u):
        u = self._coerce_point(u)
        total = None
        for t in self.terms:
            v = t.value_at(u)
            total = v if total is None else total + v
        return total

    def derivative_at(self, u, m: int):
        """m-th derivative at u by the closed component formulas."""
        u = self._coerce_point(u)
        total = None
        for t in self.terms:
            v = t.derivative_at(u, m)
            total = v if total is None else total + v
        return total

    def _coerce_point(self, u):
        if isinstance(u, QComplex):
            if not self.exact:
                return u.to_complex()
            return u
        if isinstance(u, (int, Fraction)):
            if self.exact:
                return QComplex(u)
            return complex(u)
        if isinstance(u, complex):
            return u
        return complex(float(u))

    def poles(self):
        return tuple(t.a for t in self.terms if isinstance(t, PoleTerm))

    def is_entire(self) -> bool:
        return not self.poles()

    def min_pole_distance2(self, u):
        """Squared distance from u to the nearest pole; None when entire.

        Exact (Fraction) when both the poles and u are exact.
        """
        ps = self.poles()
        if not ps:
            return None
        u = self._coerce_point(u)
        best = None
        for a in ps:
            if isinstance(a, QComplex) and isinstance(u, QComplex):
                d2 = (a - u).abs2()
            else:
                ac = a.to_complex() if isinstance(a, QComplex) else complex(a)
                uc = u.to_complex() if isinstance(u, QComplex) else complex(u)
                d2 = abs(ac - uc) ** 2
            if best is None or d2 < best:
                best = d2
        return best

    def nearest_pole(self, u):
        ps = self.poles()
        if not ps:
            return None
        u_f = u.to_complex() if isinstance(u, QComplex) else complex(u)

        def dist(a):
            a_f = a.to_complex() if isinstance(a, QComplex) else complex(a)
            return abs(a_f - u_f)

        return min(ps, key=dist)

    def assert_not_pole(self, u, field="u"):
        d2 = self.min_pole_distance2(u)
        if d2 is not None and d2 == 0:
            from .errors import DomainError

            raise DomainError(f"{field} sits exactly on a pole of the seed function")


class KorobeinikSeries:
    """G(h, u) = g1(u) h + sum_{k>=1} g1^(2k)(u)/(k!(k+1)!) h^(k+1).

    Coefficient functions are closures over the seed; nothing is tabulated
    until a value is requested.
    """

    __slots__ = ("seed", "u_star", "cap")

    def __init__(self, seed: SeedFunction, u_star, cap: int):
        if cap < 1:
            raise UsageError("cap must be at least 1")
        self.seed = seed
        self.u_star = u_star
        self.cap = cap

    def coefficient(self, n: int, u):
        """g_n(u); n >= 1."""
        if n < 1:
            raise UsageError("coefficient index starts at 1")
        if n == 1:
            return self.seed.value_at(u)
        k = n - 1
        d = self.seed.derivative_at(u, 2 * k)
        return d / (math.factorial(k) * math.factorial(k + 1))

    def coefficient_fn(self, n: int):
        return lambda u: self.coefficient(n, u)

    def partial_sum(self, h, u, terms: int | None = None):
        """sum_{n=1..terms} g_n(u) h^n (complex or exact, following inputs)."""
        n_terms = self.cap if terms is None else min(terms, self.cap)
        total = None
        hp = None
        for n in range(1, n_terms + 1):
            hp = h if hp is None else hp * h
            v = self.coefficient(n, u) * hp
            total = v if total is None else total + v
        return total

    def partial_sums(self, h, u, terms: int | None = None):
        n_terms = self.cap if terms is None else min(terms, self.cap)
        out = []
        total = None
        hp = None
        for n in range(1, n_terms + 1):
            hp = h if hp is None else hp * h
            v = self.coefficient(n, u) * hp
            total = v if total is None else total + v
            out.append(total)
        return out

    def recurrence_residuals(self, u_points, kmax: int | None = None):
        """Exact residuals k(k+1) g_{k+1}(u) - g_k''(u) for k = 1..kmax.

        g_k'' is computed through the symbolic derivative chain
        g_{k+1} = g_k'' / (k (k+1)), independent of the closed factorial
        formula used by :meth:`coefficient`; both routes must agree.
        """
        kmax = self.cap - 1 if kmax is None else kmax
        out = []
        gk = self.seed  # symbolic g_k, starting at k = 1
        for k in range(1, kmax + 1):
            gk_dd = gk.differentiated().differentiated()
            for u in u_points:
                lhs = self.coefficient(k + 1, u) * (k * (k + 1))
                rhs = gk_dd.value_at(u)
                out.append(lhs - rhs)
            gk = SeedFunction(
                [_scale_term(t, Fraction(1, k * (k + 1))) for t in gk_dd.terms]
            )
        return out


def _scale_term(t, s):
    if isinstance(t, PolyTerm):
        return PolyTerm(tuple(c * s for c in t.coeffs))
    return PoleTerm(t.a, t.c * s, t.n)


def korobeinik_series(seed: SeedFunction, u_star, cap: int) -> KorobeinikSeries:
    """Series solution of h*G_hh = G_uu with boundary row g1 about u_star."""
    seed.assert_not_pole(u_star, "u_star")
    return KorobeinikSeries(seed, u_star, cap)


@dataclass(frozen=True)
class BridgeCheck:
    """Term-by-term comparison of the two constructions at alpha == 4."""

    ok: bool
    order: int
    checked: int
    mismatches: tuple


def bridge_check(seed: SeedFunction, u_star, order: int, alpha=()) -> BridgeCheck:
    """Expand the potential from B0(v) = g1(v/2) and compare rows.

    Row k of the potential must equal the Taylor coefficients of
    g1^(2k)(v/2) / (k!(k+1)!) about v_star = 2*u_star, i.e.

        b_{kj} = (1/2)^j g1^(2k+j)(u_star) / (j! k! (k+1)!).
    """
    if any(parse_exact(a, "alpha") != 0 for a in alpha):
        raise UsageError("the series bridge holds only for alpha == 4 (all alpha_j = 0)")
    if not seed.exact:
        raise UsageError("bridge check needs an exact seed function")
    u_star = parse_exact(u_star, "u_star")
    seed.assert_not_pole(QComplex(u_star), "u_star")
    half = Fraction(1, 2)
    b0 = []
    for j in range(2 * order + 1):
        d = seed.derivative_at(QComplex(u_star), j)
        if not d.is_real():
            raise UsageError("bridge check needs a seed that is real on the real axis")
        b0.append(half**j * d.re / math.factorial(j))
    problem = ProblemData(b0=b0, alpha=(), v_star=2 * u_star)
    sol = expand_potential(problem, order)
    mismatches = []
    checked = 0
    for k in range(order + 1):
        for j in range(order - k + 1):
            got = sol.row_coefficient(k, j)
            d = seed.derivative_at(QComplex(u_star), 2 * k + j)
            want = (
                half**j
                * d.re
                / (math.factorial(j) * math.factorial(k) * math.factorial(k + 1))
            )
            checked += 1
            if got != want:
                mismatches.append((k, j, got, want))
    return BridgeCheck(not mismatches, order, checked, tuple(mismatches))
