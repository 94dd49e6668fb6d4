"""Convergence-domain analysis of the series G(h, u) = sum g_n(u) h^n.

For a seed g1 with poles, the h-series at fixed u has radius of
convergence (d(u)/2)**2 where d(u) is the distance to the nearest pole:
the coefficient ratios |g_{n+1}(u)/g_n(u)| approach 4/d(u)**2 like
L(1 + a/n), so a one-step Richardson extrapolation of the ratio sequence
recovers the limit to high accuracy. Pointwise radii assemble into the
product-domain statement: the series converges on the bidisc
{|u - u*| < R} x {|h| < R1} exactly when g1 is analytic in
|u - u*| < R + 2 sqrt(R1), and the union of all such bidiscs with
R + 2 sqrt(R1) = R0 is {|u - u*| + 2 sqrt(|h|) < R0}.

Everything that can be decided in exact rational arithmetic is: squared
pole distances, bidisc classification, membership tests, and the
divergence-witness confirmation (whose term ratios overflow float range
long before the heuristic window is reached). Floats appear only in the
final ratio-limit extrapolation and in reports.
"""

from __future__ import annotations

import cmath
import math
import random
import statistics
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, UsageError
from .pde import (
    KorobeinikSeries,
    ProblemData,
    SeedFunction,
    expand_potential,
    h_scaled,
    korobeinik_series,
)
from .scalars import (
    QComplex,
    lt_dist_vs_radius,
    lt_sum_of_roots,
    parse_exact,
    parse_point,
    rational_sqrt,
)

RATIO_TAIL = 10
SPREAD_TOL = 0.05
HEURISTIC_MARGIN = 1e-3
WITNESS_K_CAP = 600


def _as_float_point(u) -> complex:
    return u.to_complex() if isinstance(u, QComplex) else complex(u)


def _mag2(v):
    """|v|**2, exact for QComplex/Fraction inputs."""
    if isinstance(v, QComplex):
        return v.abs2()
    if isinstance(v, (int, Fraction)):
        return Fraction(v) ** 2
    a = abs(complex(v))
    return a * a


def _exact_abs(h):
    """|h| as a Fraction when that is exact, else None."""
    if isinstance(h, (int, Fraction)):
        return abs(Fraction(h))
    if isinstance(h, QComplex):
        if h.is_real():
            return abs(h.re)
        return rational_sqrt(h.abs2())
    return None


def term_magnitudes2(ks: KorobeinikSeries, u, K: int):
    """|g_n(u)|**2 for n = 1..K; Fractions on the exact path."""
    return [_mag2(ks.coefficient(n, u)) for n in range(1, K + 1)]


def ratio_points(mags2, h_abs2=None):
    """Indexed term ratios (n, |t_{n+1}|/|t_n|), skipping zero terms.

    mags2[n-1] is |g_n|**2; with h_abs2 the ratios include the |h| factor.
    """
    pts = []
    for n in range(1, len(mags2)):
        a, b = mags2[n - 1], mags2[n]
        if a == 0 or b == 0:
            continue
        q = b / a
        if h_abs2 is not None:
            q = q * h_abs2
        pts.append((n, math.sqrt(float(q))))
    return pts


def richardson_limit(pts, tail=RATIO_TAIL):
    """Extrapolated limit of an indexed ratio sequence.

    Fits the model ratio_n = L (1 + a/n), for which
    L = n ratio_n - (n-1) ratio_{n-1} is exact; returns the median of the
    trailing extrapolants and their relative spread.
    """
    pts = pts[-tail:]
    ls = []
    for (pn, pr), (n, r) in zip(pts, pts[1:]):
        if n == pn + 1:
            ls.append(n * r - pn * pr)
    ls = ls[-5:]
    if len(ls) < 3:
        return math.nan, math.inf
    med = statistics.median(ls)
    if med == 0:
        return 0.0, 0.0 if max(ls) == min(ls) else math.inf
    return med, (max(ls) - min(ls)) / abs(med)


@dataclass(frozen=True)
class ConvergenceReport:
    """Ratio-test summary of the h-series at one probe point."""

    u: complex
    ratios: tuple
    estimated_radius: float
    predicted_radius: float
    verdict: str  # converges | diverges | inconclusive

    def csv_row(self) -> str:
        return (
            f"{self.u.real!r},{self.u.imag!r},"
            f"{self.estimated_radius!r},{self.predicted_radius!r},{self.verdict}"
        )


def predicted_radius(seed: SeedFunction, u) -> float:
    """(d(u)/2)**2 with d(u) the distance to the nearest pole; inf if entire."""
    d2 = seed.min_pole_distance2(u)
    if d2 is None:
        return math.inf
    return float(d2) / 4.0


def radius_probe(seed: SeedFunction, u, K: int = 40) -> ConvergenceReport:
    """Estimate the h-radius at fixed u from K coefficient ratios."""
    if K < 20:
        raise UsageError("radius probe needs K >= 20 terms")
    u = parse_point(u, "u")
    seed.assert_not_pole(u, "u")
    ks = korobeinik_series(seed, u, K)
    mags2 = term_magnitudes2(ks, u, K)
    pts = ratio_points(mags2)
    pred = predicted_radius(seed, u)
    uf = _as_float_point(u)
    ratios = tuple(r for _, r in pts)
    if seed.is_entire():
        return ConvergenceReport(uf, ratios, math.inf, math.inf, "converges")
    limit, spread = richardson_limit(pts)
    if not math.isfinite(limit) or spread > SPREAD_TOL:
        return ConvergenceReport(uf, ratios, math.nan, pred, "inconclusive")
    est = math.inf if limit <= 1e-12 else 1.0 / limit
    return ConvergenceReport(uf, ratios, est, pred, "converges")


def divergence_heuristic(ratios2) -> bool:
    """Last-window squared term ratios above (1 + margin)**2, non-decreasing.

    Desk-scale surrogate for divergence, run on squared ratios so the
    exact path never takes a square root; Fractions and floats both work.
    """
    if len(ratios2) < RATIO_TAIL:
        return False
    w = ratios2[-RATIO_TAIL:]
    lo = (1.0 + HEURISTIC_MARGIN) ** 2
    return all(r > lo for r in w) and w[-1] >= w[0]


def witness_terms(pred_ratio: float) -> int:
    """Terms needed before the heuristic window clears 1 + margin.

    The term ratio climbs like pred_ratio (1 - 3/(2n)); solving
    pred_ratio (1 - 3/(2n)) > 1 + margin with a factor-2 safety gives
    n > 3 / (1 - (1 + 2 margin)/pred_ratio).
    """
    thresh = 1.0 + 2.0 * HEURISTIC_MARGIN
    if pred_ratio <= thresh:
        return WITNESS_K_CAP
    need = 3.0 / (1.0 - thresh / pred_ratio)
    return max(40, min(WITNESS_K_CAP, math.ceil(need) + RATIO_TAIL))


def confirm_divergence(seed: SeedFunction, u, h_abs, K: int):
    """Exact heuristic run at |h| = h_abs; returns (confirmed, float ratios).

    Term ratios are compared in exact rational arithmetic (squared), since
    the terms themselves overflow floats for the K this can need.
    """
    u = parse_point(u, "u")
    ks = korobeinik_series(seed, u, K)
    mags2 = term_magnitudes2(ks, u, K)
    h2 = Fraction(h_abs) ** 2 if not isinstance(h_abs, float) else h_abs * h_abs
    sq = []
    for n in range(1, len(mags2)):
        a, b = mags2[n - 1], mags2[n]
        if a == 0 or b == 0:
            continue
        sq.append(b * h2 / a)
    confirmed = divergence_heuristic(sq)
    tail = tuple(math.sqrt(float(s)) for s in sq[-RATIO_TAIL:])
    return confirmed, tail


@dataclass(frozen=True)
class Bidisc:
    """Product domain {|h| < R1} x {|u - u*| < R}."""

    u_star: object
    R1: Fraction
    R: Fraction

    def __post_init__(self):
        if self.R1 <= 0 or self.R <= 0:
            raise UsageError("bidisc radii must be positive")


@dataclass(frozen=True)
class BidiscSample:
    u: complex
    h: complex
    predicted: str  # converges | diverges | boundary
    observed: str   # converges | diverges | inconclusive

    @property
    def consistent(self) -> bool:
        if self.observed == "inconclusive" or self.predicted == "boundary":
            return True
        return self.predicted == self.observed


@dataclass(frozen=True)
class DivergenceWitness:
    u: complex
    h: float
    predicted_ratio: float
    terms: int
    tail_ratios: tuple
    confirmed: bool


@dataclass(frozen=True)
class BidiscReport:
    u_star: complex
    R: float
    R1: float
    analytic: bool          # g1 analytic in |u - u*| < R + 2 sqrt(R1) (exact)
    pole_distance: float    # nearest pole distance, inf when entire
    samples: tuple          # BidiscSample
    witness: object         # DivergenceWitness | None

    @property
    def samples_consistent(self) -> bool:
        return all(s.consistent for s in self.samples)


def bidisc_check(
    seed: SeedFunction,
    u_star,
    R,
    R1,
    samples: int = 24,
    probe_terms: int = 40,
    rng_seed: int = 7,
) -> BidiscReport:
    """Exact bidisc classification plus empirical spot checks.

    Classifies (exactly, from pole positions) whether the seed is analytic
    in the open disc |u - u*| < R + 2 sqrt(R1); samples points of the
    bidisc and compares the exact pointwise criterion 4|h| < d(u)**2
    against the observed ratio behaviour; when a pole falls strictly
    inside the disc, constructs a bidisc point that is predicted to
    diverge and confirms it with the exact ratio heuristic.
    """
    R = parse_exact(R, "R")
    R1 = parse_exact(R1, "R1")
    Bidisc(u_star, R1, R)  # validates positivity
    u0 = parse_point(u_star, "u_star")
    seed.assert_not_pole(u0, "u_star")
    exact = seed.exact and isinstance(u0, QComplex)

    analytic = True
    nearest_d2 = None
    for a in seed.poles():
        d2 = _pole_d2(a, u0)
        if nearest_d2 is None or float(d2) < float(nearest_d2):
            nearest_d2 = d2
        if exact and isinstance(d2, Fraction):
            inside = lt_dist_vs_radius(d2, R, R1)
        else:
            inside = math.sqrt(float(d2)) < float(R) + 2.0 * math.sqrt(float(R1))
        if inside:
            analytic = False

    ks = korobeinik_series(seed, u0, probe_terms)
    rnd = random.Random(rng_seed)
    rows = []
    for i in range(samples):
        u, h, h_abs = _sample_bidisc_point(rnd, u0, R, R1, complex_h=(i % 4 == 3))
        rows.append(_classify_sample(seed, ks, u, h, h_abs, probe_terms))

    witness = None
    if not analytic:
        witness = _divergence_witness(seed, u0, R, R1)

    pole_d = math.inf if nearest_d2 is None else math.sqrt(float(nearest_d2))
    return BidiscReport(
        u_star=_as_float_point(u0),
        R=float(R),
        R1=float(R1),
        analytic=analytic,
        pole_distance=pole_d,
        samples=tuple(rows),
        witness=witness,
    )


def _pole_d2(a, u0):
    if isinstance(a, QComplex) and isinstance(u0, QComplex):
        return (a - u0).abs2()
    af = _as_float_point(a)
    uf = _as_float_point(u0)
    return abs(af - uf) ** 2


def _sample_bidisc_point(rnd, u0, R, R1, complex_h=False):
    """Rational point of the open bidisc; |h| stays exactly rational."""
    den = 128
    while True:
        xr = Fraction(rnd.uniform(-1.0, 1.0)).limit_denominator(den)
        yr = Fraction(rnd.uniform(-1.0, 1.0)).limit_denominator(den)
        if 0 < xr * xr + yr * yr < 1:
            break
    if isinstance(u0, QComplex):
        u = QComplex(u0.re + R * xr, u0.im + R * yr)
    else:
        u = complex(u0) + complex(float(R * xr), float(R * yr))
    while True:
        m = Fraction(rnd.uniform(0.0, 1.0)).limit_denominator(den) * R1
        if m != 0:
            break
    if complex_h:
        h = QComplex(m * Fraction(3, 5), rnd.choice((1, -1)) * m * Fraction(4, 5))
    else:
        h = QComplex(rnd.choice((1, -1)) * m)
    return u, h, m


def _classify_sample(seed, ks, u, h, h_abs, K):
    d2 = seed.min_pole_distance2(u)
    if d2 is None:
        predicted = "converges"
    elif isinstance(d2, Fraction) and isinstance(h_abs, Fraction):
        four_h = 4 * h_abs
        if four_h < d2:
            predicted = "converges"
        elif four_h > d2:
            predicted = "diverges"
        else:
            predicted = "boundary"
    else:
        predicted = "converges" if 4.0 * float(h_abs) < float(d2) else "diverges"
    observed = _observe_point(ks, u, h_abs, K)
    return BidiscSample(
        u=_as_float_point(u),
        h=_as_float_point(h),
        predicted=predicted,
        observed=observed,
    )


def _observe_point(ks, u, h_abs, K) -> str:
    """Ratio-tail verdict for the series at a concrete (u, h)."""
    mags2 = term_magnitudes2(ks, u, K)
    h2 = h_abs * h_abs if isinstance(h_abs, Fraction) else float(h_abs) ** 2
    pts = ratio_points(mags2, h2)
    if len(pts) < RATIO_TAIL:
        return "converges"  # terminating terms: polynomial seed
    tail = [r for _, r in pts[-5:]]
    med = statistics.median(tail)
    if med < 1.0 - HEURISTIC_MARGIN:
        return "converges"
    if med > 1.0 + HEURISTIC_MARGIN:
        return "diverges"
    return "inconclusive"


def _divergence_witness(seed, u0, R, R1):
    """A bidisc point with 4|h| > d(u)**2, confirmed by the exact heuristic.

    u sits on the segment from u* toward the offending pole, far enough in
    that the pointwise radius d(u)**2/4 drops below R1; |h| is the midpoint
    of (d(u)**2/4, R1), so the point stays strictly inside the bidisc.
    """
    best = None
    for a in seed.poles():
        d2 = _pole_d2(a, u0)
        if best is None or float(d2) < float(best[1]):
            best = (a, d2)
    a, d2 = best
    if not (isinstance(d2, Fraction) and isinstance(u0, QComplex) and seed.exact):
        raise UsageError("divergence witness needs exact pole and center data")
    sq_d = math.sqrt(float(d2))
    t_lo = max(0.0, 1.0 - 2.0 * math.sqrt(float(R1)) / sq_d)
    t_hi = min(1.0, float(R) / sq_d)
    a_q = a if isinstance(a, QComplex) else QComplex(a)
    for mid in (0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65):
        t = Fraction(t_lo + (t_hi - t_lo) * mid).limit_denominator(1000)
        u = QComplex(
            u0.re + t * (a_q.re - u0.re),
            u0.im + t * (a_q.im - u0.im),
        )
        d2u = seed.min_pole_distance2(u)
        if t * t * d2 < R * R and d2u < 4 * R1 and d2u > 0:
            break
    else:
        raise DomainError("could not place a witness inside the bidisc")
    h_abs = d2u / 8 + R1 / 2  # midpoint of (d2u/4, R1)
    pred_ratio = float(4 * h_abs / d2u)
    K = witness_terms(pred_ratio)
    confirmed, tail = confirm_divergence(seed, u, h_abs, K)
    return DivergenceWitness(
        u=_as_float_point(u),
        h=float(h_abs),
        predicted_ratio=pred_ratio,
        terms=K,
        tail_ratios=tail,
        confirmed=confirmed,
    )


def witness_report(w: DivergenceWitness) -> ConvergenceReport:
    """Witness recast as a CSV-friendly convergence report."""
    return ConvergenceReport(
        u=w.u,
        ratios=w.tail_ratios,
        estimated_radius=math.nan,
        # pred_ratio = 4|h| / d(u)**2, so the pointwise radius d(u)**2/4 is:
        predicted_radius=w.h / w.predicted_ratio,
        verdict="diverges" if w.confirmed else "inconclusive",
    )


def in_union_domain(h, u, u_star, R0) -> bool:
    """Strict membership |u - u*| + 2 sqrt(|h|) < R0.

    Exact (nested-radical comparison by repeated squaring) whenever u and
    u* are exact, |h| is rational and R0 is rational; float otherwise.
    """
    u = parse_point(u, "u")
    u_star = parse_point(u_star, "u_star")
    h = parse_point(h, "h")
    h_abs = _exact_abs(h)
    if (
        isinstance(u, QComplex)
        and isinstance(u_star, QComplex)
        and h_abs is not None
        and not isinstance(R0, float)
    ):
        R0 = parse_exact(R0, "R0")
        return lt_sum_of_roots((u - u_star).abs2(), h_abs, R0)
    uf = _as_float_point(u)
    sf = _as_float_point(u_star)
    hf = abs(_as_float_point(h))
    return abs(uf - sf) + 2.0 * math.sqrt(hf) < float(R0)


# -- Cauchy derivative bound ---------------------------------------------------

CIRCLE_SAMPLES = 4096


@dataclass(frozen=True)
class CauchyReport:
    c_eps: float
    n_max: int
    max_ratio: float     # worst |f^(n)(z)| / bound over all samples
    worst_n: int
    worst_z: complex
    passed: bool


def cauchy_bound_check(
    seed: SeedFunction, r, r0, eps, n_max: int, z_points=None
) -> CauchyReport:
    """Check |f^(n)(z)| <= C(eps) n! (r-eps) / (r-r0-eps)^(n+1) for |z| <= r0.

    C(eps) is the sampled maximum of |f| on the circle |t| = r - eps
    (4096 points). The inequality is the Cauchy integral estimate, so a
    pass is expected for any f analytic in |z| < r; a small relative slack
    absorbs the sampling of the circle maximum.
    """
    r = float(r)
    r0 = float(r0)
    eps = float(eps)
    if not 0.0 <= r0 < r:
        raise UsageError("need 0 <= r0 < r")
    if not 0.0 < eps < r - r0:
        raise UsageError("need 0 < eps < r - r0")
    if n_max < 0:
        raise UsageError("n_max must be nonnegative")
    for a in seed.poles():
        if abs(_as_float_point(a)) < r:
            raise UsageError(
                "seed has a pole inside |z| < r; the bound requires analyticity there"
            )
    rho = r - eps
    c_eps = max(
        abs(seed.value_at(rho * cmath.exp(2j * math.pi * k / CIRCLE_SAMPLES)))
        for k in range(CIRCLE_SAMPLES)
    )
    if z_points is None:
        z_points = [0j]
        for frac in (Fraction(1, 3), Fraction(2, 3), Fraction(1)):
            for k in range(8):
                z_points.append(r0 * float(frac) * cmath.exp(2j * math.pi * k / 8))
    gap = r - r0 - eps
    max_ratio = 0.0
    worst = (0, 0j)
    fact = 1.0
    denom = gap
    for n in range(n_max + 1):
        if n > 0:
            fact *= n
            denom *= gap
        bound = c_eps * fact * rho / denom
        for z in z_points:
            val = abs(seed.derivative_at(z, n)) if n else abs(seed.value_at(z))
            ratio = val / bound
            if ratio > max_ratio:
                max_ratio = ratio
                worst = (n, z)
    return CauchyReport(
        c_eps=c_eps,
        n_max=n_max,
        max_ratio=max_ratio,
        worst_n=worst[0],
        worst_z=worst[1],
        passed=max_ratio <= 1.0 + 1e-6,
    )


# -- variable-alpha probe ------------------------------------------------------


def variable_alpha_probe(
    seed: SeedFunction, alpha, u_star, order: int, u_list
) -> list:
    """Exploratory radius probes for the potential built with general alpha.

    The boundary row comes from the seed through u = v/2; the potential is
    expanded exactly and its h-rows are evaluated at each probe u. The
    predicted radius column carries the alpha == 4 pole law for comparison;
    no agreement is asserted (for alpha == 4 this reduces to radius_probe).
    """
    if not seed.exact:
        raise UsageError("variable-alpha probe needs an exact seed")
    u_star_q = parse_exact(u_star, "u_star")
    seed.assert_not_pole(QComplex(u_star_q), "u_star")
    half = Fraction(1, 2)
    b0 = []
    for j in range(2 * order + 1):
        d = seed.derivative_at(QComplex(u_star_q), j)
        if not d.is_real():
            raise UsageError("variable-alpha probe needs a seed real on the real axis")
        b0.append(half**j * d.re / math.factorial(j))
    problem = ProblemData(b0=b0, alpha=alpha, v_star=2 * u_star_q)
    sol = expand_potential(problem, order)
    c = h_scaled(sol.series)
    rows = {}
    for i, j, v in c.terms():
        rows.setdefault(i, {})[j] = v
    reports = []
    for u in u_list:
        uq = parse_point(u, "u")
        if isinstance(uq, QComplex):
            v_val = (uq - QComplex(u_star_q)) * 2
        else:
            v_val = 2.0 * (complex(uq) - float(u_star_q))
        mags2 = []
        for k in range(1, c.cap + 1):
            acc = _row_value(rows.get(k, {}), v_val)
            mags2.append(_mag2(acc) if acc is not None else Fraction(0))
        pts = ratio_points(mags2)
        limit, spread = richardson_limit(pts, tail=min(RATIO_TAIL, len(pts)))
        pred = predicted_radius(seed, uq)
        if not math.isfinite(limit) or spread > SPREAD_TOL:
            verdict = "inconclusive"
            est = math.nan
        else:
            verdict = "converges"
            est = math.inf if limit <= 1e-12 else 1.0 / limit
        reports.append(
            ConvergenceReport(_as_float_point(uq), tuple(r for _, r in pts), est, pred, verdict)
        )
    return reports


def _row_value(row: dict, v_val):
    """sum_j row[j] * v_val**j, exact when inputs are exact."""
    if not row:
        return None
    total = None
    power = 1
    for j in range(max(row) + 1):
        if j:
            power = power * v_val
        if j in row:
            term = row[j] * power
            total = term if total is None else total + term
    return total
