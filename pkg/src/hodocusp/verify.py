"""Finite-difference oracles for the reconstructed solutions.

The construction pipeline never touches these checks: fields h(t, x),
v(t, x) are rebuilt pointwise from the normal-form pack (root selection
included) and differenced with central stencils, so a pass certifies the
original quasilinear system

    h_t + (h v)_x = 0,
    v_t + v v_x + alpha(h) h_x = 0,

independently of how the series were produced. Grids must sit on a single
sheet: crossing a fold curve would difference across a branch jump and the
oracle refuses rather than report noise.

Convergence orders are estimated on a small fixed set of stencil centers
with the stencil step doubled a few times (shrinking it instead would sink
the truncation error below float roundoff at the sizes used here).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cusp import BOUNDARY_TOL, reconstruct
from .errors import DomainError, UsageError
from .hodograph import HodographMap
from .normal_form import NormalFormPack
from .pde import KorobeinikSeries
from .scalars import scalar_float

MAX_NODES = 8_000_000
MIN_HALVINGS = 3


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned square grid: center +- half_width at the given step."""

    center: tuple
    half_width: float
    step: float

    def __post_init__(self):
        if len(self.center) != 2:
            raise UsageError("grid center needs exactly 2 components")
        if not (self.step > 0 and self.half_width > 0):
            raise UsageError("grid step and half-width must be positive")
        if self.step > self.half_width:
            raise UsageError("grid step exceeds the half-width")

    def axis(self, which: int) -> np.ndarray:
        n = int(round(self.half_width / self.step))
        return float(self.center[which]) + self.step * np.arange(-n, n + 1)


@dataclass(frozen=True)
class ResidualReport:
    grid: GridSpec
    r1_max: float
    r1_rms: float
    r2_max: float | None
    r2_rms: float | None
    order1: float
    order2: float | None
    halvings: int

    def csv_row(self) -> str:
        def f(v):
            return "" if v is None else repr(float(v))

        t0, x0 = (float(c) for c in self.grid.center)
        return ",".join(
            [
                repr(t0),
                repr(x0),
                repr(self.grid.half_width),
                repr(self.grid.step),
                f(self.r1_max),
                f(self.r1_rms),
                f(self.r2_max),
                f(self.r2_rms),
                f(self.order1),
                f(self.order2),
            ]
        )


# -- vectorized series evaluation ----------------------------------------------


def _eval1_grid(s, X: np.ndarray, check: bool = True) -> np.ndarray:
    sf = s.to_float()
    if check:
        vr = sf.validity_radius()
        top = float(np.max(np.abs(X))) if X.size else 0.0
        if top > vr:
            raise DomainError(
                f"grid radius {top:.6g} exceeds validity radius {vr:.6g} of {s!r}"
            )
    acc = np.zeros_like(X, dtype=float)
    for j in range(sf.cap, -1, -1):
        acc = acc * X + sf.coefficient(j)
    return acc


def _eval2_grid(s, X: np.ndarray, Y: np.ndarray, check: bool = True) -> np.ndarray:
    sf = s.to_float()
    if check:
        vr = sf.validity_radius()
        top = max(
            float(np.max(np.abs(X))) if X.size else 0.0,
            float(np.max(np.abs(Y))) if Y.size else 0.0,
        )
        if top > vr:
            raise DomainError(
                f"grid radius {top:.6g} exceeds validity radius {vr:.6g} of {s!r}"
            )
    terms = list(sf.terms())
    if not terms:
        return np.zeros_like(X, dtype=float)
    deg_x = max(i for i, _, _ in terms)
    deg_y = max(j for _, j, _ in terms)
    xp = [np.ones_like(X, dtype=float)]
    for _ in range(deg_x):
        xp.append(xp[-1] * X)
    yp = [np.ones_like(Y, dtype=float)]
    for _ in range(deg_y):
        yp.append(yp[-1] * Y)
    out = np.zeros_like(X, dtype=float)
    for i, j, c in terms:
        out += c * xp[i] * yp[j]
    return out


# -- branch field ----------------------------------------------------------------


def _cardano_grid(p, q):
    s = -0.5 * q
    d = np.sqrt(q * q / 4.0 + p ** 3 / 27.0)
    big = np.where(s >= 0.0, s + d, s - d)
    a = np.cbrt(big)
    return a - p / (3.0 * a)


def _trig_grid(p, q, branch):
    m = 2.0 * np.sqrt(-p / 3.0)
    arg = np.clip(3.0 * q / (p * m), -1.0, 1.0)
    phi = np.arccos(arg)
    k = 2 - branch  # ascending root order
    return m * np.cos((phi - 2.0 * math.pi * k) / 3.0)


def branch_field(pack: NormalFormPack, T: np.ndarray, X: np.ndarray, branch=None,
                 check: bool = True):
    """(h, v, U, tau, xi) arrays for one solution sheet over (t, x) arrays.

    branch None demands the single-root region; 0/1/2 selects the
    ascending root inside the wedge. Mixed or near-fold nodes raise
    UsageError: differencing across a fold would be meaningless.
    check=False skips the per-series validity-disc gate (the gate is
    deliberately conservative; truncation studies need points beyond it).
    """
    p = pack.problem
    t_star = scalar_float(p.t_star)
    x_star = scalar_float(p.x_star)
    v_star = scalar_float(p.v_star)
    T = np.asarray(T, dtype=float)
    X = np.asarray(X, dtype=float)
    tau = T - t_star
    xi = X - x_star - v_star * tau
    lam1 = _eval1_grid(pack.lambda1, tau, check)
    lam2 = _eval1_grid(pack.lambda2, tau, check)
    q = lam2 - xi
    disc = -4.0 * lam1 ** 3 - 27.0 * q * q
    scale = np.maximum(1.0, np.maximum(lam1 * lam1, q * q)) ** 1.5
    near = np.abs(disc) <= BOUNDARY_TOL * scale
    if near.any():
        raise UsageError(
            f"grid touches a fold curve: |discriminant| ~ 0 at {int(near.sum())} nodes"
        )
    inside = disc > 0.0
    if branch is None:
        if inside.any():
            raise UsageError(
                f"grid enters the three-root wedge at {int(inside.sum())} nodes; "
                "pass a branch index for a fixed sheet"
            )
        U = _cardano_grid(lam1, q)
    else:
        if branch not in (0, 1, 2):
            raise UsageError("branch must be 0, 1, or 2")
        if not inside.all():
            raise UsageError(
                f"grid leaves the three-root wedge at {int((~inside).sum())} nodes; "
                f"branch {branch} is undefined there"
            )
        U = _trig_grid(lam1, q, branch)
    den = 3.0 * U * U + lam1
    safe = np.abs(den) > 1e-30
    U = U - np.where(safe, ((U * U + lam1) * U + q) / np.where(safe, den, 1.0), 0.0)
    W = _eval2_grid(pack.w_of_tau_u, tau, U, check)
    V = _eval1_grid(pack.v_of_w, W, check)
    H = _eval2_grid(pack.h_of_tau_v, tau, V, check)
    return H, v_star + V, U, tau, xi


# -- residual stencils -----------------------------------------------------------


def alpha_values(alpha_coeffs, H: np.ndarray) -> np.ndarray:
    """alpha(h) = 4 + sum_l alpha_l h^l on an array."""
    A = np.full_like(H, 4.0, dtype=float)
    P = None
    for a in alpha_coeffs:
        P = H if P is None else P * H
        a = float(scalar_float(a))
        if a:
            A = A + a * P
    return A


def grid_residuals(H: np.ndarray, V: np.ndarray, step: float, alpha_coeffs=()):
    """Central-difference residuals of both equations on interior nodes.

    Axis 0 is t, axis 1 is x; works on any precomputed field arrays, which
    keeps the oracle usable on fields that never came from a pack.
    """
    if H.shape != V.shape or min(H.shape) < 3:
        raise UsageError("need matching field arrays with at least 3 nodes per axis")
    s2 = 2.0 * step
    HV = H * V
    Hc = H[1:-1, 1:-1]
    Vc = V[1:-1, 1:-1]
    r1 = (H[2:, 1:-1] - H[:-2, 1:-1]) / s2 + (HV[1:-1, 2:] - HV[1:-1, :-2]) / s2
    r2 = (
        (V[2:, 1:-1] - V[:-2, 1:-1]) / s2
        + Vc * (V[1:-1, 2:] - V[1:-1, :-2]) / s2
        + alpha_values(alpha_coeffs, Hc) * (H[1:-1, 2:] - H[1:-1, :-2]) / s2
    )
    return r1, r2


def _rms(a: np.ndarray) -> float:
    return float(np.sqrt(np.mean(a * a)))


def _stencil_residuals(pack, Tc, Xc, s, branch, alpha_coeffs, check=True):
    def field(dt, dx):
        return branch_field(pack, Tc + dt, Xc + dx, branch, check)[:2]

    Hc, Vc = field(0.0, 0.0)
    Hpt, Vpt = field(s, 0.0)
    Hmt, Vmt = field(-s, 0.0)
    Hpx, Vpx = field(0.0, s)
    Hmx, Vmx = field(0.0, -s)
    s2 = 2.0 * s
    r1 = (Hpt - Hmt) / s2 + (Hpx * Vpx - Hmx * Vmx) / s2
    r2 = (
        (Vpt - Vmt) / s2
        + Vc * (Vpx - Vmx) / s2
        + alpha_values(alpha_coeffs, Hc) * (Hpx - Hmx) / s2
    )
    return r1, r2


def _order_estimate(steps, rms_values):
    steps = np.asarray(steps, dtype=float)
    rms_values = np.asarray(rms_values, dtype=float)
    if np.any(rms_values <= 0.0):
        return math.nan
    return float(np.polyfit(np.log(steps), np.log(rms_values), 1)[0])


def _center_set(grid: GridSpec):
    offs = np.array([-0.5, 0.0, 0.5]) * grid.half_width
    Tc, Xc = np.meshgrid(float(grid.center[0]) + offs, float(grid.center[1]) + offs)
    return Tc.ravel(), Xc.ravel()


def system_residual(
    pack: NormalFormPack, grid: GridSpec, branch=None, halvings: int = MIN_HALVINGS,
    check: bool = True
) -> ResidualReport:
    """FD residuals of the quasilinear system on one reconstructed sheet.

    Max/rms come from the full grid at the base step; the convergence
    order comes from fixed stencil centers with the step doubled
    `halvings` times (>= 3).
    """
    if halvings < MIN_HALVINGS:
        raise UsageError(f"order estimate needs >= {MIN_HALVINGS} step halvings")
    t_ax = grid.axis(0)
    x_ax = grid.axis(1)
    if t_ax.size * x_ax.size > MAX_NODES:
        raise UsageError("grid too fine: node count exceeds the safety cap")
    T, X = np.meshgrid(t_ax, x_ax, indexing="ij")
    alpha_coeffs = pack.problem.alpha
    H, V = branch_field(pack, T, X, branch, check)[:2]
    r1, r2 = grid_residuals(H, V, grid.step, alpha_coeffs)

    Tc, Xc = _center_set(grid)
    steps = [grid.step * 2.0 ** m for m in range(halvings + 1)]
    rms1 = []
    rms2 = []
    for s in steps:
        sr1, sr2 = _stencil_residuals(pack, Tc, Xc, s, branch, alpha_coeffs, check)
        rms1.append(_rms(sr1))
        rms2.append(_rms(sr2))
    return ResidualReport(
        grid=grid,
        r1_max=float(np.max(np.abs(r1))),
        r1_rms=_rms(r1),
        r2_max=float(np.max(np.abs(r2))),
        r2_rms=_rms(r2),
        order1=_order_estimate(steps, rms1),
        order2=_order_estimate(steps, rms2),
        halvings=halvings,
    )


def branch_swap_probe(pack: NormalFormPack, grid: GridSpec, branches=(0, 2)):
    """Negative control: stitch two sheets mid-grid and difference across.

    Returns (baseline_rms, swapped_rms) of the mass-equation residual; the
    swap must blow the residual up by orders of magnitude, proving the
    oracle actually sees branch discontinuities.
    """
    b_lo, b_hi = branches
    t_ax = grid.axis(0)
    x_ax = grid.axis(1)
    T, X = np.meshgrid(t_ax, x_ax, indexing="ij")
    H0, V0 = branch_field(pack, T, X, b_lo)[:2]
    H1, V1 = branch_field(pack, T, X, b_hi)[:2]
    mid = x_ax.size // 2
    cols = np.arange(x_ax.size)[None, :]
    Hs = np.where(cols < mid, H0, H1)
    Vs = np.where(cols < mid, V0, V1)
    base1, _ = grid_residuals(H0, V0, grid.step, pack.problem.alpha)
    swap1, _ = grid_residuals(Hs, Vs, grid.step, pack.problem.alpha)
    return _rms(base1), _rms(swap1)


def constant_field_probe(h0=2.0, v0=0.5, nodes=21, step=1e-3, alpha_coeffs=()):
    """Constant fields solve the system; the oracle must report ~ 0."""
    H = np.full((nodes, nodes), float(h0))
    V = np.full((nodes, nodes), float(v0))
    r1, r2 = grid_residuals(H, V, step, alpha_coeffs)
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))


# -- G-series PDE oracle ---------------------------------------------------------


def _partial_sum_grid(ks: KorobeinikSeries, h_ax, u_ax, terms):
    rows = []
    for n in range(1, terms + 1):
        rows.append([complex(ks.coefficient(n, complex(u))).real for u in u_ax])
    C = np.asarray(rows, dtype=float)  # shape (terms, n_u)
    G = np.zeros((len(h_ax), len(u_ax)))
    hp = np.ones(len(h_ax))
    for n in range(terms):
        hp = hp * h_ax
        G += hp[:, None] * C[n][None, :]
    return G


def pde_grid_residual_G(
    ks: KorobeinikSeries,
    grid: GridSpec,
    terms: int | None = None,
    halvings: int = MIN_HALVINGS,
) -> ResidualReport:
    """FD residual of h G_hh - G_uu on partial sums over a real (h, u) grid."""
    if halvings < MIN_HALVINGS:
        raise UsageError(f"order estimate needs >= {MIN_HALVINGS} step halvings")
    terms = ks.cap if terms is None else min(terms, ks.cap)
    h_ax = grid.axis(0)
    u_ax = grid.axis(1)
    _require_inside_predicted(ks, h_ax, u_ax, extra=grid.step * 2.0 ** halvings)
    G = _partial_sum_grid(ks, h_ax, u_ax, terms)
    s = grid.step
    Ghh = (G[2:, 1:-1] - 2.0 * G[1:-1, 1:-1] + G[:-2, 1:-1]) / (s * s)
    Guu = (G[1:-1, 2:] - 2.0 * G[1:-1, 1:-1] + G[1:-1, :-2]) / (s * s)
    r = h_ax[1:-1][:, None] * Ghh - Guu

    hc, uc = _center_set(grid)
    steps = [grid.step * 2.0 ** m for m in range(halvings + 1)]
    rms = []
    for st in steps:
        vals = []
        for h0, u0 in zip(hc, uc):
            g = lambda hh, uu: complex(ks.partial_sum(hh, complex(uu), terms)).real
            ghh = (g(h0 + st, u0) - 2.0 * g(h0, u0) + g(h0 - st, u0)) / (st * st)
            guu = (g(h0, u0 + st) - 2.0 * g(h0, u0) + g(h0, u0 - st)) / (st * st)
            vals.append(h0 * ghh - guu)
        rms.append(_rms(np.asarray(vals)))
    return ResidualReport(
        grid=grid,
        r1_max=float(np.max(np.abs(r))),
        r1_rms=_rms(r),
        r2_max=None,
        r2_rms=None,
        order1=_order_estimate(steps, rms),
        order2=None,
        halvings=halvings,
    )


def _require_inside_predicted(ks: KorobeinikSeries, h_ax, u_ax, extra=0.0):
    """All stencil points must obey |h| < d(u)**2 / 4 with room to spare."""
    seed = ks.seed
    if seed.is_entire():
        return
    reach = float(np.max(np.abs(h_ax))) + extra
    d2_min = min(float(seed.min_pole_distance2(complex(u))) for u in u_ax)
    d_min = math.sqrt(d2_min) - extra  # stencil shifts in u close in on the pole
    if d_min <= 0.0:
        raise UsageError("grid touches a pole of the seed")
    if reach >= d_min * d_min / 4.0:
        raise UsageError(
            f"grid leaves the predicted convergence region: |h| reach {reach:.6g} "
            f">= pointwise radius {d_min * d_min / 4.0:.6g}"
        )


# -- hodograph roundtrip ---------------------------------------------------------


def hodograph_roundtrip(m: HodographMap, pack: NormalFormPack, points, check=True):
    """Max over points and branches of |t(h,V) - t| + |x(h,V) - x|."""
    t_s = m.t.to_float()
    x_s = m.x.to_float()
    worst = 0.0
    for t, x in points:
        for br in reconstruct(float(t), float(x), pack, check=check):
            tb = t_s.evaluate(br.h, br.V, check=check)
            xb = x_s.evaluate(br.h, br.V, check=check)
            worst = max(worst, abs(tb - t) + abs(xb - x))
    return worst
