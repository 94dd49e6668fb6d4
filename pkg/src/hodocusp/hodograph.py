"""The hodograph map (h, v) -> (t, x) built from a potential solution.

    t = B_v,          x = -B - h*B_h + v*B_v,

with v = v_star + V. The map's Jacobian J = x_h t_v - t_h x_v collapses to
the closed form h*(B_hv)**2 - alpha(h)*(B_vv)**2, which vanishes at the base
point exactly when b02 = 0; that is the cusp-construction condition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError
from .pde import PotentialSolution, alpha_series
from .series import FLOAT, Series2, const2, variable2


@dataclass(frozen=True)
class HodographMap:
    """t, x and the shifted coordinates tau = t - t*, xi = x - x* - v*(t - t*)."""

    t: Series2
    x: Series2
    tau: Series2
    xi: Series2
    jac: Series2  # definition form x_h t_v - t_h x_v
    sol: PotentialSolution

    @property
    def problem(self):
        return self.sol.problem

    @property
    def mode(self):
        return self.t.mode

    def consts(self):
        """(t_star, x_star, v_star) in the map's scalar kind."""
        p = self.sol.problem
        if self.mode == FLOAT:
            return float(p.t_star), float(p.x_star), float(p.v_star)
        return p.t_star, p.x_star, p.v_star


def hodograph_map(sol: PotentialSolution) -> HodographMap:
    B = sol.series
    if B.names != ("h", "V"):
        raise UsageError(f"potential series must be in (h, V), got {B.names}")
    names, cap, mode = B.names, B.cap, B.mode
    p = sol.problem
    h = variable2(names, cap, "h", mode=mode)
    V = variable2(names, cap, "V", mode=mode)
    t_star, x_star, v_star = (
        (float(p.t_star), float(p.x_star), float(p.v_star))
        if mode == FLOAT
        else (p.t_star, p.x_star, p.v_star)
    )
    Bh = B.derivative("h")
    Bv = B.derivative("V")
    t = Bv
    x = -B - h * Bh + (V + const2(names, cap, v_star, mode)) * Bv
    tau = t - const2(names, cap, t_star, mode)
    xi = x - const2(names, cap, x_star, mode) - tau.scale(v_star)
    t_h = t.derivative("h")
    t_v = t.derivative("V")
    x_h = x.derivative("h")
    x_v = x.derivative("V")
    jac = x_h * t_v - t_h * x_v
    return HodographMap(t=t, x=x, tau=tau, xi=xi, jac=jac, sol=sol)


def jacobian(sol: PotentialSolution) -> Series2:
    """Closed form h*(B_hv)**2 - alpha(h)*(B_vv)**2 of the map Jacobian."""
    B = sol.series
    h = variable2(B.names, B.cap, "h", mode=B.mode)
    al = alpha_series(sol.problem, B.names, B.cap, B.mode)
    B_hv = B.derivative("h").derivative("V")
    B_vv = B.derivative("V").derivative("V")
    return h * (B_hv * B_hv) - al * (B_vv * B_vv)


def jacobian_forms_agree(m: HodographMap) -> bool:
    """Definition form vs closed form, compared to the common effective order."""
    closed = jacobian(m.sol)
    diff = m.jac - closed
    eff = min(m.jac.eff, closed.eff)
    return all(i + j > eff for i, j, _ in diff.terms())


def hodograph_system_residual(m: HodographMap) -> tuple[Series2, Series2]:
    """Residuals of the linear hodograph system

        x_h = v t_h - alpha(h) t_v,      x_v = v t_v - h t_h.

    The first vanishes exactly when the potential solves its equation; the
    second vanishes identically for any potential.
    """
    B = m.sol.series
    names, cap, mode = B.names, B.cap, B.mode
    p = m.sol.problem
    v_star = float(p.v_star) if mode == FLOAT else p.v_star
    v = variable2(names, cap, "V", mode=mode) + const2(names, cap, v_star, mode)
    h = variable2(names, cap, "h", mode=mode)
    al = alpha_series(p, names, cap, mode)
    t_h = m.t.derivative("h")
    t_v = m.t.derivative("V")
    r1 = m.x.derivative("h") - v * t_h + al * t_v
    r2 = m.x.derivative("V") - v * t_v + h * t_h
    return r1, r2
