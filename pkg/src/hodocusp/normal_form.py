"""Cusp normal form of the hodograph map near a singular base point.

Starting from the shifted map (tau, xi)(h, V) with b02 = 0, b11 != 0:

1. solve tau = tau(h, V) for h(tau, V)          (leading tau/b11 - V**2/4),
2. substitute into xi to get xi(tau, V)         (xi(0,V) = 5 b11/12 V^3 + ..),
3. normalize the tau = 0 slice to a pure cube: V(W) with xi(0, V(W)) = W**3,
4. rewrite xi(tau, W) and fit the miniversal cusp deformation

       xi(tau, W) = U(tau, W)**3 + lambda1(tau) U(tau, W) + lambda2(tau),

   with U(0, W) = W; the fit is a triangular solve in powers of tau
   (W^0 row -> lambda2, W^1 row -> lambda1, W^k rows -> U coefficients),
5. invert U(tau, W) in W to get W(tau, U).

In exact mode the only irrationality is (12/(5 b11))**(1/3); everything
lives in Q of that cube root, so the fitted identity is exact, not
approximate. sign(lambda1 slope) = -sign(b11) determines at runtime which
tau half-plane carries the three-root wedge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import DegeneracyError, DomainError, UsageError
from .hodograph import HodographMap
from .pde import ProblemData
from .scalars import CubicRadical
from .series import (
    EXACT,
    Series1,
    Series2,
    cube_root_normalize,
    implicit_solve,
    lift1to2,
    series1_text,
    series2_text,
    substitute,
)


@dataclass(frozen=True)
class NormalFormPack:
    """Everything needed to evaluate the solution near the cusp."""

    h_of_tau_v: Series2   # (tau, V)
    xi_of_tau_v: Series2  # (tau, V)
    v_of_w: Series1       # V(W)
    xi_of_tau_w: Series2  # (tau, W)
    lambda1: Series1      # in tau
    lambda2: Series1      # in tau
    u_of_tau_w: Series2   # (tau, W), U(0, W) = W
    w_of_tau_u: Series2   # (tau, U)
    b11: object
    problem: ProblemData

    @property
    def mode(self):
        return self.h_of_tau_v.mode

    @property
    def order(self):
        return self.h_of_tau_v.cap

    def lambda1_slope(self):
        """Leading coefficient of lambda1; equals (-12/(5 b11))**(1/3)."""
        return self.lambda1.coefficient(1)

    def multivalued_halfplane(self) -> int:
        """Sign s such that lambda1(tau) < 0 (three roots possible) for
        small tau with sign(tau) = s. Derived from the fitted slope, not
        from any printed convention."""
        slope = float(self.lambda1_slope()) if self.mode == EXACT else self.lambda1_slope()
        if slope == 0:
            raise DegeneracyError("lambda1 has no linear part")
        return -1 if slope > 0 else 1

    def h_at(self, tau, V) -> float:
        """Numeric h(tau, V) inside the validity disc."""
        return self.h_of_tau_v.to_float().evaluate(tau, V)


def build_normal_form(m: HodographMap, order: int | None = None) -> NormalFormPack:
    p = m.problem
    p.require_singular()
    tau, xi = m.tau, m.xi
    if order is not None and order != tau.cap:
        tau = tau.recap(order)
        xi = xi.recap(order)
    b11 = tau.coefficient(1, 0)
    if b11 == 0:
        raise DegeneracyError("degenerate: b11 must be nonzero")

    h_tv = implicit_solve(tau, "h", "tau")
    xi_tv = substitute(xi, "h", h_tv)
    v_of_w = cube_root_normalize(xi_tv.at_zero(1), "W")
    vw2 = lift1to2(v_of_w, ("tau", "W"), 1)
    xi_tw = substitute(xi_tv, "V", vw2)

    leftover = xi_tw.at_zero(1) - _cube_series(xi_tw)
    if xi_tw.mode == EXACT:
        zero_row = [j for j, _ in leftover.terms()]
    else:
        zero_row = [j for j, v in leftover.terms() if abs(v) > 1e-9]
    if zero_row:
        raise DegeneracyError(
            f"cube normalization failed: xi(0, W) != W^3 at degrees {zero_row}"
        )

    lam1, lam2, u_tw = _fit_miniversal(xi_tw)
    w_tu = implicit_solve(u_tw, "W", "U")
    return NormalFormPack(
        h_of_tau_v=h_tv,
        xi_of_tau_v=xi_tv,
        v_of_w=v_of_w,
        xi_of_tau_w=xi_tw,
        lambda1=lam1,
        lambda2=lam2,
        u_of_tau_w=u_tw,
        w_of_tau_u=w_tu,
        b11=b11,
        problem=p,
    )


def _cube_series(xi_tw: Series2) -> Series1:
    one = 1.0 if xi_tw.mode == "float" else Fraction(1)
    return Series1("W", xi_tw.cap, {3: one}, mode=xi_tw.mode)


def _fit_miniversal(xi_tw: Series2):
    """Triangular fit of xi(tau, W) = U^3 + lambda1 U + lambda2.

    At tau-order m the residual row R_m(W) determines lambda2_m (W^0),
    lambda1_m (W^1) and U_{m, k-2} (W^k, k >= 2); the unknowns never feed
    back into rows <= m, so one sweep in m suffices.
    """
    cap, mode = xi_tw.cap, xi_tw.mode
    names = xi_tw.names
    one = 1.0 if mode == "float" else Fraction(1)
    three = 3.0 if mode == "float" else Fraction(3)
    lam1 = {}
    lam2 = {}
    u = {(0, 1): one}
    for m in range(1, cap + 1):
        us = Series2(names, cap, u, mode=mode)
        l1s = Series2(names, cap, {(j, 0): v for j, v in lam1.items()}, mode=mode)
        l2s = Series2(names, cap, {(j, 0): v for j, v in lam2.items()}, mode=mode)
        resid = xi_tw - (us * us * us + l1s * us + l2s)
        row = {j: v for i, j, v in resid.terms() if i == m}
        if 0 in row:
            lam2[m] = row[0]
        if 1 in row:
            lam1[m] = row[1]
        for j, v in row.items():
            if j >= 2:
                u[(m, j - 2)] = v / three
    eff = xi_tw.eff
    lam1_s = Series1("tau", cap, lam1, mode=mode, eff=eff)
    lam2_s = Series1("tau", cap, lam2, mode=mode, eff=eff)
    u_s = Series2(names, cap, u, mode=mode, eff=eff)
    return lam1_s, lam2_s, u_s


def verify_miniversal(pack: NormalFormPack) -> Series2:
    """Residual xi(tau, W) - (U^3 + lambda1 U + lambda2); exactly zero to cap."""
    names = pack.xi_of_tau_w.names
    u = pack.u_of_tau_w
    l1 = lift1to2(pack.lambda1, names, 0)
    l2 = lift1to2(pack.lambda2, names, 0)
    return pack.xi_of_tau_w - (u * u * u + l1 * u + l2)


def roundtrip_w_u(pack: NormalFormPack) -> tuple[Series2, Series2]:
    """U(tau, W(tau, U)) - U and W(tau, U(tau, W)) - W; both zero to cap."""
    from .series import variable2

    u_back = substitute(pack.u_of_tau_w, "W", pack.w_of_tau_u)
    w_back = substitute(pack.w_of_tau_u, "U", pack.u_of_tau_w)
    u_id = variable2(("tau", "U"), pack.u_of_tau_w.cap, "U", mode=pack.mode)
    w_id = variable2(("tau", "W"), pack.w_of_tau_u.cap, "W", mode=pack.mode)
    return u_back - u_id, w_back - w_id


# -- serialization ------------------------------------------------------------

_PACK_FILES = (
    ("h_of_tau_v", "h_of_tau_V.txt"),
    ("xi_of_tau_v", "xi_of_tau_V.txt"),
    ("v_of_w", "V_of_W.txt"),
    ("xi_of_tau_w", "xi_of_tau_W.txt"),
    ("lambda1", "lambda1.txt"),
    ("lambda2", "lambda2.txt"),
    ("u_of_tau_w", "U_of_tau_W.txt"),
    ("w_of_tau_u", "W_of_tau_U.txt"),
)


def save_pack(pack: NormalFormPack, out_dir, header_lines=(), manifest_extra=None) -> list[str]:
    """Write the pack's series tables plus a manifest; returns file names."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    prefix = "".join(f"# {line}\n" for line in header_lines)
    for attr, fname in _PACK_FILES:
        s = getattr(pack, attr)
        text = series1_text(s) if isinstance(s, Series1) else series2_text(s)
        (out / fname).write_text(prefix + text)
        written.append(fname)
    slope = pack.lambda1_slope()
    manifest = {
        "order": pack.order,
        "mode": pack.mode,
        "b11": _scalar_json(pack.b11),
        "lambda1_slope": _scalar_json(slope),
        "radical": _radical_json(slope),
        "files": [f for _, f in _PACK_FILES],
    }
    if manifest_extra:
        manifest.update(manifest_extra)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    written.append("manifest.json")
    return written


def _scalar_json(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, CubicRadical):
        return {
            "a0": str(v.a0),
            "a1": str(v.a1),
            "a2": str(v.a2),
            "radicand": str(v.rad),
            "root": 3,
        }
    return repr(float(v))


def _radical_json(slope):
    """The adjoined constants: +-(12/(5 b11))^(1/3)."""
    if isinstance(slope, CubicRadical):
        return {"radicand": str(slope.rad), "root": 3}
    return None
