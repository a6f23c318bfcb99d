"""Differential invariants over the spatio-temporal scale-space.

A :class:`JetSlice` holds the partial derivatives of L at one spatial scale
s and one temporal scale level, together with the normalization factors.
Partials are named by their axes in canonical order, e.g. ``'xyt'`` for
L_xyt.  Scale-normalized partials multiply each raw partial by
s**(gamma_s (m1 + m2) / 2) and by the temporal factor for its order; every
scale-normalized feature is the plain formula evaluated on those.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Set, Tuple

import numpy as np
from scipy import ndimage

from .errors import JetError, ParameterError
from .normalization import spatial_norm_factor
from .spatial import spatial_difference

C_TWO_THIRDS = 2.0 / 3.0
C_E_QUARTER = math.e / 4.0
GAUSS_CURV_GUARD = 1e-9


def canonical(name: str) -> str:
    if set(name) - set("xyt"):
        raise JetError(f"bad partial derivative name {name!r}")
    return "x" * name.count("x") + "y" * name.count("y") + "t" * name.count("t")


def orders(name: str) -> Tuple[int, int, int]:
    return name.count("x"), name.count("y"), name.count("t")


@dataclass(frozen=True)
class FeatureParams:
    C: float = C_TWO_THIRDS
    kappa: float = 1.0
    v: Tuple[float, float] = (0.0, 0.0)
    phi: float = 0.0

    def __post_init__(self):
        if not self.kappa >= 0:
            raise ParameterError("kappa must be non-negative")
        if not self.C > 0:
            raise ParameterError("C must be positive")


@dataclass
class JetSlice:
    """Partial derivatives at one (s, tau) pair.

    ``alpha`` maps temporal order n to the temporal normalization factor;
    order 0 is always 1.
    """

    partials: Dict[str, np.ndarray]
    s: float = 1.0
    gamma_s: float = 1.0
    alpha: Mapping[int, float] = field(default_factory=dict)
    tau: Optional[float] = None
    data_scale: float = 1.0

    def __post_init__(self):
        self.partials = {canonical(k): np.asarray(v, dtype=float) for k, v in self.partials.items()}
        shapes = {v.shape for v in self.partials.values()}
        if len(shapes) > 1:
            raise ParameterError(f"partials have differing shapes {shapes}")

    def raw(self, name: str) -> np.ndarray:
        key = canonical(name)
        try:
            return self.partials[key]
        except KeyError:
            raise JetError(f"jet has no partial L_{key}") from None

    def factor(self, name: str) -> float:
        m1, m2, n = orders(canonical(name))
        a = 1.0 if n == 0 else self.alpha.get(n)
        if a is None:
            raise JetError(f"no temporal normalization factor for order {n}")
        return spatial_norm_factor(self.s, m1, m2, self.gamma_s) * a

    def norm(self, name: str) -> np.ndarray:
        return self.factor(name) * self.raw(name)

    def get(self, name: str, normalized: bool = True) -> np.ndarray:
        return self.norm(name) if normalized else self.raw(name)


def compute_jet(L, L_t=None, L_tt=None, needed: Iterable[str] = (), s: float = 1.0,
                gamma_s: float = 1.0, alpha: Optional[Mapping[int, float]] = None,
                tau: Optional[float] = None) -> JetSlice:
    """Apply spatial differences to the smoothed frame and its temporal differences."""
    base = {0: L, 1: L_t, 2: L_tt}
    parts = {}
    for name in {canonical(n) for n in needed}:
        m1, m2, n = orders(name)
        src = base.get(n)
        if src is None:
            raise JetError(f"L_{name} needs temporal order {n} input")
        spatial = "x" * m1 + "y" * m2
        parts[name] = spatial_difference(src, spatial) if spatial else np.asarray(src, dtype=float)
    scale = float(np.max(np.abs(L))) if np.size(L) else 1.0
    return JetSlice(parts, s, gamma_s, dict(alpha or {}), tau, scale if scale > 0 else 1.0)


# ---------------------------------------------------------------------------
# spatial

SPATIAL_NEEDS = {
    "gradmag": {"x", "y"},
    "laplacian": {"xx", "yy"},
    "dethessian": {"xx", "xy", "yy"},
    "kappa": {"x", "y", "xx", "xy", "yy"},
    "quasiq": {"x", "y", "xx", "xy", "yy"},
}


def _spatial_quasi(g, a, b, C):
    """s(L_a^2 + L_b^2) block plus C times the second-order block, for a generic partial suffix."""
    return g("x" + a) ** 2 + g("y" + a) ** 2 + C * (g("xx" + b) ** 2 + 2 * g("xy" + b) ** 2 + g("yy" + b) ** 2)


def spatial_invariant(jet: JetSlice, which: str, params: FeatureParams = FeatureParams(),
                      normalized: bool = True) -> np.ndarray:
    g = lambda n: jet.get(n, normalized)
    if which == "gradmag":
        return np.sqrt(g("x") ** 2 + g("y") ** 2)
    if which == "laplacian":
        return g("xx") + g("yy")
    if which == "dethessian":
        return g("xx") * g("yy") - g("xy") ** 2
    if which == "kappa":
        Lx, Ly = g("x"), g("y")
        return Lx * Lx * g("yy") + Ly * Ly * g("xx") - 2 * Lx * Ly * g("xy")
    if which == "quasiq":
        return _spatial_quasi(g, "", "", params.C)
    raise ParameterError(f"unknown spatial invariant {which!r}")


# ---------------------------------------------------------------------------
# temporal derivatives of spatial operators

def lgn_operators(jet: JetSlice, params: FeatureParams = FeatureParams(),
                  normalized: bool = True) -> Dict[str, np.ndarray]:
    """First and second temporal derivatives of the Laplacian and their quasi quadrature."""
    g = lambda n: jet.get(n, normalized)
    out = {}
    try:
        out["dtlap"] = g("xxt") + g("yyt")
    except JetError:
        pass
    try:
        out["dttlap"] = g("xxtt") + g("yytt")
    except JetError:
        return out
    if "dtlap" in out:
        out["qtlap"] = out["dtlap"] ** 2 + params.C * out["dttlap"] ** 2
    return out


def dethessian_temporal(jet: JetSlice, params: FeatureParams = FeatureParams(),
                        normalized: bool = True) -> Dict[str, np.ndarray]:
    g = lambda n: jet.get(n, normalized)
    Lxx, Lxy, Lyy = g("xx"), g("xy"), g("yy")
    Lxxt, Lxyt, Lyyt = g("xxt"), g("xyt"), g("yyt")
    dt = Lxxt * Lyy + Lxx * Lyyt - 2 * Lxy * Lxyt
    out = {"dtdeth": dt}
    try:
        Lxxtt, Lxytt, Lyytt = g("xxtt"), g("xytt"), g("yytt")
    except JetError:
        return out
    dtt = Lxxtt * Lyy + 2 * Lxxt * Lyyt + Lxx * Lyytt - 2 * Lxyt ** 2 - 2 * Lxy * Lxytt
    out["dttdeth"] = dtt
    out["qtdeth"] = dt * dt + params.C * dtt * dtt
    return out


# ---------------------------------------------------------------------------
# genuinely spatio-temporal

def spatiotemporal_operators(jet: JetSlice, params: FeatureParams = FeatureParams(),
                             normalized: bool = True) -> Dict[str, np.ndarray]:
    g = lambda n: jet.get(n, normalized)
    Lxx, Lyy, Ltt = g("xx"), g("yy"), g("tt")
    Lxy, Lxt, Lyt = g("xy"), g("xt"), g("yt")
    out = {
        "deth3": Lxx * Lyy * Ltt + 2 * Lxy * Lxt * Lyt - Lxx * Lyt ** 2 - Lyy * Lxt ** 2 - Ltt * Lxy ** 2,
        "stlap": Lxx + Lyy + params.kappa ** 2 * Ltt,
    }
    try:
        Lx, Ly, Lt = g("x"), g("y"), g("t")
    except JetError:
        return out
    guard = GAUSS_CURV_GUARD * jet.data_scale * (jet.factor("t") if normalized else 1.0)
    out["gausscurv"] = gaussian_curvature(Lx, Ly, Lt, Lxx, Lxy, Lyy, Lxt, Lyt, Ltt, guard)
    return out


def gaussian_curvature(Lx, Ly, Lt, Lxx, Lxy, Lyy, Lxt, Lyt, Ltt, guard=0.0):
    """Rescaled Gaussian curvature of the level surface; 0 where |L_t| <= guard."""
    a = Lt * (Lxx * Lt - 2 * Lx * Lxt) + Lx * Lx * Ltt
    b = Lt * (Lyy * Lt - 2 * Ly * Lyt) + Ly * Ly * Ltt
    c = Lt * (-Lx * Lyt + Lxy * Lt - Lxt * Ly) + Lx * Ly * Ltt
    Lt = np.asarray(Lt, dtype=float)
    ok = np.abs(Lt) > guard
    den = np.where(ok, Lt * Lt, 1.0)
    return np.where(ok, (a * b - c * c) / den, 0.0)


def quasi_quadrature(jet: JetSlice, which: str, params: FeatureParams = FeatureParams(),
                     normalized: bool = True) -> np.ndarray:
    g = lambda n: jet.get(n, normalized)
    C, k2 = params.C, params.kappa ** 2
    if which == "q1":
        return (g("x") ** 2 + g("y") ** 2 + k2 * g("t") ** 2
                + C * (g("xx") ** 2 + 2 * g("xy") ** 2 + g("yy") ** 2
                       + k2 * (g("xt") ** 2 + g("yt") ** 2) + k2 * k2 * g("tt") ** 2))
    if which == "q2":
        return (g("t") ** 2 + C * g("tt") ** 2) * _spatial_quasi(g, "", "", C)
    if which == "q3":
        return _spatial_quasi(g, "t", "t", C) + C * _spatial_quasi(g, "tt", "tt", C)
    raise ParameterError(f"unknown quasi quadrature measure {which!r}")


FEATURE_NEEDS = dict(SPATIAL_NEEDS)
FEATURE_NEEDS.update({
    "dtlap": {"xxt", "yyt"},
    "dttlap": {"xxtt", "yytt"},
    "qtlap": {"xxt", "yyt", "xxtt", "yytt"},
    "dtdeth": {"xx", "xy", "yy", "xxt", "xyt", "yyt"},
    "dttdeth": {"xx", "xy", "yy", "xxt", "xyt", "yyt", "xxtt", "xytt", "yytt"},
    "qtdeth": {"xx", "xy", "yy", "xxt", "xyt", "yyt", "xxtt", "xytt", "yytt"},
    "deth3": {"xx", "yy", "tt", "xy", "xt", "yt"},
    "stlap": {"xx", "yy", "tt"},
    "gausscurv": {"x", "y", "t", "xx", "yy", "tt", "xy", "xt", "yt"},
    "q1": {"x", "y", "t", "xx", "xy", "yy", "xt", "yt", "tt"},
    "q2": {"t", "tt", "x", "y", "xx", "xy", "yy"},
    "q3": {"xt", "yt", "xxt", "xyt", "yyt", "xtt", "ytt", "xxtt", "xytt", "yytt"},
})
FEATURES = tuple(FEATURE_NEEDS)


def needed_partials(features: Iterable[str]) -> Set[str]:
    out: Set[str] = set()
    for f in features:
        if f not in FEATURE_NEEDS:
            raise ParameterError(f"unknown feature {f!r}; choose from {', '.join(FEATURES)}")
        out |= FEATURE_NEEDS[f]
    return out


def max_temporal_order(features: Iterable[str]) -> int:
    return max((orders(p)[2] for p in needed_partials(features)), default=0)


def evaluate_feature(jet: JetSlice, name: str, params: FeatureParams = FeatureParams(),
                     normalized: bool = True) -> np.ndarray:
    if name in SPATIAL_NEEDS:
        return spatial_invariant(jet, name, params, normalized)
    if name in ("dtlap", "dttlap", "qtlap"):
        return lgn_operators(jet, params, normalized)[name]
    if name in ("dtdeth", "dttdeth", "qtdeth"):
        return dethessian_temporal(jet, params, normalized)[name]
    if name in ("deth3", "stlap", "gausscurv"):
        return spatiotemporal_operators(jet, params, normalized)[name]
    if name in ("q1", "q2", "q3"):
        return quasi_quadrature(jet, name, params, normalized)
    raise ParameterError(f"unknown feature {name!r}")


# ---------------------------------------------------------------------------
# directional derivatives and velocity adaptation

def directional_coefficients(phi: float, m1: int, m2: int) -> Dict[Tuple[int, int], float]:
    """Expansion of d_phi^m1 d_perp^m2 into Cartesian partials, as {(nx, ny): coefficient}."""
    c, s = math.cos(phi), math.sin(phi)
    poly = np.zeros((1, 1))
    poly[0, 0] = 1.0
    # poly[i, j] multiplies d_x^i d_y^j
    for a, b, m in ((c, s, m1), (s, -c, m2)):
        for _ in range(m):
            new = np.zeros((poly.shape[0] + 1, poly.shape[1] + 1))
            new[1:, :-1] += a * poly
            new[:-1, 1:] += b * poly
            poly = new
    return {(i, j): float(poly[i, j]) for i in range(poly.shape[0]) for j in range(poly.shape[1])
            if poly[i, j] != 0 and i + j == m1 + m2}


def directional_derivative(jet: JetSlice, phi: float, m1: int, m2: int, n: int = 0,
                           normalized: bool = True) -> np.ndarray:
    out = None
    for (i, j), w in directional_coefficients(phi, m1, m2).items():
        term = w * jet.get("x" * i + "y" * j + "t" * n, normalized)
        out = term if out is None else out + term
    return out


def velocity_warp(frame, v: Tuple[float, float], t: float) -> np.ndarray:
    """Resample so that a pattern moving with velocity v (pixels/frame) stands still.

    The output at x equals the input at x + v t; bicubic spline interpolation
    with mirrored borders.
    """
    vx, vy = v
    frame = np.asarray(frame, dtype=float)
    if vx == 0 and vy == 0:
        return frame.copy()
    return ndimage.shift(frame, (-vy * t, -vx * t), order=3, mode="mirror")


def velocity_unwarp(frame, v: Tuple[float, float], t: float) -> np.ndarray:
    return velocity_warp(frame, (-v[0], -v[1]), t)
