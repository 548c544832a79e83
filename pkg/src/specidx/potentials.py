"""Short-range potentials with declared decay and effective support.

A :class:`PotentialSpec` bundles a vectorised evaluator with the data the
discretisations need: the decay exponent ``rho`` and constant ``C`` in
``|V(x)| <= C (1 + |x|)^(-rho)``, the radius outside which ``|V|`` is below
``1e-14 * max|V|``, and the points where ``V`` has a jump or a kink (quadrature
panels are split there).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

SUPPORT_REL = 1e-14
_LOG_CUT = np.log(1.0 / SUPPORT_REL)


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    eval: Callable[[np.ndarray], np.ndarray]
    rho: float
    support_radius: float
    C: float
    breakpoints: tuple = ()
    radial: bool = False
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.rho > 1:
            raise ValueError(f"decay exponent rho must exceed 1, got {self.rho}")
        if not self.support_radius > 0:
            raise ValueError(f"support_radius must be positive, got {self.support_radius}")
        x = self.sample_points(257)
        v = np.abs(self(x))
        envelope = self.C * (1 + np.abs(x)) ** (-self.rho)
        bad = v > envelope * (1 + 1e-9) + 1e-300
        if bad.any():
            i = int(np.argmax(bad))
            raise ValueError(f"|V({x[i]:g})| = {v[i]:.3e} exceeds the declared envelope "
                             f"{envelope[i]:.3e} (C={self.C:g}, rho={self.rho:g})")

    def __call__(self, x):
        return np.asarray(self.eval(np.asarray(x, dtype=float)), dtype=float)

    def sample_points(self, n: int) -> np.ndarray:
        lo = 0.0 if self.radial else -self.support_radius
        return np.linspace(lo, self.support_radius, n)

    @property
    def vmax(self) -> float:
        return float(np.max(np.abs(self(self.sample_points(4001)))))

    @property
    def is_zero(self) -> bool:
        return self.vmax == 0.0

    def sign_definite(self) -> int:
        """+1 if V >= 0, -1 if V <= 0 (and not identically 0), else 0."""
        v = self(self.sample_points(4001))
        if np.all(v >= 0) and np.any(v > 0):
            return 1
        if np.all(v <= 0) and np.any(v < 0):
            return -1
        return 0

    def l1_norm(self) -> float:
        """Integral of |V| over the line (over r in [0, R] when radial)."""
        from .quadrature import panel_rule
        lo = 0.0 if self.radial else -self.support_radius
        rule = panel_rule(lo, self.support_radius, 256, self.breakpoints)
        return float(np.sum(rule.weights * np.abs(self(rule.nodes))))

    def describe(self) -> dict:
        return {"name": self.name, **self.params}


def _envelope_constant(f, R, rho, radial=False, n=20001):
    x = np.linspace(0.0 if radial else -R, R, n)
    return float(np.max(np.abs(f(x)) * (1 + np.abs(x)) ** rho)) * (1 + 1e-6)


def zero(radius: float = 1.0) -> PotentialSpec:
    return PotentialSpec(eval=lambda x: np.zeros_like(x, dtype=float), rho=2.0,
                         support_radius=radius, C=0.0, name="zero")


def square_well(depth: float, width: float, center: float = 0.0) -> PotentialSpec:
    """``V = -depth`` on ``|x - center| <= width/2``, zero elsewhere."""
    a = 0.5 * width
    if a <= 0:
        raise ValueError("width must be positive")

    def f(x):
        return np.where(np.abs(x - center) <= a, -depth, 0.0)

    R = abs(center) + a
    return PotentialSpec(eval=f, rho=2.0, support_radius=R, C=abs(depth) * (1 + R) ** 2,
                         breakpoints=(center - a, center + a), name="square_well",
                         params={"depth": depth, "width": width, "center": center})


def gaussian(depth: float, width: float = 1.0, center: float = 0.0) -> PotentialSpec:
    """``V = -depth * exp(-((x - center)/width)^2)``."""

    def f(x):
        return -depth * np.exp(-((x - center) / width) ** 2)

    R = abs(center) + width * np.sqrt(_LOG_CUT)
    return PotentialSpec(eval=f, rho=2.0, support_radius=R, C=_envelope_constant(f, R, 2.0),
                         name="gaussian",
                         params={"depth": depth, "width": width, "center": center})


def gaussian_mixture(depths, centers, widths) -> PotentialSpec:
    """Sum of Gaussians ``-d_i exp(-((x - c_i)/w_i)^2)``; depths may have either sign."""
    d = np.asarray(depths, float)
    c = np.asarray(centers, float)
    w = np.asarray(widths, float)

    def f(x):
        x = np.asarray(x, float)
        return -np.sum(d[:, None] * np.exp(-((x.reshape(1, -1) - c[:, None]) / w[:, None]) ** 2),
                       axis=0).reshape(x.shape)

    scale = np.abs(d).sum() / max(np.abs(d).max(), 1e-300)
    R = float(np.max(np.abs(c) + w * np.sqrt(_LOG_CUT + np.log(max(scale, 1.0)))))
    return PotentialSpec(eval=f, rho=2.0, support_radius=R, C=_envelope_constant(f, R, 2.0),
                         name="gaussian_mixture",
                         params={"depths": d.tolist(), "centers": c.tolist(), "widths": w.tolist()})


def poschl_teller(strength: float = 2.0, width: float = 1.0) -> PotentialSpec:
    """``V = -strength * sech^2(x/width)``; ``strength = 2`` is reflectionless."""

    def f(x):
        return -strength / np.cosh(x / width) ** 2

    # 4 exp(-2|x|/w) <= 1e-14
    R = 0.5 * width * (np.log(4.0) + _LOG_CUT)
    return PotentialSpec(eval=f, rho=2.0, support_radius=R, C=_envelope_constant(f, R, 2.0),
                         name="poschl_teller", params={"strength": strength, "width": width})


def exponential(depth: float, decay: float = 1.0) -> PotentialSpec:
    """``V = -depth * exp(-decay * |x|)``; kink at the origin."""

    def f(x):
        return -depth * np.exp(-decay * np.abs(x))

    R = _LOG_CUT / decay
    return PotentialSpec(eval=f, rho=2.0, support_radius=R, C=_envelope_constant(f, R, 2.0),
                         breakpoints=(0.0,), name="exponential",
                         params={"depth": depth, "decay": decay})


def tabulated(x, v) -> PotentialSpec:
    """Piecewise-linear interpolation of a table, zero outside its range."""
    x = np.asarray(x, float)
    v = np.asarray(v, float)
    if x.ndim != 1 or x.shape != v.shape or x.size < 2 or np.any(np.diff(x) <= 0):
        raise ValueError("table needs strictly increasing x and matching v (>= 2 points)")

    def f(t):
        return np.interp(t, x, v, left=0.0, right=0.0)

    R = float(max(abs(x[0]), abs(x[-1])))
    bps = tuple(float(t) for t in x) if x.size <= 64 else (float(x[0]), float(x[-1]))
    return PotentialSpec(eval=f, rho=2.0, support_radius=R, C=_envelope_constant(f, R, 2.0),
                         breakpoints=bps, name="custom-table",
                         params={"x": x.tolist(), "v": v.tolist()})


# --- radial potentials for the three-dimensional partial-wave channels ---

def radial_indicator(depth: float, radius: float = 1.0) -> PotentialSpec:
    """``V(r) = -depth`` for ``r < radius``."""

    def f(r):
        return np.where(np.abs(r) < radius, -depth, 0.0)

    return PotentialSpec(eval=f, rho=3.0, support_radius=radius,
                         C=abs(depth) * (1 + radius) ** 3, breakpoints=(radius,), radial=True,
                         name="radial_indicator", params={"depth": depth, "radius": radius})


def radial_gaussian(depth: float, width: float = 1.0) -> PotentialSpec:
    def f(r):
        return -depth * np.exp(-(r / width) ** 2)

    R = width * np.sqrt(_LOG_CUT)
    return PotentialSpec(eval=f, rho=3.0, support_radius=R,
                         C=_envelope_constant(f, R, 3.0, radial=True), radial=True,
                         name="radial_gaussian", params={"depth": depth, "width": width})


def radial_exponential(depth: float, decay: float = 1.0) -> PotentialSpec:
    def f(r):
        return -depth * np.exp(-decay * np.abs(r))

    R = _LOG_CUT / decay
    return PotentialSpec(eval=f, rho=3.0, support_radius=R,
                         C=_envelope_constant(f, R, 3.0, radial=True), radial=True,
                         name="radial_exponential", params={"depth": depth, "decay": decay})


BUILTINS = {
    "square_well": square_well,
    "gaussian": gaussian,
    "gaussian_mixture": gaussian_mixture,
    "poschl_teller": poschl_teller,
    "exponential": exponential,
    "custom-table": tabulated,
    "zero": zero,
}


def from_name(name: str, **params) -> PotentialSpec:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown potential {name!r}; choose from {sorted(BUILTINS)}") from None
    return factory(**params)
