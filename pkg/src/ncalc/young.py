"""Scalar Young-function calculus.

A Young function is a convex gauge ``Psi : [0, oo) -> [0, oo]`` with
``Psi(0) = 0`` and ``Psi(u) -> oo``, neither identically zero nor infinite
on ``(0, oo)``, and left continuous at ``b_Psi = sup{u : Psi(u) < oo}``.
This module provides the catalog used throughout the package

* ``power``    -- ``c * t**p`` with ``p >= 1``,
* ``coshm1``   -- ``cosh(t) - 1``,
* ``tlog``     -- ``t * log(t + 1)``,
* ``ent``      -- ``max(t, t * log(t + 1))`` (the entropic gauge),
* ``table``    -- sampled values with linear interpolation, ``+oo`` past
  the last knot,

together with Legendre conjugation ``Psi*(u) = sup_v (u v - Psi(v))``, the
generalized right-continuous inverse ``Psi^{-1}(u) = sup{t : Psi(t) <= u}``,
and the two fundamental functions

    ``phi(t) = 1 / Psi^{-1}(1 / t)``         (Luxemburg side)
    ``phitilde(t) = t / phi_{Psi*}(t)``      (Orlicz side)

which satisfy the product identity ``phi_Psi(t) * phitilde_{Psi*}(t) = t``.

All evaluators are pure, accept scalars or numpy arrays, and are safe for
concurrent use.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "YoungFunction",
    "FundamentalPair",
    "evaluate",
    "conjugate",
    "inverse",
    "inverse_bisect",
    "fundamental_luxemburg",
    "fundamental_orlicz",
    "fundamental_pair",
    "from_name",
    "DEFAULT_CATALOG",
]

# Legendre supremum grid: log-spaced, refined by golden section around the
# argmax (the objective v -> u*v - Psi(v) is concave, so the grid argmax
# brackets the true restricted maximizer).
_VGRID_MIN = 1e-8
_VGRID_MAX = 1e8
_VGRID_N = 4096

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # golden ratio conjugate

DEFAULT_CATALOG = ("power:2", "power:3", "coshm1", "tlog", "ent")


def _as_array(t, name="t"):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError(f"{name} must be nonnegative, got {t!r}")
    return arr


@dataclass(frozen=True)
class YoungFunction:
    """A Young function from the catalog, a table, or a Legendre conjugate.

    Parameters
    ----------
    kind:
        One of ``"power"``, ``"coshm1"``, ``"coshm1_conj"``, ``"tlog"``,
        ``"ent"``, ``"table"``, ``"legendre"``.
    params:
        For ``power``: ``(p, c)`` meaning ``c * t**p``.
    knots, values:
        Sample points for the ``table`` kind; strictly increasing ``knots``
        starting at 0 with ``values[0] == 0``.
    base:
        The conjugand for the ``legendre`` kind.
    """

    kind: str
    params: tuple = ()
    knots: tuple = field(default=())
    values: tuple = field(default=())
    base: "YoungFunction | None" = None

    def __post_init__(self):
        if self.kind == "power":
            p, c = self.params
            if p < 1:
                raise DomainError(f"power exponent must be >= 1, got {p}")
            if c <= 0:
                raise DomainError(f"power coefficient must be > 0, got {c}")
        elif self.kind == "table":
            t = np.asarray(self.knots, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if t.ndim != 1 or t.shape != v.shape or t.size < 2:
                raise DomainError("table needs matching 1-d knots/values")
            if np.any(np.diff(t) <= 0):
                raise DomainError("table knots must be strictly increasing")
            if t[0] != 0.0 or v[0] != 0.0:
                raise DomainError("table must start at the knot (0, 0)")
            if np.any(v < 0) or np.any(np.diff(v) < -1e-12):
                raise DomainError("table values must be nonnegative and nondecreasing")
            # convexity: second divided differences of the sampled gauge
            if t.size >= 3:
                d1 = np.diff(v) / np.diff(t)
                if np.any(np.diff(d1) < -1e-12):
                    raise DomainError("table is not convex (second divided differences < -1e-12)")
            if not np.any(v > 0):
                raise DomainError("table is identically zero on its grid")
        elif self.kind == "legendre":
            if self.base is None:
                raise DomainError("legendre kind needs a base function")
        elif self.kind not in ("coshm1", "coshm1_conj", "tlog", "ent"):
            raise DomainError(f"unknown Young-function kind {self.kind!r}")

    # -- evaluation ------------------------------------------------------

    def __call__(self, t):
        arr = _as_array(t)
        out = self._eval(arr)
        if np.isscalar(t) or np.ndim(t) == 0:
            return float(out)
        return out

    def _eval(self, arr):
        if self.kind == "power":
            p, c = self.params
            with np.errstate(over="ignore"):
                return c * arr ** p
        if self.kind == "coshm1":
            with np.errstate(over="ignore"):
                return np.cosh(arr) - 1.0
        if self.kind == "coshm1_conj":
            # u*arcsinh(u) - sqrt(1+u^2) + 1, the conjugate of cosh - 1
            return arr * np.arcsinh(arr) - np.sqrt(1.0 + arr * arr) + 1.0
        if self.kind == "tlog":
            return arr * np.log1p(arr)
        if self.kind == "ent":
            return np.maximum(arr, arr * np.log1p(arr))
        if self.kind == "table":
            t = np.asarray(self.knots)
            v = np.asarray(self.values)
            out = np.interp(arr, t, v)
            return np.where(arr > t[-1], np.inf, out)
        if self.kind == "legendre":
            return _legendre_sup(self.base, arr)
        raise AssertionError(self.kind)

    # -- structure -------------------------------------------------------

    @property
    def finite_bound(self) -> float:
        """``b_Psi``: the supremum of the region where the gauge is finite."""
        if self.kind == "table":
            return float(self.knots[-1])
        return math.inf

    def conjugate(self) -> "YoungFunction":
        """The complementary function ``Psi*(u) = sup_v (u v - Psi(v))``.

        Closed forms are returned for powers (``c t^p`` maps to
        ``c* u^q`` with ``1/p + 1/q = 1``) and for ``cosh - 1``; the
        conjugate of a conjugate is the original gauge (Fenchel-Moreau);
        everything else is evaluated lazily by grid supremum.
        """
        if self.kind == "power":
            p, c = self.params
            if p == 1.0:
                # sup_v (u - c) v: indicator of [0, c]
                return YoungFunction("table", knots=(0.0, c), values=(0.0, 0.0))
            q = p / (p - 1.0)
            cstar = (c * p) ** (1.0 - q) * (p - 1.0) / p
            return YoungFunction("power", (q, cstar))
        if self.kind == "coshm1":
            return YoungFunction("coshm1_conj")
        if self.kind == "coshm1_conj":
            return YoungFunction("coshm1")
        if self.kind == "legendre":
            return self.base
        return YoungFunction("legendre", base=self)

    # -- serialization ---------------------------------------------------

    @staticmethod
    def from_csv(path) -> "YoungFunction":
        """Load a tabulated gauge from two-column CSV rows ``t, Psi(t)``."""
        knots, values = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                knots.append(float(row[0]))
                values.append(float(row[1]))
        return YoungFunction("table", knots=tuple(knots), values=tuple(values))

    def __repr__(self):
        if self.kind == "power":
            p, c = self.params
            return f"YoungFunction(power p={p:g}, c={c:g})"
        if self.kind == "legendre":
            return f"YoungFunction(legendre of {self.base!r})"
        return f"YoungFunction({self.kind})"


def power(p: float, c: float = 1.0) -> YoungFunction:
    return YoungFunction("power", (float(p), float(c)))


def coshm1() -> YoungFunction:
    return YoungFunction("coshm1")


def tlog() -> YoungFunction:
    return YoungFunction("tlog")


def ent() -> YoungFunction:
    return YoungFunction("ent")


def from_name(name: str) -> YoungFunction:
    """Parse a catalog name: ``power:p``, ``coshm1``, ``tlog``, ``ent``."""
    name = name.strip()
    if name.startswith("power:"):
        return power(float(name.split(":", 1)[1]))
    if name == "coshm1":
        return coshm1()
    if name == "tlog":
        return tlog()
    if name == "ent":
        return ent()
    raise DomainError(f"unknown Young-function name {name!r}")


# ---------------------------------------------------------------------------
# Legendre supremum
# ---------------------------------------------------------------------------

def _legendre_sup(base: YoungFunction, u):
    """``sup_v (u v - base(v))`` on the standard grid, golden-refined."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    vmax = min(_VGRID_MAX, base.finite_bound)
    grid = np.concatenate(([0.0], np.geomspace(_VGRID_MIN, vmax, _VGRID_N)))
    fvals = base._eval(grid)
    obj = u[:, None] * grid[None, :] - fvals[None, :]
    obj = np.where(np.isfinite(obj), obj, -np.inf)
    j = np.argmax(obj, axis=1)
    best = obj[np.arange(u.size), j]
    # refine in the bracketing interval around the grid argmax
    lo = grid[np.maximum(j - 1, 0)]
    hi = grid[np.minimum(j + 1, grid.size - 1)]
    refined = best
    for _ in range(80):
        x1 = hi - _INVPHI * (hi - lo)
        x2 = lo + _INVPHI * (hi - lo)
        f1 = u * x1 - base._eval(x1)
        f2 = u * x2 - base._eval(x2)
        f1 = np.where(np.isfinite(f1), f1, -np.inf)
        f2 = np.where(np.isfinite(f2), f2, -np.inf)
        refined = np.maximum(refined, np.maximum(f1, f2))
        shrink_right = f1 >= f2
        hi = np.where(shrink_right, x2, hi)
        lo = np.where(shrink_right, lo, x1)
    return np.maximum(refined, 0.0)  # sup includes v = 0


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def evaluate(psi: YoungFunction, t):
    """``Psi(t)`` for ``t >= 0``; ``+oo`` past ``b_Psi`` for tables."""
    return psi(t)


def conjugate(psi: YoungFunction) -> YoungFunction:
    return psi.conjugate()


def inverse_bisect(psi: YoungFunction, u):
    """Generalized inverse by monotone bisection, ignoring closed forms.

    Returns ``sup{t : Psi(t) <= u}`` to relative tolerance 1e-12; used both
    as the generic path for gauges without closed-form inverses and as an
    independent oracle for the ones with.
    """
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u_arr < 0):
        raise DomainError("inverse requires u >= 0")
    lo = np.zeros_like(u_arr)
    hi = np.ones_like(u_arr)
    bmax = psi.finite_bound
    # grow the bracket geometrically while still feasible
    for _ in range(1100):
        vals = psi._eval(hi)
        mask = vals <= u_arr
        if not np.any(mask):
            break
        lo = np.where(mask, hi, lo)
        hi = np.where(mask, hi * 2.0, hi)
        if np.all(hi >= bmax) and math.isfinite(bmax):
            hi = np.minimum(hi, bmax)
            break
    if math.isfinite(bmax):
        # beyond b_Psi the gauge is +oo, so the sup never exceeds b_Psi
        hi = np.minimum(hi, bmax)
        lo = np.minimum(lo, bmax)
        at_cap = psi._eval(np.full_like(u_arr, bmax)) <= u_arr
        lo = np.where(at_cap, bmax, lo)
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        mask = psi._eval(mid) <= u_arr
        lo = np.where(mask, mid, lo)
        hi = np.where(mask, hi, mid)
    out = lo
    if np.isscalar(u) or np.ndim(u) == 0:
        return float(out[0])
    return out


def inverse(psi: YoungFunction, u):
    """Right-continuous generalized inverse ``sup{t : Psi(t) <= u}``."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u_arr < 0) or np.any(np.isnan(u_arr)):
        raise DomainError("inverse requires u >= 0")
    if psi.kind == "power":
        p, c = psi.params
        out = (u_arr / c) ** (1.0 / p)
    elif psi.kind == "coshm1":
        out = np.arccosh(1.0 + u_arr)
    else:
        out = np.atleast_1d(inverse_bisect(psi, u_arr))
    if np.isscalar(u) or np.ndim(u) == 0:
        return float(out[0])
    return out


def fundamental_luxemburg(psi: YoungFunction, t):
    """Fundamental function ``phi(t) = 1 / Psi^{-1}(1 / t)``, ``t > 0``."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0) or np.any(np.isnan(t_arr)):
        raise DomainError("fundamental functions need t > 0")
    out = 1.0 / inverse(psi, 1.0 / t_arr)
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(out[0])
    return out


def fundamental_orlicz(psi: YoungFunction, t):
    """Orlicz-side fundamental function ``phitilde(t) = t / phi_{Psi*}(t)``."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0) or np.any(np.isnan(t_arr)):
        raise DomainError("fundamental functions need t > 0")
    out = t_arr / fundamental_luxemburg(psi.conjugate(), t_arr)
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(out[0])
    return out


@dataclass(frozen=True)
class FundamentalPair:
    """The two fundamental functions of a gauge, as callables."""

    psi: YoungFunction

    def luxemburg(self, t):
        return fundamental_luxemburg(self.psi, t)

    def orlicz(self, t):
        return fundamental_orlicz(self.psi, t)

    def quasiconcavity_defect(self, grid=None) -> float:
        """Largest violation of quasi-concavity on a sample grid.

        Both maps must be nondecreasing with ``t -> phi(t)/t`` nonincreasing;
        returns the worst signed violation (negative slack is a violation).
        """
        if grid is None:
            grid = np.geomspace(1e-4, 1e4, 200)
        worst = 0.0
        for fn in (self.luxemburg, self.orlicz):
            vals = fn(grid)
            worst = max(worst, float(np.max(-np.diff(vals), initial=0.0)))
            ratio = vals / grid
            worst = max(worst, float(np.max(np.diff(ratio), initial=0.0)))
        return worst


def fundamental_pair(psi: YoungFunction) -> FundamentalPair:
    return FundamentalPair(psi)
