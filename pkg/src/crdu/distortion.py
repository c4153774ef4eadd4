"""Probability distortion functions and vNM utility functions.

Distortions map [0,1] onto itself fixing the endpoints; utilities are
continuous, strictly increasing functions on an explicit payoff interval.
Both evaluate on scalars or numpy arrays, invert in closed form, and expose
shape tests (convex/concave) used by the attitude checkers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_EDGE_TOL = 1e-12


class DomainError(ValueError):
    """An argument fell outside the function's declared domain or range."""


def _check_unit_interval(x, tol: float = 1e-9):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -tol) or np.any(arr > 1.0 + tol):
        raise DomainError("argument outside [0, 1]")
    return np.clip(arr, 0.0, 1.0)


def _pwl_slopes(points: tuple[tuple[float, float], ...]) -> np.ndarray:
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    return np.diff(ys) / np.diff(xs)


@dataclass(frozen=True)
class Distortion:
    """Nondecreasing map of [0,1] with g(0)=0 and g(1)=1.

    Kinds: ``identity``, ``power`` (x**gamma, gamma > 0) and ``pwl``
    (piecewise linear through the given knots). Whether the function is
    strictly increasing is derived at construction.
    """

    kind: str
    gamma: float | None = None
    points: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.kind == "identity":
            pass
        elif self.kind == "power":
            if self.gamma is None or self.gamma <= 0:
                raise ValueError("power distortion needs gamma > 0")
        elif self.kind == "pwl":
            if self.points is None or len(self.points) < 2:
                raise ValueError("pwl distortion needs at least two points")
            pts = tuple((float(x), float(y)) for x, y in self.points)
            object.__setattr__(self, "points", pts)
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError("pwl x-coordinates must be strictly increasing")
            if abs(xs[0]) > _EDGE_TOL or abs(xs[-1] - 1) > _EDGE_TOL:
                raise ValueError("pwl must span [0, 1]")
            if abs(ys[0]) > _EDGE_TOL or abs(ys[-1] - 1) > _EDGE_TOL:
                raise ValueError("pwl must map 0 to 0 and 1 to 1")
            if any(b < a - _EDGE_TOL for a, b in zip(ys, ys[1:])):
                raise ValueError("pwl must be nondecreasing")
        else:
            raise ValueError(f"unknown distortion kind {self.kind!r}")

    @classmethod
    def identity(cls) -> "Distortion":
        return cls("identity")

    @classmethod
    def power(cls, gamma: float) -> "Distortion":
        return cls("power", gamma=float(gamma))

    @classmethod
    def piecewise_linear(cls, points) -> "Distortion":
        return cls("pwl", points=tuple(points))

    @property
    def strictly_increasing(self) -> bool:
        if self.kind in ("identity", "power"):
            return True
        ys = [p[1] for p in self.points]
        return all(b > a for a, b in zip(ys, ys[1:]))

    def __call__(self, x):
        arr = _check_unit_interval(x)
        if self.kind == "identity":
            out = arr
        elif self.kind == "power":
            out = arr ** self.gamma
        else:
            xs = [p[0] for p in self.points]
            ys = [p[1] for p in self.points]
            out = np.interp(arr, xs, ys)
        return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out

    def inverse(self, y: float) -> float:
        """The x in [0,1] with g(x) = y; requires a strictly increasing g."""
        if not self.strictly_increasing:
            raise ValueError("inverse requires a strictly increasing distortion")
        yv = float(_check_unit_interval(y))
        if self.kind == "identity":
            return yv
        if self.kind == "power":
            return yv ** (1.0 / self.gamma)
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return float(np.interp(yv, ys, xs))

    def inverse_distortion(self) -> "Distortion":
        """The compositional inverse as a distortion object."""
        if not self.strictly_increasing:
            raise ValueError("inverse requires a strictly increasing distortion")
        if self.kind == "identity":
            return Distortion.identity()
        if self.kind == "power":
            return Distortion.power(1.0 / self.gamma)
        return Distortion.piecewise_linear(tuple((y, x) for x, y in self.points))

    def is_convex(self, tol: float = 1e-12) -> bool:
        if self.kind == "identity":
            return True
        if self.kind == "power":
            return self.gamma >= 1.0
        s = _pwl_slopes(self.points)
        return bool((np.diff(s) >= -tol).all())

    def is_concave(self, tol: float = 1e-12) -> bool:
        if self.kind == "identity":
            return True
        if self.kind == "power":
            return self.gamma <= 1.0
        s = _pwl_slopes(self.points)
        return bool((np.diff(s) <= tol).all())

    def is_strictly_concave(self, tol: float = 1e-12) -> bool:
        if self.kind == "identity":
            return False
        if self.kind == "power":
            return self.gamma < 1.0
        s = _pwl_slopes(self.points)
        return bool((np.diff(s) < -tol).all())


@dataclass(frozen=True)
class Utility:
    """Continuous, strictly increasing payoff valuation on a closed interval.

    Kinds: ``identity``; ``power`` (x**gamma on a nonnegative domain);
    ``exponential`` (-exp(-x/beta), beta > 0); ``pwl`` through given knots.
    `scale`/`shift` apply an increasing affine transform on top of the base
    kind, which is how normalization to u(0)=0, u(1)=1 is realized.
    Arguments outside [lo, hi] are rejected rather than extrapolated.
    """

    kind: str
    lo: float = -math.inf
    hi: float = math.inf
    gamma: float | None = None
    beta: float | None = None
    points: tuple[tuple[float, float], ...] | None = None
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if self.hi <= self.lo:
            raise ValueError("domain must satisfy lo < hi")
        if self.scale <= 0:
            raise ValueError("scale must be positive (strict monotonicity)")
        if self.kind == "identity":
            pass
        elif self.kind == "power":
            if self.gamma is None or self.gamma <= 0:
                raise ValueError("power utility needs gamma > 0")
            if self.lo < 0:
                raise ValueError("power utility needs a nonnegative domain")
        elif self.kind == "exponential":
            if self.beta is None or self.beta <= 0:
                raise ValueError("exponential utility needs beta > 0")
        elif self.kind == "pwl":
            if self.points is None or len(self.points) < 2:
                raise ValueError("pwl utility needs at least two points")
            pts = tuple((float(x), float(y)) for x, y in self.points)
            object.__setattr__(self, "points", pts)
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError("pwl x-coordinates must be strictly increasing")
            if any(b <= a for a, b in zip(ys, ys[1:])):
                raise ValueError("pwl utility must be strictly increasing")
            object.__setattr__(self, "lo", xs[0])
            object.__setattr__(self, "hi", xs[-1])
        else:
            raise ValueError(f"unknown utility kind {self.kind!r}")

    @classmethod
    def identity(cls, lo: float = -math.inf, hi: float = math.inf) -> "Utility":
        return cls("identity", lo=lo, hi=hi)

    @classmethod
    def power(cls, gamma: float, lo: float = 0.0, hi: float = math.inf) -> "Utility":
        return cls("power", lo=lo, hi=hi, gamma=float(gamma))

    @classmethod
    def exponential(cls, beta: float, lo: float = -math.inf, hi: float = math.inf) -> "Utility":
        return cls("exponential", lo=lo, hi=hi, beta=float(beta))

    @classmethod
    def piecewise_linear(cls, points) -> "Utility":
        return cls("pwl", points=tuple(points))

    def _check_domain(self, x, tol: float = 1e-9):
        arr = np.asarray(x, dtype=float)
        if np.any(arr < self.lo - tol) or np.any(arr > self.hi + tol):
            raise DomainError(f"payoff outside utility domain [{self.lo}, {self.hi}]")
        return np.clip(arr, self.lo, self.hi)

    def _base(self, arr: np.ndarray):
        if self.kind == "identity":
            return arr
        if self.kind == "power":
            return arr ** self.gamma
        if self.kind == "exponential":
            return -np.exp(-arr / self.beta)
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return np.interp(arr, xs, ys)

    def __call__(self, x):
        arr = self._check_domain(x)
        out = self.scale * self._base(arr) + self.shift
        return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out

    @property
    def value_range(self) -> tuple[float, float]:
        if math.isfinite(self.lo):
            lo_v = self.scale * float(self._base(np.asarray(self.lo))) + self.shift
        else:
            lo_v = -math.inf
        if math.isfinite(self.hi):
            hi_v = self.scale * float(self._base(np.asarray(self.hi))) + self.shift
        elif self.kind == "exponential":
            hi_v = self.shift  # -exp(-x/beta) approaches 0 from below
        else:
            hi_v = math.inf
        return lo_v, hi_v

    def inverse(self, y: float) -> float:
        """The payoff x in the domain with u(x) = y."""
        lo_v, hi_v = self.value_range
        tol = 1e-9 * max(1.0, abs(y))
        if y < lo_v - tol or y > hi_v + tol:
            raise DomainError("value outside utility range")
        base_y = (float(y) - self.shift) / self.scale
        if self.kind == "identity":
            x = base_y
        elif self.kind == "power":
            x = max(base_y, 0.0) ** (1.0 / self.gamma)
        elif self.kind == "exponential":
            x = self.hi if base_y >= 0 else -self.beta * math.log(-base_y)
        else:
            xs = [p[0] for p in self.points]
            ys = [p[1] for p in self.points]
            x = float(np.interp(base_y, ys, xs))
        return float(min(max(x, self.lo), self.hi))

    def normalized(self) -> "Utility":
        """Affine rescaling with u(0) = 0 and u(1) = 1; needs [0,1] in the domain."""
        if self.lo > 0.0 or self.hi < 1.0:
            raise DomainError("normalization needs [0, 1] inside the domain")
        u0 = self.scale * float(self._base(np.asarray(0.0))) + self.shift
        u1 = self.scale * float(self._base(np.asarray(1.0))) + self.shift
        if abs(u0) <= 1e-15 and abs(u1 - 1.0) <= 1e-15:
            # Already normalized up to round-off; keep the exact parameters so
            # that re-normalizing is idempotent (stable file round trips).
            return self
        new_scale = self.scale / (u1 - u0)
        new_shift = (self.shift - u0) / (u1 - u0)
        return Utility(self.kind, lo=self.lo, hi=self.hi, gamma=self.gamma,
                       beta=self.beta, points=self.points,
                       scale=new_scale, shift=new_shift)

    @property
    def is_normalized(self) -> bool:
        if self.lo > 0.0 or self.hi < 1.0:
            return False
        u0 = self.scale * float(self._base(np.asarray(0.0))) + self.shift
        u1 = self.scale * float(self._base(np.asarray(1.0))) + self.shift
        return abs(u0) <= 1e-12 and abs(u1 - 1.0) <= 1e-12

    def is_concave(self, tol: float = 1e-12) -> bool:
        if self.kind == "identity":
            return True
        if self.kind == "power":
            return self.gamma <= 1.0
        if self.kind == "exponential":
            return True
        s = _pwl_slopes(self.points)
        return bool((np.diff(s) <= tol).all())

    def is_convex(self, tol: float = 1e-12) -> bool:
        if self.kind == "identity":
            return True
        if self.kind == "power":
            return self.gamma >= 1.0
        if self.kind == "exponential":
            return False
        s = _pwl_slopes(self.points)
        return bool((np.diff(s) >= -tol).all())
