"""Central finite differences for the slice Cauchy-Riemann, Laplace and
Cauchy-Fueter operators.  These are verification oracles, not solvers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import quaternion as qt
from .errors import BadParameter, DomainError

# first / second derivative central stencils: offsets and coefficients
_D1 = {
    2: ((-1, 1), (-0.5, 0.5)),
    4: ((-2, -1, 1, 2), (1 / 12, -2 / 3, 2 / 3, -1 / 12)),
}
_D2 = {
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    4: ((-2, -1, 0, 1, 2), (-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12)),
}

_BASIS = np.eye(4)


@dataclass(frozen=True)
class FDScheme:
    h: float = 1e-3
    order: int = 4

    def __post_init__(self):
        if self.order not in (2, 4):
            raise BadParameter(f"order must be 2 or 4, got {self.order}")
        if not 1e-6 <= self.h <= 1e-1:
            raise BadParameter(f"step must lie in [1e-6, 1e-1], got {self.h}")

    @property
    def reach(self) -> float:
        """Largest distance from the centre touched by a stencil."""
        return self.order // 2 * self.h


FIRST_DERIVATIVE = FDScheme(1e-3, 4)
LAPLACIAN = FDScheme(5e-3, 4)


def _margin_check(f, q, margin: float, scheme: FDScheme | None = None) -> None:
    inner = getattr(f, "fd_scheme", None)
    if inner is not None:
        # nested stencils: require 2 * order * h of clearance
        outer = scheme or inner
        margin = max(margin, 2 * max(inner.order, outer.order) * max(inner.h, outer.h))
    dom = getattr(f, "domain", None)
    if dom is None:
        return
    x, y, _ = qt.slice_parts(q)
    r = np.hypot(x, y)
    if dom.value == "ball":
        ok = r + margin < 1.0
    else:
        ok = x - margin > 0.0
    if not np.all(ok):
        raise DomainError(f"stencil of radius {margin:g} leaves the {dom.value} domain")


def partial(f, q, axis: int, scheme: FDScheme = FIRST_DERIVATIVE) -> np.ndarray:
    """Partial derivative of ``f`` along quaternion coordinate ``axis``."""
    q = qt.asquat(q)
    offsets, coeffs = _D1[scheme.order]
    step = _BASIS[axis] * scheme.h
    acc = 0.0
    for o, c in zip(offsets, coeffs):
        acc = acc + c * f(q + o * step)
    return acc / scheme.h


def cr_slice_fd(f, z: qt.SlicePoint, scheme: FDScheme = FIRST_DERIVATIVE, right: bool = False,
                margin: float | None = None) -> np.ndarray:
    """Slice Cauchy-Riemann residual of ``f`` at ``z = x + I y``.

    Left: ``(d/dx + I d/dy) f``.  With ``right=True``: ``f (d/dx - d/dy I)``,
    i.e. ``df/dx - (df/dy) I``, which vanishes for right anti-regular ``f``.
    """
    unit = np.asarray(z.unit, dtype=float)
    Iq = np.concatenate([[0.0], unit])
    _margin_check(f, z.embed(), scheme.reach if margin is None else margin, scheme)
    offsets, coeffs = _D1[scheme.order]

    def along(dx, dy):
        acc = 0.0
        for o, c in zip(offsets, coeffs):
            acc = acc + c * f(qt.embed(z.re + o * dx, z.im + o * dy, unit))
        return acc / scheme.h

    fx = along(scheme.h, 0.0)
    fy = along(0.0, scheme.h)
    if right:
        return fx - qt.mul(fy, Iq)
    return fx + qt.mul(Iq, fy)


def laplacian_fd(f, q, scheme: FDScheme = LAPLACIAN, margin: float | None = None) -> np.ndarray:
    """Four-dimensional Laplacian, componentwise on quaternion values.

    ``q`` may be a stack of points ``(..., 4)``.
    """
    q = qt.asquat(q)
    _margin_check(f, q, scheme.reach if margin is None else margin, scheme)
    offsets, coeffs = _D2[scheme.order]
    centre = f(q)
    acc = 4.0 * coeffs[offsets.index(0)] * centre
    for axis in range(4):
        step = _BASIS[axis] * scheme.h
        for o, c in zip(offsets, coeffs):
            if o:
                acc = acc + c * f(q + o * step)
    return acc / scheme.h**2


def cauchy_fueter_fd(f, q, scheme: FDScheme = FIRST_DERIVATIVE, margin: float | None = None) -> np.ndarray:
    """Left Cauchy-Fueter operator ``d0 f + i d1 f + j d2 f + k d3 f``."""
    q = qt.asquat(q)
    _margin_check(f, q, scheme.reach if margin is None else margin, scheme)
    out = partial(f, q, 0, scheme)
    for axis, e in zip((1, 2, 3), (qt.I, qt.J, qt.K)):
        out = out + qt.mul(e, partial(f, q, axis, scheme))
    return out


def fd_laplacian_of(f, scheme: FDScheme = LAPLACIAN):
    """``q -> laplacian_fd(f, q)`` as a function, for nested checks.

    The returned function carries ``f``'s domain; nesting another stencil
    on it needs an interior margin of ``2 * order * h``.
    """

    def lap(q):
        return laplacian_fd(f, q, scheme, margin=0.0)

    lap.domain = getattr(f, "domain", None)
    lap.fd_scheme = scheme
    return lap
