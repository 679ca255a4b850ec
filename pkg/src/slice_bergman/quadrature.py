"""Quadrature on complex slices and Monte Carlo on the 4-ball.

Slice integrals use tensor rules in polar coordinates: Gauss-Legendre in
the radius (with the ``r dr`` Jacobian folded into the weights) and either
the periodic trapezoid rule or Gauss-Legendre panels in the angle.  The
right half-plane is truncated to ``(0, R) x (-R, R)`` and compressed toward
the imaginary axis and the origin, where the half-space kernel lives.

Reductions are per quaternion component over a contiguous axis, which
numpy sums pairwise; node order is fixed by the rule, so results are
reproducible bit for bit.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import quaternion as qt
from .errors import BadParameter, DivergenceSuspected, NonFiniteSample
from .functions import Domain

#: angular measure of the sphere of imaginary units (4 pi)
AXIAL_FACTOR = 4.0 * np.pi

DEFAULT_HALFPLANE_R = 50.0
#: length scale of the node compression on the half-plane rules
DEFAULT_HALFPLANE_SCALE = 0.05
THREADS_ENV = "SLICE_BERGMAN_THREADS"


class WeightId(enum.Enum):
    NONE = "none"
    RHO = "rho"      # Im(z)^2
    DELTA = "delta"  # 1 / |Im q|^2

    @classmethod
    def parse(cls, name) -> "WeightId":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise BadParameter(f"unknown weight {name!r}; expected none, rho or delta") from None

    def __call__(self, y: np.ndarray) -> np.ndarray:
        if self is WeightId.NONE:
            return np.ones_like(y)
        if self is WeightId.RHO:
            return y * y
        if np.any(y == 0):
            raise BadParameter("delta weight is undefined on the real axis")
        return 1.0 / (y * y)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes ``x + i y`` of a planar region with weights for ``dx dy``."""

    x: np.ndarray
    y: np.ndarray
    weights: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def area(self) -> float:
        return float(self.weights.sum())

    def describe(self) -> dict:
        return {"kind": self.kind, "nodes": int(self.size), **self.params}


def _gauss(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (t + 1.0), w * half


def _polar(r, wr, theta, wt, kind, params) -> QuadratureRule:
    R, T = np.meshgrid(r, theta, indexing="ij")
    W = np.outer(wr * r, wt)
    return QuadratureRule(
        (R * np.cos(T)).ravel(), (R * np.sin(T)).ravel(), W.ravel(), kind, params
    )


def build_rule(
    kind: str,
    n_r: int,
    n_theta: int,
    radius: float = 1.0,
    angular: str = "trapezoid",
    scale: float = DEFAULT_HALFPLANE_SCALE,
) -> QuadratureRule:
    """Tensor quadrature rule on a planar region.

    Parameters
    ----------
    kind : {"disk", "halfdisk", "halfplane", "upper_halfplane"}
        Disk ``|z| < radius``; its upper half; the truncated right half-plane
        ``(0, R) x (-R, R)``; or its upper half ``(0, R) x (0, R)``.  For the
        half-plane kinds ``radius`` is the truncation ``R``.
    n_r, n_theta : int
        Radial and angular node counts (for half-planes: nodes across and
        along the imaginary axis).
    angular : {"trapezoid", "gauss"}
        Full disk only.  The trapezoid rule (nodes at half-integer angles,
        never on the real axis) is spectrally accurate for smooth periodic
        integrands; "gauss" uses two Gauss-Legendre panels split at the real
        axis, which resolves singularities sitting on the boundary there.
    scale : float
        Half-plane node compression length.
    """
    if n_r < 1 or n_theta < 4:
        raise BadParameter(f"need n_r >= 1 and n_theta >= 4, got {n_r}, {n_theta}")
    if not radius > 0:
        raise BadParameter(f"radius must be positive, got {radius}")
    params = {"n_r": int(n_r), "n_theta": int(n_theta), "radius": float(radius)}

    if kind in ("disk", "halfdisk"):
        if radius > 1.0 + 1e-15:
            raise BadParameter("disk rules are for sub-disks of the unit disk (radius <= 1)")
        r, wr = _gauss(n_r, 0.0, radius)
        if kind == "halfdisk":
            theta, wt = _gauss(n_theta, 0.0, np.pi)
        elif angular == "trapezoid":
            theta = 2.0 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
            wt = np.full(n_theta, 2.0 * np.pi / n_theta)
        elif angular == "gauss":
            if n_theta % 2:
                raise BadParameter("gauss angular rule needs an even n_theta")
            t, w = _gauss(n_theta // 2, 0.0, np.pi)
            theta = np.concatenate([t, -t[::-1]])
            wt = np.concatenate([w, w[::-1]])
        else:
            raise BadParameter(f"unknown angular rule {angular!r}")
        params["angular"] = angular if kind == "disk" else "gauss"
        return _polar(r, wr, theta, wt, kind, params)

    if kind in ("halfplane", "upper_halfplane"):
        R = float(radius)
        params["scale"] = float(scale)
        # x = R (e^{a s} - 1)/(e^a - 1), s in (0, 1): nodes crowd toward Re z = 0
        a = np.log1p(R / scale)
        s, ws = _gauss(n_r, 0.0, 1.0)
        x = R * np.expm1(a * s) / np.expm1(a)
        wx = ws * R * a * np.exp(a * s) / np.expm1(a)
        # y = scale sinh(b t), sinh(b) = R/scale: nodes crowd toward Im z = 0
        b = np.arcsinh(R / scale)
        lo = -1.0 if kind == "halfplane" else 0.0
        t, wt = _gauss(n_theta, lo, 1.0)
        y = scale * np.sinh(b * t)
        wy = wt * scale * b * np.cosh(b * t)
        X, Y = np.meshgrid(x, y, indexing="ij")
        return QuadratureRule(X.ravel(), Y.ravel(), np.outer(wx, wy).ravel(), kind, params)

    raise BadParameter(f"unknown rule kind {kind!r}")


def exact_area(kind: str, radius: float = 1.0) -> float:
    return {
        "disk": np.pi * radius**2,
        "halfdisk": 0.5 * np.pi * radius**2,
        "halfplane": 2.0 * radius**2,
        "upper_halfplane": radius**2,
    }[kind]


def slice_rule(
    domain: Domain,
    n_r: int,
    n_theta: int,
    half: bool = False,
    radius: float | None = None,
    angular: str = "trapezoid",
) -> QuadratureRule:
    """Rule for the slice of a built-in domain (or its upper half)."""
    domain = Domain.parse(domain)
    if domain is Domain.BALL:
        return build_rule("halfdisk" if half else "disk", n_r, n_theta,
                          radius=1.0 if radius is None else radius, angular=angular)
    return build_rule("upper_halfplane" if half else "halfplane", n_r, n_theta,
                      radius=DEFAULT_HALFPLANE_R if radius is None else radius)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _evaluate_nodes(fn: Callable, x: np.ndarray, y: np.ndarray, threads: int) -> np.ndarray:
    if threads <= 1 or x.size < 2 * threads:
        return np.asarray(fn(x, y), dtype=float)
    # values are pointwise, so the split does not change any node value
    bounds = np.linspace(0, x.size, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda ab: np.asarray(fn(x[ab[0]:ab[1]], y[ab[0]:ab[1]]), dtype=float),
                              zip(bounds[:-1], bounds[1:])))
    return np.concatenate(parts, axis=0)


def integrate_slice(fn: Callable, rule: QuadratureRule, threads: int | None = None) -> np.ndarray:
    """``sum_k w_k fn(x_k, y_k)`` for a quaternion-valued ``fn(x, y) -> (N, 4)``.

    Real-valued integrands ``(N,)`` are accepted and give a real result.
    """
    threads = default_threads() if threads is None else int(threads)
    vals = _evaluate_nodes(fn, rule.x, rule.y, threads)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteSample(f"integrand is not finite at {np.sum(~np.isfinite(vals))} sample(s)")
    if vals.ndim == 1:
        return np.add.reduce(rule.weights * vals)
    weighted = np.ascontiguousarray((vals * rule.weights[:, None]).T)
    return np.add.reduce(weighted, axis=-1)


def _on_slice(f, unit):
    u = np.asarray(unit, dtype=float)
    return lambda x, y: f(qt.embed(x, y, u))


def inner_product(
    f,
    g,
    domain: Domain = Domain.BALL,
    unit_i=qt.UNIT_I,
    weight: WeightId = WeightId.NONE,
    half: bool = False,
    n_r: int = 64,
    n_theta: int = 128,
    radius: float | None = None,
    angular: str = "trapezoid",
    check_convergence: bool = False,
    threads: int | None = None,
) -> np.ndarray:
    """Slice inner product ``int conj(f) g w dx dy`` over the slice (or its upper half).

    With ``check_convergence`` the integral is recomputed with doubled node
    counts and :class:`DivergenceSuspected` is raised if the two values
    differ by more than 10%.
    """
    weight = WeightId.parse(weight)
    unit_i = qt.UnitImaginary.of(unit_i)
    fs = _on_slice(f, unit_i)
    gs = _on_slice(g, unit_i)

    def integrand(x, y):
        return qt.scale(qt.mul(qt.conj(fs(x, y)), gs(x, y)), weight(y))

    def value(nr, nt):
        rule = slice_rule(domain, nr, nt, half=half, radius=radius, angular=angular)
        return integrate_slice(integrand, rule, threads)

    out = value(n_r, n_theta)
    if check_convergence:
        finer = value(2 * n_r, 2 * n_theta)
        change = np.linalg.norm(finer - out) / max(np.linalg.norm(finer), 1e-300)
        if change > 0.1:
            raise DivergenceSuspected(
                f"doubling the rule changed the integral by {100 * change:.1f}%"
            )
        out = finer
    return out


def slice_norm_sq(f, domain=Domain.BALL, unit_i=qt.UNIT_I, weight=WeightId.NONE, **kw) -> float:
    """``int |f|^2 w dx dy`` over the slice (real part of the inner product)."""
    return float(inner_product(f, f, domain, unit_i, weight, **kw)[0])


def weighted_slice_norm_sq(f, domain=Domain.BALL, unit_i=qt.UNIT_I, weight=WeightId.RHO, **kw) -> float:
    return slice_norm_sq(f, domain, unit_i, weight, **kw)


def half_slice_norm_sq(f, domain=Domain.BALL, unit_i=qt.UNIT_I, symmetrized: bool = False, **kw) -> float:
    """Norm squared from the upper half slice only.

    ``symmetrized=False`` returns ``2 int_{upper} |f|^2``, which equals the
    full slice norm for intrinsic ``f``.  ``symmetrized=True`` returns
    ``int_{upper} |f(z)|^2 + |f(conj z)|^2``, equal to it for every ``f``.
    """
    kw.pop("half", None)
    if not symmetrized:
        return 2.0 * slice_norm_sq(f, domain, unit_i, half=True, **kw)
    u = qt.UnitImaginary.of(unit_i)

    def mirrored(q):
        return f(_mirror(q, u))

    return slice_norm_sq(f, domain, u, half=True, **kw) + slice_norm_sq(mirrored, domain, u, half=True, **kw)


def _mirror(q, unit):
    """``conj`` inside ``C(unit)``: ``x + unit y -> x - unit y``."""
    q = qt.asquat(q)
    u = np.asarray(unit, dtype=float)
    y = q[..., 1:] @ u
    return qt.embed(q[..., 0], -y, u)


def volume_norm_sq_reduced(
    f,
    domain: Domain = Domain.BALL,
    unit_i=qt.UNIT_I,
    n_r: int = 64,
    n_theta: int = 64,
    weight: WeightId = WeightId.NONE,
    radius: float | None = None,
    threads: int | None = None,
) -> float:
    """4-D integral of ``|f(q0 + |Im q| i)|^2 w`` through the axial change of variables.

    The angular directions integrate to ``4 pi``, leaving
    ``4 pi int_{upper} |f|^2 y^2 dx dy`` (``weight=NONE``) or
    ``4 pi int_{upper} |f|^2 dx dy`` (``weight=DELTA``, the ``1/|Im q|^2``
    weight cancelling the Jacobian).  For ``f`` with ``|f(z)| = |f(conj z)|``
    this is the volume norm of ``f`` itself.
    """
    weight = WeightId.parse(weight)
    if weight is WeightId.RHO:
        raise BadParameter("the rho weight is a slice weight; use weight none or delta here")
    slice_weight = WeightId.RHO if weight is WeightId.NONE else WeightId.NONE
    return AXIAL_FACTOR * slice_norm_sq(
        f, domain, unit_i, slice_weight, half=True, n_r=n_r, n_theta=n_theta,
        radius=radius, threads=threads,
    )


def fixed_slice(f, unit_i=qt.UNIT_I) -> Callable:
    """``q -> f(Re q + |Im q| i)``: ``f`` read on one fixed slice."""
    u = qt.UnitImaginary.of(unit_i)

    def g(q):
        x, y, _ = qt.slice_parts(q)
        return f(qt.embed(x, y, u))

    return g


def _uniform_ball(n: int, rng: np.random.Generator, block: int = 1 << 16) -> np.ndarray:
    """Rejection sampling from the cube ``[-1, 1]^4``; block order is fixed."""
    out = []
    have = 0
    while have < n:
        pts = rng.uniform(-1.0, 1.0, size=(block, 4))
        pts = pts[np.einsum("ij,ij->i", pts, pts) < 1.0]
        out.append(pts)
        have += len(pts)
    return np.concatenate(out)[:n]


def volume_integral_mc(
    f,
    domain: Domain = Domain.BALL,
    samples: int = 10**6,
    seed: int = 0,
    box: float = 20.0,
    points: np.ndarray | None = None,
) -> tuple[float, float]:
    """Monte Carlo estimate of the 4-D integral of ``|f|^2`` with its standard error.

    Ball: rejection-sampled uniform points.  Half-space: uniform points of
    the box ``(0, box) x (-box, box)^3``.  ``points`` overrides sampling
    (reuse one sample set to compare two integrands).
    """
    if points is None:
        if samples < 10**4:
            raise BadParameter(f"need at least 1e4 samples, got {samples}")
        points = sample_domain(domain, samples, seed, box)
    n = len(points)
    volume = _sample_volume(domain, box)
    v = qt.norm_sq(f(points))
    if not np.all(np.isfinite(v)):
        raise NonFiniteSample("integrand is not finite at a Monte Carlo sample")
    mean = float(np.mean(v))
    std = float(np.std(v, ddof=1)) if n > 1 else 0.0
    return volume * mean, volume * std / np.sqrt(n)


def sample_domain(domain, samples: int, seed: int, box: float = 20.0) -> np.ndarray:
    domain = Domain.parse(domain)
    rng = np.random.default_rng(seed)
    if domain is Domain.BALL:
        return _uniform_ball(samples, rng)
    pts = rng.uniform(-box, box, size=(samples, 4))
    pts[:, 0] = np.abs(pts[:, 0])
    return pts


def _sample_volume(domain, box: float) -> float:
    if Domain.parse(domain) is Domain.BALL:
        return np.pi**2 / 2.0
    return 8.0 * box**4


def exhaustion_radii(k_max: int = 12) -> np.ndarray:
    return 1.0 - 2.0 ** -np.arange(1, k_max + 1)


def exhaustion_profile(
    f,
    kind: str = "slice",
    weight: WeightId = WeightId.NONE,
    unit_i=qt.UNIT_I,
    k_max: int = 12,
    n: int = 256,
) -> np.ndarray:
    """Norms of ``f`` over the disks ``|z| < 1 - 2^-k``, ``k = 1..k_max``.

    ``kind="slice"`` gives ``int |f|^2 w dx dy`` over the full disk (Gauss
    angular panels, so boundary singularities on the real axis are
    resolved); ``kind="volume"`` gives :func:`volume_norm_sq_reduced`.
    """
    out = []
    for rho in exhaustion_radii(k_max):
        if kind == "slice":
            out.append(slice_norm_sq(f, Domain.BALL, unit_i, weight, n_r=n, n_theta=2 * n,
                                     radius=rho, angular="gauss"))
        elif kind == "volume":
            out.append(volume_norm_sq_reduced(f, Domain.BALL, unit_i, n_r=n, n_theta=n, radius=rho))
        else:
            raise BadParameter(f"unknown profile kind {kind!r}")
    return np.array(out)
