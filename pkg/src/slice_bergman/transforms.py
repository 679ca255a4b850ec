"""Integral transforms built on the second-kind kernels.

* :func:`reproduce` -- ``f(q)`` as the slice integral of ``K(q, .) f``.
* :func:`bergman_fueter_transform` -- the same area integral against the
  Laplacian of the ball kernel, giving ``Delta f``.
* :func:`fueter_contour_transform` -- ``Delta f`` from a boundary integral
  against the Laplacian of the Cauchy kernel.

The kernel always multiplies from the left.  Every transform returns a
:class:`TransformReport` comparing the value with an independent reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from . import quaternion as qt
from .differential import LAPLACIAN, FDScheme, laplacian_fd
from .errors import BadParameter, ContourTooClose, DivergenceSuspected, DomainError
from .functions import Domain
from .quadrature import integrate_slice, slice_rule

CONTOUR_MIN_GAP = 0.05


@dataclass
class TransformReport:
    value: np.ndarray
    reference: np.ndarray | None = None
    abs_error: float = float("nan")
    rel_error: float = float("nan")
    rule: dict = field(default_factory=dict)

    def __post_init__(self):
        self.value = qt.asquat(self.value)
        if self.reference is not None:
            self.reference = qt.asquat(self.reference)
            self.abs_error = float(qt.modulus(self.value - self.reference))
            self.rel_error = self.abs_error / max(float(qt.modulus(self.reference)), 1.0)

    def as_dict(self) -> dict:
        return {
            "value": self.value.tolist(),
            "reference": None if self.reference is None else self.reference.tolist(),
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "rule": self.rule,
        }


def _check_target(q, domain: Domain) -> None:
    x, y, _ = qt.slice_parts(q)
    if domain is Domain.BALL and not float(np.hypot(x, y)) <= 0.9:
        raise DomainError(f"target |q| = {float(np.hypot(x, y)):.3g} exceeds 0.9")
    if domain is Domain.HALFSPACE and not float(x) >= 0.1:
        raise DomainError(f"target Re q = {float(x):.3g} is below 0.1")


def _kernel(domain: Domain):
    if domain is Domain.BALL:
        return lambda q, r: kernels.ball_kernel(q, r, "I")
    return lambda q, r: kernels.halfspace_kernel(q, r, "A")


def _area_transform(kernel, f, q, domain, unit, n_r, n_theta, radius, threads):
    u = np.asarray(unit, dtype=float)
    rule = slice_rule(domain, n_r, n_theta, radius=radius)

    def integrand(x, y):
        zeta = qt.embed(x, y, u)
        return qt.mul(kernel(q, zeta), f(zeta))

    return integrate_slice(integrand, rule, threads), rule


def reproduce(
    f,
    q,
    domain: Domain = Domain.BALL,
    unit_i=qt.UNIT_I,
    n_r: int = 64,
    n_theta: int = 128,
    radius: float | None = None,
    check_convergence: bool = False,
    threads: int | None = None,
) -> TransformReport:
    """Recover ``f(q)`` from the values of ``f`` on the slice ``C(unit_i)``.

    On the half-space ``radius`` is the truncation of the right half-plane.
    """
    domain = Domain.parse(domain)
    q = qt.asquat(q)
    _check_target(q, domain)
    unit = qt.UnitImaginary.of(unit_i)
    kern = _kernel(domain)
    value, rule = _area_transform(kern, f, q, domain, unit, n_r, n_theta, radius, threads)
    if check_convergence:
        finer, rule = _area_transform(kern, f, q, domain, unit, 2 * n_r, 2 * n_theta, radius, threads)
        if qt.modulus(finer - value) > 0.1 * max(float(qt.modulus(finer)), 1e-300):
            raise DivergenceSuspected("reproducing integral changed by more than 10% under refinement")
        value = finer
    info = rule.describe() | {"domain": domain.value, "slice": list(unit)}
    return TransformReport(value, f(q), rule=info)


def bergman_fueter_transform(
    f,
    q,
    unit_i=qt.UNIT_I,
    n_r: int = 96,
    n_theta: int = 192,
    reference: bool = True,
    scheme: FDScheme = LAPLACIAN,
    threads: int | None = None,
) -> TransformReport:
    """Area integral of ``Delta_q K(q, r) f(r)`` over the unit disk of one slice.

    The reference is the finite-difference Laplacian of ``f`` at ``q``.
    """
    q = qt.asquat(q)
    _check_target(q, Domain.BALL)
    unit = qt.UnitImaginary.of(unit_i)
    value, rule = _area_transform(kernels.bergman_fueter_kernel, f, q, Domain.BALL, unit,
                                  n_r, n_theta, None, threads)
    ref = laplacian_fd(f, q, scheme) if reference else None
    info = rule.describe() | {"domain": "ball", "slice": list(unit)}
    return TransformReport(value, ref, rule=info)


def fueter_kernel(s, q) -> np.ndarray:
    """``-4 (s - conj q)(s^2 - 2 Re[q] s + |q|^2)^-2``."""
    s, q = np.broadcast_arrays(qt.asquat(s), qt.asquat(q))
    d = qt.mul(s, s) - qt.scale(s, 2.0 * qt.re(q)) + qt.real(qt.norm_sq(q))
    dinv = qt.inverse(d)
    return -4.0 * qt.mul(s - qt.conj(q), qt.mul(dinv, dinv))


def fueter_contour_transform(
    f,
    q,
    unit_i=qt.UNIT_I,
    rho: float = 0.8,
    n_nodes: int = 256,
    reference: bool = True,
    scheme: FDScheme = LAPLACIAN,
) -> TransformReport:
    """``(1/2pi) int_{|s| = rho} F(s, q) ds_i f(s)`` with ``ds_i = -ds i``.

    Trapezoid rule on ``s = rho e^{i theta}``; spectrally accurate for
    functions regular on a neighbourhood of the closed disk.
    """
    q = qt.asquat(q)
    if not 0 < rho < 1:
        raise BadParameter(f"contour radius must lie in (0, 1), got {rho}")
    if rho - float(qt.modulus(q)) < CONTOUR_MIN_GAP:
        raise ContourTooClose(f"|q| = {float(qt.modulus(q)):.3g} is within {CONTOUR_MIN_GAP} of rho = {rho}")
    if n_nodes < 4:
        raise BadParameter("need at least 4 contour nodes")
    unit = qt.UnitImaginary.of(unit_i)
    iq = unit.quat
    theta = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    s = qt.from_complex(rho * np.exp(1j * theta), unit)
    ds = qt.from_complex(1j * rho * np.exp(1j * theta), unit)  # ds/dtheta
    ds_i = -qt.mul(ds, iq)
    terms = qt.mul_chain(fueter_kernel(s, q), ds_i, f(s))
    # (1/2pi) * (2pi/n) * sum
    value = np.add.reduce(np.ascontiguousarray(terms.T), axis=-1) / n_nodes
    ref = laplacian_fd(f, q, scheme) if reference else None
    info = {"kind": "circle", "rho": float(rho), "nodes": int(n_nodes), "slice": list(unit)}
    return TransformReport(value, ref, rule=info)


def bergman_fueter_boundary(f, q, unit_i=qt.UNIT_I, n_nodes: int = 512) -> TransformReport:
    """Literal arc-length reading of the transform: ``int_{|r|=1} Delta K(q, r) f(r) |dr|``.

    Only used to show that this reading does not give ``Delta f``; the area
    integral in :func:`bergman_fueter_transform` does.
    """
    q = qt.asquat(q)
    unit = qt.UnitImaginary.of(unit_i)
    theta = 2.0 * np.pi * (np.arange(n_nodes) + 0.5) / n_nodes
    r = qt.from_complex(np.exp(1j * theta), unit)
    terms = qt.mul(kernels.bergman_fueter_kernel(q, r), f(r))
    value = np.add.reduce(np.ascontiguousarray(terms.T), axis=-1) * (2.0 * np.pi / n_nodes)
    return TransformReport(value, laplacian_fd(f, q), rule={"kind": "unit_circle", "nodes": int(n_nodes)})
