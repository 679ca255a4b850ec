"""Slice regular functions and the operators that build or dissect them.

A slice regular function is represented by one of four closed-form
variants (:class:`QuaternionPolynomial`, :class:`IntrinsicRational`,
:class:`Stem`, :class:`KernelSection`).  All of them are callables mapping
an array of quaternions ``(..., 4)`` to an array of the same shape.

Holomorphic one-variable functions (stems, halves of a Schwarz
reflection) are plain vectorised callables ``complex -> complex``;
:class:`ComplexPolynomial` and :class:`ComplexRational` are provided so
they can be described in JSON.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from . import quaternion as qt
from .errors import BadParameter, BoundaryLimitNotReal, DomainError, ZeroDivisor

ComplexFunction = Callable[[np.ndarray], np.ndarray]

#: distance from the real axis used by the boundary-limit check
BOUNDARY_DELTA = 1e-3
BOUNDARY_TOL = 1e-6
POLE_EPS = 1e-300


class Domain(enum.Enum):
    """Built-in axially symmetric s-domains."""

    BALL = "ball"
    HALFSPACE = "halfspace"

    @classmethod
    def parse(cls, name) -> "Domain":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise BadParameter(f"unknown domain {name!r}; expected 'ball' or 'halfspace'") from None

    def contains(self, x, y) -> np.ndarray:
        """Membership of ``x + I y`` (any unit ``I``)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self is Domain.BALL:
            return x * x + y * y < 1.0
        return x > 0.0

    def check(self, q) -> None:
        x, y, _ = qt.slice_parts(q)
        inside = self.contains(x, y)
        if not np.all(inside):
            bad = qt.asquat(q).reshape(-1, 4)[~inside.ravel()][0]
            raise DomainError(f"point {bad.tolist()} lies outside the {self.value} domain")


# -- holomorphic building blocks -------------------------------------------


def _polyval(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Ascending-order Horner."""
    out = np.zeros_like(z, dtype=np.result_type(coeffs, z))
    for c in coeffs[::-1]:
        out = out * z + c
    return out


@dataclass(frozen=True)
class ComplexPolynomial:
    """``sum_n c_n z^n`` with complex coefficients in ascending order."""

    coeffs: tuple

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in coeffs))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return _polyval(np.array(self.coeffs or (0j,)), z)


@dataclass(frozen=True)
class ComplexRational:
    """``p(z) / d(z)**den_pow`` with complex coefficients (ascending order)."""

    num: tuple
    den: tuple
    den_pow: int = 1

    def __init__(self, num, den, den_pow=1):
        object.__setattr__(self, "num", tuple(complex(c) for c in num))
        object.__setattr__(self, "den", tuple(complex(c) for c in den))
        object.__setattr__(self, "den_pow", int(den_pow))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        d = _polyval(np.array(self.den), z)
        if np.any(np.abs(d) < POLE_EPS):
            raise ZeroDivisor("evaluation at a pole")
        return _polyval(np.array(self.num), z) / d**self.den_pow


# -- slice regular functions ------------------------------------------------


class SliceFunction:
    """Base class: subclasses implement :meth:`_evaluate`."""

    domain: Domain | None = None

    def __call__(self, q) -> np.ndarray:
        q = qt.asquat(q)
        if self.domain is not None:
            self.domain.check(q)
        return self._evaluate(q)

    def _evaluate(self, q: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def on_slice(self, unit) -> ComplexFunction:
        """Restriction to ``C(unit)`` as a quaternion-valued function of ``z``."""
        return lambda z: self(qt.from_complex(z, unit))

    @property
    def is_intrinsic(self) -> bool:
        return False


@dataclass(frozen=True, eq=False)
class QuaternionPolynomial(SliceFunction):
    """``sum_n q^n c_n``: quaternion coefficients act on the right."""

    coeffs: np.ndarray
    domain: Domain | None = None

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if c.shape[-1] != 4 or c.ndim != 2:
            raise BadParameter("polynomial coefficients must be a list of quaternions")
        object.__setattr__(self, "coeffs", c)

    def _evaluate(self, q):
        # Horner from the left: c0 + q (c1 + q (c2 + ...))
        acc = np.broadcast_to(self.coeffs[-1], q.shape)
        for c in self.coeffs[-2::-1]:
            acc = qt.mul(q, acc) + c
        return np.array(acc, dtype=float)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_intrinsic(self) -> bool:
        return bool(np.all(self.coeffs[:, 1:] == 0))

    def right_mul(self, c) -> "QuaternionPolynomial":
        """The polynomial ``f(q) * c``."""
        return QuaternionPolynomial(qt.mul(self.coeffs, qt.asquat(c)), self.domain)


@dataclass(frozen=True, eq=False)
class IntrinsicRational(SliceFunction):
    """``p(q) / d(q)**den_pow`` with real coefficients (ascending order).

    Real coefficients make the function map every slice into itself, so it
    is evaluated as a complex rational on the slice of ``q``.
    """

    num: tuple
    den: tuple = (1.0,)
    den_pow: int = 1
    domain: Domain | None = None

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(float(c) for c in self.num))
        object.__setattr__(self, "den", tuple(float(c) for c in self.den))
        if self.den_pow < 0 or not self.den:
            raise BadParameter("den_pow must be >= 0 and den non-empty")

    def _evaluate(self, q):
        x, y, units = qt.slice_parts(q)
        w = self.complex_value(x + 1j * y)
        return qt.embed(w.real, w.imag, units)

    def complex_value(self, z):
        z = np.asarray(z, dtype=complex)
        d = _polyval(np.array(self.den), z)
        if np.any(np.abs(d) < POLE_EPS):
            raise ZeroDivisor("intrinsic rational evaluated at a pole")
        return _polyval(np.array(self.num), z) / d**self.den_pow

    @property
    def is_intrinsic(self) -> bool:
        return True


@dataclass(frozen=True)
class StemPair:
    """``f(z) = F(z) + G(z) j`` on the slice ``C(i)``.

    ``unit_j`` is re-orthonormalised against ``unit_i`` on construction.
    """

    F: ComplexFunction
    G: ComplexFunction
    unit_i: qt.UnitImaginary = qt.UNIT_I
    unit_j: qt.UnitImaginary = qt.UNIT_J
    domain: Domain | None = None

    def __post_init__(self):
        i, j = qt.orthonormal_pair(self.unit_i, self.unit_j)
        object.__setattr__(self, "unit_i", i)
        object.__setattr__(self, "unit_j", j)

    def value(self, z) -> np.ndarray:
        """``F(z) + G(z) j`` as quaternions in ``C(i) + C(i) j``."""
        z = np.asarray(z, dtype=complex)
        F = np.broadcast_to(np.asarray(self.F(z), dtype=complex), z.shape)
        G = np.broadcast_to(np.asarray(self.G(z), dtype=complex), z.shape)
        return qt.join_components(F, G, self.unit_i, self.unit_j)


def extend_via_representation(stem: StemPair, q) -> np.ndarray:
    """Slice regular extension of a stem pair to all of quaternion space.

    For ``q = x + I_q y`` this is
    ``1/2 [(1 + I_q i) f(x - i y) + (1 - I_q i) f(x + i y)]``.
    """
    q = qt.asquat(q)
    x, y, units = qt.slice_parts(q)
    if stem.domain is not None and not np.all(stem.domain.contains(x, y)):
        raise DomainError(f"point outside the {stem.domain.value} domain of the stem")
    z = x + 1j * y
    f_plus = stem.value(z)
    f_minus = stem.value(np.conj(z))
    Iq = qt.embed(0.0, 1.0, units)
    Ii = qt.mul(Iq, stem.unit_i.quat)
    return 0.5 * (qt.mul(qt.ONE + Ii, f_minus) + qt.mul(qt.ONE - Ii, f_plus))


@dataclass(frozen=True, eq=False)
class Stem(SliceFunction):
    """Slice function given by its stem pair on one slice."""

    pair: StemPair

    @property
    def domain(self):  # type: ignore[override]
        return self.pair.domain

    def _evaluate(self, q):
        return extend_via_representation(self.pair, q)


@dataclass(frozen=True, eq=False)
class KernelSection(SliceFunction):
    """``q -> K(q, r)`` for a fixed second argument ``r``."""

    kernel: kernels.KernelId
    r: np.ndarray
    form: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "r", qt.asquat(self.r))
        if self.kernel is kernels.KernelId.DISK:
            raise BadParameter("the disk kernel is planar; use ball_I for a slice section")

    @property
    def domain(self):  # type: ignore[override]
        if self.kernel in (kernels.KernelId.HALFSPACE_A, kernels.KernelId.HALFSPACE_B):
            return Domain.HALFSPACE
        return Domain.BALL

    def _evaluate(self, q):
        return kernels.evaluate(self.kernel, q, self.r, self.form)


def evaluate(f: SliceFunction, q) -> np.ndarray:
    return f(q)


# -- splitting and reflection ----------------------------------------------


def split(f: SliceFunction, unit_i=qt.UNIT_I, unit_j=qt.UNIT_J) -> StemPair:
    """Stem pair ``(F, G)`` with ``f = F + G j`` on ``C(unit_i)``."""
    i, j = qt.orthonormal_pair(unit_i, unit_j)

    def F(z):
        return qt.split_components(f(qt.from_complex(z, i)), i, j)[0]

    def G(z):
        return qt.split_components(f(qt.from_complex(z, i)), i, j)[1]

    return StemPair(F, G, i, j, getattr(f, "domain", None))


def check_boundary_limit(
    f_plus: ComplexFunction,
    xs,
    delta: float = BOUNDARY_DELTA,
    tol: float = BOUNDARY_TOL,
) -> None:
    """Sampled test that ``f_plus`` has real limits on the real axis at ``xs``.

    Not a proof.  The limit at ``x`` is extrapolated from samples at heights
    ``delta, 2 delta, 3 delta`` (quadratic extrapolation, error
    ``O(delta^3)``) and must satisfy ``|Im L| <= tol (1 + |L|)``.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    v1, v2, v3 = (np.asarray(f_plus(xs + 1j * m * delta), dtype=complex) for m in (1, 2, 3))
    limit = 3.0 * v1 - 3.0 * v2 + v3
    bad = np.abs(limit.imag) > tol * (1.0 + np.abs(limit))
    if np.any(bad):
        n = np.argmax(bad)
        raise BoundaryLimitNotReal(
            f"extrapolated limit of f at {xs[n]:g} has imaginary part {limit.imag[n]:.3g}"
        )


def schwarz_extend(f_plus: ComplexFunction, z, check: bool = True, delta: float = BOUNDARY_DELTA):
    """Schwarz reflection of ``f_plus`` across the real axis.

    ``f_plus(z)`` above the axis, ``conj(f_plus(conj z))`` below, and the
    real boundary value on the axis.
    """
    z = np.asarray(z, dtype=complex)
    if check:
        check_boundary_limit(f_plus, np.unique(z.real), delta=delta)
    upper = z.imag > 0
    lower = z.imag < 0
    w = np.where(lower, np.conj(z), z)
    v = np.asarray(f_plus(w), dtype=complex)
    v = np.broadcast_to(v, z.shape)
    return np.where(upper, v, np.where(lower, np.conj(v), v.real + 0j))


def reflect(f: ComplexFunction) -> ComplexFunction:
    """``z -> conj(f(conj z))``."""
    return lambda z: np.conj(f(np.conj(np.asarray(z, dtype=complex))))


def intrinsic_parts(f: ComplexFunction) -> tuple[ComplexFunction, ComplexFunction]:
    """Intrinsic ``f1, f2`` with ``f = f1 + f2 i``."""
    wf = reflect(f)

    def f1(z):
        return 0.5 * (f(z) + wf(z))

    def f2(z):
        return -0.5j * (f(z) - wf(z))

    return f1, f2


def extend_intrinsic(h: ComplexFunction, q) -> np.ndarray:
    """Extension of an intrinsic ``h``: ``Re h(x + iy) + I_q Im h(x + iy)``."""
    x, y, units = qt.slice_parts(q)
    v = np.asarray(h(x + 1j * y), dtype=complex)
    return qt.embed(v.real, v.imag, units)


@dataclass(frozen=True)
class FourComponents:
    """``f = h0 + h1 i + h2 j + h3 i j`` with each ``h`` reflected and extended."""

    h: tuple
    unit_i: qt.UnitImaginary
    unit_j: qt.UnitImaginary
    domain: Domain | None = field(default=None)

    def reconstruct(self, q) -> np.ndarray:
        i = self.unit_i.quat
        j = self.unit_j.quat
        basis = (qt.ONE, i, j, qt.mul(i, j))
        out = 0.0
        for h, e in zip(self.h, basis):
            extended = extend_intrinsic(lambda z, h=h: schwarz_extend(h, z, check=False), q)
            out = out + qt.mul(extended, e)
        return out


def four_component_decompose(f: SliceFunction, unit_i=qt.UNIT_I, unit_j=qt.UNIT_J) -> FourComponents:
    """Split ``f`` on ``C(i)`` and take intrinsic parts of both stems."""
    pair = split(f, unit_i, unit_j)
    h0, h1 = intrinsic_parts(pair.F)
    h2, h3 = intrinsic_parts(pair.G)
    return FourComponents((h0, h1, h2, h3), pair.unit_i, pair.unit_j, pair.domain)


def representation_formula(f: SliceFunction, q, unit_j) -> np.ndarray:
    """``1/2 (1 - i j) f(x + y j) + 1/2 (1 + i j) f(x - y j)`` with ``i = I_q``."""
    q = qt.asquat(q)
    x, y, units = qt.slice_parts(q)
    jq = qt.UnitImaginary.of(unit_j).quat
    ij = qt.mul(qt.embed(0.0, 1.0, units), jq)
    f_plus = f(qt.embed(x, y, np.array(jq[1:])))
    f_minus = f(qt.embed(x, -y, np.array(jq[1:])))
    return 0.5 * (qt.mul(qt.ONE - ij, f_plus) + qt.mul(qt.ONE + ij, f_minus))


def polynomial(coeffs: Sequence, domain: Domain | None = None) -> QuaternionPolynomial:
    """Convenience constructor; real numbers are promoted to quaternions."""
    return QuaternionPolynomial(np.array([qt.asquat(c) for c in coeffs]), domain)
