"""Quaternion arithmetic on float64 arrays.

Quaternions are stored as arrays whose trailing axis has length 4,
``(w, x, y, z)`` for ``w + x*i + y*j + z*k``.  Every function broadcasts
over the leading axes, so a whole quadrature grid can be pushed through a
kernel formula in one call.  :class:`Quaternion` is a small named tuple for
scalar values; since it *is* a tuple it can be passed anywhere an array is
expected.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import BadParameter, ZeroDivisor

#: Moduli below this are treated as exact zeros by :func:`inverse`.
ZERO_EPS = 1e-300

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])

_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def asquat(q) -> np.ndarray:
    """Coerce ``q`` to a float array with trailing axis 4.

    Real scalars and real arrays are promoted to real quaternions.
    """
    a = np.asarray(q, dtype=float)
    if a.ndim == 0:
        return np.array([float(a), 0.0, 0.0, 0.0])
    if a.shape[-1] != 4:
        raise BadParameter(f"expected trailing axis of length 4, got shape {a.shape}")
    return a


def real(x) -> np.ndarray:
    """Embed real values ``x`` (any shape) as real quaternions."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (4,))
    out[..., 0] = x
    return out


def mul(a, b) -> np.ndarray:
    """Hamilton product ``a*b`` (order matters)."""
    a = asquat(a)
    b = asquat(b)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def mul_chain(*factors) -> np.ndarray:
    """Left-to-right product of several quaternions."""
    out = asquat(factors[0])
    for f in factors[1:]:
        out = mul(out, f)
    return out


def conj(q) -> np.ndarray:
    return asquat(q) * _CONJ


def norm_sq(q) -> np.ndarray:
    q = asquat(q)
    return np.einsum("...i,...i->...", q, q)


def _norm(v: np.ndarray) -> np.ndarray:
    """Euclidean norm over the last axis, scaled so tiny or huge entries
    neither underflow nor overflow."""
    m = np.max(np.abs(v), axis=-1)
    safe = np.where(m > 0, m, 1.0)
    with np.errstate(invalid="ignore"):
        return m * np.sqrt(np.einsum("...i,...i->...", v / safe[..., None], v / safe[..., None]))


def modulus(q) -> np.ndarray:
    """Euclidean modulus ``|q|`` (no intermediate under- or overflow)."""
    return _norm(asquat(q))


def re(q) -> np.ndarray:
    return asquat(q)[..., 0]


def vec(q) -> np.ndarray:
    """Imaginary part as a 3-vector."""
    return asquat(q)[..., 1:]


def im_modulus(q) -> np.ndarray:
    """``|Im q|``, the distance from the real axis."""
    return _norm(vec(q))


def scale(q, s) -> np.ndarray:
    """Multiply quaternions by real scalars (broadcast over leading axes)."""
    return asquat(q) * np.asarray(s, dtype=float)[..., None]


def inverse(q, eps: float = ZERO_EPS) -> np.ndarray:
    """``conj(q)/|q|^2``; raises :class:`ZeroDivisor` if any ``|q| < eps``."""
    q = asquat(q)
    n = modulus(q)
    if np.any(n < eps) or not np.all(np.isfinite(n)):
        raise ZeroDivisor(f"quaternion modulus {np.min(n):.3g} below {eps:.3g}")
    # divide twice by |q| so moduli near the float range do not overflow
    return conj(q) / n[..., None] / n[..., None]


def integer_power(q, n: int) -> np.ndarray:
    """``q**n`` by binary exponentiation (powers of one quaternion commute)."""
    if n < 0 or int(n) != n:
        raise BadParameter(f"exponent must be a non-negative integer, got {n!r}")
    q = asquat(q)
    result = np.broadcast_to(ONE, q.shape).copy()
    base = q
    n = int(n)
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


# -- slice structure ---------------------------------------------------------


class UnitImaginary(NamedTuple):
    """A point of the sphere of imaginary units (squares to -1)."""

    ux: float
    uy: float
    uz: float

    @classmethod
    def of(cls, v) -> "UnitImaginary":
        """Normalise a 3-vector (or a pure quaternion) to a unit."""
        v = np.asarray(v, dtype=float).ravel()
        if v.size == 4:
            v = v[1:]
        if v.size != 3:
            raise BadParameter(f"unit imaginary needs 3 components, got {v.size}")
        n = float(np.linalg.norm(v))
        if not n > 0 or not math.isfinite(n):
            raise BadParameter("unit imaginary direction must be non-zero and finite")
        v = v / n
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @property
    def quat(self) -> np.ndarray:
        return np.array([0.0, self.ux, self.uy, self.uz])

    def __neg__(self) -> "UnitImaginary":
        return UnitImaginary(-self.ux, -self.uy, -self.uz)


UNIT_I = UnitImaginary(1.0, 0.0, 0.0)
UNIT_J = UnitImaginary(0.0, 1.0, 0.0)
UNIT_K = UnitImaginary(0.0, 0.0, 1.0)


def orthonormal_pair(i, j) -> tuple[UnitImaginary, UnitImaginary]:
    """Return ``(i, j')`` with ``j'`` the normalised part of ``j`` orthogonal to ``i``."""
    iv = np.array(UnitImaginary.of(i))
    jv = np.asarray(j, dtype=float).ravel()
    if jv.size == 4:
        jv = jv[1:]
    jv = jv - np.dot(jv, iv) * iv
    if np.linalg.norm(jv) < 1e-8:
        raise BadParameter("second unit is (nearly) parallel to the first")
    return UnitImaginary(*iv), UnitImaginary.of(jv)


def random_unit(rng: np.random.Generator) -> UnitImaginary:
    while True:
        v = rng.normal(size=3)
        if np.linalg.norm(v) > 1e-6:
            return UnitImaginary.of(v)


class SlicePoint(NamedTuple):
    """``q = re + unit*im`` with ``im >= 0``."""

    re: float
    im: float
    unit: UnitImaginary

    def embed(self) -> np.ndarray:
        return embed(self.re, self.im, self.unit)


def slice_parts(q) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised slice decomposition.

    Returns ``(x, y, units)`` with ``q = x + units*y``, ``y >= 0`` and
    ``units`` of shape ``(..., 3)``.  Real points get the unit ``i``.
    """
    q = asquat(q)
    v = q[..., 1:]
    y = _norm(v)
    units = np.empty_like(v)
    nz = y > 0
    units[nz] = v[nz] / y[nz][..., None]
    units[~nz] = np.array(UNIT_I)
    return q[..., 0].copy(), y, units


def slice_decompose(q) -> SlicePoint:
    """Write a single quaternion as ``x + I_q*y`` with ``y >= 0``."""
    q = asquat(q)
    if q.shape != (4,):
        raise BadParameter("slice_decompose takes one quaternion; use slice_parts for arrays")
    x, y, u = slice_parts(q)
    return SlicePoint(float(x), float(y), UnitImaginary(*map(float, u)))


def embed(x, y, unit) -> np.ndarray:
    """``x + unit*y``; ``unit`` is a :class:`UnitImaginary` or an array ``(..., 3)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u = np.asarray(unit, dtype=float)
    shape = np.broadcast_shapes(x.shape, y.shape, u.shape[:-1])
    out = np.empty(shape + (4,))
    out[..., 0] = x
    out[..., 1:] = u * y[..., None]
    return out


def from_complex(z, unit) -> np.ndarray:
    """Map complex numbers into the slice ``C(unit)``."""
    z = np.asarray(z, dtype=complex)
    return embed(z.real, z.imag, unit)


def to_complex(q, unit) -> np.ndarray:
    """Component of ``q`` in ``C(unit)``, as a complex number."""
    q = asquat(q)
    return q[..., 0] + 1j * (q[..., 1:] @ np.asarray(unit, dtype=float))


def split_components(q, unit_i, unit_j) -> tuple[np.ndarray, np.ndarray]:
    """Write ``q = F + G*j`` with ``F, G`` in ``C(i)``; returns them as complex arrays."""
    q = asquat(q)
    i = np.asarray(unit_i, dtype=float)
    j = np.asarray(unit_j, dtype=float)
    k = np.cross(i, j)  # vector part of the quaternion product i*j for orthogonal i, j
    v = q[..., 1:]
    return q[..., 0] + 1j * (v @ i), (v @ j) + 1j * (v @ k)


def join_components(F, G, unit_i, unit_j) -> np.ndarray:
    """Inverse of :func:`split_components`: ``F + G*j``."""
    F = np.asarray(F, dtype=complex)
    G = np.asarray(G, dtype=complex)
    i = np.asarray(unit_i, dtype=float)
    j = np.asarray(unit_j, dtype=float)
    k = np.cross(i, j)
    shape = np.broadcast_shapes(F.shape, G.shape)
    out = np.empty(shape + (4,))
    out[..., 0] = F.real
    out[..., 1:] = (
        F.imag[..., None] * i + G.real[..., None] * j + G.imag[..., None] * k
    )
    return out


class Quaternion(NamedTuple):
    """Scalar quaternion ``w + x*i + y*j + z*k``.

    >>> Quaternion(0, 1, 0, 0) * Quaternion(0, 0, 1, 0)
    Quaternion(w=0.0, x=0.0, y=0.0, z=1.0)
    """

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def of(cls, a) -> "Quaternion":
        a = asquat(a)
        if a.shape != (4,):
            raise BadParameter(f"not a single quaternion: shape {a.shape}")
        return cls(*(float(c) for c in a))

    @property
    def array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    def __mul__(self, other):
        return Quaternion.of(mul(self, asquat(other)))

    def __rmul__(self, other):
        return Quaternion.of(mul(asquat(other), self))

    def __add__(self, other):
        return Quaternion.of(self.array + asquat(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Quaternion.of(self.array - asquat(other))

    def __rsub__(self, other):
        return Quaternion.of(asquat(other) - self.array)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __truediv__(self, s):
        if isinstance(s, (int, float)):
            return Quaternion.of(self.array / s)
        return self * Quaternion.of(inverse(s))

    def __abs__(self) -> float:
        return float(modulus(self))

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def inverse(self) -> "Quaternion":
        return Quaternion.of(inverse(self))

    def __pow__(self, n: int) -> "Quaternion":
        return Quaternion.of(integer_power(self, n))
