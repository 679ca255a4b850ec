"""Closed-form Bergman kernels of the second kind.

All quaternion formulas are evaluated left to right exactly as written;
``q`` and ``r`` broadcast against each other, so ``r`` may be a whole
quadrature grid.  Factors with real coefficients in ``conj(r)`` (or in
``q``) are inverted as single quaternion values.
"""

from __future__ import annotations

import enum

import numpy as np

from . import quaternion as qt
from .errors import BadParameter, SingularKernel

#: Modulus below which a real-coefficient denominator counts as singular.
SINGULAR_EPS = 1e-12


class KernelId(enum.Enum):
    DISK = "disk"
    BALL_I = "ball_I"
    BALL_II = "ball_II"
    HALFSPACE_A = "half_A"
    HALFSPACE_B = "half_B"
    Q_FACTOR = "q_factor"
    BERGMAN_FUETER = "bergman_fueter"

    @classmethod
    def parse(cls, name: str) -> "KernelId":
        aliases = {
            "ball": cls.BALL_I,
            "ball_1": cls.BALL_I,
            "ball_2": cls.BALL_II,
            "halfspace": cls.HALFSPACE_A,
            "halfspace_A": cls.HALFSPACE_A,
            "halfspace_B": cls.HALFSPACE_B,
            "half": cls.HALFSPACE_A,
            "Q": cls.Q_FACTOR,
            "bf": cls.BERGMAN_FUETER,
        }
        if name in aliases:
            return aliases[name]
        try:
            return cls(name)
        except ValueError:
            known = sorted({k.value for k in cls} | set(aliases))
            raise BadParameter(f"unknown kernel {name!r}; expected one of {known}") from None


def _inv_checked(d: np.ndarray) -> np.ndarray:
    n = qt.modulus(d)
    if np.any(n < SINGULAR_EPS):
        raise SingularKernel(f"kernel denominator modulus {np.min(n):.3g} < {SINGULAR_EPS}")
    return qt.inverse(d)


def disk_kernel(z, zeta):
    """Bergman kernel of the unit disk, ``(1/pi) (1 - z conj(zeta))^-2``."""
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    d = 1.0 - z * np.conj(zeta)
    if np.any(np.abs(d) < SINGULAR_EPS):
        raise SingularKernel("z * conj(zeta) = 1")
    return 1.0 / (np.pi * d * d)


def halfplane_kernel(z, xi):
    """Bergman kernel of the right half-plane, ``(1/pi) (z + conj(xi))^-2``."""
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    d = z + np.conj(xi)
    if np.any(np.abs(d) < SINGULAR_EPS):
        raise SingularKernel("z + conj(xi) = 0")
    return 1.0 / (np.pi * d * d)


def _ball_parts(q, r):
    """``p = 1 - 2 qb rb + qb^2 rb^2`` and ``d = 1 - 2 Re[q] rb + |q|^2 rb^2``."""
    qb = qt.conj(q)
    rb = qt.conj(r)
    rb2 = qt.mul(rb, rb)
    p = qt.ONE - 2.0 * qt.mul(qb, rb) + qt.mul(qt.mul(qb, qb), rb2)
    d = qt.ONE - qt.scale(rb, 2.0 * qt.re(q)) + qt.scale(rb2, qt.norm_sq(q))
    return p, d, rb2


def q_factor(q, r) -> np.ndarray:
    """``(1 - 2 Re[q] conj(r) + |q|^2 conj(r)^2)^-1``."""
    q, r = np.broadcast_arrays(qt.asquat(q), qt.asquat(r))
    _, d, _ = _ball_parts(q, r)
    return _inv_checked(d)


def ball_kernel(q, r, form: str = "I") -> np.ndarray:
    """Second-kind Bergman kernel of the unit ball of H.

    ``form="I"``:  (1/pi)(1 - 2 qb rb + qb^2 rb^2)(1 - 2 Re[q] rb + |q|^2 rb^2)^-2
    ``form="II"``: (1/pi)(1 - 2 q Re[r] + q^2 |r|^2)^-2 (1 - 2 q r + q^2 r^2)
    """
    q, r = np.broadcast_arrays(qt.asquat(q), qt.asquat(r))
    if form in ("I", "1", 1):
        p, d, _ = _ball_parts(q, r)
        dinv = _inv_checked(d)
        return qt.mul(p, qt.mul(dinv, dinv)) / np.pi
    if form in ("II", "2", 2):
        q2 = qt.mul(q, q)
        d = qt.ONE - qt.scale(q, 2.0 * qt.re(r)) + qt.scale(q2, qt.norm_sq(r))
        dinv = _inv_checked(d)
        p = qt.ONE - 2.0 * qt.mul(q, r) + qt.mul(q2, qt.mul(r, r))
        return qt.mul(qt.mul(dinv, dinv), p) / np.pi
    raise BadParameter(f"ball kernel form must be 'I' or 'II', got {form!r}")


def halfspace_kernel(q, r, form: str = "A") -> np.ndarray:
    """Second-kind Bergman kernel of the half-space ``Re q > 0``.

    ``form="A"``: (1/pi)(qb^2 + 2 qb rb + rb^2)(|q|^2 + 2 Re[q] rb + rb^2)^-2
    ``form="B"``: (1/pi)(q^2 + 2 Re[r] q + |r|^2)^-2 (q^2 + 2 q r + r^2)
    """
    q, r = np.broadcast_arrays(qt.asquat(q), qt.asquat(r))
    if form in ("A", "a"):
        qb = qt.conj(q)
        rb = qt.conj(r)
        rb2 = qt.mul(rb, rb)
        p = qt.mul(qb, qb) + 2.0 * qt.mul(qb, rb) + rb2
        d = qt.real(qt.norm_sq(q)) + qt.scale(rb, 2.0 * qt.re(q)) + rb2
        dinv = _inv_checked(d)
        return qt.mul(p, qt.mul(dinv, dinv)) / np.pi
    if form in ("B", "b"):
        q2 = qt.mul(q, q)
        d = q2 + qt.scale(q, 2.0 * qt.re(r)) + qt.real(qt.norm_sq(r))
        dinv = _inv_checked(d)
        p = q2 + 2.0 * qt.mul(q, r) + qt.mul(r, r)
        return qt.mul(qt.mul(dinv, dinv), p) / np.pi
    raise BadParameter(f"half-space kernel form must be 'A' or 'B', got {form!r}")


def bergman_fueter_kernel(q, r) -> np.ndarray:
    """Four-dimensional Laplacian in ``q`` of the ball kernel.

    -(4/pi) [Q^2 + 2 (1 - 2 qb rb + qb^2 rb^2) Q^3] rb^2, with
    Q = (1 - 2 Re[q] rb + |q|^2 rb^2)^-1.
    """
    q, r = np.broadcast_arrays(qt.asquat(q), qt.asquat(r))
    p, d, rb2 = _ball_parts(q, r)
    Q = _inv_checked(d)
    Q2 = qt.mul(Q, Q)
    Q3 = qt.mul(Q2, Q)
    return -4.0 / np.pi * qt.mul(Q2 + 2.0 * qt.mul(p, Q3), rb2)


def bergman_fueter_kernel_compact(q, r) -> np.ndarray:
    """The compact form ``-(4/pi)[Q + 2 K] Q rb^2`` with ``K`` the ball kernel.

    Kept only to quantify its disagreement with :func:`bergman_fueter_kernel`:
    ``K`` already carries ``1/pi``, so the second term is off by ``pi``.
    """
    q, r = np.broadcast_arrays(qt.asquat(q), qt.asquat(r))
    Q = q_factor(q, r)
    Kb = ball_kernel(q, r, "I")
    rb = qt.conj(r)
    return -4.0 / np.pi * qt.mul_chain(Q + 2.0 * Kb, Q, qt.mul(rb, rb))


def evaluate(kernel: KernelId, q, r, form: str | None = None) -> np.ndarray:
    """Dispatch on :class:`KernelId`.  ``DISK`` reads ``q, r`` in ``C(i)``."""
    if kernel is KernelId.DISK:
        z = qt.to_complex(q, qt.UNIT_I)
        zeta = qt.to_complex(r, qt.UNIT_I)
        for name, a in (("q", q), ("r", r)):
            a = qt.asquat(a)
            if np.any(np.abs(a[..., 2:]) > 0):
                raise BadParameter(f"disk kernel arguments must lie in C(i); {name} has j/k parts")
        return qt.from_complex(disk_kernel(z, zeta), qt.UNIT_I)
    if kernel is KernelId.BALL_I:
        return ball_kernel(q, r, form or "I")
    if kernel is KernelId.BALL_II:
        return ball_kernel(q, r, form or "II")
    if kernel is KernelId.HALFSPACE_A:
        return halfspace_kernel(q, r, form or "A")
    if kernel is KernelId.HALFSPACE_B:
        return halfspace_kernel(q, r, form or "B")
    if kernel is KernelId.Q_FACTOR:
        return q_factor(q, r)
    if kernel is KernelId.BERGMAN_FUETER:
        return bergman_fueter_kernel(q, r)
    raise BadParameter(f"unsupported kernel {kernel!r}")
