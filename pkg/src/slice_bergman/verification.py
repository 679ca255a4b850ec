"""Acceptance checks, runnable from ``slice-bergman verify`` or pytest.

Each ``criterion_*`` function returns a list of :class:`CheckResult`, one
per measured quantity.  Tolerances are fixed here; ``tol_scale`` only
exists for diagnosing near misses from the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import differential as fd
from . import functions as fn
from . import kernels
from . import quadrature as qd
from . import quaternion as qt
from . import transforms as tr

SEED = 20240517


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.criterion:>2} {self.name}: measured={self.measured:.3e} tol={self.tolerance:.1e} {self.detail}".rstrip()

    def as_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "passed": bool(self.passed),
            "measured": float(self.measured),
            "tolerance": float(self.tolerance),
            "detail": self.detail,
        }


def _check(criterion, name, measured, tol, detail="", upper=True) -> CheckResult:
    ok = bool(measured <= tol) if upper else bool(measured >= tol)
    return CheckResult(criterion, name, ok and math.isfinite(measured), float(measured), float(tol), detail)


# -- random sampling helpers -----------------------------------------------


def random_ball(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    """Uniform points of the 4-ball of the given radius."""
    v = rng.normal(size=(n, 4))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * radius * rng.uniform(0.0, 1.0, size=(n, 1)) ** 0.25


def random_halfspace(rng: np.random.Generator, n: int, re_min: float = 0.2) -> np.ndarray:
    q = rng.uniform(-2.0, 2.0, size=(n, 4))
    q[:, 0] = rng.uniform(re_min, 2.0, size=n)
    return q


def random_polynomial(rng: np.random.Generator, max_degree: int = 6) -> fn.QuaternionPolynomial:
    deg = int(rng.integers(0, max_degree + 1))
    return fn.QuaternionPolynomial(rng.normal(size=(deg + 1, 4)))


def _rel(a, b) -> np.ndarray:
    return qt.modulus(a - b) / np.maximum(qt.modulus(b), 1.0)


# -- criteria ---------------------------------------------------------------


def criterion_1_form_agreement(tol_scale: float = 1.0, seed: int = SEED):
    rng = np.random.default_rng(seed)
    q = random_ball(rng, 500, 0.8)
    r = random_ball(rng, 500, 0.8)
    ball = qt.modulus(kernels.ball_kernel(q, r, "I") - kernels.ball_kernel(q, r, "II")) / qt.modulus(
        kernels.ball_kernel(q, r, "I"))
    qh = random_halfspace(rng, 500)
    rh = random_halfspace(rng, 500)
    ha = kernels.halfspace_kernel(qh, rh, "A")
    half = qt.modulus(ha - kernels.halfspace_kernel(qh, rh, "B")) / qt.modulus(ha)
    tol = 1e-11 * tol_scale
    return [
        _check(1, "ball form I = form II (500 pairs)", ball.max(), tol),
        _check(1, "half-space form A = form B (500 pairs)", half.max(), tol),
    ]


def criterion_2_slice_reduction(tol_scale: float = 1.0, seed: int = SEED):
    rng = np.random.default_rng(seed + 2)
    worst = 0.0
    for _ in range(100):
        u = qt.random_unit(rng)
        z, zeta = (rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, 2 * np.pi)) for _ in range(2))
        ref = qt.from_complex(kernels.disk_kernel(z, zeta), u)
        for form in ("I", "II"):
            val = kernels.ball_kernel(qt.from_complex(z, u), qt.from_complex(zeta, u), form)
            worst = max(worst, float(_rel(val, ref)))
    return [_check(2, "ball kernel on one slice = disk kernel (100 pairs)", worst, 1e-12 * tol_scale)]


def reproduce_functions():
    return {
        "1": fn.polynomial([1]),
        "q": fn.polynomial([0, 1]),
        "q^2": fn.polynomial([0, 0, 1]),
        "q^3": fn.polynomial([0, 0, 0, 1]),
        "q^4": fn.polynomial([0, 0, 0, 0, 1]),
        "q*j": fn.polynomial([0, qt.J]),
        "1/(1-q/2)": fn.IntrinsicRational((1.0,), (1.0, -0.5), 1),
    }


def criterion_3_reproducing(tol_scale: float = 1.0, seed: int = SEED):
    rng = np.random.default_rng(seed + 3)
    targets = random_ball(rng, 10, 0.6)
    other = qt.random_unit(rng)
    worst_err = worst_inv = 0.0
    for f in reproduce_functions().values():
        for q in targets:
            a = tr.reproduce(f, q, unit_i=qt.UNIT_I, n_r=64, n_theta=128)
            b = tr.reproduce(f, q, unit_i=other, n_r=64, n_theta=128)
            worst_err = max(worst_err, a.rel_error, b.rel_error)
            worst_inv = max(worst_inv, float(qt.modulus(a.value - b.value)))
    return [
        _check(3, "reproducing integral rel. error (7 f x 10 q)", worst_err, 1e-7 * tol_scale),
        _check(3, "independent of the integration slice", worst_inv, 1e-8 * tol_scale),
    ]


def criterion_4_bergman_fueter_kernel(tol_scale: float = 1.0, seed: int = SEED):
    rng = np.random.default_rng(seed + 4)
    q = random_ball(rng, 30, 0.5)
    r = random_ball(rng, 30, 0.5)
    scheme = fd.FDScheme(5e-3, 4)
    lap = fd.laplacian_fd(lambda x: kernels.ball_kernel(x, r, "I"), q, scheme)
    rel = qt.modulus(kernels.bergman_fueter_kernel(q, r) - lap) / qt.modulus(lap)
    rel_cor = qt.modulus(kernels.bergman_fueter_kernel_compact(q, r) - lap) / qt.modulus(lap)
    return [
        _check(4, "Laplacian closed form vs FD Laplacian (30 pairs)", rel.max(), 1e-5 * tol_scale,
               f"(compact form with the unscaled ball kernel: max rel. error {rel_cor.max():.2e})"),
    ]


def criterion_5_bf_transform(tol_scale: float = 1.0, seed: int = SEED):
    rng = np.random.default_rng(seed + 5)
    points = random_ball(rng, 5, 0.5)
    funcs = [fn.polynomial([0, 1]), fn.polynomial([0, 0, 1]), fn.polynomial([0, 0, 0, 1])]
    worst_fd = worst_cross = worst_arc = 0.0
    for f in funcs:
        for q in points:
            area = tr.bergman_fueter_transform(f, q)
            contour = tr.fueter_contour_transform(f, q, rho=0.8, n_nodes=256, reference=False)
            arc = tr.bergman_fueter_boundary(f, q)
            worst_fd = max(worst_fd, area.rel_error)
            worst_cross = max(worst_cross, float(_rel(contour.value, area.value)))
            worst_arc = max(worst_arc, arc.rel_error)
    return [
        _check(5, "BF area transform = FD Laplacian", worst_fd, 1e-4 * tol_scale,
               f"(arc-length reading of the transform: rel. error {worst_arc:.2e})"),
        _check(5, "contour transform = area transform", worst_cross, 1e-3 * tol_scale),
    ]


def criterion_6_fueter_regularity(tol_scale: float = 1.0, seed: int = SEED):
    f = fn.polynomial([0.5, 0.2, qt.J * 0.3, 1.0])  # 0.5 + 0.2 q + q^2 (0.3 j) + q^3

    def transformed(q):
        q = np.atleast_2d(q)
        out = np.array([tr.bergman_fueter_transform(f, p, reference=False).value for p in q.reshape(-1, 4)])
        return out.reshape(q.shape)

    ticks = (-0.3, 0.0, 0.3)
    grid = np.array([[a, b, c, 0.1] for a in ticks for b in ticks for c in ticks])
    res = fd.cauchy_fueter_fd(transformed, grid, fd.FDScheme(1e-3, 4))
    return [_check(6, "Cauchy-Fueter residual of the BF transform (3^3 grid)", qt.modulus(res).max(),
                   1e-3 * tol_scale)]


def _paired_bound(a, b, factor):
    """Margin and standard error for ``mean(a) <= factor * mean(b)`` from paired samples."""
    d = a - factor * b
    return float(np.mean(d)), float(np.std(d, ddof=1) / np.sqrt(len(d)))


def criterion_7_norm_equivalence(tol_scale: float = 1.0, seed: int = SEED, samples: int = 200_000):
    rng = np.random.default_rng(seed + 7)
    vol = np.pi**2 / 2
    worst_slice = -np.inf
    worst_vol = -np.inf
    worst_weighted = -np.inf
    for n in range(10):
        f = random_polynomial(rng, 6)
        i, j = qt.random_unit(rng), qt.random_unit(rng)
        si = qd.slice_norm_sq(f, unit_i=i, n_r=16, n_theta=32)
        sj = qd.slice_norm_sq(f, unit_i=j, n_r=16, n_theta=32)
        worst_slice = max(worst_slice, si - 2 * sj, sj - 2 * si)

        pts = qd.sample_domain(fn.Domain.BALL, samples, seed + 100 + n)
        a = qt.norm_sq(f(pts)) * vol                       # |f|^2
        b = qt.norm_sq(qd.fixed_slice(f, i)(pts)) * vol    # |f(x + i y)|^2
        for lhs, rhs, factor in ((b, a, 4.0), (a, b, 4.0)):
            m, se = _paired_bound(lhs, rhs, factor)
            worst_vol = max(worst_vol, m / (3 * se) if se > 0 else m)
        weighted = qd.AXIAL_FACTOR * qd.weighted_slice_norm_sq(f, unit_i=i, n_r=16, n_theta=32)
        norm_mc = float(np.mean(a))
        se = float(np.std(a, ddof=1) / np.sqrt(len(a)))
        worst_weighted = max(
            worst_weighted,
            (0.25 * norm_mc - weighted) / (3 * 0.25 * se),
            (weighted - 4 * norm_mc) / (3 * 4 * se),
        )
    return [
        _check(7, "slice norms within factor 2 (excess over bound)", worst_slice, 1e-9 * tol_scale),
        _check(7, "volume norms within factor 4 (excess in units of 3 stderr)", worst_vol, 1.0 * tol_scale),
        _check(7, "rho-weighted slice norm within factor 4 of volume norm (units of 3 stderr)",
               worst_weighted, 1.0 * tol_scale),
    ]


def _ball_volume_hit_or_miss(samples: int, seed: int) -> tuple[float, float]:
    """Volume of the unit 4-ball from uniform points of the cube ``[-1, 1]^4``.

    Independent of the rejection sampler, which assumes the volume.
    """
    pts = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(samples, 4))
    inside = (np.einsum("ij,ij->i", pts, pts) < 1.0).astype(float)
    return 16.0 * float(inside.mean()), 16.0 * float(inside.std(ddof=1)) / np.sqrt(samples)


def criterion_8_weighted_separation(tol_scale: float = 1.0, seed: int = SEED, samples: int = 10**6):
    f = fn.IntrinsicRational((1.0,), (1.0, -1.0), 1)
    plain = qd.exhaustion_profile(f, "slice", qd.WeightId.NONE)
    weighted = qd.exhaustion_profile(f, "slice", qd.WeightId.RHO)
    volume = qd.exhaustion_profile(f, "volume")
    monotone = bool(np.all(np.diff(plain) > 0))
    ratio = plain[-1] / plain[0]

    def cauchy(seq):
        last = seq[-3:]
        return float(np.max(last) - np.min(last))

    one = fn.polynomial([1])
    reduced_one = qd.volume_norm_sq_reduced(one, n_r=32, n_theta=32)
    est, se = _ball_volume_hit_or_miss(samples, seed)
    mc_dev = abs(est - np.pi**2 / 2) / se
    return [
        CheckResult(8, "unweighted disk norm of 1/(1-q) grows monotonically, final/initial > 5",
                    monotone and ratio > 5, float(ratio), 5.0, f"(monotone={monotone})"),
        _check(8, "rho-weighted slice norm Cauchy over last 3 of 12 disks", cauchy(weighted), 1e-4 * tol_scale,
               f"(values {', '.join(f'{v:.6f}' for v in weighted[-3:])})"),
        _check(8, "reduced volume norm Cauchy over last 3 of 12 disks", cauchy(volume), 1e-4 * tol_scale,
               f"(values {', '.join(f'{v:.6f}' for v in volume[-3:])})"),
        _check(8, "reduced volume norm of 1 = pi^2/2", abs(reduced_one - np.pi**2 / 2), 1e-6 * tol_scale),
        _check(8, "Monte Carlo volume of the 4-ball (units of stderr)", mc_dev, 3.0 * tol_scale,
               f"(hit-or-miss estimate {est:.6f} +- {se:.1e})"),
    ]


def criterion_9_schwarz(tol_scale: float = 1.0, seed: int = SEED):
    rng = np.random.default_rng(seed + 9)
    worst_parts = 0.0
    for _ in range(100):
        poly = fn.ComplexPolynomial(rng.normal(size=6) + 1j * rng.normal(size=6))
        z = rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        f1, f2 = fn.intrinsic_parts(poly)
        v = poly(z)
        worst_parts = max(worst_parts, abs(f1(z) + f2(z) * 1j - v) / max(abs(v), 1.0))

    worst_half = 0.0
    for _ in range(10):
        f = fn.QuaternionPolynomial(np.pad(rng.normal(size=(5, 1)), ((0, 0), (0, 3))))
        g = fn.IntrinsicRational(tuple(rng.normal(size=3)), (1.0, -0.4), 2)
        u = qt.random_unit(rng)
        full = qd.inner_product(f, g, unit_i=u, n_r=32, n_theta=64)
        half = qd.inner_product(f, g, unit_i=u, half=True, n_r=32, n_theta=64)
        worst_half = max(worst_half, float(qt.modulus(full - qt.real(2 * half[0]))) / max(float(qt.modulus(full)), 1.0))

    worst_four = 0.0
    cases = [random_polynomial(rng, 5) for _ in range(3)]
    cases.append(fn.KernelSection(kernels.KernelId.BALL_I, random_ball(rng, 1, 0.7)[0]))
    for f in cases:
        i, j = qt.orthonormal_pair(qt.random_unit(rng), qt.random_unit(rng))
        parts = fn.four_component_decompose(f, i, j)
        q = random_ball(rng, 50, 0.85)
        worst_four = max(worst_four, float(_rel(parts.reconstruct(q), f(q)).max()))
    return [
        _check(9, "intrinsic_parts reconstruction (100 samples)", worst_parts, 1e-13 * tol_scale),
        _check(9, "half-slice inner product = full, intrinsic inputs", worst_half, 1e-9 * tol_scale),
        _check(9, "four-component reconstruction (50 q per f)", worst_four, 1e-11 * tol_scale),
    ]


def representation_variants(rng: np.random.Generator):
    i, j = qt.orthonormal_pair(qt.random_unit(rng), qt.random_unit(rng))
    return {
        "polynomial": random_polynomial(rng, 6),
        "intrinsic_rational": fn.IntrinsicRational((1.0, 0.3), (1.0, -0.5), 2),
        "stem": fn.Stem(fn.StemPair(fn.ComplexPolynomial([0.2, 1 - 0.5j, 0.3j]),
                                    fn.ComplexRational([1.0], [2.0, 1j], 1), i, j)),
        "kernel_section": fn.KernelSection(kernels.KernelId.BALL_I, random_ball(rng, 1, 0.5)[0]),
    }


def criterion_10_representation(tol_scale: float = 1.0, seed: int = SEED):
    rng = np.random.default_rng(seed + 10)
    out = []
    for name, f in representation_variants(rng).items():
        worst = 0.0
        for _ in range(50):
            q = random_ball(rng, 1, 0.8)[0]
            j = qt.random_unit(rng)
            worst = max(worst, float(_rel(fn.representation_formula(f, q, j), f(q))))
        out.append(_check(10, f"representation formula, {name}", worst, 1e-11 * tol_scale))
    return out


CRITERIA = {
    1: criterion_1_form_agreement,
    2: criterion_2_slice_reduction,
    3: criterion_3_reproducing,
    4: criterion_4_bergman_fueter_kernel,
    5: criterion_5_bf_transform,
    6: criterion_6_fueter_regularity,
    7: criterion_7_norm_equivalence,
    8: criterion_8_weighted_separation,
    9: criterion_9_schwarz,
    10: criterion_10_representation,
}

SUITES = {
    "kernels": (1, 2, 4),
    "transforms": (3, 5, 6),
    "norms": (7, 8),
    "schwarz": (9, 10),
    "all": tuple(CRITERIA),
}


def run_suite(name: str = "all", tol_scale: float = 1.0) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    results = []
    for c in SUITES[name]:
        results.extend(CRITERIA[c](tol_scale=tol_scale))
    return results
