"""JSON descriptions of slice functions and command-line value parsing."""

from __future__ import annotations

import json
import math

import numpy as np

from . import quaternion as qt
from .errors import SpecError
from .functions import (
    ComplexPolynomial,
    ComplexRational,
    Domain,
    IntrinsicRational,
    KernelSection,
    QuaternionPolynomial,
    SliceFunction,
    Stem,
    StemPair,
)
from .kernels import KernelId


def parse_quaternion(text: str, what: str = "quaternion") -> np.ndarray:
    """``"w,x,y,z"`` (a single number is a real quaternion)."""
    try:
        parts = [float(p) for p in text.replace(" ", "").split(",")]
    except ValueError:
        raise SpecError(f"{what}: cannot parse {text!r} as comma-separated numbers") from None
    if len(parts) == 1:
        parts += [0.0, 0.0, 0.0]
    if len(parts) != 4 or not all(map(math.isfinite, parts)):
        raise SpecError(f"{what}: expected 4 finite components w,x,y,z, got {text!r}")
    return np.array(parts)


def parse_unit(text: str, what: str = "slice") -> qt.UnitImaginary:
    try:
        parts = [float(p) for p in text.replace(" ", "").split(",")]
    except ValueError:
        raise SpecError(f"{what}: cannot parse {text!r}") from None
    if len(parts) != 3:
        raise SpecError(f"{what}: expected 3 components, got {len(parts)}")
    try:
        return qt.UnitImaginary.of(parts)
    except ValueError as exc:
        raise SpecError(f"{what}: {exc}") from None


def _number(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise SpecError(f"{path}: expected a finite number, got {v!r}")
    return float(v)


def _quat(v, path):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return np.array([_number(v, path), 0.0, 0.0, 0.0])
    if not isinstance(v, list) or len(v) != 4:
        raise SpecError(f"{path}: expected [w, x, y, z]")
    return np.array([_number(c, f"{path}[{n}]") for n, c in enumerate(v)])


def _complex(v, path):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(_number(v, path))
    if not isinstance(v, list) or len(v) != 2:
        raise SpecError(f"{path}: expected a number or [re, im]")
    return complex(_number(v[0], f"{path}[0]"), _number(v[1], f"{path}[1]"))


def _list(obj, key, path):
    v = obj.get(key)
    if not isinstance(v, list) or not v:
        raise SpecError(f"{path}.{key}: expected a non-empty list")
    return v


def _int(obj, key, path, default):
    v = obj.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise SpecError(f"{path}.{key}: expected a non-negative integer, got {v!r}")
    return v


def _holomorphic(obj, path):
    if not isinstance(obj, dict):
        raise SpecError(f"{path}: expected an object")
    if "coeffs" in obj:
        return ComplexPolynomial([_complex(c, f"{path}.coeffs[{n}]") for n, c in enumerate(_list(obj, "coeffs", path))])
    if "num" in obj:
        num = [_complex(c, f"{path}.num[{n}]") for n, c in enumerate(_list(obj, "num", path))]
        den = [_complex(c, f"{path}.den[{n}]") for n, c in enumerate(_list(obj, "den", path))]
        return ComplexRational(num, den, _int(obj, "den_pow", path, 1))
    raise SpecError(f"{path}: expected 'coeffs' or 'num'/'den'")


def _unit(v, path):
    if not isinstance(v, list) or len(v) != 3:
        raise SpecError(f"{path}: expected [ux, uy, uz]")
    try:
        return qt.UnitImaginary.of([_number(c, f"{path}[{n}]") for n, c in enumerate(v)])
    except ValueError as exc:
        raise SpecError(f"{path}: {exc}") from None


def function_from_obj(obj, path: str = "fn") -> SliceFunction:
    if not isinstance(obj, dict):
        raise SpecError(f"{path}: expected a JSON object")
    kind = obj.get("type")
    domain = obj.get("domain")
    if domain is not None:
        try:
            domain = Domain.parse(domain)
        except ValueError as exc:
            raise SpecError(f"{path}.domain: {exc}") from None

    if kind == "polynomial":
        coeffs = [_quat(c, f"{path}.coeffs[{n}]") for n, c in enumerate(_list(obj, "coeffs", path))]
        return QuaternionPolynomial(np.array(coeffs), domain)
    if kind == "intrinsic_rational":
        num = [_number(c, f"{path}.num[{n}]") for n, c in enumerate(_list(obj, "num", path))]
        den = [_number(c, f"{path}.den[{n}]") for n, c in enumerate(obj.get("den", [1.0]))]
        if not den:
            raise SpecError(f"{path}.den: expected a non-empty list")
        return IntrinsicRational(tuple(num), tuple(den), _int(obj, "den_pow", path, 1), domain)
    if kind == "stem":
        F = _holomorphic(obj.get("F", {"coeffs": [0]}), f"{path}.F")
        G = _holomorphic(obj.get("G", {"coeffs": [0]}), f"{path}.G")
        i = _unit(obj.get("i", [1, 0, 0]), f"{path}.i")
        j = _unit(obj.get("j", [0, 1, 0]), f"{path}.j")
        try:
            return Stem(StemPair(F, G, i, j, domain))
        except ValueError as exc:
            raise SpecError(f"{path}: {exc}") from None
    if kind == "kernel_section":
        try:
            kernel = KernelId.parse(str(obj.get("kernel", "ball_I")))
            return KernelSection(kernel, _quat(obj.get("r"), f"{path}.r"), obj.get("form"))
        except ValueError as exc:
            raise SpecError(f"{path}: {exc}") from None
    raise SpecError(
        f"{path}.type: expected polynomial, intrinsic_rational, stem or kernel_section, got {kind!r}"
    )


def parse_function(text: str) -> SliceFunction:
    """Parse a JSON function description, reporting line/column or field on error."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return function_from_obj(obj)
