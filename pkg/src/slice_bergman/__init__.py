"""Slice regular Bergman kernels of the second kind on quaternionic domains.

Quaternions are float arrays with a trailing axis of length 4 ordered
``(w, x, y, z)``; every routine broadcasts over leading axes.
"""

from . import differential, functions, kernels, quadrature, quaternion, transforms
from .differential import FDScheme, cauchy_fueter_fd, cr_slice_fd, laplacian_fd
from .errors import (
    BadParameter,
    BoundaryLimitNotReal,
    ContourTooClose,
    DivergenceSuspected,
    DomainError,
    NonFiniteSample,
    SingularKernel,
    SliceBergmanError,
    SpecError,
    ZeroDivisor,
)
from .functions import (
    Domain,
    IntrinsicRational,
    KernelSection,
    QuaternionPolynomial,
    SliceFunction,
    Stem,
    StemPair,
    four_component_decompose,
    intrinsic_parts,
    polynomial,
    representation_formula,
    schwarz_extend,
    split,
)
from .kernels import KernelId, ball_kernel, bergman_fueter_kernel, disk_kernel, halfspace_kernel, q_factor
from .quadrature import (
    WeightId,
    build_rule,
    inner_product,
    slice_norm_sq,
    volume_integral_mc,
    volume_norm_sq_reduced,
    weighted_slice_norm_sq,
)
from .quaternion import Quaternion, SlicePoint, UnitImaginary
from .specs import parse_function
from .transforms import TransformReport, bergman_fueter_transform, fueter_contour_transform, reproduce

__version__ = "0.1.0"
