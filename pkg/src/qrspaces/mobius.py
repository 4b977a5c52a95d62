"""Mobius automorphisms of the unit disk and the algebra built on them.

The involution sigma_a(z) = (a - z)/(1 - conj(a) z) swaps 0 and a.  Everything
downstream (weights, norms, sup searches) leans on three exact identities:

* involution:            sigma_a(sigma_a(z)) = z
* derivative chain:      sigma_a'(sigma_a(w)) * sigma_a'(w) = 1
* weight product form:   1 - |sigma_a(z)|^2 = (1-|a|^2)(1-|z|^2) / |1 - conj(a) z|^2

Scalar complex numbers and numpy arrays of complex are both accepted by the
module functions; ``DiskPoint`` is the validated wrapper used at API edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, SingularityError

# Points with modulus in [1 - BOUNDARY_BAND, 1) are accepted but flagged:
# weights like (1-|z|^2)^alpha degenerate there.
BOUNDARY_BAND = 1e-15


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit disk, validated at construction."""

    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise InvalidParameterError("disk point coordinates must be finite")
        if self.abs_sq >= 1.0:
            raise InvalidParameterError(
                f"point {self.re}+{self.im}j lies outside the open unit disk"
            )

    @classmethod
    def from_complex(cls, z) -> "DiskPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    @property
    def abs_sq(self) -> float:
        return self.re * self.re + self.im * self.im

    @property
    def near_boundary(self) -> bool:
        return self.abs_sq > (1.0 - BOUNDARY_BAND) ** 2

    def __complex__(self) -> complex:
        return self.z


def as_complex(z):
    """Coerce DiskPoint / complex / ndarray input to complex or ndarray."""
    if isinstance(z, DiskPoint):
        return z.z
    if isinstance(z, np.ndarray):
        return z.astype(np.complex128, copy=False)
    return complex(z)


@dataclass(frozen=True)
class MobiusMap:
    """The disk automorphism sigma_a with parameter a in the open disk."""

    a: DiskPoint

    def __init__(self, a):
        if not isinstance(a, DiskPoint):
            a = DiskPoint.from_complex(a)
        object.__setattr__(self, "a", a)

    @property
    def param(self) -> complex:
        return self.a.z

    def __call__(self, z):
        if isinstance(z, DiskPoint):
            return DiskPoint.from_complex(sigma(self, z.z))
        return sigma(self, z)


def sigma(m: MobiusMap, z):
    """Evaluate sigma_a(z) = (a - z) / (1 - conj(a) z)."""
    a = m.param
    z = as_complex(z)
    return (a - z) / (1.0 - np.conj(a) * z)


def sigma_derivatives(m: MobiusMap, z, order: int):
    """Derivatives sigma_a^(j)(z) for j = 1..order.

    Closed form: sigma_a^(j)(z) = -(1-|a|^2) * j! * conj(a)^(j-1) / (1 - conj(a) z)^(j+1).
    Returns a list of scalars or arrays matching the shape of ``z``.
    """
    if order < 1:
        raise InvalidParameterError("derivative order must be >= 1")
    a = m.param
    abar = np.conj(a)
    z = as_complex(z)
    one_minus = 1.0 - abar * z
    pref = -(1.0 - abs(a) ** 2)
    out = []
    for j in range(1, order + 1):
        out.append(pref * math.factorial(j) * abar ** (j - 1) / one_minus ** (j + 1))
    return out


def green(m: MobiusMap, z):
    """Green's function g(z, a) = -log |sigma_a(z)| of the disk.

    Positive for z != a, with a logarithmic pole at z = a (raises for scalar
    input exactly at the pole).
    """
    w = sigma(m, z)
    mod = np.abs(w)
    if np.ndim(mod) == 0:
        if mod == 0.0:
            raise SingularityError("Green's function has a pole at z = a")
        return -math.log(mod)
    with np.errstate(divide="ignore"):
        return -np.log(mod)


def one_minus_sigma_sq(m: MobiusMap, z):
    """The weight 1 - |sigma_a(z)|^2 in its stable product form.

    Uses (1-|a|^2)(1-|z|^2)/|1 - conj(a) z|^2, which avoids cancellation and
    agrees with the direct expression to machine precision.
    """
    a = m.param
    z = as_complex(z)
    num = (1.0 - abs(a) ** 2) * (1.0 - np.abs(z) ** 2)
    den = np.abs(1.0 - np.conj(a) * z) ** 2
    return num / den
