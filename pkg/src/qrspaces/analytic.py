"""Analytic functions on the disk as jet evaluators.

An ``AnalyticFn`` produces jets: arrays whose entry j is f^(j)(z), for
j = 0..order, evaluated vectorized over numpy arrays of points.  Rational
closed forms (Koebe, half-plane Cayley, quotients) keep full accuracy near
the boundary where truncated series degrade, which the growth checks need.

Jets support a ``min_order``: entries below it are left unspecified (zero).
Cheap closed-form evaluators ignore it, but evaluators with a real cost per
entry honor it; in particular an antiderivative skips its radial quadrature
entirely when only derivative entries are consumed, which is what the norm
integrands do on large node sets.

Composition with a Mobius automorphism uses Faa di Bruno via partial Bell
polynomials; orders above ``MAX_COMPOSE_ORDER`` are rejected.
"""

from __future__ import annotations

import math
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import AccuracyError, InvalidParameterError, PoleError
from .mobius import MobiusMap, as_complex, sigma, sigma_derivatives

MAX_COMPOSE_ORDER = 6

_binom = math.comb


class AnalyticFn:
    """An analytic function represented by a jet evaluator.

    ``evaluator(z, order, min_order)`` must return an array of shape
    (order+1,) + z.shape with entry j equal to f^(j)(z) for j >= min_order
    (lower entries are unspecified).  Evaluators are immutable after
    construction and evaluation is pure, so instances may be shared freely
    across threads.
    """

    def __init__(self, evaluator: Callable, max_order: int = MAX_COMPOSE_ORDER,
                 description: str = "analytic function",
                 constant_value: Optional[complex] = None):
        if max_order < 1:
            raise InvalidParameterError("max_order must be >= 1")
        self._evaluator = evaluator
        self.max_order = max_order
        self.description = description
        self.constant_value = constant_value

    def jet(self, z, order: int, min_order: int = 0) -> np.ndarray:
        """[f(z), f'(z), ..., f^(order)(z)] on axis 0.

        Entries below ``min_order`` are not meaningful; request only what is
        consumed (expensive evaluators skip the rest).
        """
        if order < 0:
            raise InvalidParameterError("jet order must be >= 0")
        if not 0 <= min_order <= order:
            raise InvalidParameterError("need 0 <= min_order <= order")
        if order > self.max_order:
            raise InvalidParameterError(
                f"jet order {order} exceeds max_order {self.max_order} "
                f"of {self.description}"
            )
        z = np.asarray(as_complex(z))
        out = np.asarray(self._evaluator(z, order, min_order))
        if out.shape[0] != order + 1:
            raise AssertionError("evaluator returned a jet of wrong length")
        return out

    def __call__(self, z):
        val = self.jet(np.asarray(as_complex(z)), 0)[0]
        if np.ndim(np.asarray(as_complex(z))) == 0:
            return complex(val)
        return val

    def derivative_at(self, z, j: int = 1):
        val = self.jet(np.asarray(as_complex(z)), j, min_order=j)[j]
        if np.ndim(np.asarray(as_complex(z))) == 0:
            return complex(val)
        return val

    def __repr__(self):
        return f"AnalyticFn({self.description!r})"

    # arithmetic sugar, all routed through `combine`
    def __add__(self, other):
        return combine("add", self, _as_fn(other))

    def __sub__(self, other):
        return combine("sub", self, _as_fn(other))

    def __mul__(self, other):
        return combine("mul", self, _as_fn(other))

    def __truediv__(self, other):
        return combine("div", self, _as_fn(other))


def _as_fn(x) -> AnalyticFn:
    if isinstance(x, AnalyticFn):
        return x
    return constant(complex(x))


def _falling_factorial(indices: np.ndarray, j: int) -> np.ndarray:
    """i (i-1) ... (i-j+1) as floats (derivative coefficient scaling)."""
    out = np.ones_like(indices, dtype=np.float64)
    for m in range(j):
        out *= indices - m
    return out


def poly(coefficients: Sequence[complex]) -> AnalyticFn:
    """Polynomial sum c[i] z^i with exact jets."""
    coeffs = [complex(c) for c in coefficients]
    if not coeffs:
        raise InvalidParameterError("polynomial needs at least one coefficient")
    carr = np.asarray(coeffs, dtype=np.complex128)

    # row j holds the coefficients of the j-th derivative
    def evaluator(z, order, min_order):
        out = np.zeros((order + 1,) + z.shape, dtype=np.complex128)
        for j in range(min_order, order + 1):
            if j < len(carr):
                dj = carr[j:] * _falling_factorial(np.arange(j, len(carr)), j)
            else:
                dj = np.zeros(1, dtype=np.complex128)
            out[j] = np.polynomial.polynomial.polyval(z, dj)
        return out

    label = "poly(" + ", ".join(format(c, 'g') for c in coeffs) + ")"
    cval = coeffs[0] if len(coeffs) == 1 else None
    return AnalyticFn(evaluator, max_order=MAX_COMPOSE_ORDER, description=label,
                      constant_value=cval)


def constant(c) -> AnalyticFn:
    return poly([complex(c)])


def identity() -> AnalyticFn:
    return poly([0.0, 1.0])


def power_series(coefficients: Sequence[complex], truncation: int) -> AnalyticFn:
    """Truncated power series sum_{m<=truncation} c[m] z^m.

    Derivatives are summed termwise.  ``tail_estimate(z)`` bounds the
    truncation error by geometric extrapolation of the last retained terms;
    evaluation raises :class:`AccuracyError` where the tail is not decreasing
    (divergence at that point).
    """
    if truncation < 1:
        raise InvalidParameterError("truncation must be a positive integer")
    if truncation > 10 ** 6:
        raise InvalidParameterError("truncation above 1e6 is not supported")
    coeffs = np.asarray([complex(c) for c in coefficients], dtype=np.complex128)
    coeffs = coeffs[: truncation + 1]
    n = len(coeffs)

    def _check_divergence(z):
        if n < 4:
            return
        r = np.abs(np.asarray(z))
        rmax = float(np.max(r)) if r.size else 0.0
        if rmax == 0.0:
            return
        t1 = np.abs(coeffs[-2]) * rmax ** (n - 2)
        t2 = np.abs(coeffs[-1]) * rmax ** (n - 1)
        if t2 > t1 > 0.0 and t2 > 1e-13 * max(1.0, t1):
            raise AccuracyError(
                "power series tail is not decreasing at |z| = "
                f"{rmax:.6g}; evaluation diverges"
            )

    def evaluator(z, order, min_order):
        _check_divergence(z)
        out = np.zeros((order + 1,) + z.shape, dtype=np.complex128)
        for j in range(min_order, order + 1):
            if n > j:
                dj = coeffs[j:] * _falling_factorial(np.arange(j, n), j)
            else:
                dj = np.zeros(1, dtype=np.complex128)
            out[j] = np.polynomial.polynomial.polyval(z, dj)
        return out

    fn = AnalyticFn(evaluator, description=f"power series ({n} terms)")

    def tail_estimate(z):
        r = np.abs(np.asarray(as_complex(z)))
        if n < 3:
            return np.zeros_like(r)
        t1 = np.abs(coeffs[-2]) * r ** (n - 2)
        t2 = np.abs(coeffs[-1]) * r ** (n - 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(t1 > 0, t2 / np.where(t1 > 0, t1, 1.0), 0.0)
        ratio = np.clip(ratio, 0.0, 0.999999)
        return t2 * ratio / (1.0 - ratio)

    fn.tail_estimate = tail_estimate
    return fn


def koebe() -> AnalyticFn:
    """z / (1-z)^2, normalized so f(0) = 0, f'(0) = 1.

    Jets from z/(1-z)^2 = (1-z)^{-2} - (1-z)^{-1}:
    f^(j)(z) = (j+1)! (1-z)^{-(j+2)} - j! (1-z)^{-(j+1)}.
    """

    def evaluator(z, order, min_order):
        out = np.zeros((order + 1,) + z.shape, dtype=np.complex128)
        w = 1.0 - z
        for j in range(min_order, order + 1):
            out[j] = (math.factorial(j + 1) * w ** (-(j + 2))
                      - math.factorial(j) * w ** (-(j + 1)))
        return out

    return AnalyticFn(evaluator, description="koebe z/(1-z)^2")


def cayley_half() -> AnalyticFn:
    """z / (1-z); jets f^(j)(z) = j! (1-z)^{-(j+1)} for j >= 1."""

    def evaluator(z, order, min_order):
        out = np.zeros((order + 1,) + z.shape, dtype=np.complex128)
        w = 1.0 - z
        if min_order == 0:
            out[0] = z / w
        for j in range(max(1, min_order), order + 1):
            out[j] = math.factorial(j) * w ** (-(j + 1))
        return out

    return AnalyticFn(evaluator, description="z/(1-z)")


def scale(f: AnalyticFn, c) -> AnalyticFn:
    """c * f; every jet entry scales, so min_order passes straight through."""
    c = complex(c)

    def evaluator(z, order, min_order):
        return c * f.jet(z, order, min_order)

    cval = None if f.constant_value is None else c * f.constant_value
    return AnalyticFn(evaluator, max_order=f.max_order,
                      description=f"{c:g}*{f.description}",
                      constant_value=cval)


def shift(f: AnalyticFn, c) -> AnalyticFn:
    """f + c; only the order-0 entry changes."""
    c = complex(c)

    def evaluator(z, order, min_order):
        out = f.jet(z, order, min_order).copy()
        if min_order == 0:
            out[0] = out[0] + c
        return out

    cval = None if f.constant_value is None else c + f.constant_value
    return AnalyticFn(evaluator, max_order=f.max_order,
                      description=f"({f.description} + {c:g})",
                      constant_value=cval)


def combine(op: str, f: AnalyticFn, g: AnalyticFn) -> AnalyticFn:
    """Pointwise combination with jets by Leibniz / quotient recursion.

    Combinations with a constant operand reduce to scale/shift and keep jet
    laziness; the general product and quotient need the full lower jets of
    both operands.  For ``div`` the caller asserts the denominator does not
    vanish on the disk; a zero met at evaluation raises :class:`PoleError`.
    """
    if op not in ("add", "sub", "mul", "div"):
        raise InvalidParameterError(f"unknown combine op {op!r}")
    # constant folding keeps expensive operands lazy
    if g.constant_value is not None:
        c = g.constant_value
        if op == "add":
            return shift(f, c)
        if op == "sub":
            return shift(f, -c)
        if op == "mul":
            return scale(f, c)
        if c == 0:
            raise PoleError("division by the zero function")
        return scale(f, 1.0 / c)
    if f.constant_value is not None and op in ("add", "mul"):
        return combine(op, g, f)
    if f.constant_value is not None and op == "sub":
        return shift(scale(g, -1.0), f.constant_value)

    max_order = min(f.max_order, g.max_order)

    def evaluator(z, order, min_order):
        if op in ("add", "sub"):
            fj = f.jet(z, order, min_order)
            gj = g.jet(z, order, min_order)
            return fj + gj if op == "add" else fj - gj
        fj = f.jet(z, order)
        gj = g.jet(z, order)
        if op == "mul":
            out = np.empty_like(fj)
            for nn in range(order + 1):
                acc = np.zeros(z.shape, dtype=np.complex128)
                for k in range(nn + 1):
                    acc += _binom(nn, k) * fj[k] * gj[nn - k]
                out[nn] = acc
            return out
        # quotient: q g = f  =>  q^(n) = (f^(n) - sum_{k<n} C(n,k) q^(k) g^(n-k)) / g
        den = gj[0]
        bad = np.abs(den) < 1e-290
        if np.any(bad):
            raise PoleError("denominator vanishes at an evaluation point")
        out = np.empty_like(fj)
        out[0] = fj[0] / den
        for nn in range(1, order + 1):
            acc = fj[nn].astype(np.complex128).copy()
            for k in range(nn):
                acc -= _binom(nn, k) * out[k] * gj[nn - k]
            out[nn] = acc / den
        return out

    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[op]
    label = f"({f.description} {sym} {g.description})"
    return AnalyticFn(evaluator, max_order=max_order, description=label)


def derivative(f: AnalyticFn) -> AnalyticFn:
    """f' as an AnalyticFn (jets shift down one order)."""
    if f.max_order < 2:
        raise InvalidParameterError("cannot differentiate: max_order too small")

    def evaluator(z, order, min_order):
        return f.jet(z, order + 1, min_order + 1)[1:]

    return AnalyticFn(evaluator, max_order=f.max_order - 1,
                      description=f"d/dz {f.description}")


def _bell_rows(xs, order):
    """Partial Bell polynomials B_{n,k}(x1..x_{n-k+1}) for n <= order.

    ``xs[i]`` holds x_{i+1} as an array; returns nested list B[n][k].
    """
    B = [[None] * (order + 1) for _ in range(order + 1)]
    B[0][0] = 1.0
    for nn in range(1, order + 1):
        for k in range(1, nn + 1):
            acc = 0.0
            for i in range(1, nn - k + 2):
                prev = B[nn - i][k - 1]
                if prev is None:
                    continue
                acc = acc + _binom(nn - 1, i - 1) * xs[i - 1] * prev
            B[nn][k] = acc
    return B


def compose_mobius(f: AnalyticFn, m: MobiusMap) -> AnalyticFn:
    """f composed with sigma_a, jets by Faa di Bruno.

    Order 1 is exactly the chain rule f'(sigma_a(z)) * sigma_a'(z); higher
    orders (up to ``MAX_COMPOSE_ORDER``) use the Bell-polynomial recursion
    with the closed-form derivatives of sigma_a.
    """

    def evaluator(z, order, min_order):
        w = sigma(m, z)
        out = np.zeros((order + 1,) + z.shape, dtype=np.complex128)
        if order == 0:
            out[0] = f.jet(w, 0)[0]
            return out
        fj = f.jet(w, order, min_order=min(1, min_order))
        if min_order == 0:
            out[0] = fj[0]
        sig = sigma_derivatives(m, z, order)
        if order == 1:
            out[1] = fj[1] * sig[0]
            return out
        B = _bell_rows(sig, order)
        for nn in range(max(1, min_order), order + 1):
            acc = np.zeros(z.shape, dtype=np.complex128)
            for k in range(1, nn + 1):
                acc += fj[k] * B[nn][k]
            out[nn] = acc
        return out

    return AnalyticFn(evaluator,
                      max_order=min(f.max_order, MAX_COMPOSE_ORDER),
                      description=f"{f.description} o sigma_{m.param:g}")


# Fixed Gauss-Legendre panels for the radial antiderivative path.  Panels are
# graded geometrically toward t = 1 so integrands that peak when |z| -> 1
# (Koebe-type derivatives) stay resolved.  Two independent rules (24- and
# 16-point per panel) are evaluated together; their disagreement is the
# convergence check.
_PANEL_EDGES = np.asarray([0.0] + [1.0 - 0.5 ** m for m in range(1, 15)] + [1.0])


def _panel_rule(npts):
    x, w = np.polynomial.legendre.leggauss(npts)
    ts, ws = [], []
    for lo, hi in zip(_PANEL_EDGES[:-1], _PANEL_EDGES[1:]):
        half = 0.5 * (hi - lo)
        ts.append(lo + half * (x + 1.0))
        ws.append(half * w)
    return np.concatenate(ts), np.concatenate(ws)


_PATH_T24, _PATH_W24 = _panel_rule(24)
_PATH_T16, _PATH_W16 = _panel_rule(16)
_PATH_T = np.concatenate([_PATH_T24, _PATH_T16])
_ANTIDERIV_CHUNK = 4096


def antiderivative(f: AnalyticFn, base_value: complex = 0.0) -> AnalyticFn:
    """F with F(0) = base_value and F' = f.

    F(z) = base + z * int_0^1 f(t z) dt along the radial segment; the disk is
    simply connected so the value is path independent.  The integral uses
    graded composite Gauss-Legendre panels and verifies convergence against an
    independent coarser rule; disagreement raises :class:`AccuracyError`.
    Jets of order >= 1 are delegated to ``f`` (and a jet request with
    min_order >= 1 performs no quadrature at all).
    """
    base = complex(base_value)
    n24 = _PATH_T24.size

    def _value_chunk(z):
        tz = np.multiply.outer(_PATH_T, z)
        vals = f.jet(tz, 0)[0]
        fine = z * np.tensordot(_PATH_W24, vals[:n24], axes=(0, 0))
        check = z * np.tensordot(_PATH_W16, vals[n24:], axes=(0, 0))
        err = np.abs(fine - check)
        scale_ = np.maximum(np.abs(fine), 1.0)
        if np.any(err > 1e-7 * scale_):
            raise AccuracyError(
                "antiderivative quadrature did not converge on the radial segment"
            )
        return base + fine

    def _value(z):
        flat = np.ravel(z)
        if flat.size <= _ANTIDERIV_CHUNK:
            return _value_chunk(z)
        parts = [_value_chunk(flat[i:i + _ANTIDERIV_CHUNK])
                 for i in range(0, flat.size, _ANTIDERIV_CHUNK)]
        return np.concatenate(parts).reshape(np.shape(z))

    def evaluator(z, order, min_order):
        out = np.zeros((order + 1,) + z.shape, dtype=np.complex128)
        if min_order == 0:
            out[0] = _value(z)
        if order >= 1:
            out[1:] = f.jet(z, order - 1, max(0, min_order - 1))
        return out

    return AnalyticFn(evaluator, max_order=f.max_order + 1,
                      description=f"antiderivative of {f.description}")
