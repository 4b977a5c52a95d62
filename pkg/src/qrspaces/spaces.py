"""Norm scales over the disk, their parameter records, and sup searches.

Every scale here is a supremum over the automorphism parameter a of a
weighted area integral.  All of them reduce to one engine:

    I(a) = int_D base(z) (1-|z|^2)^q_eff (1-|sigma_a z|^2)^s_eff dA(z),

with

    * F_h(p,q,s):  base = Lambda_f^p,          (q_eff, s_eff) = (q, s)
    * M_h(p,q,s):  base = |f|^p,               (q_eff, s_eff) = (q, s)
    * Q(1,p,a):    base = |f'|^p (1-t)^(p-2),  (q_eff, s_eff) = (p-2, a+2-p)

The last line is the exact pullback of int |(f o sigma_a)'|^p (1-t)^alpha dA
through z = sigma_a(w) (the automorphism derivative |sigma_a'| equals
(1-|sigma_a|^2)/(1-|w|^2), so the whole integrand is again a power of the
standard Mobius weight).  This keeps the moving part of every per-a integral
a bounded rational factor and makes the sup search cheap: base values are
tabulated once on a master grid whose angular resolution nests the ladder
used near the boundary.

Composition-based evaluation (Faa di Bruno) remains as the path for jet
orders n >= 2, where no pullback of this form exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .analytic import AnalyticFn, compose_mobius
from .errors import InfiniteConstantError, InvalidParameterError
from .harmonic import HarmonicMap, wirtinger
from .mobius import MobiusMap
from .quadrature import (
    ANGULAR_LADDER,
    DEFAULT_ANGULAR,
    DEFAULT_RADIAL,
    _jacobi_01,
    angular_count_for,
    angular_nodes,
    build_grid,
    disk_integral_green,
    grid_points,
    tensor_integral,
)

# --- parameter records -------------------------------------------------------


@dataclass(frozen=True)
class Qnpa:
    """Derivative scale: sup_a int |(f o sigma_a)^(n)|^p (1-t)^alpha dA."""

    n: int
    p: float
    alpha: float

    def validate(self):
        if self.n < 1:
            raise InvalidParameterError("n must be a positive integer")
        if self.p <= 0.0:
            raise InvalidParameterError("p must be positive")
        if self.alpha <= -1.0:
            raise InvalidParameterError("alpha must exceed -1")

    @property
    def is_trivial(self) -> bool:
        # only constants remain when n p > alpha + 2
        return self.n * self.p > self.alpha + 2.0

    def label(self):
        return f"Q({self.n},{self.p:g},{self.alpha:g})"


@dataclass(frozen=True)
class Fpqs:
    p: float
    q: float
    s: float

    def validate(self):
        if self.p <= 0.0:
            raise InvalidParameterError("p must be positive")
        if self.q <= -2.0:
            raise InvalidParameterError("q must exceed -2")
        if self.s <= 0.0:
            raise InvalidParameterError("s must be positive")
        if self.q + self.s <= -1.0:
            raise InvalidParameterError("q + s must exceed -1")

    def label(self):
        return f"F({self.p:g},{self.q:g},{self.s:g})"


@dataclass(frozen=True)
class Mpqs:
    p: float
    q: float
    s: float

    def validate(self):
        Fpqs(self.p, self.q, self.s).validate()

    def label(self):
        return f"M({self.p:g},{self.q:g},{self.s:g})"


@dataclass(frozen=True)
class Morrey:
    lam: float

    def validate(self):
        if not 0.0 < self.lam <= 1.0:
            raise InvalidParameterError("Morrey exponent must lie in (0, 1]")

    def f_scale(self) -> Fpqs:
        return Fpqs(2.0, 1.0 - self.lam, self.lam)

    def label(self):
        return f"Morrey({self.lam:g})"


@dataclass(frozen=True)
class BergmanMorrey:
    p: float
    lam: float

    def validate(self):
        if self.p <= 0.0:
            raise InvalidParameterError("p must be positive")
        if not 0.0 < self.lam < 2.0:
            raise InvalidParameterError("Bergman-Morrey exponent must lie in (0, 2)")

    def f_scale(self) -> Fpqs:
        return Fpqs(self.p, self.p - self.lam, self.lam)

    def label(self):
        return f"BergmanMorrey({self.p:g},{self.lam:g})"


@dataclass(frozen=True)
class Qs:
    s: float

    def validate(self):
        if self.s <= 0.0:
            raise InvalidParameterError("s must be positive")

    def f_scale(self) -> Fpqs:
        return Fpqs(2.0, 0.0, self.s)

    def label(self):
        return f"Qs({self.s:g})"


@dataclass(frozen=True)
class BlochAlpha:
    alpha: float

    def validate(self):
        if self.alpha <= 0.0:
            raise InvalidParameterError("Bloch exponent must be positive")

    def label(self):
        return f"Bloch({self.alpha:g})"


SpaceParams = Union[Qnpa, Fpqs, Mpqs, Morrey, BergmanMorrey, Qs, BlochAlpha]


# --- search specification and results ----------------------------------------

DEFAULT_SEARCH_RADII = tuple(0.0 if j == 0 else 1.0 - 2.0 ** -j for j in range(11))
DEFAULT_RADIUS_CAP = 1.0 - 2.0 ** -10


@dataclass(frozen=True)
class SupSearchSpec:
    """Coarse polar grid plus compass refinement for sup_{a in D}.

    The search is heuristic: integrals of the test maps are smooth in a, and
    the trace is always reported so a missed sup is diagnosable.
    """

    radii: Sequence[float] = DEFAULT_SEARCH_RADII
    angles_per_radius: int = 16
    compass_shrink: float = 0.5
    compass_stop: float = 1e-3
    radius_cap: float = DEFAULT_RADIUS_CAP

    def candidates(self):
        out = []
        for r in self.radii:
            r = min(float(r), self.radius_cap)
            if r <= 0.0:
                out.append(0.0 + 0.0j)
                continue
            for j in range(self.angles_per_radius):
                theta = 2.0 * np.pi * j / self.angles_per_radius
                out.append(r * np.exp(1j * theta))
        # deterministic, duplicate-free order
        seen, uniq = set(), []
        for a in out:
            key = (round(a.real, 15), round(a.imag, 15))
            if key not in seen:
                seen.add(key)
                uniq.append(a)
        return uniq


@dataclass(frozen=True)
class NormResult:
    """A computed norm: sup value, maximizer, and the evidence behind it."""

    value: float
    sup_a: complex
    trace: tuple
    error_estimate: float
    grid: dict
    raw_sup: float
    p_root: float
    value_at_zero: Optional[float] = None
    warnings: tuple = ()

    def trace_values(self):
        return np.asarray([v for _, v in self.trace])


def _compass_max(objective: Callable[[complex], float], start: complex,
                 value: float, cap: float, step0: float,
                 shrink: float, stop: float, budget: int = 2000):
    """Four-direction local ascent inside |a| <= cap.

    Returns (argmax, value, visited) with visited the evaluated points.  The
    evaluation budget guards against pathological integrands; the search is
    heuristic either way and the trace records what was explored.
    """
    best_a, best_v = start, value
    visited = []
    step = step0
    while step > stop and len(visited) < budget:
        moved = False
        for d in (step, -step, 1j * step, -1j * step):
            cand = best_a + d
            if abs(cand) > cap:
                continue
            v = objective(cand)
            visited.append((cand, v))
            if v > best_v:
                best_a, best_v, moved = cand, v, True
                break
        if not moved:
            step *= shrink
    return best_a, best_v, visited


# --- the weighted sup engine --------------------------------------------------


class WeightedSupProblem:
    """sup over a of int base(z) (1-t)^q_eff (1-|sigma_a z|^2)^s_eff dA.

    Base values are tabulated once on a (radial x max_angular) master grid;
    per-a integrals reuse nested angular subsets chosen by the aliasing
    ladder, so near-boundary parameters get the resolution they need without
    repricing the interior ones.
    """

    def __init__(self, base_fn: Callable, q_eff: float, s_eff: float,
                 radial: int = DEFAULT_RADIAL,
                 base_angular: int = DEFAULT_ANGULAR,
                 max_angular: int = ANGULAR_LADDER[-1]):
        if q_eff + s_eff <= -1.0:
            raise InvalidParameterError(
                "combined radial exponent must exceed -1 for the Jacobi rule"
            )
        self.q_eff = float(q_eff)
        self.s_eff = float(s_eff)
        self.radial = int(radial)
        self.base_angular = int(base_angular)
        self.max_angular = int(max_angular)
        self._t, self._w = _jacobi_01(self.radial, self.q_eff + self.s_eff)
        theta = angular_nodes(self.max_angular)
        self._z = np.sqrt(self._t)[:, None] * np.exp(1j * theta)[None, :]
        self._base = np.asarray(base_fn(self._z), dtype=np.float64)
        if self._base.shape != self._z.shape:
            raise InvalidParameterError("base_fn must return values on the grid")
        self._const_value = None

    def grid_metadata(self) -> dict:
        return {
            "grid_radial": self.radial,
            "grid_angular": self.base_angular,
            "grid_angular_max": self.max_angular,
            "q_eff": self.q_eff,
            "s_eff": self.s_eff,
        }

    def integral_at(self, a: complex) -> float:
        a = complex(a)
        if self.s_eff == 0.0:
            if self._const_value is None:
                ang = self._base.mean(axis=1) * (2.0 * np.pi)
                self._const_value = float(0.5 * np.dot(self._w, ang))
            return self._const_value
        count = angular_count_for(abs(a), abs(self.s_eff), self.base_angular)
        count = min(count, self.max_angular)
        stride = self.max_angular // count
        z = self._z[:, ::stride]
        b = self._base[:, ::stride]
        pref = (1.0 - abs(a) ** 2) ** self.s_eff
        mob = pref * np.abs(1.0 - np.conj(a) * z) ** (-2.0 * self.s_eff)
        ang = (b * mob).mean(axis=1) * (2.0 * np.pi)
        return float(0.5 * np.dot(self._w, ang))

    def refined_integral_at(self, a: complex) -> float:
        """One-off evaluation with doubled node counts (error estimation)."""
        a = complex(a)
        t, w = _jacobi_01(2 * self.radial, self.q_eff + self.s_eff)
        count = 2 * min(
            angular_count_for(abs(a), abs(self.s_eff), self.base_angular),
            self.max_angular,
        )
        theta = angular_nodes(count)
        z = np.sqrt(t)[:, None] * np.exp(1j * theta)[None, :]
        base = np.asarray(self._base_refine_fn(z), dtype=np.float64)
        if self.s_eff == 0.0:
            mob = 1.0
        else:
            pref = (1.0 - abs(a) ** 2) ** self.s_eff
            mob = pref * np.abs(1.0 - np.conj(a) * z) ** (-2.0 * self.s_eff)
        ang = (base * mob).mean(axis=1) * (2.0 * np.pi)
        return float(0.5 * np.dot(w, ang))

    # set by the norm wrappers so refinement can re-evaluate the base
    _base_refine_fn: Callable = None


def _sup_search(problem: WeightedSupProblem, search: SupSearchSpec):
    candidates = search.candidates()
    trace = [(a, problem.integral_at(a)) for a in candidates]
    best_a, best_v = max(trace, key=lambda av: av[1])
    step0 = max(0.05, 0.25 * (1.0 - abs(best_a)))
    a_ref, v_ref, visited = _compass_max(
        problem.integral_at, best_a, best_v, search.radius_cap,
        step0, search.compass_shrink, search.compass_stop,
    )
    trace.extend(visited)
    return a_ref, v_ref, trace


def _sup_search_joint(problems: Sequence[WeightedSupProblem], search: SupSearchSpec):
    """Run the sup search for several problems over a shared candidate set.

    Each problem contributes its own compass trajectory; every problem is then
    evaluated on the union, so pointwise-dominated integrands always come out
    with dominated sups.
    """
    candidates = list(search.candidates())
    traces = [[(a, pr.integral_at(a)) for a in candidates] for pr in problems]
    extra = []
    for pr, tr in zip(problems, traces):
        best_a, best_v = max(tr, key=lambda av: av[1])
        step0 = max(0.05, 0.25 * (1.0 - abs(best_a)))
        _, _, visited = _compass_max(
            pr.integral_at, best_a, best_v, search.radius_cap,
            step0, search.compass_shrink, search.compass_stop,
        )
        extra.extend(a for a, _ in visited)
    results = []
    for pr, tr in zip(problems, traces):
        tr = tr + [(a, pr.integral_at(a)) for a in extra]
        best_a, best_v = max(tr, key=lambda av: av[1])
        results.append((best_a, best_v, tr))
    return results


def _finish_norm(problem: WeightedSupProblem, search: SupSearchSpec,
                 p_root: float, value_at_zero=None, warnings=(),
                 precomputed=None) -> NormResult:
    if precomputed is None:
        best_a, best_v, trace = _sup_search(problem, search)
    else:
        best_a, best_v, trace = precomputed
    err_raw = 0.0
    if problem._base_refine_fn is not None:
        refined = problem.refined_integral_at(best_a)
        err_raw = abs(refined - best_v)
    value = best_v ** (1.0 / p_root) if p_root != 1.0 else best_v
    if best_v > 0.0 and p_root != 1.0:
        err_value = value * err_raw / (p_root * best_v)
    else:
        err_value = err_raw
    return NormResult(
        value=value,
        sup_a=complex(best_a),
        trace=tuple((complex(a), float(v)) for a, v in trace),
        error_estimate=float(max(err_value, 1e-12 * abs(value))),
        grid=problem.grid_metadata(),
        raw_sup=float(best_v),
        p_root=float(p_root),
        value_at_zero=value_at_zero,
        warnings=tuple(warnings),
    )


# --- base tabulators ----------------------------------------------------------


def _analytic_deriv_base(f: AnalyticFn, p: float):
    def base(z):
        return np.abs(f.jet(z, 1, 1)[1]) ** p
    return base


def _harmonic_lambda_pow(f: HarmonicMap, p: float):
    def base(z):
        return wirtinger(f, z).lambda_big ** p
    return base


def _values_pow(values_fn: Callable, p: float):
    def base(z):
        return np.abs(np.asarray(values_fn(z))) ** p
    return base


# --- norm functionals ----------------------------------------------------------


def _problem(base_fn, q_eff, s_eff, radial, base_angular) -> WeightedSupProblem:
    pr = WeightedSupProblem(base_fn, q_eff, s_eff, radial=radial,
                            base_angular=base_angular)
    pr._base_refine_fn = base_fn
    return pr


def q_npa_norm(f: AnalyticFn, params: Qnpa,
               search: Optional[SupSearchSpec] = None,
               radial: int = DEFAULT_RADIAL,
               angular: int = DEFAULT_ANGULAR) -> NormResult:
    """Seminorm of the derivative scale; |f(0)| is reported separately.

    For n = 1 the per-a integral is evaluated in pulled-back form (see module
    docstring); higher jet orders go through explicit composition.
    """
    params.validate()
    search = search or SupSearchSpec()
    warnings = ()
    if params.is_trivial:
        warnings = (
            f"trivial range: n*p = {params.n * params.p:g} exceeds alpha+2 = "
            f"{params.alpha + 2.0:g}; only constants have finite norm",
        )
    f0 = abs(f(0.0))
    if params.n == 1:
        pr = _problem(_analytic_deriv_base(f, params.p),
                      params.p - 2.0, params.alpha + 2.0 - params.p,
                      radial, angular)
        return _finish_norm(pr, search, params.p, value_at_zero=f0,
                            warnings=warnings)
    return _q_norm_composed([f], params, search, radial, angular, f0, warnings)


def qh_npa_norm(f: HarmonicMap, params: Qnpa,
                search: Optional[SupSearchSpec] = None,
                radial: int = DEFAULT_RADIAL,
                angular: int = DEFAULT_ANGULAR) -> NormResult:
    """Harmonic derivative scale with integrand (|(h o s)^(n)| + |(g o s)^(n)|)^p.

    For n = 1 this is the Lambda_f form, handled by the pullback engine.
    """
    params.validate()
    search = search or SupSearchSpec()
    warnings = ()
    if params.is_trivial:
        warnings = ("trivial range: n*p exceeds alpha+2",)
    f0 = abs(f(0.0))
    if params.n == 1:
        pr = _problem(_harmonic_lambda_pow(f, params.p),
                      params.p - 2.0, params.alpha + 2.0 - params.p,
                      radial, angular)
        return _finish_norm(pr, search, params.p, value_at_zero=f0,
                            warnings=warnings)
    return _q_norm_composed([f.h, f.g], params, search, radial, angular, f0,
                            warnings)


def _q_norm_composed(parts, params: Qnpa, search, radial, angular, f0, warnings):
    """Composition path for jet orders n >= 2."""
    n, p = params.n, params.p
    pole = 0.5 * p * (n + 1)

    def integral_at(a, nr=radial, na=angular):
        m = MobiusMap(a)
        count = angular_count_for(abs(complex(a)), pole, na)
        grid = build_grid(nr, params.alpha, count)
        z = grid_points(grid)
        total = np.zeros(z.shape)
        for part in parts:
            total += np.abs(compose_mobius(part, m).jet(z, n, n)[n])
        return tensor_integral(total ** p, grid)

    candidates = search.candidates()
    trace = [(a, integral_at(a)) for a in candidates]
    best_a, best_v = max(trace, key=lambda av: av[1])
    step0 = max(0.05, 0.25 * (1.0 - abs(best_a)))
    best_a, best_v, visited = _compass_max(
        integral_at, best_a, best_v, search.radius_cap,
        step0, search.compass_shrink, search.compass_stop,
    )
    trace.extend(visited)
    value = best_v ** (1.0 / p)
    refined = integral_at(best_a, nr=2 * radial, na=2 * angular)
    err_value = value * abs(refined - best_v) / (p * best_v) if best_v > 0 else 0.0
    return NormResult(
        value=value,
        sup_a=complex(best_a),
        trace=tuple((complex(a), float(v)) for a, v in trace),
        error_estimate=float(max(err_value, 1e-12 * value)),
        grid={"grid_radial": radial, "grid_angular": angular, "jet_order": n},
        raw_sup=float(best_v),
        p_root=float(p),
        value_at_zero=f0,
        warnings=tuple(warnings),
    )


def fh_pqs_norm(f: HarmonicMap, params: Fpqs,
                search: Optional[SupSearchSpec] = None,
                weight_form: str = "mobius",
                radial: int = DEFAULT_RADIAL,
                angular: int = DEFAULT_ANGULAR) -> NormResult:
    """sup_a int Lambda_f^p (1-t)^q W(z,a) dA with the chosen weight form.

    ``mobius`` uses (1-|sigma_a z|^2)^s; ``green`` uses g(z,a)^s, the
    log-singular companion (cross-validation only, slower).
    """
    params.validate()
    search = search or SupSearchSpec()
    if weight_form == "mobius":
        pr = _problem(_harmonic_lambda_pow(f, params.p),
                      params.q, params.s, radial, angular)
        return _finish_norm(pr, search, params.p)
    if weight_form != "green":
        raise InvalidParameterError(f"unknown weight form {weight_form!r}")

    base = _harmonic_lambda_pow(f, params.p)

    def integral_at(a):
        res = disk_integral_green(base, params.q, params.s, MobiusMap(a),
                                  radial=radial, angular=angular, tol=1e-7)
        return res.value

    candidates = search.candidates()
    trace = [(a, integral_at(a)) for a in candidates]
    best_a, best_v = max(trace, key=lambda av: av[1])
    step0 = max(0.05, 0.25 * (1.0 - abs(best_a)))
    best_a, best_v, visited = _compass_max(
        integral_at, best_a, best_v, search.radius_cap,
        step0, search.compass_shrink, search.compass_stop,
    )
    trace.extend(visited)
    return NormResult(
        value=best_v ** (1.0 / params.p),
        sup_a=complex(best_a),
        trace=tuple((complex(a), float(v)) for a, v in trace),
        error_estimate=1e-7 * best_v ** (1.0 / params.p),
        grid={"grid_radial": radial, "grid_angular": angular, "weight": "green"},
        raw_sup=float(best_v),
        p_root=float(params.p),
    )


def m_pqs_norm(values_fn: Callable, f0: complex, params: Mpqs,
               search: Optional[SupSearchSpec] = None,
               radial: int = DEFAULT_RADIAL,
               angular: int = DEFAULT_ANGULAR) -> NormResult:
    """|f(0)| + (sup_a int |f|^p (1-t)^q (1-|sigma_a z|^2)^s dA)^(1/p).

    ``values_fn`` maps a complex array of disk points to values of f.
    """
    params.validate()
    search = search or SupSearchSpec()
    pr = _problem(_values_pow(values_fn, params.p), params.q, params.s,
                  radial, angular)
    res = _finish_norm(pr, search, params.p, value_at_zero=abs(complex(f0)))
    if abs(complex(f0)) == 0.0:
        return res
    return NormResult(
        value=abs(complex(f0)) + res.value,
        sup_a=res.sup_a,
        trace=res.trace,
        error_estimate=res.error_estimate,
        grid=res.grid,
        raw_sup=res.raw_sup,
        p_root=res.p_root,
        value_at_zero=res.value_at_zero,
        warnings=res.warnings,
    )


def _lambda_values(f):
    """Adapter: |f'| for analytic input, Lambda_f for harmonic input."""
    if isinstance(f, HarmonicMap):
        return lambda z: wirtinger(f, z).lambda_big, abs(f(0.0))
    return lambda z: np.abs(f.jet(z, 1, 1)[1]), abs(f(0.0))


def specialized_norm(f, scale, search: Optional[SupSearchSpec] = None,
                     radial: int = DEFAULT_RADIAL,
                     angular: int = DEFAULT_ANGULAR) -> NormResult:
    """Morrey / Bergman-Morrey / Qs / Bloch-type norms.

    The first three delegate to the F-scale with the standard parameter
    mappings (Morrey(l) -> F(2,1-l,l), BergmanMorrey(p,l) -> F(p,p-l,l),
    Qs(s) -> F(2,0,s)) and add the value-at-zero term exactly as the
    respective definitions state.  Accepts analytic or harmonic ``f``.
    """
    scale.validate()
    search = search or SupSearchSpec()
    if isinstance(scale, BlochAlpha):
        return _bloch_norm(f, scale, search)
    fparams = scale.f_scale()
    deriv_fn, f0 = _lambda_values(f)
    pr = _problem(_values_pow(deriv_fn, fparams.p), fparams.q, fparams.s,
                  radial, angular)
    res = _finish_norm(pr, search, fparams.p, value_at_zero=f0)
    if f0 == 0.0:
        return res
    if isinstance(scale, Morrey):
        value = f0 + res.value
    elif isinstance(scale, BergmanMorrey):
        value = (f0 ** fparams.p + res.raw_sup) ** (1.0 / fparams.p)
    else:  # Qs
        value = math.sqrt(f0 ** 2 + res.raw_sup)
    return NormResult(value, res.sup_a, res.trace, res.error_estimate,
                      res.grid, res.raw_sup, res.p_root, f0, res.warnings)


def _bloch_norm(f, scale: BlochAlpha, search: SupSearchSpec) -> NormResult:
    deriv_fn, f0 = _lambda_values(f)

    def objective(z):
        z = np.asarray(complex(z))
        return float((1.0 - abs(complex(z)) ** 2) ** scale.alpha * deriv_fn(z))

    candidates = search.candidates()
    trace = [(z, objective(z)) for z in candidates]
    best_z, best_v = max(trace, key=lambda av: av[1])
    step0 = max(0.05, 0.25 * (1.0 - abs(best_z)))
    best_z, best_v, visited = _compass_max(
        objective, best_z, best_v, search.radius_cap,
        step0, search.compass_shrink, search.compass_stop,
    )
    trace.extend(visited)
    return NormResult(
        value=f0 + best_v,
        sup_a=complex(best_z),
        trace=tuple((complex(z), float(v)) for z, v in trace),
        error_estimate=1e-12 * (f0 + best_v),
        grid={"search_points": len(trace)},
        raw_sup=float(best_v),
        p_root=1.0,
        value_at_zero=f0,
    )


# --- sup-type constants --------------------------------------------------------

CONSTANT_SCAN_RADII = tuple(0.0 if j == 0 else 1.0 - 2.0 ** -j for j in range(11))


def _constant_sup(base_problem: WeightedSupProblem, label: str,
                  xtol: float = 1e-4) -> NormResult:
    """1-D sup over rho in [0, 1) of a rotation-invariant per-a integral.

    Coarse scan along the real axis, divergence detection, then golden
    section on the bracketing interval.
    """
    radii = [min(r, DEFAULT_RADIUS_CAP) for r in CONSTANT_SCAN_RADII]
    vals = [base_problem.integral_at(r) for r in radii]
    trace = list(zip(radii, vals))
    if vals[-1] > 10.0 * max(vals[0], 1e-300) and vals[-1] > vals[-2] > vals[-3]:
        raise InfiniteConstantError(
            f"{label} diverges along the radius scan "
            f"(value {vals[-1]:.3e} at rho = {radii[-1]:.6f})"
        )
    i = int(np.argmax(vals))
    lo = radii[i - 1] if i > 0 else 0.0
    hi = radii[i + 1] if i + 1 < len(radii) else radii[-1]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = base_problem.integral_at(x1), base_problem.integral_at(x2)
    while hi - lo > xtol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = base_problem.integral_at(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = base_problem.integral_at(x1)
        trace.append((x1, f1))
        trace.append((x2, f2))
    best_rho, best_v = max(trace, key=lambda av: av[1])
    refined = base_problem.refined_integral_at(best_rho) \
        if base_problem._base_refine_fn else best_v
    return NormResult(
        value=float(best_v),
        sup_a=complex(best_rho),
        trace=tuple((complex(r), float(v)) for r, v in trace),
        error_estimate=float(max(abs(refined - best_v), 1e-12 * abs(best_v))),
        grid=base_problem.grid_metadata(),
        raw_sup=float(best_v),
        p_root=1.0,
    )


def _unit_base(z):
    return np.ones(z.shape)


def sigma_deriv_constant(p: float, alpha: float,
                         radial: int = DEFAULT_RADIAL,
                         angular: int = DEFAULT_ANGULAR) -> NormResult:
    """sup_a int |sigma_a'(z)|^p (1-|z|^2)^alpha dA(z).

    Pulled back this is the engine integral with base 1 and exponents
    (p-2, alpha+2-p); it is finite exactly when p <= alpha + 2.
    """
    if alpha <= -1.0:
        raise InvalidParameterError("alpha must exceed -1")
    if p <= 0.0:
        raise InvalidParameterError("p must be positive")
    pr = _problem(_unit_base, p - 2.0, alpha + 2.0 - p, radial, angular)
    return _constant_sup(pr, f"C({p:g};{alpha:g})")


def weight_overlap_constant(q: float, s: float,
                            radial: int = DEFAULT_RADIAL,
                            angular: int = DEFAULT_ANGULAR) -> NormResult:
    """sup_a int (1-|z|^2)^q (1-|sigma_a z|^2)^s dA(z)."""
    Fpqs(1.0, q, s).validate()
    pr = _problem(_unit_base, q, s, radial, angular)
    return _constant_sup(pr, f"C({q:g},{s:g})")


def morrey_constant(lam: float, **kw) -> NormResult:
    Morrey(lam).validate()
    return weight_overlap_constant(1.0 - lam, lam, **kw)


def qs_constant(s: float, **kw) -> NormResult:
    Qs(s).validate()
    return weight_overlap_constant(0.0, s, **kw)
