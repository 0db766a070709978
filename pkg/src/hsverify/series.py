"""Polynomial symbols in m complex variables and the radial operator R^t.

A :class:`PolynomialMap` is a finite map ``MultiIndex -> complex``.  The
symbols psi and phi_k of a weighted composition operator are held this way;
:class:`VectorSymbol` bundles the n components of phi.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import pi, sqrt
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import DimensionMismatch
from .multiindex import MultiIndex


def term_order_key(J):
    """Canonical term order: by degree, then lexicographically descending."""
    return (sum(J), tuple(-j for j in J))


def pairwise_sum(values):
    """Balanced-tree reduction of a sequence (scalars or equal-shape arrays)."""
    values = list(values)
    if not values:
        return 0j
    while len(values) > 1:
        nxt = [values[i] + values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            nxt.append(values[-1])
        values = nxt
    return values[0]


@dataclass(frozen=True, eq=False)
class PolynomialMap:
    num_vars: int
    coeffs: Mapping[MultiIndex, complex]

    def __init__(self, num_vars: int, coeffs=None):
        if num_vars < 1:
            raise ValueError("num_vars must be >= 1")
        clean = {}
        for J, c in (coeffs or {}).items():
            J = MultiIndex(J)
            if len(J) != num_vars:
                raise DimensionMismatch(
                    f"term {tuple(J)} has length {len(J)}, expected {num_vars}"
                )
            c = complex(c)
            if c != 0:
                clean[J] = clean.get(J, 0j) + c
        clean = {J: c for J, c in clean.items() if c != 0}
        ordered = dict(sorted(clean.items(), key=lambda kv: term_order_key(kv[0])))
        object.__setattr__(self, "num_vars", int(num_vars))
        object.__setattr__(self, "coeffs", MappingProxyType(ordered))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, m: int) -> PolynomialMap:
        return cls(m, {})

    @classmethod
    def constant(cls, m: int, c) -> PolynomialMap:
        return cls(m, {(0,) * m: c})

    @classmethod
    def monomial(cls, J, c=1.0) -> PolynomialMap:
        J = MultiIndex(J)
        return cls(len(J), {J: c})

    @classmethod
    def variable(cls, m: int, k: int, c=1.0) -> PolynomialMap:
        """c * z_k, with k counted from 1."""
        J = [0] * m
        J[k - 1] = 1
        return cls(m, {tuple(J): c})

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(J) for J in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self):
        return list(self.coeffs.items())

    def __eq__(self, other):
        if not isinstance(other, PolynomialMap):
            return NotImplemented
        return self.num_vars == other.num_vars and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.num_vars, tuple(self.coeffs.items())))

    def __repr__(self):
        return f"PolynomialMap({self.num_vars}, {dict((tuple(J), c) for J, c in self.coeffs.items())})"

    def __add__(self, other):
        self._check_same(other)
        out = dict(self.coeffs)
        for J, c in other.coeffs.items():
            out[J] = out.get(J, 0j) + c
        return PolynomialMap(self.num_vars, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if isinstance(other, PolynomialMap):
            self._check_same(other)
            out = {}
            for J, a in self.coeffs.items():
                for K, b in other.coeffs.items():
                    L = tuple(j + k for j, k in zip(J, K))
                    out[L] = out.get(L, 0j) + a * b
            return PolynomialMap(self.num_vars, out)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, lam) -> PolynomialMap:
        return PolynomialMap(self.num_vars, {J: lam * c for J, c in self.coeffs.items()})

    def _check_same(self, other):
        if self.num_vars != other.num_vars:
            raise DimensionMismatch(
                f"polynomials in {self.num_vars} and {other.num_vars} variables"
            )

    # -- evaluation --------------------------------------------------------

    def __call__(self, z):
        return eval_poly(self, z)

    def eval_many(self, points) -> np.ndarray:
        """Evaluate at an (N, m) array of points; returns a complex (N,) array."""
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 1 and self.num_vars == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] != self.num_vars:
            raise DimensionMismatch(
                f"points of shape {pts.shape} for a polynomial in {self.num_vars} variables"
            )
        if not self.coeffs:
            return np.zeros(pts.shape[0], dtype=complex)
        cache = {}

        def power(axis, e):
            key = (axis, e)
            if key not in cache:
                cache[key] = pts[:, axis] ** e
            return cache[key]

        term_values = []
        for J, c in self.coeffs.items():
            v = np.full(pts.shape[0], c, dtype=complex)
            for axis, e in enumerate(J):
                if e:
                    v = v * power(axis, e)
            term_values.append(v)
        return pairwise_sum(term_values)

    # -- calculus ----------------------------------------------------------

    def homogeneous_parts(self) -> dict[int, PolynomialMap]:
        return homogeneous_parts(self)

    def partial_derivative(self, k: int) -> PolynomialMap:
        """d/dz_k with k counted from 1."""
        i = k - 1
        out = {}
        for J, c in self.coeffs.items():
            if J[i]:
                L = list(J)
                L[i] -= 1
                out[tuple(L)] = c * J[i]
        return PolynomialMap(self.num_vars, out)


def eval_poly(p: PolynomialMap, z) -> complex:
    """Value of ``p`` at a single point ``z`` (a scalar is accepted when m = 1)."""
    if np.isscalar(z):
        z = (z,)
    z = tuple(complex(v) for v in z)
    if len(z) != p.num_vars:
        raise DimensionMismatch(
            f"point has dimension {len(z)}, polynomial has {p.num_vars} variables"
        )
    terms = []
    for J, c in p.coeffs.items():
        v = c
        for zi, e in zip(z, J):
            if e:
                v *= zi**e
        terms.append(v)
    return complex(pairwise_sum(terms))


def homogeneous_parts(p: PolynomialMap) -> dict[int, PolynomialMap]:
    """Split ``p`` into its homogeneous pieces, keyed by degree."""
    groups: dict[int, dict] = {}
    for J, c in p.coeffs.items():
        groups.setdefault(J.degree, {})[J] = c
    return {k: PolynomialMap(p.num_vars, terms) for k, terms in sorted(groups.items())}


def radial_derivative(p: PolynomialMap, t: float) -> PolynomialMap:
    """R^t p: scale the degree-k part by k**t, drop the constant term."""
    if t < 0:
        raise ValueError("t must be >= 0")
    out = {}
    for J, c in p.coeffs.items():
        k = J.degree
        if k:
            out[J] = c * float(k) ** t
    return PolynomialMap(p.num_vars, out)


def euler_operator(p: PolynomialMap) -> PolynomialMap:
    """sum_k z_k dp/dz_k, by formal differentiation."""
    m = p.num_vars
    total = PolynomialMap.zero(m)
    for k in range(1, m + 1):
        total = total + PolynomialMap.variable(m, k) * p.partial_derivative(k)
    return total


class Target(enum.Enum):
    """Where phi is supposed to map: the unit ball or the polydisk."""

    BALL = "ball"
    POLYDISK = "polydisk"


@dataclass(frozen=True)
class VectorSymbol:
    components: tuple

    def __init__(self, components):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector symbol needs at least one component")
        m = comps[0].num_vars
        if any(c.num_vars != m for c in comps):
            raise DimensionMismatch("all components must share the same number of variables")
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def num_vars(self) -> int:
        return self.components[0].num_vars

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def eval_many(self, points) -> np.ndarray:
        """(N, n) array of component values."""
        return np.stack([c.eval_many(points) for c in self.components], axis=1)

    def modulus_squared(self, points) -> np.ndarray:
        """(N, n) array of |phi_k|^2."""
        v = self.eval_many(points)
        return v.real**2 + v.imag**2


def default_grid_density(m: int) -> int:
    return {1: 4096, 2: 256}.get(m, 48)


def torus_grid(m: int, density: int) -> np.ndarray:
    """(density**m, m) array of points on the distinguished boundary |z_j| = 1."""
    theta = 2 * pi * np.arange(density) / density
    ring = np.exp(1j * theta)
    mesh = np.meshgrid(*([ring] * m), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def component_sup_estimates(phi: VectorSymbol, grid_density: int | None = None) -> np.ndarray:
    """Grid maxima of |phi_k| over the torus, one per component."""
    density = grid_density or default_grid_density(phi.num_vars)
    mod2 = phi.modulus_squared(torus_grid(phi.num_vars, density))
    return np.sqrt(mod2.max(axis=0))


def sup_modulus_estimate(phi: VectorSymbol, target: Target, grid_density: int | None = None) -> float:
    """Boundary-grid maximum of |phi(z)| over the polydisk D^m.

    For ``Target.BALL`` the Euclidean norm of the component vector is
    maximized, for ``Target.POLYDISK`` the largest component modulus.  By the
    maximum principle the true supremum is attained on the torus, so the
    only error is the grid resolution; see :func:`sup_modulus_bound`.
    """
    density = grid_density or default_grid_density(phi.num_vars)
    if density < 8:
        raise ValueError("grid_density must be >= 8")
    mod2 = phi.modulus_squared(torus_grid(phi.num_vars, density))
    if Target(target) is Target.BALL:
        return float(sqrt(mod2.sum(axis=1).max()))
    return float(sqrt(mod2.max()))


def _angular_lipschitz(p: PolynomialMap) -> float:
    # |p(e^{i theta}) - p(e^{i theta'})| <= sum_J |c_J| |J| * max_l |theta_l - theta'_l|
    return float(sum(abs(c) * J.degree for J, c in p.coeffs.items()))


def sup_modulus_bound(phi: VectorSymbol, target: Target, grid_density: int | None = None) -> float:
    """Certified upper bound: grid maximum plus the Lipschitz slack pi/density * L."""
    density = grid_density or default_grid_density(phi.num_vars)
    est = sup_modulus_estimate(phi, target, density)
    lips = [_angular_lipschitz(c) for c in phi.components]
    slack_unit = pi / density
    if Target(target) is Target.BALL:
        return est + slack_unit * sqrt(sum(L * L for L in lips))
    return est + slack_unit * max(lips)


def component_sup_bounds(phi: VectorSymbol, grid_density: int | None = None) -> np.ndarray:
    density = grid_density or default_grid_density(phi.num_vars)
    est = component_sup_estimates(phi, density)
    lips = np.array([_angular_lipschitz(c) for c in phi.components])
    return est + (pi / density) * lips
