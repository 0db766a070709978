"""Source spaces, basis constants, collapsed coefficients and exponents.

Four source spaces are supported: the weighted Bergman and Hardy spaces of
the unit ball B_n and of the polydisk D^n.  Every operator maps into a
weighted Bergman space A^2_beta of D^m, where beta is fixed by the source.

All Gamma-function ratios go through ``scipy.special.gammaln``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import exp, lgamma, log

import numpy as np
from scipy.special import gammaln, poch

from .errors import InvalidWeight, UnsupportedPairing, UnsupportedSpace
from .multiindex import log_factorial


class SpaceKind(enum.Enum):
    BERGMAN_BALL = "bergman_ball"
    HARDY_BALL = "hardy_ball"
    BERGMAN_POLYDISK = "bergman_polydisk"
    HARDY_POLYDISK = "hardy_polydisk"

    @property
    def is_ball(self) -> bool:
        return self in (SpaceKind.BERGMAN_BALL, SpaceKind.HARDY_BALL)

    @property
    def is_bergman(self) -> bool:
        return self in (SpaceKind.BERGMAN_BALL, SpaceKind.BERGMAN_POLYDISK)


class OpKind(enum.Enum):
    COMPOSITION = "composition"
    RADIAL_COMP_DIFF = "radial_composition_differentiation"
    ONE_VAR_DERIVATIVE = "one_var_derivative"


@dataclass(frozen=True)
class SourceSpace:
    kind: SpaceKind
    n: int
    alpha: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SpaceKind(self.kind))
        if self.n < 1:
            raise InvalidWeight(f"dimension n must be >= 1, got {self.n}")
        if self.kind.is_bergman:
            if self.alpha is None:
                raise InvalidWeight(f"{self.kind.value} needs a weight alpha")
            if not self.alpha > -1:
                raise InvalidWeight(f"alpha must be > -1, got {self.alpha}")
            object.__setattr__(self, "alpha", float(self.alpha))
        elif self.alpha is not None:
            raise InvalidWeight(f"{self.kind.value} takes no weight alpha")

    @property
    def is_ball(self) -> bool:
        return self.kind.is_ball

    def __str__(self):
        a = f", alpha={self.alpha:g}" if self.alpha is not None else ""
        return f"{self.kind.value}(n={self.n}{a})"


@dataclass(frozen=True)
class TargetSpace:
    m: int
    beta: float

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not self.beta > -1:
            raise InvalidWeight(f"target weight beta must be > -1, got {self.beta}")


@dataclass(frozen=True)
class OperatorKind:
    kind: OpKind
    t: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", OpKind(self.kind))
        if self.kind is OpKind.RADIAL_COMP_DIFF:
            if self.t is None:
                raise ValueError("radial composition-differentiation needs an order t")
            if not self.t >= 0:
                raise ValueError(f"order t must be >= 0, got {self.t}")
            object.__setattr__(self, "t", float(self.t))
        elif self.t is not None:
            raise ValueError(f"{self.kind.value} takes no order t")

    @classmethod
    def composition(cls):
        return cls(OpKind.COMPOSITION)

    @classmethod
    def radial(cls, t):
        return cls(OpKind.RADIAL_COMP_DIFF, t)

    @classmethod
    def one_var_derivative(cls):
        return cls(OpKind.ONE_VAR_DERIVATIVE)

    @property
    def is_differentiation(self) -> bool:
        return self.kind is not OpKind.COMPOSITION

    def __str__(self):
        return self.kind.value if self.t is None else f"{self.kind.value}(t={self.t:g})"


def check_pairing(src: SourceSpace, op: OperatorKind) -> None:
    if op.kind is OpKind.RADIAL_COMP_DIFF and not src.is_ball:
        raise UnsupportedPairing(
            f"no theorem for radial composition-differentiation on {src.kind.value}"
        )
    if op.kind is OpKind.ONE_VAR_DERIVATIVE and not (
        src.kind is SpaceKind.BERGMAN_BALL and src.n == 1
    ):
        raise UnsupportedPairing(
            "the one-variable derivative operator acts on A^2_alpha of the disk only "
            "(bergman_ball with n = 1)"
        )


def target_beta(src: SourceSpace) -> float:
    """Weight beta of the target space A^2_beta fixed by the source space."""
    n = src.n
    if src.kind is SpaceKind.BERGMAN_POLYDISK:
        beta = n * (src.alpha + 2) - 2
    elif src.kind is SpaceKind.BERGMAN_BALL:
        beta = n - 1 + src.alpha
    else:
        beta = float(n - 2)
    if not beta > -1:
        raise InvalidWeight(
            f"{src} gives target weight beta={beta:g}, which is not > -1"
        )
    return float(beta)


# -- orthonormal bases ------------------------------------------------------


def log_basis_constant_sq(src: SourceSpace, J) -> float:
    """ln of c_J**2, where c_J * z^J is the unit-norm basis vector."""
    if len(J) != src.n:
        raise ValueError(f"multi-index of length {len(J)} for a space of dimension {src.n}")
    n, k = src.n, sum(J)
    kind = src.kind
    if kind is SpaceKind.BERGMAN_BALL:
        a = src.alpha
        return lgamma(n + k + a + 1) - lgamma(n + a + 1) - log_factorial(J)
    if kind is SpaceKind.HARDY_BALL:
        return lgamma(n + k) - lgamma(n) - log_factorial(J)
    if kind is SpaceKind.HARDY_POLYDISK:
        return 0.0
    a = src.alpha
    return float(sum(lgamma(j + a + 2) - lgamma(j + 1) - lgamma(a + 2) for j in J))


def basis_constant_sq(src: SourceSpace, J) -> float:
    return exp(log_basis_constant_sq(src, J))


def monomial_norm_sq(src: SourceSpace, J) -> float:
    """||z^J||**2 in the source space, from the closed-form monomial integrals."""
    return exp(-log_basis_constant_sq(src, J))


def polydisk_factor_log_coefficients(src: SourceSpace, js) -> np.ndarray:
    """ln a_j for the one-variable factors of a polydisk basis, a_j = 1/gamma_j**2."""
    js = np.asarray(js, dtype=float)
    if src.kind is SpaceKind.HARDY_POLYDISK:
        return np.zeros_like(js)
    if src.kind is SpaceKind.BERGMAN_POLYDISK:
        a = src.alpha
        return gammaln(js + a + 2) - gammaln(js + 1) - gammaln(a + 2)
    raise UnsupportedSpace(f"{src.kind.value} is not a polydisk space")


# -- collapsed one-variable series -----------------------------------------


def log_collapsed_coefficients(src: SourceSpace, op: OperatorKind, ks) -> np.ndarray:
    """ln c_k for an array of degrees k; -inf where c_k = 0.

    ``sum_{|J|=k}`` of the per-basis-vector integrand weights, after the
    multinomial collapse, equals ``c_k * |phi|**(2k)``.  For the one-variable
    derivative the series is indexed so that c_k multiplies |phi|**(2k) and
    comes from the basis vector e_{k+1}.
    """
    if not src.is_ball:
        raise UnsupportedSpace(f"no one-variable collapse for {src.kind.value}")
    check_pairing(src, op)
    ks = np.asarray(ks, dtype=float)
    n = src.n
    if op.kind is OpKind.ONE_VAR_DERIVATIVE:
        a = src.alpha
        return np.log(ks + 1) + gammaln(ks + a + 3) - gammaln(ks + 1) - gammaln(a + 2)
    if src.kind is SpaceKind.BERGMAN_BALL:
        a = src.alpha
        base = gammaln(ks + n + a + 1) - gammaln(n + a + 1) - gammaln(ks + 1)
    else:
        base = gammaln(ks + n) - gammaln(n) - gammaln(ks + 1)
    if op.kind is OpKind.COMPOSITION:
        return base
    with np.errstate(divide="ignore"):
        return np.where(ks > 0, 2 * op.t * np.log(np.where(ks > 0, ks, 1.0)) + base, -np.inf)


def collapsed_coefficient(src: SourceSpace, op: OperatorKind, k: int) -> float:
    return float(np.exp(log_collapsed_coefficients(src, op, [k])[0]))


def coefficient_ratio(src: SourceSpace, op: OperatorKind, k) -> np.ndarray:
    """c_{k+1} / c_k from the closed-form recurrences (k >= 1 for differentiation ops)."""
    k = np.asarray(k, dtype=float)
    n = src.n
    if op.kind is OpKind.ONE_VAR_DERIVATIVE:
        a = src.alpha
        return (k + 2) / (k + 1) * (k + a + 3) / (k + 1)
    if src.kind is SpaceKind.BERGMAN_BALL:
        r = (k + n + src.alpha + 1) / (k + 1)
    elif src.kind is SpaceKind.HARDY_BALL:
        r = (k + n) / (k + 1)
    else:
        raise UnsupportedSpace(f"no one-variable collapse for {src.kind.value}")
    if op.kind is OpKind.RADIAL_COMP_DIFF:
        r = r * ((k + 1) / k) ** (2 * op.t)
    return r


def coefficient_ratio_limit(src: SourceSpace, op: OperatorKind) -> float:
    """lim_{k -> oo} c_{k+1}/c_k (always 1: the series have radius of convergence 1)."""
    return 1.0


# -- characterization integrand --------------------------------------------


def closed_form_exponent(src: SourceSpace, op: OperatorKind) -> float:
    """Exponent p in (1 - |phi|^2)^(-p) for ball sources, or the per-factor q
    in prod_k (1 - |phi_k|^2)^(-q) for polydisk sources."""
    check_pairing(src, op)
    n = src.n
    kind = src.kind
    if op.kind is OpKind.ONE_VAR_DERIVATIVE:
        return src.alpha + 4
    if kind is SpaceKind.BERGMAN_POLYDISK:
        return src.alpha + 2
    if kind is SpaceKind.HARDY_POLYDISK:
        return 1.0
    t = op.t if op.kind is OpKind.RADIAL_COMP_DIFF else 0.0
    if kind is SpaceKind.BERGMAN_BALL:
        if op.kind is OpKind.COMPOSITION:
            return n + src.alpha + 1
        return n + src.alpha + 2 * t + 1
    if op.kind is OpKind.COMPOSITION:
        return float(n)
    return n + 2 * t


def is_exact_theorem(src: SourceSpace, op: OperatorKind) -> bool:
    """True when the basis sum equals the characterization integral exactly."""
    check_pairing(src, op)
    return op.kind is OpKind.COMPOSITION


def gamma_ratio_deviation(k: float, x: float) -> float:
    """|Gamma(k + x) / (k**x Gamma(k)) - 1|, which tends to 0 as k grows.

    Uses the Pochhammer symbol directly: differencing log-gammas near 1e7
    would cost ~1e-9 absolute, comparable to the deviation itself.
    """
    return abs(float(poch(k, x)) / k**x - 1.0)
