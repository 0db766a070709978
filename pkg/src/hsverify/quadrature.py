"""Product Gauss rules for the normalized weighted area measure dA_beta.

With z = sqrt(x) e^{i theta} the measure dA_beta(z) = (beta+1)(1-|z|^2)^beta dA(z)
becomes (beta+1)(1-x)^beta dx * dtheta/(2 pi) on [0,1] x [0, 2 pi).  The radial
factor is integrated by a Gauss-Jacobi rule carrying (1-x)^beta in its weight,
the angular factor by the uniform trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import InvalidWeight, NonFiniteSample
from .series import Target


def jacobi_recurrence(n: int, beta: float):
    """Orthonormal three-term recurrence for (beta+1)(1-x)^beta dx on [0, 1].

    Returns ``(a, b)`` with ``x p_k = b[k+1] p_{k+1} + a[k] p_k + b[k] p_{k-1}``,
    ``a`` of length n and ``b`` of length n+1 (``b[0]`` unused).
    """
    # monic Jacobi coefficients on [-1, 1] for (1-u)^A (1+u)^B, A = beta, B = 0
    A, B = float(beta), 0.0
    k = np.arange(n, dtype=float)
    s = 2 * k + A + B
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = (B * B - A * A) / (s * (s + 2))
    alpha[0] = (B - A) / (A + B + 2)
    kk = np.arange(1, n + 1, dtype=float)
    s1 = 2 * kk + A + B
    bsq = 4 * kk * (kk + A) * (kk + B) * (kk + A + B) / (s1 * s1 * (s1 + 1) * (s1 - 1))
    if n >= 1:
        # k = 1 with A + B = 0 would be 0/0 in the general formula
        bsq[0] = 4 * (1 + A) * (1 + B) / ((2 + A + B) ** 2 * (3 + A + B))
    a = (alpha + 1) / 2
    b = np.concatenate([[0.0], np.sqrt(bsq) / 2])
    return a, b


def _orthonormal_values(x, a, b, n):
    """p_0..p_n at the points x, for the probability measure (p_0 = 1)."""
    P = np.empty((n + 1,) + np.shape(x))
    P[0] = 1.0
    if n >= 1:
        P[1] = (x - a[0]) * P[0] / b[1]
    for k in range(1, n):
        P[k + 1] = ((x - a[k]) * P[k] - b[k] * P[k - 1]) / b[k + 1]
    return P


def gauss_jacobi_unit(n: int, beta: float, newton_steps: int = 2):
    """Nodes in (0,1) and weights summing to 1 for (beta+1)(1-x)^beta dx.

    Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix; they are
    polished by Newton steps on p_n, and the weights are taken from the
    Christoffel function 1 / sum_k p_k(x)^2, which keeps full relative
    accuracy for the tiny weights near the endpoints.
    """
    if not beta > -1:
        raise InvalidWeight(f"beta must be > -1, got {beta}")
    if n < 1:
        raise ValueError("need at least one node")
    a, b = jacobi_recurrence(n, beta)
    x = eigh_tridiagonal(a, b[1:n], eigvals_only=True)
    for _ in range(newton_steps):
        P = _orthonormal_values(x, a, b, n)
        # p_n' from the differentiated recurrence
        dP = np.zeros_like(P)
        if n >= 1:
            dP[1] = P[0] / b[1]
        for k in range(1, n):
            dP[k + 1] = ((x - a[k]) * dP[k] + P[k] - b[k] * dP[k - 1]) / b[k + 1]
        x = x - P[n] / dP[n]
    P = _orthonormal_values(x, a, b, n - 1)
    w = 1.0 / np.sum(P * P, axis=0)
    w = w / w.sum()
    order = np.argsort(x)
    return x[order], w[order]


@dataclass(frozen=True)
class DiskRule:
    beta: float
    radial_nodes: np.ndarray = field(repr=False)
    radial_weights: np.ndarray = field(repr=False)
    angular_count: int

    @property
    def n_rad(self) -> int:
        return len(self.radial_nodes)

    @property
    def m(self) -> int:
        return 1

    @property
    def size(self) -> int:
        return self.n_rad * self.angular_count

    def points(self) -> np.ndarray:
        """Complex nodes, radius-major, shape (n_rad * n_ang,)."""
        theta = 2 * pi * np.arange(self.angular_count) / self.angular_count
        r = np.sqrt(self.radial_nodes)
        return (r[:, None] * np.exp(1j * theta)[None, :]).ravel()

    def weights(self) -> np.ndarray:
        return np.repeat(self.radial_weights / self.angular_count, self.angular_count)

    def refined(self) -> DiskRule:
        return build_disk_rule(self.beta, 2 * self.n_rad, 2 * self.angular_count)


@dataclass(frozen=True)
class PolydiskRule:
    m: int
    axis: DiskRule

    @property
    def beta(self) -> float:
        return self.axis.beta

    @property
    def size(self) -> int:
        return self.axis.size**self.m

    def points(self) -> np.ndarray:
        """(size, m) array of tensor-product nodes, first axis slowest."""
        pts = self.axis.points()
        mesh = np.meshgrid(*([pts] * self.m), indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=1)

    def weights(self) -> np.ndarray:
        w = self.axis.weights()
        out = w
        for _ in range(self.m - 1):
            out = np.multiply.outer(out, w).ravel()
        return out

    def refined(self) -> PolydiskRule:
        return PolydiskRule(self.m, self.axis.refined())


def build_disk_rule(beta: float, n_rad: int = 64, n_ang: int = 128) -> DiskRule:
    if not beta > -1:
        raise InvalidWeight(f"beta must be > -1, got {beta}")
    if n_rad < 2 or n_ang < 4:
        raise ValueError("need n_rad >= 2 and n_ang >= 4")
    x, w = gauss_jacobi_unit(n_rad, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return DiskRule(float(beta), x, w, int(n_ang))


def build_rule(beta: float, m: int = 1, n_rad: int = 64, n_ang: int = 128):
    """A DiskRule for m = 1, otherwise the m-fold PolydiskRule with the given per-axis sizes."""
    axis = build_disk_rule(beta, n_rad, n_ang)
    return axis if m == 1 else PolydiskRule(m, axis)


def default_resolution(m: int) -> tuple[int, int]:
    """Per-axis (n_rad, n_ang); tensor rules shrink the axis rule to stay tractable."""
    return {1: (64, 128), 2: (16, 32)}.get(m, (6, 12))


MAX_RESOLUTION = (512, 1024)


def rule_points(rule) -> np.ndarray:
    """Nodes as an (N, m) complex array for either rule type."""
    pts = rule.points()
    return pts[:, None] if pts.ndim == 1 else pts


def integrate_values(rule, values) -> complex | float:
    """Weighted sum of precomputed node values (np.sum reduces pairwise)."""
    values = np.asarray(values)
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NonFiniteSample(tuple(rule_points(rule)[i]), values[i])
    w = rule.weights()
    if np.iscomplexobj(values):
        return complex(np.sum(w * values.real), np.sum(w * values.imag))
    return float(np.sum(w * values))


def integrate(rule, f) -> complex | float:
    """Integrate a vectorized f: (N, m) complex array -> (N,) values."""
    return integrate_values(rule, f(rule_points(rule)))


def mobius_consistency(p, phi, psi, rule: DiskRule, target: Target = Target.BALL):
    """Theorem form vs Moebius-invariant form of the characterization integral.

    lhs = int |psi|^2 F dA_beta with F = (1-|phi|^2)^(-p) (ball) or
    prod_k (1-|phi_k|^2)^(-p) (polydisk, p per factor).  rhs integrates
    (beta+1) * |psi|^2 * prod ((1-|z|^2)/(1-|phi_k|^2))^q * (1-|z|^2)^(beta+2-P)
    against d lambda = dA / (1-|z|^2)^2, P the total exponent, re-expressed on
    the same nodes through dA_beta = (beta+1)(1-|z|^2)^(beta+2) d lambda.
    """
    if getattr(rule, "m", 1) != 1:
        raise ValueError("the Moebius-invariant form lives on the disk (m = 1)")
    pts = rule_points(rule)
    beta = rule.beta
    psi2 = np.abs(psi.eval_many(pts)) ** 2
    mod2 = phi.modulus_squared(pts)
    s = 1.0 - np.abs(pts[:, 0]) ** 2
    if Target(target) is Target.BALL:
        factors = [(1.0 - mod2.sum(axis=1), p)]
    else:
        factors = [(1.0 - mod2[:, k], p) for k in range(mod2.shape[1])]
    total = sum(q for _, q in factors)

    lhs_vals = psi2.copy()
    for d, q in factors:
        lhs_vals = lhs_vals * d ** (-q)
    lhs = integrate_values(rule, lhs_vals)

    corollary = psi2.copy()
    for d, q in factors:
        corollary = corollary * (s / d) ** q
    corollary = (beta + 1) * corollary * s ** (beta + 2 - total)
    # d lambda / dA_beta on the nodes
    jac = 1.0 / ((beta + 1) * s ** (beta + 2))
    rhs = integrate_values(rule, corollary * jac)
    return lhs, rhs
