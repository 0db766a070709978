"""Hilbert-Schmidt verification engine.

For an operator T = C_{psi,phi} or E^t_{psi,phi} from a source space into
A^2_beta(D^m), the squared Hilbert-Schmidt norm is sum_J ||T e_J||^2 over the
orthonormal monomial basis.  This module computes the truncated sums S_K, the
closed-form characterization integral, a rigorous tail bound for S_oo - S_K,
and compares them:

* composition operators: S_oo equals the characterization integral exactly;
* differentiation operators: S_oo and the integral are only comparable, so
  the check is c_lo * I <= S_oo <= c_hi * I with numerically computed
  constants.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache

import numpy as np

from . import quadrature as quad
from .multiindex import enumerate_degree
from .series import (
    PolynomialMap,
    Target,
    VectorSymbol,
    component_sup_bounds,
    sup_modulus_bound,
    sup_modulus_estimate,
)
from .spaces import (
    OperatorKind,
    OpKind,
    SourceSpace,
    check_pairing,
    closed_form_exponent,
    coefficient_ratio,
    is_exact_theorem,
    log_basis_constant_sq,
    log_collapsed_coefficients,
    polydisk_factor_log_coefficients,
    target_beta,
)
from .errors import ValidationError


class Verdict(enum.Enum):
    EXACT_MATCH = "ExactMatch"
    COMPARABLE_BOUNDED = "ComparableBounded"
    DIVERGED = "Diverged"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-8
    divergence_cap: float = 1e12
    # phi counts as touching the boundary once sup|phi| >= 1 - delta
    delta: float = 1e-3
    refine_rel: float = 1e-9
    auto_refine: bool = True
    x_min: float = 0.1
    x_max: float = 0.999
    grid_points: int = 200
    comparability_slack: float = 1e-6


class Accumulator:
    """Running Neumaier-compensated sum."""

    def __init__(self, value=0.0):
        self.s = float(value)
        self.c = 0.0

    def add(self, y):
        y = float(y)
        t = self.s + y
        if abs(self.s) >= abs(y):
            self.c += (self.s - t) + y
        else:
            self.c += (y - t) + self.s
        self.s = t

    @property
    def value(self):
        return self.s + self.c


def running_sums(increments) -> np.ndarray:
    acc = Accumulator()
    out = np.empty(len(increments))
    for i, d in enumerate(increments):
        acc.add(d)
        out[i] = acc.value
    return out


def target_geometry(src: SourceSpace) -> Target:
    return Target.BALL if src.is_ball else Target.POLYDISK


@dataclass(frozen=True, eq=False)
class HSJob:
    source: SourceSpace
    operator: OperatorKind
    phi: VectorSymbol
    psi: PolynomialMap
    truncation: int
    rule: object = field(repr=False)
    tolerances: Tolerances = Tolerances()

    def __post_init__(self):
        check_pairing(self.source, self.operator)
        if self.phi.n != self.source.n:
            raise ValidationError(
                f"phi has {self.phi.n} components, source dimension is {self.source.n}"
            )
        m = self.phi.num_vars
        if self.psi.num_vars != m:
            raise ValidationError(f"psi has {self.psi.num_vars} variables, phi has {m}")
        if getattr(self.rule, "m", 1) != m:
            raise ValidationError(f"quadrature rule is {self.rule.m}-dimensional, phi has {m} variables")
        if self.operator.is_differentiation and m != 1:
            raise ValidationError("differentiation operators are only available for m = 1")
        beta = target_beta(self.source)
        if abs(self.rule.beta - beta) > 1e-12:
            raise ValidationError(f"rule built for beta={self.rule.beta}, theorem needs beta={beta}")
        if self.truncation < 1:
            raise ValidationError("truncation K must be >= 1")

    @property
    def m(self) -> int:
        return self.phi.num_vars

    @property
    def beta(self) -> float:
        return self.rule.beta

    @property
    def geometry(self) -> Target:
        return target_geometry(self.source)

    @cached_property
    def nodes(self):
        """Node data evaluated once per job: points, weights, |psi|^2, |phi_k|^2."""
        pts = quad.rule_points(self.rule)
        psi2 = np.abs(self.psi.eval_many(pts)) ** 2
        mod2 = self.phi.modulus_squared(pts)
        return _Nodes(pts, self.rule.weights(), psi2, mod2)

    def with_rule(self, rule) -> HSJob:
        return replace(self, rule=rule)


@dataclass(frozen=True)
class _Nodes:
    points: np.ndarray
    weights: np.ndarray
    psi2: np.ndarray
    mod2: np.ndarray


def make_job(
    source: SourceSpace,
    operator: OperatorKind,
    phi,
    psi: PolynomialMap,
    truncation: int = 60,
    n_rad: int | None = None,
    n_ang: int | None = None,
    tolerances: Tolerances | None = None,
) -> HSJob:
    """Build a job, constructing the quadrature rule for beta = target_beta(source)."""
    if not isinstance(phi, VectorSymbol):
        phi = VectorSymbol(phi)
    m = phi.num_vars
    d_rad, d_ang = quad.default_resolution(m)
    rule = quad.build_rule(target_beta(source), m, n_rad or d_rad, n_ang or d_ang)
    return HSJob(source, operator, phi, psi, int(truncation), rule, tolerances or Tolerances())


# -- per-degree integrals ---------------------------------------------------


def _ball_degree_integrals(job: HSJob, k_max: int) -> np.ndarray:
    """I_k = int |psi|^2 |phi|^(2k) dA_beta, k = 0..k_max."""
    nd = job.nodes
    x = nd.mod2.sum(axis=1)
    pw = nd.psi2 * nd.weights
    out = np.empty(k_max + 1)
    for k in range(k_max + 1):
        out[k] = np.sum(pw)
        pw = pw * x
    return out


def _polydisk_degree_integrals(job: HSJob, k_max: int) -> np.ndarray:
    """D_d = sum_{|J|=d} a_J int |psi|^2 prod |phi_i|^(2 j_i) dV_beta, d = 0..k_max.

    The sum over |J| = d is a degree-graded product of the one-variable
    series sum_j a_j |phi_i|^(2j), convolved factor by factor at each node.
    """
    nd = job.nodes
    n = job.source.n
    a = np.exp(polydisk_factor_log_coefficients(job.source, np.arange(k_max + 1)))

    def factor_powers(i):
        x = nd.mod2[:, i]
        P = np.empty((k_max + 1, len(x)))
        P[0] = a[0]
        for j in range(1, k_max + 1):
            P[j] = P[j - 1] * x * (a[j] / a[j - 1])
        return P

    G = factor_powers(0) * (nd.psi2 * nd.weights)
    if n == 1:
        return np.sum(G, axis=1)
    for i in range(1, n - 1):
        P = factor_powers(i)
        new = G * P[0]
        for j in range(1, k_max + 1):
            new[j:] += G[: k_max + 1 - j] * P[j]
        G = new
    # last factor: node sums first, then the degree convolution on (K+1)^2 numbers
    C = G @ factor_powers(n - 1).T
    flipped = C[:, ::-1]
    return np.array([np.trace(flipped, offset=k_max - d) for d in range(k_max + 1)])


def degree_increments(job: HSJob, K: int | None = None) -> np.ndarray:
    """Increments S_k - S_{k-1} of the basis sum, k = 0..K."""
    K = job.truncation if K is None else K
    src, op = job.source, job.operator
    if not src.is_ball:
        return _polydisk_degree_integrals(job, K)
    ks = np.arange(K + 1)
    if op.kind is OpKind.ONE_VAR_DERIVATIVE:
        # basis vector e_k contributes c_{k-1} I_{k-1}; e_0 contributes nothing
        integrals = _ball_degree_integrals(job, max(K - 1, 0))
        c = np.exp(log_collapsed_coefficients(src, op, ks[:-1]))
        return np.concatenate([[0.0], c * integrals[:K]])
    integrals = _ball_degree_integrals(job, K)
    c = np.exp(log_collapsed_coefficients(src, op, ks))
    return c * integrals


def hs_sum_truncated(job: HSJob, K: int | None = None) -> np.ndarray:
    """Partial sums S_0..S_K of sum_J ||T e_J||^2, grouped by basis degree."""
    return running_sums(degree_increments(job, K))


def hs_sum_bruteforce(job: HSJob, K: int | None = None) -> np.ndarray:
    """Partial sums without the multinomial collapse: one quadrature per multi-index."""
    K = job.truncation if K is None else K
    src, op = job.source, job.operator
    nd = job.nodes
    base = nd.psi2 * nd.weights
    n = src.n
    powers = [[np.ones_like(base)] for _ in range(n)]
    for i in range(n):
        for _ in range(K):
            powers[i].append(powers[i][-1] * nd.mod2[:, i])
    incr = []
    for k in range(K + 1):
        acc = Accumulator()
        for J in enumerate_degree(n, k):
            if op.kind is OpKind.ONE_VAR_DERIVATIVE:
                if k == 0:
                    continue
                # (z^k)' = k z^(k-1)
                weight = k * k * math.exp(log_basis_constant_sq(src, J))
                integrand = base * powers[0][k - 1]
            else:
                weight = math.exp(log_basis_constant_sq(src, J))
                if op.kind is OpKind.RADIAL_COMP_DIFF:
                    if k == 0:
                        continue
                    weight *= float(k) ** (2 * op.t)
                integrand = base
                for i, j in enumerate(J):
                    if j:
                        integrand = integrand * powers[i][j]
            acc.add(weight * np.sum(integrand))
        incr.append(acc.value)
    return running_sums(incr)


# -- characterization integral ---------------------------------------------


def characterization_values(job: HSJob) -> np.ndarray:
    """Closed-form integrand |psi|^2 (1-|phi|^2)^(-p) (or the polydisk product) at the nodes."""
    nd = job.nodes
    p = closed_form_exponent(job.source, job.operator)
    if job.source.is_ball:
        return nd.psi2 * (1.0 - nd.mod2.sum(axis=1)) ** (-p)
    out = nd.psi2.copy()
    for i in range(job.source.n):
        out = out * (1.0 - nd.mod2[:, i]) ** (-p)
    return out


def sup_phi(job: HSJob) -> float:
    return sup_modulus_estimate(job.phi, job.geometry)


def hs_characterization(job: HSJob) -> float:
    """The characterization integral on the job's rule; inf when phi reaches the boundary."""
    if sup_phi(job) >= 1.0 - job.tolerances.delta:
        return math.inf
    return quad.integrate_values(job.rule, characterization_values(job))


def settle_rule(job: HSJob) -> tuple[HSJob, float | None]:
    """Double the rule until the characterization integral stabilizes.

    Returns the settled job and the last relative change (None when no
    refinement was attempted).
    """
    if not job.tolerances.auto_refine or sup_phi(job) >= 1.0 - job.tolerances.delta:
        return job, None
    current = job
    value = hs_characterization(current)
    change = None
    max_rad, max_ang = quad.MAX_RESOLUTION
    while True:
        axis = current.rule if current.m == 1 else current.rule.axis
        if 2 * axis.n_rad > max_rad or 2 * axis.angular_count > max_ang:
            break
        if current.rule.size * 4**current.m > 4_000_000:
            break
        finer = current.with_rule(current.rule.refined())
        new = hs_characterization(finer)
        change = abs(new - value) / abs(new) if new else abs(new - value)
        if change <= job.tolerances.refine_rel:
            # the coarser rule already meets the tolerance
            break
        current, value = finer, new
    return current, change


# -- tail bounds -------------------------------------------------------------


def psi_mass(job: HSJob) -> float:
    nd = job.nodes
    return float(np.sum(nd.psi2 * nd.weights))


def _sup_ratio(src, op, k0, span=100_000):
    ks = np.arange(k0, k0 + span, dtype=float)
    return float(max(np.max(coefficient_ratio(src, op, ks)), 1.0))


def tail_bound(job: HSJob, K: int | None = None):
    """Upper bound for S_oo - S_K, or None ("unavailable") when the ratio bound fails.

    Uses a certified upper bound M for sup|phi| (grid maximum plus a Lipschitz
    slack), so S_oo - S_K <= sum_{k>K} c_k M^(2k) int|psi|^2 dA_beta.
    """
    K = job.truncation if K is None else K
    src, op = job.source, job.operator
    mass = psi_mass(job)
    if not src.is_ball:
        return _polydisk_tail_bound(job, K, mass)
    M = sup_modulus_bound(job.phi, Target.BALL)
    if M >= 1.0:
        return None
    if M == 0.0 or mass == 0.0:
        return 0.0
    # index of the first collapsed coefficient outside S_K
    k0 = K if op.kind is OpKind.ONE_VAR_DERIVATIVE else K + 1
    r = _sup_ratio(src, op, k0) * M * M
    if r >= 1.0:
        return None
    log_first = log_collapsed_coefficients(src, op, [k0])[0] + 2 * k0 * math.log(M)
    return float(math.exp(log_first) * mass / (1.0 - r))


def _polydisk_tail_bound(job: HSJob, K: int, mass: float):
    src = job.source
    Ms = component_sup_bounds(job.phi)
    if np.any(Ms >= 1.0):
        return None
    q = closed_form_exponent(src, job.operator)
    a = np.exp(polydisk_factor_log_coefficients(src, np.arange(K + 1)))
    seq = np.zeros(K + 1)
    seq[0] = 1.0
    total = 1.0
    for M in Ms:
        h = a * (M * M) ** np.arange(K + 1)
        seq = np.convolve(seq, h)[: K + 1]
        total *= (1.0 - M * M) ** (-q)
    partial = math.fsum(seq)
    # guard against rounding in total - partial
    bound = max(total - partial, 0.0) + 8 * np.finfo(float).eps * total
    return float(bound * mass)


# -- comparability -----------------------------------------------------------


def series_value(src: SourceSpace, op: OperatorKind, x: float, rtol: float = 1e-14) -> float:
    """g(x) = sum_k c_k x^k, summed until the ratio-test tail is below rtol relative."""
    if not 0.0 <= x < 1.0:
        raise ValueError("x must lie in [0, 1)")
    if x == 0.0:
        return float(np.exp(log_collapsed_coefficients(src, op, [0])[0]))
    logx = math.log(x)
    N = 64
    while True:
        ks = np.arange(N + 1, dtype=float)
        logt = log_collapsed_coefficients(src, op, ks) + ks * logx
        shift = np.max(logt)
        total = float(np.sum(np.exp(logt[:-1] - shift)))
        r = _sup_ratio(src, op, N, span=1000) * x
        if r < 1.0:
            tail = math.exp(logt[-1] - shift) / (1.0 - r)
            if tail <= rtol * total:
                return (total + tail / 2) * math.exp(shift)
        N *= 2
        if N > 1 << 26:
            raise RuntimeError(f"series at x={x} did not converge")


def comparability_grid(x_min: float, x_max: float, points: int) -> np.ndarray:
    """Linear grid on [x_min, x_max] merged with a grid geometric in 1 - x."""
    lin = np.linspace(x_min, x_max, points)
    geo = 1.0 - np.geomspace(1.0 - x_min, 1.0 - x_max, points)
    return np.unique(np.concatenate([lin, geo]))


@lru_cache(maxsize=256)
def comparability_constants(src, op, x_min=0.1, x_max=0.999, points=200):
    """(min, max) over the grid of g(x) (1-x)^p, with g the collapsed series.

    These bound S_oo / I only where |phi|^2 stays inside [x_min, x_max];
    below x_min the ratio tends to c_0, which is 0 for radial operators.
    """
    p = closed_form_exponent(src, op)
    vals = [
        series_value(src, op, float(x)) * (1.0 - x) ** p
        for x in comparability_grid(x_min, x_max, points)
    ]
    return float(min(vals)), float(max(vals))


# -- series-level identities ------------------------------------------------


def collapsed_profile(src, op, x_total, K: int) -> np.ndarray:
    """sum_{k<=K} c_k x^k at each x (the one-variable side of the collapse)."""
    x_total = np.asarray(x_total, dtype=float)
    ks = np.arange(K + 1)
    c = np.exp(log_collapsed_coefficients(src, op, ks))
    if op.kind is OpKind.ONE_VAR_DERIVATIVE:
        c = c[:K]
        ks = ks[:K]
    terms = c[:, None] * x_total[None, :] ** ks[:, None]
    return np.sum(terms, axis=0)


def basis_profile(src, op, x_components, K: int) -> np.ndarray:
    """sum over basis vectors e_J with |J|<=K of their integrand weight at x = (|phi_i|^2)_i."""
    X = np.atleast_2d(np.asarray(x_components, dtype=float))
    out = np.zeros(X.shape[0])
    for k in range(K + 1):
        for J in enumerate_degree(src.n, k):
            if op.kind is OpKind.ONE_VAR_DERIVATIVE:
                if k == 0:
                    continue
                w = k * k * math.exp(log_basis_constant_sq(src, J))
                out += w * X[:, 0] ** (k - 1)
                continue
            w = math.exp(log_basis_constant_sq(src, J))
            if op.kind is OpKind.RADIAL_COMP_DIFF:
                if k == 0:
                    continue
                w *= float(k) ** (2 * op.t)
            out += w * np.prod(X ** np.asarray(J)[None, :], axis=1)
    return out


# -- verification --------------------------------------------------------------


@dataclass
class HSReport:
    partial_sums: list
    characterization_value: float
    tail_bound: float | None
    comparability: object
    verdict: Verdict
    sup_phi: float
    sup_phi_bound: float
    exponent: float
    beta: float
    n_rad: int
    n_ang: int
    m: int
    refinement_change: float | None = None
    comparability_range: tuple | None = None
    x_range: tuple | None = None
    notes: list = field(default_factory=list)

    @property
    def S_K(self) -> float:
        return self.partial_sums[-1]


def increments_shrinking(S) -> bool:
    """Whether the increments of S decay faster than 1/k over the second half."""
    S = np.asarray(S)
    K = len(S) - 1
    if K < 4:
        return True
    d = np.diff(S)
    late, mid = d[-1], d[len(d) // 2 - 1]
    if mid <= 0:
        return True
    if late <= 0:
        return True
    k_late, k_mid = len(d), len(d) // 2
    rate = math.log(mid / late) / math.log(k_late / k_mid)
    return rate > 1.0


def verify(job: HSJob) -> HSReport:
    tol = job.tolerances
    job, change = settle_rule(job)
    src, op = job.source, job.operator
    est = sup_phi(job)
    bound = sup_modulus_bound(job.phi, job.geometry)
    S = hs_sum_truncated(job)
    p = closed_form_exponent(src, op)
    axis = job.rule if job.m == 1 else job.rule.axis
    report = HSReport(
        partial_sums=[float(s) for s in S],
        characterization_value=math.inf,
        tail_bound=None,
        comparability="exact" if is_exact_theorem(src, op) else None,
        verdict=Verdict.INCONCLUSIVE,
        sup_phi=est,
        sup_phi_bound=bound,
        exponent=p,
        beta=job.beta,
        n_rad=axis.n_rad,
        n_ang=axis.angular_count,
        m=job.m,
        refinement_change=change,
    )
    if src.is_ball:
        x = job.nodes.mod2.sum(axis=1)
        report.x_range = (float(x.min()), float(x.max()))
    if not is_exact_theorem(src, op):
        report.comparability_range = (tol.x_min, tol.x_max)
        report.comparability = comparability_constants(src, op, tol.x_min, tol.x_max, tol.grid_points)
        report.notes.append(
            f"comparability constants taken over x = |phi|^2 in [{tol.x_min:g}, {tol.x_max:g}]; "
            "near x = 0 the ratio g(x)(1-x)^p tends to c_0 (0 for radial operators)"
        )
        if report.x_range[0] < tol.x_min:
            report.notes.append(
                f"|phi|^2 drops to {report.x_range[0]:.3g} < {tol.x_min:g} on the nodes; "
                "the constants need not bound S/I for this symbol"
            )

    if est >= 1.0 - tol.delta:
        report.notes.append(f"sup|phi| = {est:.17g} is within {tol.delta:g} of the boundary")
        if est >= 1.0 - 1e-12 and (S[-1] > tol.divergence_cap or not increments_shrinking(S)):
            report.verdict = Verdict.DIVERGED
        return report

    I = hs_characterization(job)
    B = tail_bound(job)
    report.characterization_value = I
    report.tail_bound = B
    if B is None:
        report.notes.append("tail bound unavailable")
        return report
    S_K = float(S[-1])
    if is_exact_theorem(src, op):
        if abs(S_K + B / 2 - I) <= max(tol.rel * I, B):
            report.verdict = Verdict.EXACT_MATCH
    else:
        lo, hi = report.comparability
        slack = tol.comparability_slack
        if lo > 0 and math.isfinite(hi) and lo * I * (1 - slack) <= S_K and S_K + B <= hi * I * (1 + slack):
            report.verdict = Verdict.COMPARABLE_BOUNDED
    return report
