"""Fixture symbols and job builders shared by the test modules."""

import math

import numpy as np
from scipy import integrate as spi

from hsverify import OperatorKind, SourceSpace, SpaceKind, make_job, parse_poly
from hsverify import quadrature as quad

# (phi components, psi) in one variable.  Jobs with n < 3 take the first n
# components.  Every component has sup modulus <= 0.6 on the disk, so ball
# symbols stay below sup|phi| ~ 0.73 and tails at K = 60 are negligible.
EXACT_FIXTURES = [
    (["0.6*z", "0.3*z^2", "(0.2+0.2i)*z"], "1"),
    (["0.2 + 0.2*z", "(0.1-0.2i)*z + 0.1*z^3", "0.35*z^2"], "1 + 0.5*z"),
    (["(0+0.3i)*z^2 - 0.1*z", "0.25 + 0.1*z^2", "0.2*z - 0.15*z^3"], "(0.5-0.5i) + z^2"),
]

# Two-variable symbols for the polydisk-domain cases.
EXACT_FIXTURES_M2 = [
    (["0.3*z1 + 0.2*z2", "0.25*z1*z2"], "1 + 0.3*z1 - 0.2*z2"),
    (["0.1 + 0.2*z1^2", "(0.2-0.1i)*z2 + 0.2*z1"], "1"),
    (["0.35*z1*z2", "0.2*z1 - 0.2*z2^2"], "(0.5+0.5i) + z1*z2"),
]

# For the differentiation operators the first component keeps |phi|^2 >= 0.12
# on the whole disk, so |phi|^2 never leaves the comparability grid [0.1, 0.999].
DIFF_FIXTURES = [
    (["0.5 + 0.15*z", "0.2*z^2", "(0.1+0.1i)*z"], "1"),
    (["(0.35+0.35i) + (0.1-0.1i)*z^2", "0.25*z", "0.1 + (0+0.1i)*z^2"], "1 + 0.25*z"),
    (["0.5 + 0.1*z + 0.05*z^3", "0.2*z^2", "-0.15*z"], "(0.5-0.5i) + z^2"),
]

BALL_CONFIGS = [("bergman_ball", n, a) for n in (1, 2, 3) for a in (0.0, 1.5)] + [
    ("hardy_ball", n, None) for n in (2, 3)
]
POLYDISK_CONFIGS = [("bergman_polydisk", n, a) for n in (1, 2, 3) for a in (0.0, 1.5)] + [
    ("hardy_polydisk", n, None) for n in (2, 3)
]
M2_CONFIGS = [
    ("bergman_ball", 2, 0.0),
    ("bergman_ball", 2, 1.5),
    ("hardy_ball", 2, None),
    ("bergman_polydisk", 2, 0.0),
    ("bergman_polydisk", 2, 1.5),
    ("hardy_polydisk", 2, None),
]


def differentiation_cases():
    """(kind, n, alpha, operator) for every differentiation theorem in scope."""
    cases = [("bergman_ball", 1, a, OperatorKind.one_var_derivative()) for a in (0.0, 1.5)]
    cases += [
        ("bergman_ball", n, a, OperatorKind.radial(t))
        for n in (1, 2, 3)
        for a in (0.0, 1.5)
        for t in (0.5, 1.0, 2.0)
    ]
    cases += [("hardy_ball", n, None, OperatorKind.radial(t)) for n in (2, 3) for t in (0.5, 1.0, 2.0)]
    return cases


def source(kind, n, alpha=None):
    return SourceSpace(SpaceKind(kind), n, alpha)


def fixture_job(kind, n, alpha, op, fixture, m=1, truncation=60, **kw):
    phi_src, psi_src = fixture
    phi = [parse_poly(s, m) for s in phi_src[:n]]
    return make_job(source(kind, n, alpha), op, phi, parse_poly(psi_src, m), truncation, **kw)


def case_id(kind, n, alpha, op=None):
    a = "" if alpha is None else f"-a{alpha:g}"
    t = "" if op is None or op.t is None else f"-t{op.t:g}"
    name = "" if op is None else "-" + op.kind.value.split("_")[0]
    return f"{kind}-n{n}{a}{name}{t}"


def rel(a, b):
    return abs(a - b) / max(abs(b), np.finfo(float).tiny)


def ball_monomial_norm_sq(src, J):
    """||z^J||^2 by direct integration, independent of the closed forms.

    On the ball, |z^J|^2 integrates over the angles to a function of
    r_i^2 = s_i; the remaining integral lives on the simplex
    {s_i >= 0, sum s_i <= 1} (Bergman) or its face sum s_i = 1 (Hardy).
    """
    n = src.n
    if src.kind is SpaceKind.BERGMAN_BALL:
        a = src.alpha
        # dv_alpha = c_alpha (1-|z|^2)^alpha dv, normalized to mass 1
        if n == 1:
            kw = dict(weight="alg", wvar=(0, a), epsabs=0, epsrel=1e-13)
            val, _ = spi.quad(lambda s: s ** J[0], 0, 1, **kw)
            mass, _ = spi.quad(lambda s: 1.0, 0, 1, **kw)
        else:
            f = lambda s2, s1: s1 ** J[0] * s2 ** J[1] * (1 - s1 - s2) ** a
            g = lambda s2, s1: (1 - s1 - s2) ** a
            val, _ = spi.dblquad(f, 0, 1, 0, lambda s1: 1 - s1, epsabs=0, epsrel=1e-13)
            mass, _ = spi.dblquad(g, 0, 1, 0, lambda s1: 1 - s1, epsabs=0, epsrel=1e-13)
        return val / mass
    # Hardy ball, n = 2: surface measure pushes forward to ds on [0,1]
    f = lambda s: s ** J[0] * (1 - s) ** J[1]
    val, _ = spi.quad(f, 0, 1, epsabs=0, epsrel=1e-13)
    return val


def polydisk_monomial_norm_sq(src, J):
    """||z^J||^2 as a product of one-disk integrals by quadrature."""
    if src.kind is SpaceKind.HARDY_POLYDISK:
        # boundary torus: |z_i| = 1
        return 1.0
    rule = quad.build_disk_rule(src.alpha, 16, 16)
    z = rule.points()
    return math.prod(float(np.sum(rule.weights() * np.abs(z) ** (2 * j))) for j in J)


def torus_monomial_norm_sq(J, n_ang=32):
    """Average of |z^J|^2 over a torus grid; exercises the angular orthogonality too."""
    theta = 2 * np.pi * np.arange(n_ang) / n_ang
    grids = np.meshgrid(*([np.exp(1j * theta)] * len(J)), indexing="ij")
    vals = np.ones_like(grids[0])
    for g, j in zip(grids, J):
        vals = vals * g**j
    return float(np.mean(np.abs(vals) ** 2))


def monomial_norm_oracle(src, J):
    """||z^J||^2 in the source space, computed without the basis constants."""
    if src.is_ball:
        return ball_monomial_norm_sq(src, J)
    if src.kind is SpaceKind.HARDY_POLYDISK:
        return torus_monomial_norm_sq(J)
    return polydisk_monomial_norm_sq(src, J)
