"""Closed-form and random chain generators used as fixtures.

The trigonometric family is the axially symmetric charge-2 solution: pick a
half-integer mass p with 2p a positive integer, set phi = pi/(2p+2) and
s_m = sin(m phi); the chain lives on sites 1..2p, satisfies the discrete
Nahm equations through the identity

    sin(r phi) sin((r+2) phi) + sin(phi)^2 = sin((r+1) phi)^2,

is real with respect to the diagonal metric g_r = diag(s_{r+1}, s_r), has
the reducible spectral curve eta^2 - 2 cos(phi) eta zeta + zeta^2, and
meets the rank-1 boundary condition at both ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import evolution
from .errors import InconsistentScalars, InvalidMass, SeedExhausted
from .linalg import CMatrix, cmatrix, dagger, matrix_rank
from .model import DNChain, DNLink, DNSite, MetricSequence
from .continuum import NahmTriple

_PAULI = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
)


@dataclass(frozen=True)
class TrigParams:
    p: float
    phi: float
    site_range: range


def trig_params(p: float) -> TrigParams:
    two_p = 2.0 * p
    n = round(two_p)
    if p <= 0 or abs(two_p - n) > 1e-12 or n < 1:
        raise InvalidMass(f"2p must be a positive integer, got p = {p}")
    return TrigParams(p=p, phi=math.pi / (2.0 * p + 2.0), site_range=range(1, n + 1))


@dataclass(frozen=True)
class BoundaryRanks:
    left: int
    right: int


def trig_solution(p: float) -> tuple[DNChain, MetricSequence]:
    """The trigonometric charge-2 chain on sites 1..2p and its reality metric."""
    params = trig_params(p)
    phi = params.phi
    s = math.sin(phi)

    def sk(m: int) -> float:
        return math.sin(m * phi)

    sites = []
    metric = []
    for r in params.site_range:
        a = cmatrix([[0.0, -s / sk(r + 1)], [0.0, 0.0]])
        b = cmatrix([[-sk(r + 1) / sk(r), 0.0], [0.0, -sk(r) / sk(r + 1)]])
        d = cmatrix([[0.0, 0.0], [s / sk(r), 0.0]])
        sites.append(DNSite(r=r, A=a, B=b, D=d))
        metric.append(cmatrix([[sk(r + 1), 0.0], [0.0, sk(r)]]))
    links = []
    for r in params.site_range[:-1]:
        pplus = cmatrix([[1.0, 0.0], [0.0, sk(r) / sk(r + 1)]])
        pminus = cmatrix([[-sk(r + 2) / sk(r + 1), 0.0], [0.0, -1.0]])
        links.append(DNLink(r=r, Pplus=pplus, Pminus=pminus))
    return DNChain(k=2, sites=tuple(sites), links=tuple(links)), tuple(metric)


def boundary_rank_check(chain: DNChain, tol: float = 1e-9) -> BoundaryRanks:
    """Numerical ranks of B - DA at the left end and B - AD at the right end.

    Both equal 1 exactly for the chains that come from monopole boundary
    data; the trigonometric family realizes that whenever 2p is an integer.
    """
    first, last = chain.sites[0], chain.sites[-1]
    return BoundaryRanks(
        left=matrix_rank(first.B - first.D @ first.A, tol),
        right=matrix_rank(last.B - last.A @ last.D, tol),
    )


def scalar_solution(
    a: complex, b: complex, d: complex, p_minus: complex, p_plus: complex, length: int
) -> DNChain:
    """Constant charge-1 chain; requires b = p- p+ + a d to hold exactly."""
    if length < 1:
        raise ValueError("length must be >= 1")
    deviation = abs(b - (p_minus * p_plus + a * d))
    scale = 1.0 + max(abs(a), abs(b), abs(d), abs(p_minus), abs(p_plus))
    if deviation > 1e-12 * scale:
        raise InconsistentScalars(f"b - (p- p+ + a d) = {deviation:.3e}")
    sites = tuple(
        DNSite(r=r, A=cmatrix([[a]]), B=cmatrix([[b]]), D=cmatrix([[d]]))
        for r in range(length)
    )
    links = tuple(
        DNLink(r=r, Pplus=cmatrix([[p_plus]]), Pminus=cmatrix([[p_minus]]))
        for r in range(length - 1)
    )
    return DNChain(k=1, sites=sites, links=links)


def random_reality_seed(
    k: int, seed: int, spread: float
) -> tuple[CMatrix, CMatrix]:
    """Deterministic random evolution seed (gamma0, beta0) in the reality class.

    beta has entries uniform in the complex disc of radius spread; gamma is
    the identity plus a small Hermitian positive perturbation scaled by
    spread, so spread = 0 gives exactly (I, 0). If the first forward step
    matrix fails positivity the spread is shrunk and the draw retried.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(seed)
    current = float(spread)
    for _ in range(100):
        radius = current * np.sqrt(rng.uniform(size=(k, k)))
        angle = rng.uniform(0.0, 2.0 * np.pi, size=(k, k))
        beta = radius * np.exp(1j * angle)
        x = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2.0 * k)
        gamma = np.eye(k) + current * (x @ dagger(x))
        # the first forward step conjugates beta across the seed link
        beta1 = np.linalg.inv(gamma) @ beta @ gamma
        h = dagger(gamma) @ gamma + dagger(beta1) @ beta1 - beta1 @ dagger(beta1)
        lam_min = float(np.linalg.eigvalsh((h + dagger(h)) / 2.0)[0])
        if lam_min > evolution.BREAKDOWN_TOL * max(1.0, float(np.abs(h).max())):
            return cmatrix(gamma), cmatrix(beta)
        current *= 0.7
    raise SeedExhausted(f"no positive seed after 100 retries (k={k}, seed={seed})")


def euler_top_triple(f: tuple[float, float, float] = (0.3, 0.4, 0.5)) -> NahmTriple:
    """su(2) triple T_i = (f_i/2)(-i sigma_i); the flow reduces to the Euler top."""
    return NahmTriple(
        t1=cmatrix(-0.5j * f[0] * _PAULI[0]),
        t2=cmatrix(-0.5j * f[1] * _PAULI[1]),
        t3=cmatrix(-0.5j * f[2] * _PAULI[2]),
    )


def random_skew_triple(k: int, seed: int, scale: float = 0.08) -> NahmTriple:
    """Deterministic random skew-hermitian triple for continuum experiments.

    The default amplitude keeps the embedded-chain residuals firmly in the
    first-order regime at spacings down to h = 0.01.
    """
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(3):
        x = scale * (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
        mats.append(cmatrix((x - dagger(x)) / 2.0))
    return NahmTriple(*mats)
