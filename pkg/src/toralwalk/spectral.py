"""Closed-form spectrum of the phase-space walk.

For the PSW on N sites with coin angle theta the eigenproblem is exactly
solvable.  Odd N: the 2N eigenvalues are exp(1j*pi*k/N), k = 0..2N-1,
independent of theta.  Even N: eigenvalues come in split pairs
exp(+-1j*alpha) * omega**l with alpha = arccos(cos(theta)**N)/N.  Eigenvector
components a_n(k) (coin 0) and b_n(k) (coin 1) follow from a two-term
recursion whose solution is a ratio of q-Pochhammer symbols; here they are
computed as a running product of unimodular factors, each renormalized to
unit modulus so the product cannot drift over large N.

The global phase is fixed by a_0(k) = 1, which requires theta > 0; a
dedicated constructor covers the theta = 0 product modes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import PSW, WalkSpec, WalkerCoinState, step

THETA_FLOOR = 1e-9
_HALF_PI_FLOOR = math.pi / 2.0 - 1e-12


class DegenerateCoin(ValueError):
    """Raised where the generic closed form assumes theta away from 0 (or pi/2)."""


def _require_psw(spec: WalkSpec):
    if spec.kind != PSW:
        raise ValueError("closed-form spectrum applies to the phase-space walk only")


def q_pochhammer(x: complex, q: complex, n: int) -> complex:
    """q-Pochhammer symbol (x; q)_n = prod_{j=0}^{n-1} (1 - x*q**j); (x; q)_0 = 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    result = 1.0 + 0.0j
    power = 1.0 + 0.0j
    for _ in range(int(n)):
        result *= 1.0 - x * power
        power *= q
    return result


def split_alpha(spec: WalkSpec) -> float:
    """Splitting angle alpha = arccos(cos(theta)**N) / N of the even-N pairs."""
    _require_psw(spec)
    return math.acos(math.cos(spec.theta) ** spec.n_sites) / spec.n_sites


@dataclass(frozen=True)
class SplitPairSpectrum:
    """Even-N eigenvalues exp(+-1j*alpha)*omega**l, l = 0..N-1."""

    alpha: float
    pairs: tuple  # N entries (lambda_plus, lambda_minus)


def split_pair_spectrum(spec: WalkSpec) -> SplitPairSpectrum:
    _require_psw(spec)
    if spec.is_odd:
        raise ValueError("split pairs exist for even N only")
    alpha = split_alpha(spec)
    n = spec.n_sites
    pairs = tuple(
        (cmath.exp(1j * (alpha + 2 * math.pi * l / n)),
         cmath.exp(1j * (-alpha + 2 * math.pi * l / n)))
        for l in range(n)
    )
    return SplitPairSpectrum(alpha, pairs)


def mode_eigenvalue(spec: WalkSpec, k: int) -> complex:
    """Eigenvalue of mode k in the fixed enumeration.

    Odd N: exp(1j*pi*k/N).  Even N: k = 2l maps to exp(+1j*alpha)*omega**l
    and k = 2l+1 to exp(-1j*alpha)*omega**l.
    """
    _require_psw(spec)
    n = spec.n_sites
    k = k % (2 * n)
    if spec.is_odd:
        return cmath.exp(1j * math.pi * k / n)
    alpha = split_alpha(spec)
    l, minus = divmod(k, 2)
    sign = -1.0 if minus else 1.0
    return cmath.exp(1j * (sign * alpha + 2 * math.pi * l / n))


def eigenvalues(spec: WalkSpec) -> np.ndarray:
    """All 2N eigenvalues in the mode enumeration of :func:`mode_eigenvalue`."""
    return np.array([mode_eigenvalue(spec, k) for k in range(2 * spec.n_sites)])


def conjugate_mode_index(spec: WalkSpec, k: int) -> int:
    """Mode index carrying the complex-conjugate eigenvalue."""
    n = spec.n_sites
    k = k % (2 * n)
    if spec.is_odd:
        return (2 * n - k) % (2 * n)
    l, minus = divmod(k, 2)
    return 2 * ((n - l) % n) + (0 if minus else 1)


@dataclass
class EigenMode:
    """One closed-form eigenpair.

    ``a`` and ``b`` are the unnormalized coin-0 / coin-1 component sequences
    (a_0 = 1 for the generic theta > 0 construction); ``norm_const`` is
    C_N(k) = sum(|a_n|^2 + |b_n|^2).
    """

    k: int
    lam: complex
    a: np.ndarray
    b: np.ndarray
    norm_const: float

    @property
    def n_sites(self) -> int:
        return len(self.a)

    def vector(self) -> np.ndarray:
        """Normalized (2, N) amplitude array of the eigenvector."""
        return np.stack([self.a, self.b]) / math.sqrt(self.norm_const)

    def state(self) -> WalkerCoinState:
        return WalkerCoinState(self.vector())


def _component_arrays(spec: WalkSpec, lam: complex) -> tuple[np.ndarray, np.ndarray]:
    """a_n, b_n for eigenvalue lam with a_0 = 1, in the sec-free form.

    a_n = a_{n-1} * (1/lam + cos(theta)*w) / (cos(theta) + lam*w) with
    w = omega**-(n-1); every factor is unimodular for |lam| = 1 and is
    renormalized to unit modulus before entering the cumulative product.
    b_n = a_n * sin(theta) / (cos(theta) + lam*omega**-n).
    """
    n = spec.n_sites
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    lam = complex(lam)
    inv_pows = np.conj(spec.boost_phases)  # omega**-j
    denom = c + lam * inv_pows
    if np.any(denom == 0):
        raise DegenerateCoin("component denominator vanished; theta too close to 0")
    a = np.empty(n, dtype=complex)
    a[0] = 1.0
    if n > 1:
        factors = (1.0 / lam + c * inv_pows[:-1]) / denom[:-1]
        factors = factors / np.abs(factors)
        a[1:] = np.cumprod(factors)
    b = a * (s / denom)
    return a, b


def normalization(spec: WalkSpec, k: int) -> float:
    """Closed-form C_N(k): odd N -> 2N/(1 + (-1)**k cos(theta)**N); even N -> 2N."""
    _require_psw(spec)
    n = spec.n_sites
    if not spec.is_odd:
        return 2.0 * n
    sign = -1.0 if k % 2 else 1.0
    denom = 1.0 + sign * math.cos(spec.theta) ** n
    if denom <= 0.0 or denom < 1e-300:
        raise DegenerateCoin("normalization diverges for odd k as theta -> 0")
    return 2.0 * n / denom


def eigenmode(spec: WalkSpec, k: int) -> EigenMode:
    """Closed-form eigenmode for theta > 0; theta below 1e-9 rad must be
    routed to :func:`eigenmode_theta_zero` (raises ``DegenerateCoin``)."""
    _require_psw(spec)
    if spec.theta < THETA_FLOOR:
        raise DegenerateCoin(
            "generic eigenvector formula assumes theta != 0; use eigenmode_theta_zero"
        )
    k = k % (2 * spec.n_sites)
    lam = mode_eigenvalue(spec, k)
    a, b = _component_arrays(spec, lam)
    return EigenMode(k, lam, a, b, normalization(spec, k))


def eigenmode_theta_zero(spec: WalkSpec, k: int) -> EigenMode:
    """Product-state eigenmodes of the block-diagonal theta = 0 walk.

    Odd N: even k gives the momentum-delocalized coin-0 mode with
    a_n = exp(-1j*pi*k*n/N) and b = 0; odd k gives the coin-1 mode localized
    at site (k - N)/2 mod N.  Even N: the degenerate pair at omega**l splits
    the same way, with the localized member sitting at l + N/2 mod N.
    """
    _require_psw(spec)
    n = spec.n_sites
    k = k % (2 * n)
    a = np.zeros(n, dtype=complex)
    b = np.zeros(n, dtype=complex)
    if spec.is_odd:
        lam = cmath.exp(1j * math.pi * k / n)
        if k % 2 == 0:
            sites = np.arange(n)
            a[:] = np.exp(-1j * math.pi * k * sites / n)
            return EigenMode(k, lam, a, b, float(n))
        b[((k - n) // 2) % n] = 1.0
        return EigenMode(k, lam, a, b, 1.0)
    l, minus = divmod(k, 2)
    lam = cmath.exp(2j * math.pi * l / n)
    if not minus:
        sites = np.arange(n)
        a[:] = np.exp(-2j * math.pi * l * sites / n)
        return EigenMode(k, lam, a, b, float(n))
    b[(l + n // 2) % n] = 1.0
    return EigenMode(k, lam, a, b, 1.0)


def all_eigenmodes(spec: WalkSpec) -> list:
    """All 2N modes, routing theta below the floor to the product modes."""
    builder = eigenmode_theta_zero if spec.theta < THETA_FLOOR else eigenmode
    return [builder(spec, k) for k in range(2 * spec.n_sites)]


def eigenbasis(spec: WalkSpec) -> tuple[np.ndarray, np.ndarray]:
    """(eigenvalues, matrix of normalized eigenvectors as columns)."""
    modes = all_eigenmodes(spec)
    lams = np.array([m.lam for m in modes])
    vectors = np.column_stack([m.vector().reshape(2 * spec.n_sites) for m in modes])
    return lams, vectors


def eigen_residual(spec: WalkSpec, mode: EigenMode) -> float:
    """|| U phi - lambda phi || for the assembled, normalized eigenvector."""
    state = mode.state()
    moved = step(state, spec)
    return float(np.linalg.norm(moved.amps - mode.lam * state.amps))


def eigenmode_trig_phases(spec: WalkSpec, k: int) -> np.ndarray:
    """Phases zeta_n(k) with a_n(k) = exp(-1j*zeta_n(k)), odd N.

    zeta_0 = 0 and zeta_n accumulates
    2*pi*j/N - 2*atan2(sin(x_j), cos(theta) + cos(x_j)) over j < n, where
    x_j = 2*pi*(j - k/2)/N.
    """
    _require_psw(spec)
    if not spec.is_odd:
        raise ValueError("trigonometric phase form is established for odd N only")
    if spec.theta < THETA_FLOOR:
        raise DegenerateCoin("trig form assumes theta != 0")
    n = spec.n_sites
    k = k % (2 * n)
    j = np.arange(n - 1)
    x = 2.0 * math.pi * (j - 0.5 * k) / n
    terms = 2.0 * math.pi * j / n - 2.0 * np.arctan2(
        np.sin(x), math.cos(spec.theta) + np.cos(x)
    )
    zeta = np.zeros(n)
    zeta[1:] = np.cumsum(terms)
    return zeta


# ---------------------------------------------------------------------------
# Eigenstate entanglement (odd N closed forms).
# ---------------------------------------------------------------------------

def coin_reduced_density(spec: WalkSpec, k: int) -> np.ndarray:
    """Coin density matrix of eigenstate k (odd N closed form).

    rho_k = 1/2 [[1 + e*c, e*d], [e*d, 1 - e*c]] with e = (-1)**k,
    c = cos(theta)**N and d = cos(theta)**(N-1) * sin(theta).
    """
    _require_psw(spec)
    if not spec.is_odd:
        raise ValueError("closed-form coin density is derived for odd N")
    n = spec.n_sites
    sign = -1.0 if k % 2 else 1.0
    c = math.cos(spec.theta) ** n
    d = math.cos(spec.theta) ** (n - 1) * math.sin(spec.theta)
    return 0.5 * np.array(
        [[1.0 + sign * c, sign * d], [sign * d, 1.0 - sign * c]], dtype=complex
    )


def _entropy_from_eigs(mu: np.ndarray, base: str) -> float:
    mu = np.clip(np.asarray(mu, dtype=float), 0.0, 1.0)
    mu = mu[mu > 0.0]
    s = float(-np.sum(mu * np.log(mu)))
    if base == "two":
        return s / math.log(2.0)
    if base == "natural":
        return s
    raise ValueError(f"base must be 'natural' or 'two', got {base!r}")


def eigenstate_entropies(spec: WalkSpec, k: int, base: str = "natural") -> tuple[float, float]:
    """(von Neumann, linear) coin-walker entanglement entropies of mode k.

    The coin eigenvalues are mu = (1 +- cos(theta)**(N-1))/2, independent of
    k; the linear entropy is (1 - cos(theta)**(2N-2))/2 in any base.
    """
    _require_psw(spec)
    if not spec.is_odd:
        raise ValueError("closed-form entropies are derived for odd N")
    c = math.cos(spec.theta) ** (spec.n_sites - 1)
    mu = np.array([(1.0 + c) / 2.0, (1.0 - c) / 2.0])
    s_vn = _entropy_from_eigs(mu, base)
    s_lin = 0.5 * (1.0 - c * c)
    return s_vn, s_lin


def appendix_b_sum(spec: WalkSpec, k: int, check_tol: float = 1e-12) -> complex:
    """Direct sum over n of 1/(cos(theta) + lambda_k * omega**-n), odd N.

    The sum collapses to (-1)**k * N * cos(theta)**(N-1) /
    (1 + (-1)**k * cos(theta)**N); the direct value is returned after being
    checked against that closed form.
    """
    _require_psw(spec)
    if not spec.is_odd:
        raise ValueError("sum identity is derived for odd N")
    n = spec.n_sites
    lam = mode_eigenvalue(spec, k)
    direct = complex(np.sum(1.0 / (math.cos(spec.theta) + lam * np.conj(spec.boost_phases))))
    sign = -1.0 if k % 2 else 1.0
    c = math.cos(spec.theta)
    closed = sign * n * c ** (n - 1) / (1.0 + sign * c**n)
    if abs(direct - closed) > check_tol * max(1.0, abs(closed)):
        raise ArithmeticError(
            f"off-diagonal sum {direct} disagrees with closed form {closed}"
        )
    return direct


# ---------------------------------------------------------------------------
# Momentum-basis duality and chiral symmetry.
# ---------------------------------------------------------------------------

def momentum_basis_components(spec: WalkSpec, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Momentum-representation component sequences (a~, b~) of mode k.

    a~_n(k) = 1/b_n at the conjugate eigenvalue and b~_n(k) = 1/a_n there,
    so the b~ are pure phases while the a~ are not.  The sequences represent
    the eigenvector up to one global complex scale.
    """
    _require_psw(spec)
    if not THETA_FLOOR < spec.theta < _HALF_PI_FLOOR:
        raise DegenerateCoin("momentum duality requires theta strictly inside (0, pi/2)")
    lam = mode_eigenvalue(spec, k)
    a_conj, b_conj = _component_arrays(spec, 1.0 / lam)
    return 1.0 / b_conj, 1.0 / a_conj


def reflection_operator(n_sites: int) -> np.ndarray:
    """Dense parity matrix R with R|n> = |(N - n) mod N>; an involution."""
    r = np.zeros((n_sites, n_sites), dtype=complex)
    for col in range(n_sites):
        r[(n_sites - col) % n_sites, col] = 1.0
    return r


def coin_matrix(theta: float) -> np.ndarray:
    """The orthogonal coin [[cos, sin], [sin, -cos]]."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def chiral_operator(spec: WalkSpec) -> np.ndarray:
    """Dense 2N x 2N unitary (coin (x) reflection) conjugating U to U^dagger."""
    return np.kron(coin_matrix(spec.theta), reflection_operator(spec.n_sites))


def chiral_conjugate(spec: WalkSpec, mode: EigenMode) -> EigenMode:
    """Image of a mode under the chiral symmetry: an eigenmode at conj(lambda).

    The returned mode is rescaled back to the a_0 = 1 convention (or to a
    unit localized component when the coin-0 part vanishes).
    """
    _require_psw(spec)
    n = spec.n_sites
    rev = (-np.arange(n)) % n
    r0, r1 = mode.a[rev], mode.b[rev]
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    new_a = c * r0 + s * r1
    new_b = s * r0 - c * r1
    if abs(new_a[0]) > 1e-12:
        scale = 1.0 / new_a[0]
    else:
        peak = int(np.argmax(np.abs(new_b)))
        scale = 1.0 / new_b[peak]
    new_a *= scale
    new_b *= scale
    kk = conjugate_mode_index(spec, mode.k)
    return EigenMode(kk, mode.lam.conjugate(), new_a, new_b,
                     float(np.sum(np.abs(new_a) ** 2 + np.abs(new_b) ** 2)))
