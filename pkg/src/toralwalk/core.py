"""Operators, state containers, and time evolution for coined walks on a ring.

Two walk families act on a two-level coin tensored with an N-site walker
space.  The configuration-space walk (CSW) shifts the walker forward or
backward along the ring depending on the coin; the phase-space walk (PSW)
pairs a forward position shift with a momentum boost, i.e. multiplication
by the site-dependent phase ``omega**n`` with ``omega = exp(2j*pi/N)``.

The single-step kernel is matrix-free and costs O(N) arithmetic per step:
the coin mix is a 2x2 rotation applied per site, shifts are index
rotations, and the boost uses a phase table precomputed per spec.  Dense
matrices are produced only on demand (``dense_walk_operator``) as a
brute-force cross-check reference.

Conventions: coin index is the slow index, site index fast.  A state is a
``(2, N)`` complex array ``amps[c, n]``; flattening with ``reshape(2 * N)``
matches the block-matrix ordering of ``dense_walk_operator``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, lgamma

import numpy as np

PSW = "psw"
CSW = "csw"
POSITION = "position"
MOMENTUM = "momentum"

_HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class WalkSpec:
    """Static walk parameters: lattice size, coin angle, walk kind.

    Parameters
    ----------
    n_sites : int
        Number of lattice sites N, at least 2.
    theta : float
        Coin angle in radians, within [0, pi/2].  ``pi/4`` is the
        Hadamard-type coin.
    kind : str
        Either ``"psw"`` (position shift + momentum boost) or ``"csw"``
        (forward/backward position shifts, periodic).
    """

    n_sites: int
    theta: float
    kind: str = PSW

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise ValueError(f"n_sites must be an integer >= 2, got {self.n_sites!r}")
        object.__setattr__(self, "n_sites", int(self.n_sites))
        theta = float(self.theta)
        if not 0.0 <= theta <= _HALF_PI + 1e-12:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta!r}")
        object.__setattr__(self, "theta", theta)
        kind = str(self.kind).lower()
        if kind not in (PSW, CSW):
            raise ValueError(f"kind must be {PSW!r} or {CSW!r}, got {self.kind!r}")
        object.__setattr__(self, "kind", kind)

    @property
    def omega(self) -> complex:
        """Primitive N-th root of unity exp(2j*pi/N)."""
        return cmath.exp(2j * math.pi / self.n_sites)

    @cached_property
    def boost_phases(self) -> np.ndarray:
        """Phase table omega**n for n = 0..N-1 (n already reduced mod N)."""
        n = np.arange(self.n_sites)
        table = np.exp(2j * math.pi * n / self.n_sites)
        table.setflags(write=False)
        return table

    @property
    def is_odd(self) -> bool:
        return self.n_sites % 2 == 1


@dataclass(frozen=True)
class CoinState:
    """Normalized two-component coin state (c0, c1)."""

    c0: complex
    c1: complex

    def __post_init__(self):
        nrm = abs(self.c0) ** 2 + abs(self.c1) ** 2
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"coin state must be normalized, |c0|^2+|c1|^2 = {nrm}")

    def amplitudes(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=complex)

    @classmethod
    def zero(cls) -> "CoinState":
        return cls(1.0, 0.0)

    @classmethod
    def one(cls) -> "CoinState":
        return cls(0.0, 1.0)

    @classmethod
    def symmetric(cls) -> "CoinState":
        """(|0> + i|1>)/sqrt(2), the coin that spreads symmetrically."""
        return cls(1.0 / math.sqrt(2.0), 1j / math.sqrt(2.0))

    @classmethod
    def asymmetric(cls) -> "CoinState":
        """|0>; alias of :meth:`zero` under the name used for dynamics."""
        return cls.zero()


@dataclass
class WalkerCoinState:
    """Coin-walker state: complex array ``amps[c, n]`` of shape (2, N).

    ``basis`` records whether the site index labels position or momentum
    eigenstates; the step kernels require the position basis.
    """

    amps: np.ndarray
    basis: str = POSITION

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 2 or amps.shape[0] != 2 or amps.shape[1] < 2:
            raise ValueError(f"amps must have shape (2, N>=2), got {amps.shape}")
        self.amps = amps
        if self.basis not in (POSITION, MOMENTUM):
            raise ValueError(f"basis must be {POSITION!r} or {MOMENTUM!r}")

    @property
    def n_sites(self) -> int:
        return self.amps.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def site_probabilities(self) -> np.ndarray:
        """p_n = p(n;0) + p(n;1), summed over the coin."""
        return np.abs(self.amps[0]) ** 2 + np.abs(self.amps[1]) ** 2

    def coin_site_probabilities(self) -> np.ndarray:
        """Split probabilities p(n;c) as a (2, N) array."""
        return np.abs(self.amps) ** 2

    def overlap(self, other: "WalkerCoinState") -> complex:
        return complex(np.vdot(self.amps, other.amps))

    def copy(self) -> "WalkerCoinState":
        return WalkerCoinState(self.amps.copy(), self.basis)


def site_state(n_sites: int, site: int = 0, coin: CoinState | None = None) -> WalkerCoinState:
    """Product state |coin> (x) |site>, the standard localized start."""
    coin = coin or CoinState.zero()
    amps = np.zeros((2, n_sites), dtype=complex)
    amps[:, site % n_sites] = coin.amplitudes()
    return WalkerCoinState(amps)


def product_state(coin: CoinState, walker: np.ndarray) -> WalkerCoinState:
    """Product of a coin state with an arbitrary walker vector."""
    walker = np.asarray(walker, dtype=complex)
    return WalkerCoinState(np.outer(coin.amplitudes(), walker))


def random_state(n_sites: int, rng: np.random.Generator | None = None) -> WalkerCoinState:
    """Haar-ish random normalized coin-walker state (Gaussian components)."""
    rng = rng or np.random.default_rng()
    amps = rng.normal(size=(2, n_sites)) + 1j * rng.normal(size=(2, n_sites))
    return WalkerCoinState(amps / np.linalg.norm(amps))


# ---------------------------------------------------------------------------
# Lattice-part operators.  All act on the last axis, so a batch of states
# (stacked along leading axes) works as well as a single (N,) vector.
# ---------------------------------------------------------------------------

def apply_position_shift(lattice: np.ndarray, spec: WalkSpec) -> np.ndarray:
    """Cyclic shift: amplitude at site n moves to site (n+1) mod N."""
    lattice = np.asarray(lattice, dtype=complex)
    if lattice.shape[-1] != spec.n_sites:
        raise ValueError("lattice length does not match spec.n_sites")
    return np.roll(lattice, 1, axis=-1)


def apply_momentum_boost(lattice: np.ndarray, spec: WalkSpec) -> np.ndarray:
    """Site-diagonal boost: amplitude at site n is multiplied by omega**n."""
    lattice = np.asarray(lattice, dtype=complex)
    if lattice.shape[-1] != spec.n_sites:
        raise ValueError("lattice length does not match spec.n_sites")
    return lattice * spec.boost_phases


def dft(lattice: np.ndarray, spec: WalkSpec, direction: str = "forward") -> np.ndarray:
    """Apply the unitary DFT matrix G with G[n, k] = exp(2j*pi*n*k/N)/sqrt(N).

    ``direction="forward"`` applies G, ``"inverse"`` applies its conjugate
    transpose.  Conjugation by G interchanges the shift and boost operators.
    """
    lattice = np.asarray(lattice, dtype=complex)
    if lattice.shape[-1] != spec.n_sites:
        raise ValueError("lattice length does not match spec.n_sites")
    root = math.sqrt(spec.n_sites)
    if direction == "forward":
        return np.fft.ifft(lattice, axis=-1) * root
    if direction == "inverse":
        return np.fft.fft(lattice, axis=-1) / root
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def weyl_commutator_check(spec: WalkSpec) -> float:
    """Max deviation of (boost . shift) - omega * (shift . boost) on all basis states."""
    basis = np.eye(spec.n_sites, dtype=complex)
    left = apply_momentum_boost(apply_position_shift(basis, spec), spec)
    right = spec.omega * apply_position_shift(apply_momentum_boost(basis, spec), spec)
    return float(np.max(np.abs(left - right)))


# ---------------------------------------------------------------------------
# Single-step and iterated evolution.
# ---------------------------------------------------------------------------

def _advance(a0: np.ndarray, a1: np.ndarray, cos_t: float, sin_t: float,
             kind: str, phases: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v0 = cos_t * a0 + sin_t * a1
    v1 = sin_t * a0 - cos_t * a1
    if kind == PSW:
        return np.roll(v0, 1), phases * v1
    return np.roll(v0, 1), np.roll(v1, -1)


def step(state: WalkerCoinState, spec: WalkSpec) -> WalkerCoinState:
    """One walk step: coin rotation, then the coin-conditioned shift/boost.

    PSW shifts position on coin 0 and boosts momentum on coin 1; CSW shifts
    position forward on coin 0 and backward on coin 1, both periodic.
    """
    if state.basis != POSITION:
        raise ValueError("step requires a position-basis state")
    if state.n_sites != spec.n_sites:
        raise ValueError("state and spec lattice sizes differ")
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    new0, new1 = _advance(state.amps[0], state.amps[1], c, s, spec.kind, spec.boost_phases)
    return WalkerCoinState(np.stack([new0, new1]))


def evolve(state: WalkerCoinState, spec: WalkSpec, t: int) -> WalkerCoinState:
    """Apply ``step`` t times; t = 0 returns a copy of the input."""
    if t < 0:
        raise ValueError("t must be nonnegative (spectral_propagate handles t < 0)")
    if state.basis != POSITION:
        raise ValueError("evolve requires a position-basis state")
    if state.n_sites != spec.n_sites:
        raise ValueError("state and spec lattice sizes differ")
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    phases = spec.boost_phases
    a0, a1 = state.amps[0].copy(), state.amps[1].copy()
    for _ in range(int(t)):
        a0, a1 = _advance(a0, a1, c, s, spec.kind, phases)
    return WalkerCoinState(np.stack([a0, a1]))


def dense_walk_operator(spec: WalkSpec) -> np.ndarray:
    """Explicit 2N x 2N walk matrix in the (coin slow, site fast) ordering.

    Intended as a reference for small lattices; the step kernel never
    materializes it.
    """
    n = spec.n_sites
    shift = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    if spec.kind == PSW:
        boost = np.diag(spec.boost_phases)
        return np.block([[c * shift, s * shift], [s * boost, -c * boost]])
    back = shift.conj().T
    return np.block([[c * shift, s * shift], [s * back, -c * back]])


# ---------------------------------------------------------------------------
# Classical reference walks.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalWalkSpec:
    """Biased classical phase-space walker: shift position with probability
    ``bias``, otherwise boost momentum, for ``steps`` steps."""

    bias: float
    steps: int

    def __post_init__(self):
        if not 0.0 <= self.bias <= 1.0:
            raise ValueError(f"bias must lie in [0, 1], got {self.bias!r}")
        if int(self.steps) != self.steps or self.steps < 0:
            raise ValueError(f"steps must be a nonnegative integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))


def classical_phase_walk_distribution(cspec: ClassicalWalkSpec, n_sites: int) -> dict:
    """Occupation probabilities {(q, p): prob} after ``cspec.steps`` steps.

    The walker moves on the front p + q = t with binomial weights; on the
    torus the coordinates wrap mod N and coinciding points accumulate.
    """
    if n_sites < 2:
        raise ValueError("n_sites must be >= 2")
    t, f = cspec.steps, cspec.bias
    dist: dict[tuple[int, int], float] = {}
    for q in range(t + 1):
        w = comb(t, q) * f**q * (1.0 - f) ** (t - q)
        if w == 0.0:
            continue
        key = (q % n_sites, (t - q) % n_sites)
        dist[key] = dist.get(key, 0.0) + w
    return dist


def classical_line_walk_pr(t: int) -> float:
    """Participation ratio 2**(2t) / binom(2t, t) of the unbiased line walk.

    Evaluated in log space so large t cannot overflow; grows as sqrt(pi*t).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    t = int(t)
    return math.exp(2 * t * math.log(2.0) - (lgamma(2 * t + 1) - 2 * lgamma(t + 1)))
