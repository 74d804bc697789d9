"""Distributions, spreading measures, entanglement dynamics, and fits.

Everything here reduces a walk trajectory to scalars: the site distribution
and its standard deviation, the participation ratio P = 1/sum(p_n^2), the
coin-walker von Neumann entropy, log-log power-law fits, and the two
characteristic times of the finite lattice (PR-curve divergence ~ gamma*N
and the entanglement-saturation Ehrenfest time ~ sqrt(N)).

Standard deviation uses the raw site labels 0..N-1, which reproduces the
pre-wrap ballistic growth; all fit windows end before wrapping matters.
Dynamical entropies default to base 2 so the saturation plateau sits at 1,
while the eigenstate formulas in :mod:`toralwalk.spectral` stay in natural
log as printed there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import CoinState, WalkSpec, WalkerCoinState, _advance, site_state
from .spectral import _entropy_from_eigs, eigenbasis


class EmptyWindow(ValueError):
    """Fit window contains no samples."""


class NonPositiveValue(ValueError):
    """Log-log fit fed a value <= 0."""


class NoDivergence(RuntimeError):
    """PR curves never separated within the simulated horizon."""


@dataclass
class SiteDistribution:
    """Walker site probabilities p plus the per-coin split p0, p1."""

    p: np.ndarray
    p0: np.ndarray
    p1: np.ndarray

    @classmethod
    def from_state(cls, state: WalkerCoinState) -> "SiteDistribution":
        parts = state.coin_site_probabilities()
        return cls(parts[0] + parts[1], parts[0], parts[1])

    @property
    def n_sites(self) -> int:
        return len(self.p)


@dataclass
class ObservableSeries:
    """Per-step record of (t, sigma, participation, coin entropy)."""

    t: np.ndarray
    sigma: np.ndarray
    participation: np.ndarray
    coin_entropy: np.ndarray


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    window: tuple
    r_squared: float


@dataclass(frozen=True)
class TimescaleEstimate:
    kind: str  # "ehrenfest" | "finite_size"
    value: float
    parameters: dict = field(default_factory=dict)


def _probabilities(dist) -> np.ndarray:
    if isinstance(dist, SiteDistribution):
        return dist.p
    return np.asarray(dist, dtype=float)


def std_dev(dist) -> float:
    """sigma = sqrt(<n^2> - <n>^2) over raw site labels 0..N-1."""
    p = _probabilities(dist)
    sites = np.arange(len(p))
    mean = float(np.dot(sites, p))
    var = float(np.dot(sites * sites, p)) - mean * mean
    return math.sqrt(max(var, 0.0))


def participation_ratio(dist) -> float:
    """P = 1/sum(p_n^2), clamped to the report range [1, N]."""
    p = _probabilities(dist)
    value = 1.0 / float(np.dot(p, p))
    return float(min(max(value, 1.0), len(p)))


def coin_entropy(state: WalkerCoinState, base: str = "two") -> float:
    """Von Neumann entropy of the coin after tracing out the walker."""
    rho = state.amps @ state.amps.conj().T
    mu = np.linalg.eigvalsh(rho)
    return _entropy_from_eigs(mu, base)


def spectral_propagate(spec: WalkSpec, initial: WalkerCoinState, t: int,
                       basis=None) -> SiteDistribution:
    """Site distribution after t steps via the closed-form eigenbasis.

    Amplitudes are sum_k lambda_k**t <phi_k|initial> phi_k; negative t is
    the unitary inverse.  Pass ``basis=eigenbasis(spec)`` to amortize the
    basis construction over many calls.
    """
    if initial.n_sites != spec.n_sites:
        raise ValueError("state and spec lattice sizes differ")
    lams, vectors = basis if basis is not None else eigenbasis(spec)
    psi0 = initial.amps.reshape(2 * spec.n_sites)
    coeff = vectors.conj().T @ psi0
    amps = vectors @ (lams ** int(t) * coeff)
    return SiteDistribution.from_state(WalkerCoinState(amps.reshape(2, spec.n_sites)))


def evolve_series(spec: WalkSpec, initial: WalkerCoinState, t_max: int,
                  base: str = "two", dump_times=()) -> tuple[ObservableSeries, dict]:
    """Step the walk recording sigma, participation, and coin entropy.

    Returns the series for t = 0..t_max plus {t: SiteDistribution} for each
    requested dump time.
    """
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    dump_times = set(int(t) for t in dump_times)
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    phases = spec.boost_phases
    a0, a1 = initial.amps[0].copy(), initial.amps[1].copy()
    times = np.arange(t_max + 1)
    sigma = np.empty(t_max + 1)
    part = np.empty(t_max + 1)
    entropy = np.empty(t_max + 1)
    dists: dict[int, SiteDistribution] = {}
    for t in range(t_max + 1):
        if t > 0:
            a0, a1 = _advance(a0, a1, c, s, spec.kind, phases)
        p0 = np.abs(a0) ** 2
        p1 = np.abs(a1) ** 2
        p = p0 + p1
        sigma[t] = std_dev(p)
        part[t] = participation_ratio(p)
        rho = np.empty((2, 2), dtype=complex)
        rho[0, 0] = p0.sum()
        rho[1, 1] = p1.sum()
        rho[0, 1] = np.dot(a0, a1.conj())
        rho[1, 0] = rho[0, 1].conjugate()
        entropy[t] = _entropy_from_eigs(np.linalg.eigvalsh(rho), base)
        if t in dump_times:
            dists[t] = SiteDistribution(p, p0, p1)
    return ObservableSeries(times, sigma, part, entropy), dists


def fit_power_law(series, window, observable: str = "participation") -> PowerLawFit:
    """OLS fit of log(y) against log(t) inside the inclusive window.

    ``series`` is an :class:`ObservableSeries` (pick a column with
    ``observable``) or a plain ``(t, y)`` pair of arrays.
    """
    if isinstance(series, ObservableSeries):
        t = np.asarray(series.t, dtype=float)
        y = np.asarray(getattr(series, observable), dtype=float)
    else:
        t, y = series
        t = np.asarray(t, dtype=float)
        y = np.asarray(y, dtype=float)
    t0, t1 = window
    if t1 < t0:
        raise EmptyWindow(f"window {window} is empty")
    mask = (t >= t0) & (t <= t1)
    if not np.any(mask):
        raise EmptyWindow(f"no samples inside window {window}")
    t, y = t[mask], y[mask]
    if np.any(t <= 0.0) or np.any(y <= 0.0):
        raise NonPositiveValue("log-log fit requires positive times and values")
    log_t, log_y = np.log(t), np.log(y)
    slope, intercept = np.polyfit(log_t, log_y, 1)
    residuals = log_y - (slope * log_t + intercept)
    ss_tot = float(np.sum((log_y - log_y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(residuals**2)) / ss_tot
    return PowerLawFit(float(slope), float(math.exp(intercept)), (t0, t1), r2)


def finite_size_divergence_time(spec_a: WalkSpec, spec_b: WalkSpec, epsilon: float,
                                t_max: int | None = None,
                                coin: CoinState | None = None) -> TimescaleEstimate:
    """First time the PR curves of two lattice sizes separate by epsilon.

    Both walks start at |coin>|n=0>.  The relative gap
    |P_a - P_b| / max(P_a, P_b) is compared against epsilon; the crossing
    time divided by min(N_a, N_b) estimates gamma.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if spec_a.theta != spec_b.theta or spec_a.kind != spec_b.kind:
        raise ValueError("specs must share theta and kind")
    if spec_a.n_sites == spec_b.n_sites:
        raise NoDivergence("identical lattices never separate")
    n_min = min(spec_a.n_sites, spec_b.n_sites)
    horizon = int(t_max) if t_max is not None else 2 * n_min
    coin = coin or CoinState.zero()
    c, s = math.cos(spec_a.theta), math.sin(spec_a.theta)
    states = []
    for spec in (spec_a, spec_b):
        st = site_state(spec.n_sites, 0, coin)
        states.append([st.amps[0], st.amps[1], spec.boost_phases, spec.kind])
    for t in range(1, horizon + 1):
        prs = []
        for entry in states:
            entry[0], entry[1] = _advance(entry[0], entry[1], c, s, entry[3], entry[2])
            p = np.abs(entry[0]) ** 2 + np.abs(entry[1]) ** 2
            prs.append(1.0 / float(np.dot(p, p)))
        gap = abs(prs[0] - prs[1]) / max(prs)
        if gap > epsilon:
            return TimescaleEstimate(
                "finite_size", float(t),
                {"gamma": t / n_min, "epsilon": epsilon,
                 "n_a": spec_a.n_sites, "n_b": spec_b.n_sites, "t_max": horizon},
            )
    raise NoDivergence(f"PR curves stayed within {epsilon} up to t = {horizon}")


def ehrenfest_time(spec: WalkSpec, coin0: CoinState | None = None, walker0=None,
                   tol: float = 1e-3, t_max: int | None = None, base: str = "two",
                   initial: WalkerCoinState | None = None) -> TimescaleEstimate:
    """First time the coin entropy comes within tol of its horizon maximum.

    Defaults: symmetric coin, the phase-space coherent state at the origin
    as walker, horizon 2N.  ``initial`` overrides the product construction
    for non-product starts.
    """
    from .phasespace import harper_fiducial  # local import avoids cycle at import time

    horizon = int(t_max) if t_max is not None else 2 * spec.n_sites
    if initial is None:
        coin0 = coin0 or CoinState.symmetric()
        if walker0 is None:
            walker0 = harper_fiducial(spec.n_sites).amplitudes
        walker0 = np.asarray(walker0, dtype=complex)
        initial = WalkerCoinState(np.outer(coin0.amplitudes(), walker0))
    series, _ = evolve_series(spec, initial, horizon, base=base)
    s_max = float(series.coin_entropy.max())
    hit = np.nonzero(series.coin_entropy >= s_max - tol)[0]
    t_e = int(hit[0])
    return TimescaleEstimate(
        "ehrenfest", float(t_e),
        {"n_sites": spec.n_sites, "tol": tol, "saturation": s_max,
         "t_max": horizon, "base": base},
    )


def pr_theta_time_scan(n_sites: int, theta_grid, t_max: int, kind: str,
                       coin: CoinState | None = None, site: int = 0) -> np.ndarray:
    """Participation-ratio matrix P[i, t] over a coin-angle grid.

    Row i follows the walk with theta_grid[i] from |coin>|site> for
    t = 0..t_max.
    """
    coin = coin or CoinState.zero()
    theta_grid = np.asarray(theta_grid, dtype=float)
    out = np.empty((len(theta_grid), t_max + 1))
    for i, theta in enumerate(theta_grid):
        spec = WalkSpec(n_sites, theta, kind)
        c, s = math.cos(spec.theta), math.sin(spec.theta)
        phases = spec.boost_phases
        st = site_state(n_sites, site, coin)
        a0, a1 = st.amps[0], st.amps[1]
        for t in range(t_max + 1):
            if t > 0:
                a0, a1 = _advance(a0, a1, c, s, spec.kind, phases)
            p = np.abs(a0) ** 2 + np.abs(a1) ** 2
            out[i, t] = 1.0 / float(np.dot(p, p))
    return out
