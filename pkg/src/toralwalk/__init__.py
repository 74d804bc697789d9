"""Coined quantum walks on a toral phase space.

The phase-space walk (PSW) conditions a position shift or a momentum boost
on a two-level coin; its spectrum is known in closed form and everything in
this package is built around that solution: exact eigenpairs, spectral and
direct propagation, spreading and entanglement observables, and Husimi
phase-space diagnostics built on Harper coherent states.  The standard
configuration-space walk on the same ring (CSW) is included as a reference.
"""

from .core import (
    CSW,
    MOMENTUM,
    POSITION,
    PSW,
    ClassicalWalkSpec,
    CoinState,
    WalkSpec,
    WalkerCoinState,
    apply_momentum_boost,
    apply_position_shift,
    classical_line_walk_pr,
    classical_phase_walk_distribution,
    dense_walk_operator,
    dft,
    evolve,
    product_state,
    random_state,
    site_state,
    step,
    weyl_commutator_check,
)
from .spectral import (
    DegenerateCoin,
    EigenMode,
    SplitPairSpectrum,
    all_eigenmodes,
    appendix_b_sum,
    chiral_conjugate,
    chiral_operator,
    coin_matrix,
    coin_reduced_density,
    conjugate_mode_index,
    eigenbasis,
    eigen_residual,
    eigenmode,
    eigenmode_theta_zero,
    eigenmode_trig_phases,
    eigenstate_entropies,
    eigenvalues,
    mode_eigenvalue,
    momentum_basis_components,
    normalization,
    q_pochhammer,
    reflection_operator,
    split_alpha,
    split_pair_spectrum,
)
from .observables import (
    EmptyWindow,
    NoDivergence,
    NonPositiveValue,
    ObservableSeries,
    PowerLawFit,
    SiteDistribution,
    TimescaleEstimate,
    coin_entropy,
    ehrenfest_time,
    evolve_series,
    finite_size_divergence_time,
    fit_power_law,
    participation_ratio,
    pr_theta_time_scan,
    spectral_propagate,
    std_dev,
)
from .phasespace import (
    FiducialState,
    HusimiGrid,
    cat_symmetry_metric,
    coherent_state,
    evolve_coherent,
    harper_fiducial,
    husimi,
)

__version__ = "0.1.0"
