"""Collective dipole-dipole effects in atomic lattice clocks."""

from ._core import (
    CapacityError,
    ConfigError,
    DomainError,
    EffectiveCouplings,
    Geometry,
    MAX_ORACLE_ATOMS,
    NumericalError,
    coupling_at,
    cubic_innermost,
    effective_explicit,
    effective_shell,
    evolve_exact,
    evolve_general,
    evolve_symmetric,
    f_function,
    fringe_scan,
    fringe_shift,
    g_function,
    max_slope,
    near_integer_spacing,
    num_threads,
    pair_coupling,
    ramsey_init,
    ramsey_signal,
    set_num_threads,
    sweep_distance,
    sweep_phase_map,
    zero_crossing_slope,
)

__version__ = "0.1.0"
