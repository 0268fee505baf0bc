"""Exact coadjoint-orbit computations for nilpotent Lie groups and two pro-Lie constructions."""

__version__ = "0.1.0"

from .bch import GroupElement, adjoint_matrix, bch_multiply, coadjoint_apply, coadjoint_symbolic
from .liealg import (
    Flag,
    Functional,
    Lattice,
    LieAlgebra,
    Morphism,
    Subspace,
    Vector,
    bracket,
    center,
    jordan_holder_flag,
    lower_central_series,
    quotient_by_ideal,
    validate_algebra,
)
from .orbits import orbit_contains, orbit_descriptor, orbit_sample, stabilizer
from .kirillov import (
    induce_descriptor,
    is_integral,
    orbit_integral,
    pullback_functional,
    pullback_orbit,
    pullback_polarization,
    transport_through_cover,
    verify_polarization,
    vergne_polarization,
)
