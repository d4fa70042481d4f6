"""hopf3: exact Lyapunov constants and certified limit-cycle lower bounds
for three-dimensional polynomial systems with a Hopf singular point."""

from .catalog import CATALOG, JerkSpec, catalog_instantiate, jerk_canonicalize
from .errors import DomainError, IntegrityError
from .jet import Jet, jet_truncate
from .lyapcore import (LyapunovSequence, complexify, homological_eigenvalue,
                       lyapunov_constants, residual_check)
from .linalg import exact_det, exact_rank, solve_square
from .poly import Roster, SparsePoly, XYZ, poly_arith
from .rational import (GaussianRational, format_rational, parse_rational, rat,
                       rat_normalize)
from .sysmodel import (HopfSystem, apply_quadratic_perturbation, parse_system,
                       serialize_system, system_from_rationals)

__version__ = "0.1.0"
