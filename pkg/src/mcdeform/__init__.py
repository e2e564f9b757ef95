"""Exact Maurer-Cartan and deformation computations over Q."""

from .artin import ArtinianLocalDGA, make_dual_numbers, make_square_zero, m_filtration, validate_artinian
from .deform import (Deformation, classify_first_order, counterexample_demo, iso_reducing_to_identity,
                     mc_from_trivialization, reduce, twist)
from .deligne import (contraction_path, diagonal, finite_nerve, gauge_path, group_mul, mc_classes_map,
                      nerve_member, pi0, pi0_sigma_square_zero)
from .dgla import (DGLA, DGLAMorphism, end_dgla, is_quasi_iso, nilpotency_class, tensor_dgla,
                   validate_dgla)
from .errors import (DegreeOverflow, MCDeformError, NotInvertible, NotMC, ParseError,
                     PreconditionFailed, ShapeMismatch)
from .exactla import QMatrix, kernel_basis, rank, solve_affine
from .forms import SullivanForm, degeneracy_map, face_map, omega_d, wedge
from .graded import ChainComplex, end_complex, hom_complex, homology_dim, validate_complex
from .mc import (Found, NotFoundAtOrder, bch, curvature, gauge_act, gauge_equivalent, is_mc, lift_mc,
                 mc_solve_square_zero, obstruction_step)

__version__ = "0.1.0"
