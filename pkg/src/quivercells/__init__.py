"""Exact computational toolkit for quiver representations: Hom/Ext linear
algebra, tree-shaped extension bases, cells and mosaics of indecomposables,
torus attracting cells, and finite-field class counting."""

__version__ = "0.1.0"

from .exactfield import (ExactMatrix, FieldSpec, invertible, kernel_basis, rref,
                         select_independent_mod, solve)
from .quivercore import (CoverWindow, LabeledQuiver, Quiver, coefficient_quiver,
                         compatible_dimvectors, cover_window, euler_form, is_tree,
                         kronecker, pushdown, subspace_quiver)
from .repspace import (ExtPresentation, RElement, Representation, assemble_d, deform,
                       direct_sum, hom_basis, middle_term, represent_basis,
                       represents_subspace, restrict)
from .homalg import (EndoAnalysis, Morphism, UndecidedError, analyze_end, aut_count,
                     connecting_hom, connecting_hom_dual, ext_basis_of_extension,
                     is_indecomposable, is_isomorphic, is_schurian, theta_map)
from .cellkit import (Cell, Mosaic, TNFReport, check_separating,
                      check_strong_hypotheses, gamma_extension, grassmann_mosaic,
                      schubert_cell, subspace_tnf, tree_cell_recursion, verify_cell,
                      verify_mosaic)
from .toruscells import (AttractorData, CoverRepresentation, GenericityError, HNData,
                         SectionError, attracting_space, cell_section, fixed_points,
                         is_stable, poincare, schur_level, scss_and_hn, slope,
                         verify_section, weights_from_cover)
from .kaccount import (KacReport, KacSample, count_classes, crosscheck_cells,
                       default_degree_bound, interpolate)
