"""Flag enumeration invariants of graded posets and simplicial complexes:
flag f/h-vectors, ab- and cd-indexes, local indexes, toric g/h-polynomials,
local h-polynomials, and constructive subdivision decompositions."""

from .errors import CdindexError
from .ncpoly import (AbPolynomial, CdPolynomial, TensorSum, UniPolynomial,
                     coefficientwise_leq, coproduct, expand_cd, kappa,
                     parse_unipoly, parse_word_poly, substitute,
                     tensor_collapse, to_cd)
from .poset import (GradedPoset, adjoin_max, boolean_poset, boundary,
                    build_poset, chain_poset, dual, interior_elements,
                    is_isomorphic, is_near_eulerian, join, pyramid,
                    semisuspension, suspension)
from .flagcd import (FlagVector, LocalIndex, ab_index, ab_index_by_chains,
                     cd_index, flag_f, flag_h, flag_polynomial,
                     flag_polynomial_by_chains, local_index, polygon_cd,
                     three_polytope_cd)
from .complexes import (HVector, SimplicialComplex, StackedPolytope,
                        barycentric_subdivision, f_vector, face_poset,
                        find_shelling, flag_to_h, h_vector, is_gorenstein,
                        is_near_gorenstein, link, make_boolean,
                        make_boundary_simplex, make_cube3, make_polygon,
                        make_simplex, make_stacked, order_complex,
                        reduced_betti, star, verify_shelling)
from .subdivision import (CdDecomposition, SkeletalFamily, SubdivisionMap,
                          ValidationReport, classify_flag, decompose_cd,
                          from_vertex_carriers, identity_subdivision,
                          restrict, skeletal_family,
                          validate_strong_eulerian, validate_strong_formal,
                          verify_rank_telescoping, with_adjoined_tops)
from .toric import (LocalHTable, ToricPair, g_poly, h_poly, local_h,
                    morphism_f, morphism_g, toric_h, toric_pair,
                    verify_local_correspondence)

__version__ = "0.1.0"
