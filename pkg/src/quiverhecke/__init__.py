"""Exact workbench for cyclotomic Hecke-type quotients, their graded
quiver models, and the isomorphisms between them."""

from .scalars import FieldCtx, Params, FieldError, order_e, lambda_class
from .quiverweyl import (WeylGroup, enumerate_orbit, orbit_rep,
                         dimension_vector, arrow_class, p_class,
                         quiver_window)
from .polyengine import (TruncRing, TruncPoly, Series1, series_f,
                         check_lemma_fg, BlockRing)
from .engine import (NFAlgebra, Echelon, closure, stable_closure,
                     DimensionCapExceeded)
from .presentations import poly_relators, laurent_relators, relator_exprs
from .heckeengine import (HeckeQuotient, HeckeBlocks, eigenvalue_window,
                          reduced_multiplicities)
from .morphisms import (Coupler, ModelView, GradedToDeformed,
                        DeformedToGraded, RescalingAutomorphism,
                        HeckeToDeformed, DeformedToHecke,
                        verify_generator_map, roundtrip_ok,
                        intertwiner, intertwiner_checks)

__all__ = [n for n in dir() if not n.startswith("_")]
