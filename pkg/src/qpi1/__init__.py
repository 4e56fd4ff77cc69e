"""Executable combinatorics of bound quivers: minimal relations, the
fundamental group of a presentation, natural homotopy, contour and cycle
classification and Galois coverings."""

from .quiver import (Arrow, Contour, Quiver, QuiverError, Step, Walk, classify_cycle,
                     convex_subsets, distance, enumerate_paths, is_convex,
                     is_triangular, reduce_walk, sigma)
from .relations import (BoundQuiver, LinearCombo, check_presentation, ideal_space,
                        induce_on_convex, membership, minimal_relations)
from .dsl import ParseError, load, parse, serialize
from .homotopy import (ContourClass, GroupPresentation, Status, Verdict, contour_class,
                       contractible, freeness, homotopic, naturally_homotopic,
                       pi1_presentation, torsion_free_scan)
from .cycles import (Splitting, contour_reducible, cycle_irreducible, enumerate_contours,
                     interlaced, lemma16_compose, lemma21_case, naturally_contractible)
from .covering import (CoveringCandidate, GroupAction, QuiverMorphism, check_galois,
                       cyclic_cover, is_simply_connected, is_strongly_simply_connected,
                       isomorphism, quotient, universal_cover_ball)
from .dot import export_dot
from .catalog import FIXTURES, load_fixture

__version__ = "0.1.0"
