"""Finite sites, fibrations, stacks, locales and spectra, computed by enumeration."""
from .fincat import (BoundExceeded, FiniteCategory, Functor, NatTransf, Verdict, category_from_json,
                     category_to_json, is_equivalence, preorder)
from .presheaf import Presheaf, PresheafMorphism, find_iso, representable
from .coverage import GrothendieckTopology, is_separated, is_sheaf, is_subcanonical, saturate, sheafify
from .indexed import IndexedCategory, TotalFibration, grothendieck, indexed_of_fibration
from .fractions import FractionsError, localize, lax_colimit, pseudo_colimit, weighted_ps_colimit
from .sitemaps import giraud_topology, is_comorphism, is_prestack, is_stack, orthogonal_generation
from .localefr import FiniteFrame, FrameHom, frame_homs, sheafify_via_adjunction, sheafify_via_locale
from .etalespace import Bundle, FiniteSpace, SectionFamily, mv_spectrum, zariski_spectrum

__version__ = "0.1.0"
