"""Relative orders of elements in free groups and in F_n x Z^m.

The order of ``g`` relative to a subgroup ``H`` is the least ``k >= 1`` with
``g^k`` in ``H`` (0 if none).  This package computes orders, spectra,
descriptions of all roots and of all elements of a given order, purity and
pure closures, for finitely generated subgroups given by generators.
"""

from .automata import (
    Automaton,
    Limits,
    ResourceGuardError,
    SubgroupF,
    build_stallings,
    coset_automaton,
    coset_intersection,
    express,
    index,
    membership,
    to_dot,
)
from .free_orders import (
    CosetPart,
    CosetUnionDescription,
    build_K_O,
    elements_of_order,
    has_order_zero,
    is_S_pure,
    k_roots,
    order,
    order_zero_description,
    pure_closure,
    spectrum,
    spectrum_bound,
)
from .fta import (
    FtaSubgroupBasis,
    completion,
    fta_basis,
    fta_elements_of_order,
    fta_index_finite,
    fta_is_S_pure,
    fta_k_roots,
    fta_membership,
    fta_order,
    fta_order_bound,
    fta_pure_closure,
    fta_smp,
    fta_spectrum,
    has_order_zero_fta,
    m_k,
    order_profile,
)
from .lattices import Lattice, LatticeCoset, k_root, k_root_coset, lattice_order, lattice_spectrum, smith, snf
from .oracle import Ball, ball_free, ball_fta, oracle_order, verify_decomposition
from .words import Ambient, FtaElement, ParseError, Word, parse_element, parse_word

__version__ = "0.1.0"
