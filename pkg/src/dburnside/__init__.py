"""Exact arithmetic in the double Burnside ring B(G, G) of a cyclic p-group,
and computation of its group of orthogonal units."""

from .cyclic_group import CyclicPGroup, UnitModPK
from .goursat import Quintuple, enumerate_basis, gamma, opposite, star
from .ring import (
    RingElement,
    SignedOuterAut,
    basis_element,
    dbinf_unit,
    dual,
    eta,
    f_idem,
    identity,
    j_idem,
    rho,
)
from .solver import SearchConfig, kernel_oracle, kernel_pruned, orthogonal_unit_group
from .group_id import GroupFingerprint, closure, fingerprint, match_structure

__version__ = "0.1.0"

__all__ = [
    "CyclicPGroup",
    "UnitModPK",
    "Quintuple",
    "enumerate_basis",
    "gamma",
    "opposite",
    "star",
    "RingElement",
    "SignedOuterAut",
    "basis_element",
    "dbinf_unit",
    "dual",
    "eta",
    "f_idem",
    "identity",
    "j_idem",
    "rho",
    "SearchConfig",
    "kernel_oracle",
    "kernel_pruned",
    "orthogonal_unit_group",
    "GroupFingerprint",
    "closure",
    "fingerprint",
    "match_structure",
]
