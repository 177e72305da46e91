"""Bertini and Geiser involutions of pencils of plane cubics.

Exact polynomial formulas for the involutions, the ramification data of the
double covers they induce, and a verification engine for the identities
relating them.
"""

from .bertini import (
    BertiniBundle,
    DegeneratePoint,
    PencilSpec,
    ProjPoint,
    apply_bertini,
    build_bundle,
)
from .brace import brace
from .geiser import GeiserBundle, build_geiser, geiser_apply, geiser_ram
from .ring import GF, MERSENNE61, QQ, Polynomial, canonical_text, parse_text
from .sigma2 import RamData, ram_closed_form, ram_oracle
from .verify import check_identity, run_suite

__all__ = [
    "BertiniBundle", "DegeneratePoint", "GF", "GeiserBundle", "MERSENNE61", "PencilSpec",
    "Polynomial", "ProjPoint", "QQ", "RamData", "apply_bertini", "brace", "build_bundle",
    "build_geiser", "canonical_text", "check_identity", "geiser_apply", "geiser_ram",
    "parse_text", "ram_closed_form", "ram_oracle", "run_suite",
]
