"""
cyclotome

Exact verification of strongly regular Cayley graphs, skew Hadamard and
Paley type difference sets, and association schemes built from unions of
cyclotomic classes of index 2 in finite fields.
"""

from cyclotome.config import VERSION, Settings
from cyclotome.constructions import (
    ConnectionSet,
    ConstructionKind,
    IndexTwoParams,
    build_D_A,
    build_D_B,
    build_quadratic_residue_set,
    build_scheme_relations,
    check_conditions_A,
    check_conditions_B,
    predicted_spectrum_A,
    predicted_values_B,
)
from cyclotome.cyclotomy import CycSetup, PeriodTable, build_period_table, char_sum, compare_gauss
from cyclotome.errors import CyclotomeError
from cyclotome.gf import FieldTable, build_field, find_modulus, materialize
from cyclotome.graphio import GraphCodec, GraphFormat
from cyclotome.pipeline import CyclotomeRun, RunReport, RunStatus
from cyclotome.scan import ParameterScanner, ScanRow
from cyclotome.verify import (
    SrgCertificate,
    restricted_spectrum,
    verify_paley_pds,
    verify_scheme,
    verify_skew_hds,
    verify_srg,
    verify_srg_direct,
)

__version__ = VERSION

__all__ = [
    "Settings",
    "ConnectionSet",
    "ConstructionKind",
    "IndexTwoParams",
    "build_D_A",
    "build_D_B",
    "build_quadratic_residue_set",
    "build_scheme_relations",
    "check_conditions_A",
    "check_conditions_B",
    "predicted_spectrum_A",
    "predicted_values_B",
    "CycSetup",
    "PeriodTable",
    "build_period_table",
    "char_sum",
    "compare_gauss",
    "CyclotomeError",
    "FieldTable",
    "build_field",
    "find_modulus",
    "materialize",
    "GraphCodec",
    "GraphFormat",
    "CyclotomeRun",
    "RunReport",
    "RunStatus",
    "ParameterScanner",
    "ScanRow",
    "SrgCertificate",
    "restricted_spectrum",
    "verify_paley_pds",
    "verify_scheme",
    "verify_skew_hds",
    "verify_srg",
    "verify_srg_direct",
]
