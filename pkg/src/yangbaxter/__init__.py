"""Numerical checks for Yang-Baxter solutions and Baxterization of braid representations."""

__version__ = "0.1.0"

from .errors import BaxterError
from .rmatrix import (CheckReport, SampleGrid, SpectralOperator, VertexWeights,
                      check_far_commutation, check_ybe_braided, check_ybe_r_form,
                      initial_condition_operator)
from .properties import (CrossingData, check_charge_conservation, check_cpt, check_crossing,
                         check_second_inversion, check_unitarity)
from .algebra import (check_bmw_prime, check_braid_relations, check_temperley_lieb,
                      fit_skein_4cb)
from .baxterize import (AT_INFINITY, YFunction, baxterize_three_blocks, baxterize_two_blocks,
                        baxterize_two_blocks_tl, bmw_normalize, projector_profile)
from .transfer import check_transfer_commutation, transfer_matrix

__all__ = [
    "AT_INFINITY", "BaxterError", "CheckReport", "CrossingData", "SampleGrid",
    "SpectralOperator", "VertexWeights", "YFunction", "baxterize_three_blocks",
    "baxterize_two_blocks", "baxterize_two_blocks_tl", "bmw_normalize",
    "check_bmw_prime", "check_braid_relations", "check_charge_conservation", "check_cpt",
    "check_crossing", "check_far_commutation", "check_second_inversion",
    "check_temperley_lieb", "check_transfer_commutation", "check_unitarity",
    "check_ybe_braided", "check_ybe_r_form", "fit_skein_4cb", "initial_condition_operator",
    "projector_profile", "transfer_matrix",
]
