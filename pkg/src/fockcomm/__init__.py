"""Truncated-Fock-space simulator of two-way communication with non-classical light.

Builds generalized NOON states, propagates them through ideal and lossy
linear-optics elements, measures them with ideal and lossy detector models,
and scores the associated two-way-communication and Bell-type inequalities.
"""

__version__ = "0.1.0"

from .fock import (FockError, ModeOperator, MultiModeState, apply_ladder, expectation,
                   fidelity, inner_product, single_mode_from_coeffs, tensor_product, vacuum)
from .states import (NoonState, SingleModeSpec, average_photon_number, build_noon, cat,
                     coherent, phase_encode, photon_added_coherent, squeezed_vacuum)
from .optics import (BeamSplitterModel, LinearModeTransform, apply_lossless_bs, apply_lossy_bs,
                     apply_lossy_bs_network, lossy_bs_matrix, verify_cat_noon_preparation)
from .detectors import (DetectorModel, parity_effects, presence_effects, qubit_effects,
                        sva_effects, tke_effects)
from .gyni import (GyniResult, WitnessConstruction, build_witness, gyni_value, qubit_scan,
                   run_protocol)
from .bell import BellResult, BellSettings, bell_value, correlators, displacement_measurement

__all__ = [name for name in dir() if not name.startswith("_")]
