"""Coherence, channel powers and correlations of a fermionic mode seen by an accelerated observer."""
from .channels import QubitChannel, decohering_power, decohering_power_closed, f_measure, unruh_channel
from .coherence import l1_coherence, pipeline_coherence, sector_coherence_closed
from .correlations import concurrence, geometric_discord_eigen, geometric_discord_svd
from .reductions import DensityMatrix, Sector, reduce
from .states import PureState, UnruhParams, initial_state, prepared_state
from .sweep import SweepConfig, SweepRecord, run_sweep

__all__ = [
    "DensityMatrix", "PureState", "QubitChannel", "Sector", "SweepConfig", "SweepRecord",
    "UnruhParams", "concurrence", "decohering_power", "decohering_power_closed", "f_measure",
    "geometric_discord_eigen", "geometric_discord_svd", "initial_state", "l1_coherence",
    "pipeline_coherence", "prepared_state", "reduce", "run_sweep", "sector_coherence_closed",
    "unruh_channel",
]
