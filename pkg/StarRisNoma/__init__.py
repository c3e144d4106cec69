"""StarRisNoma simulates the uplink of a two-user NOMA system assisted by a
simultaneously transmitting and reflecting reconfigurable intelligent surface
(STAR-RIS) and compares every Monte Carlo result with its closed-form analysis.
The system suffers from three imperfections at once: the phases of the surface
elements are noisy, the channels are only known through pilot-based estimates,
and the transceivers of the access point and of both users are impaired. The
package is organized in three layers:

1) Models: the phase-noise laws and random streams
(StarRisNoma.noise_sampling), the scene geometry and the Rician channels
(StarRisNoma.geometry_channel), the phase designs of the surface
(StarRisNoma.beamforming) and the closed-form channel moments
(StarRisNoma.statistics).

2) Receiver: LMMSE and LS channel estimation from pilot observations
(StarRisNoma.estimation) and the achievable NOMA and OMA rates with perfect or
imperfect successive interference cancellation (StarRisNoma.rates).

3) Experiments: a reproducible, optionally multi-process Monte Carlo engine
(StarRisNoma.experiments) sweeping one quantity at a time
(StarRisNoma.sweep_axes), pre-built recipes for the standard
evaluation curves (StarRisNoma.recipes), and the configuration files and command line
that drive them (StarRisNoma.config, StarRisNoma.cli). Results are collected in
a StarRisNoma.result.SweepResult and written as long-format CSV.
"""

__version__ = '1.0.0'

from . import metrics
from .noise_sampling import PhaseNoiseModel, RngStream
from .geometry_channel import SceneConfig, derive_geometry, draw_channels
from .beamforming import optimal_phases, random_phases
from .statistics import channel_moments
from .estimation import PilotConfig, estimate_channels, nmse_closed_form
from .rates import RateInputs, rate_report
from .experiments import SweepSpec, run_sweep, run_recipe, equal_rate_crossing
from .recipes import figure_recipes, verify_recipe
from .result import SweepResult
