"""Secrecy-rate simulation for RIS-assisted mm-Wave wiretap channels."""

__version__ = "0.1.0"

from .bounds import (EULER_GAMMA, asymptotic_bound, bessel_j0, ergodic_lower_bound, eta,
                     expected_correlation_sq_exact, saturation_limit)
from .channel_model import (ChannelSet, LinkGeometry, SystemConfig, build_channels, noise_power_watts,
                            path_loss_linear, steering_vector)
from .errors import AssumptionViolation, DegenerateCascadeError, ValidationError
from .reflection import (PhaseShiftProfile, Precoder, beamforming_gain, mrt_precoder,
                         optimal_phase_shifts)
from .secrecy_map import MapSpec, SecrecyGrid, compute_map, extract_contour, max_secure_distance
from .secrecy_metrics import (SecrecySample, received_snrs, secrecy_rate, secrecy_rate_closed_form,
                              secrecy_sample)
from .simulation import (ErgodicEstimate, MonteCarloSpec, ergodic_secrecy_rate_mc, expected_gain_sq_mc,
                         sweep)
