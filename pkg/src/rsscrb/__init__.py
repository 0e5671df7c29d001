"""Estimation bounds and attacker pipeline for breathing sensing from quantized RSS."""

from ._backend import backend_name, set_backend, use_backend
from .crb import (AveragingGrid, CrbReport, FisherMatrix, OptimalNoise, PhaseBasis, averaged_crb,
                  crb_at, fim_closed_form, fim_generic, find_optimal_noise, pmf_partials,
                  sample_pmf, unquantized_crb_reference)
from .dsp import (EstimateResult, FilterSpec, RateSearchSpec, estimate_amplitude, estimate_rate,
                  lowpass, periodogram, remove_dc, rmse_bpm)
from .experiments import (MitigationPolicy, Scenario, StaircaseScenario, SweepResult, SweepSpec,
                          contour_grid, evaluate_mitigation, hi_staircase_sim,
                          monte_carlo_bound_check, sweep_noise, sweep_sampling_rate,
                          sweep_step_size)
from .signal import (AcquisitionSpec, QuantizerSpec, RssTrace, SinusoidParams, add_interference,
                     make_rng, quantize, staircase_interference, synthesize_received_power)

__version__ = "0.1.0"
