"""spikecross: clock-driven spiking-network simulation with deterministic,
stochastic, and frequency-dependent stochastic STDP on a crossbar synapse
array with a write-time device-variation model."""

__version__ = "0.1.0"

from .dataset import (Image, ImageSet, load_idx_images, load_idx_labels,
                      load_image_set, save_idx_images, save_idx_labels,
                      split_eval_set)
from .device import (CrossbarState, init_crossbar, load_crossbar_csv,
                     load_crossbar_raw, save_crossbar_csv, save_crossbar_raw,
                     write_conductance)
from .encoding import (SpikeSchedule, image_rates, make_schedule,
                       pixel_to_rate, schedule_from_phases)
from .errors import (ConfigurationError, DataFormatError, DomainError,
                     LabelingError, NumericError, SimulationInvariantError,
                     SpikeCrossError, TruncatedFileError, UnknownKeyError,
                     UnsupportedShapeError)
from .evaluate import (AccuracyGrid, NeuronLabels, SweepResult, accuracy,
                       assign_labels, build_run_report, classify,
                       evaluate_condition, run_sweep, sweep_cell_seed)
from .network import Network, NetworkConfig, PresentationResult, TrainingStats, raster_csv
from .neuron import LifParams, NeuronState, input_current, lif_step
from .noise import NoiseSpec, apply_awgn, apply_noise, apply_salt_pepper
from .plasticity import (PlasticityParams, RuleMode, StdpParams, StochParams,
                         delta_g_pot, delta_g_dep, fd_scale, p_dep, p_pot,
                         post_spike_update, pre_after_post_update,
                         update_log_csv)
from .seeding import content_rng, derive_seed, seed_streams
