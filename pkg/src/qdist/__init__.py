__version__ = '0.1.0'

from .base import ensure_list
from .ensemble.config import RunConfig
from .ensemble.runner import run_ensemble
from .ensemble.stat import histogram
from .ensemble.stat import summary_stats
from .ensemble.stat import threshold_curve
from .io.load import to_file
from .io.load import write_cells
from .io.manifest import build_manifest
from .io.manifest import load_manifest
from .io.reproduce import reproduce
from .quantum.bounds import check_bounds
from .quantum.bounds import summarize_bounds
from .quantum.dynamics import GridConfig
from .quantum.dynamics import distinguishability_at
from .quantum.dynamics import maximize_distinguishability
from .quantum.dynamics import n2_threshold_probability
from .quantum.dynamics import survival_probability
from .quantum.sampling import sample_state
from .quantum.sampling import sample_states
from .quantum.spectra import atomic_spectrum
from .quantum.spectra import harmonic_spectrum
from .quantum.spectra import lcm_of_squares
from .quantum.spectra import search_window
from .util.random import substream
