"""Figure rendering for anwsim simulation outputs."""

from figgen.io import InputError, RunData, checksum_of, load_run
from figgen.panels import fig_gamma_panels, fig_regime_map, fig_sigma_kappa, save_figure

__version__ = "0.1.0"

__all__ = [
    "InputError",
    "RunData",
    "checksum_of",
    "fig_gamma_panels",
    "fig_regime_map",
    "fig_sigma_kappa",
    "load_run",
    "save_figure",
    "__version__",
]
