"""A graded modal dependent type theory: grades, typing, usage, extraction."""

from .config import Config, ConfigError, Restrictions, make_config
from .grades import Modality, check_laws, check_well_behaved_zero, make_instance, nr_unique_check

__version__ = "0.1.0"

__all__ = ["Config", "ConfigError", "Restrictions", "make_config", "Modality", "check_laws",
           "check_well_behaved_zero", "make_instance", "nr_unique_check", "__version__"]
