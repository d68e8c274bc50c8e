# config.py
"""
Configuration settings for the Weyl Tail Lab
"""

import os
from typing import Dict, Any

from dotenv import load_dotenv

load_dotenv()


class Config:
    """Application configuration"""

    # App Settings
    APP_NAME = "Weyl Tail Lab"
    APP_VERSION = "1.0.0"

    # File Paths
    OUTPUT_DIR = os.getenv("WEYL_LAB_OUTPUT_DIR", "results")
    REPORTS_DIR = "reports"

    # Reproducibility
    DEFAULT_SEED = 20240917
    DEFAULT_THREADS = 1
    # samples per RNG stream; never derived from the worker count
    CHUNK_SIZE = 8192

    # Theta series truncation presets
    TRUNCATION_PRESETS = {
        "default": {
            "w_max": 64.0,
            "n_cap": 200,
            "description": "|n - xi2| sqrt(y) <= 64 and |n| <= 200"
        },
        "paper-repro": {
            "w_max": 64.0,
            "n_cap": 100,
            "description": "|n| <= 100 as used for the published figures"
        }
    }
    DEFAULT_TRUNCATION = "default"

    # kappa_eta grid
    KAPPA_GRID = {
        "n_phi": 512,
        "n_w": 4096,
        "w_max": 64.0
    }

    # Monte Carlo sample sizes
    SAMPLE_SIZES = {
        "ci": 100_000,
        "paper-repro": 1_000_000
    }
    HISTOGRAM_N = [100, 500, 1000]
    HISTOGRAM_BINS = 200

    # Fluctuation statistic defaults per case
    FLUCTUATION = {
        "rational": {"R_max": 16.0, "p_exponent": 5.5, "R_min": 1.0},
        "irrational": {"R_max": 7.0, "p_exponent": 7.5, "R_min": 1.0}
    }

    # Tail checkpoints
    TAIL_GRIDS = {
        "rational": [4.0, 6.0, 8.0],
        "irrational": [3.0, 4.0, 5.0]
    }

    # Equidistribution
    EQUIDIST_T_LADDER = [4.0, 8.0, 12.0, 16.0]
    Y_CAP = 10.0

    # Numerical tolerances used by verify
    TOLERANCES = {
        "d_rat": 1e-7,
        "d_irr": 1e-3,
        "weyl_identity": 1e-10,
        "gamma_invariance": 1e-8,
        "unitarity": 1e-6,
        "gaussian_modulus": 1e-9,
        "atom_frequency": 0.005,
        "p_y_gt_3": 0.002,
        "zeta_c": 1e-6,
        "standard_errors": 3.0
    }

    # Feature Flags
    FEATURES = {
        "quadrature_fallback": True,
        "limit_branch": True,
        "tail_certificates": True,
        "rich_console": True
    }

    @classmethod
    def get_truncation_preset(cls, name: str) -> Dict[str, Any]:
        """Get truncation preset by name"""
        return cls.TRUNCATION_PRESETS.get(name, cls.TRUNCATION_PRESETS[cls.DEFAULT_TRUNCATION])

    @classmethod
    def get_sample_size(cls, profile: str) -> int:
        """Get the Monte Carlo sample size for a run profile"""
        return cls.SAMPLE_SIZES.get(profile, cls.SAMPLE_SIZES["ci"])

    @classmethod
    def get_fluctuation_config(cls, case: str) -> Dict[str, float]:
        return cls.FLUCTUATION.get(case, cls.FLUCTUATION["rational"])

    @classmethod
    def is_feature_enabled(cls, feature: str) -> bool:
        """Check if a feature is enabled"""
        return cls.FEATURES.get(feature, False)

    @classmethod
    def ensure_directories(cls, base: str = None):
        """Ensure all required directories exist"""
        root = base or cls.OUTPUT_DIR
        for directory in [root, os.path.join(root, cls.REPORTS_DIR)]:
            os.makedirs(directory, exist_ok=True)


# Environment-specific overrides
class QuickConfig(Config):
    """CI-scale configuration"""
    DEFAULT_TRUNCATION = "default"
    KAPPA_GRID = {"n_phi": 128, "n_w": 1024, "w_max": 64.0}


class PaperReproConfig(Config):
    """Acceptance-scale configuration matching the published figures"""
    DEFAULT_TRUNCATION = "paper-repro"
    SAMPLE_SIZES = {
        "ci": 1_000_000,
        "paper-repro": 1_000_000
    }


# Configuration factory
def get_config():
    """Get configuration based on environment"""
    env = os.getenv("WEYL_LAB_ENV", "quick")

    if env == "paper-repro":
        return PaperReproConfig
    else:
        return QuickConfig


# Export the active configuration
ActiveConfig = get_config()
