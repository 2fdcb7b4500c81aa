"""Application settings and environment variable management."""
import os
from dotenv import load_dotenv

load_dotenv()


class Settings:
    """Application settings loaded from environment variables."""

    def __init__(self):
        # Logging Configuration
        self.LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

        # Worker pool (wall time only, never results)
        self.WORKERS = int(os.getenv('GREEDY_DESCENT_WORKERS', '1'))

        # Inner solvers (Chebyshev projection, span minimization)
        self.INNER_TOL = float(os.getenv('GREEDY_INNER_TOL', '1e-10'))
        self.INNER_MAX_ITER = int(os.getenv('GREEDY_INNER_MAX_ITER', '10000'))

        # Greedy selection and drift control
        self.TIE_TOL = float(os.getenv('GREEDY_TIE_TOL', '1e-12'))
        self.RECOMPUTE_EVERY = int(os.getenv('GREEDY_RECOMPUTE_EVERY', '32'))

        # Beta grid oracle resolution
        self.BETA_GRID_2D = int(os.getenv('BETA_GRID_2D', '20000'))
        self.BETA_GRID_3D = int(os.getenv('BETA_GRID_3D', '200000'))

        # Monte-Carlo and brute-force budgets
        self.COVERING_SAMPLES = int(os.getenv('COVERING_SAMPLES', '100000'))
        self.SIGMA_BUDGET = int(os.getenv('SIGMA_BUDGET', '1000000'))
        self.PROPERTY_A_BUDGET = int(os.getenv('PROPERTY_A_BUDGET', '100000'))

        # Output
        self.OUTPUT_DIR = os.getenv('OUTPUT_DIR', 'out')

        self._validate_settings()

    def _validate_settings(self):
        """Validate settings are within usable ranges."""
        if self.WORKERS < 1:
            raise ValueError("GREEDY_DESCENT_WORKERS must be at least 1")
        if self.INNER_TOL <= 0:
            raise ValueError("GREEDY_INNER_TOL must be positive")
        if self.INNER_MAX_ITER < 1:
            raise ValueError("GREEDY_INNER_MAX_ITER must be at least 1")
        if self.TIE_TOL < 0:
            raise ValueError("GREEDY_TIE_TOL must be non-negative")
        if self.RECOMPUTE_EVERY < 1:
            raise ValueError("GREEDY_RECOMPUTE_EVERY must be at least 1")
        if self.BETA_GRID_2D < 8 or self.BETA_GRID_3D < 8:
            raise ValueError("Beta grid resolutions must be at least 8")


settings = Settings()
