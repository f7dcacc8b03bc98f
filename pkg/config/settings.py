"""
Numerical configuration module.
Loads environment variables and provides precision, Fourier grid and output settings.
An env file is only read from an explicit path (HYPEREXP_ENV_FILE or the CLI --env-file flag).
"""

import os
from typing import Optional
from dotenv import load_dotenv


def load_env_file(path: Optional[str] = None) -> bool:
    """
    Load settings from an explicit env file and refresh the config classes.

    Args:
        path: Path to the env file. If None, uses HYPEREXP_ENV_FILE when set.

    Returns:
        True if a file was loaded.
    """
    path = path or os.getenv('HYPEREXP_ENV_FILE')
    if not path:
        return False
    loaded = load_dotenv(path, override=True)
    for config in (NumericConfig, GridConfig, OutputConfig):
        config.reload()
    return loaded


class NumericConfig:
    """Extended-precision settings."""

    PRECISION = int(os.getenv('HYPEREXP_PRECISION', 200))
    MARTINGALE_TOLERANCE = float(os.getenv('HYPEREXP_MARTINGALE_TOLERANCE', 1e-20))

    @classmethod
    def reload(cls):
        cls.PRECISION = int(os.getenv('HYPEREXP_PRECISION', 200))
        cls.MARTINGALE_TOLERANCE = float(os.getenv('HYPEREXP_MARTINGALE_TOLERANCE', 1e-20))


class GridConfig:
    """Fourier inversion grid defaults."""

    CDF_DAMPING = float(os.getenv('HYPEREXP_CDF_DAMPING', 0.5))
    DU = float(os.getenv('HYPEREXP_DU', 0.05))
    U_MAX = float(os.getenv('HYPEREXP_UMAX', 2000))
    SCHEME = os.getenv('HYPEREXP_SCHEME', 'simpson')
    TAIL_TOLERANCE = float(os.getenv('HYPEREXP_TAIL_TOLERANCE', 1e-4))

    SCHEMES = ('trapezoid', 'simpson')

    @classmethod
    def reload(cls):
        cls.CDF_DAMPING = float(os.getenv('HYPEREXP_CDF_DAMPING', 0.5))
        cls.DU = float(os.getenv('HYPEREXP_DU', 0.05))
        cls.U_MAX = float(os.getenv('HYPEREXP_UMAX', 2000))
        cls.SCHEME = os.getenv('HYPEREXP_SCHEME', 'simpson')
        cls.TAIL_TOLERANCE = float(os.getenv('HYPEREXP_TAIL_TOLERANCE', 1e-4))

    @classmethod
    def get_grid_params(cls, **overrides) -> dict:
        """
        Return grid parameters as a dictionary.

        Args:
            **overrides: Values replacing the defaults; None entries are ignored.
        """
        params = {
            'damping': None,
            'u_max': cls.U_MAX,
            'du': cls.DU,
            'scheme': cls.SCHEME,
        }
        params.update({key: value for key, value in overrides.items() if value is not None})
        return params


class OutputConfig:
    """Formatting of numeric output."""

    DIGITS = int(os.getenv('HYPEREXP_DIGITS', 12))
    HEP_DIGITS = int(os.getenv('HYPEREXP_HEP_DIGITS', 30))

    @classmethod
    def reload(cls):
        cls.DIGITS = int(os.getenv('HYPEREXP_DIGITS', 12))
        cls.HEP_DIGITS = int(os.getenv('HYPEREXP_HEP_DIGITS', 30))


class BenchmarkConfig:
    """Contract and model parameters of the published pricing benchmarks."""

    S0 = '100'
    STRIKE = '100'
    MATURITY = '0.25'
    RATE = '0.04'

    VG_PARAMS = {'a': '21.8735', 'a_hat': '56.4414', 'nu': '0.20'}
    CGMY_PARAMS = {'C': '1', 'G': '8.8', 'M': '14.5', 'Y': '1.2'}

    @classmethod
    def get_contract_params(cls) -> dict:
        """Return the European call contract used by the pricing tables."""
        return {'S0': cls.S0, 'K': cls.STRIKE, 'T': cls.MATURITY, 'r': cls.RATE}


load_env_file()
