"""
Pytest configuration and fixtures for the hyperexponential approximation tests.
"""

import pytest
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import BenchmarkConfig, GridConfig, NumericConfig, OutputConfig
from data.test_data import VALID_HEP, SampleGenerator
from levy.hyperexp import HyperExpProcess
from levy.numkernel import context
from levy.processes import CGMY, GammaProcess, VarianceGamma, calibrated
from levy.transforms import InversionGrid

TEST_PRECISION = 100

CONFIG_KEYS = {
    NumericConfig: ('PRECISION', 'MARTINGALE_TOLERANCE'),
    GridConfig: ('CDF_DAMPING', 'DU', 'U_MAX', 'SCHEME', 'TAIL_TOLERANCE'),
    OutputConfig: ('DIGITS', 'HEP_DIGITS'),
}


# === Session-scoped Fixtures ===

@pytest.fixture(scope='session')
def prec():
    """Working precision (decimal digits) used by the unit tests."""
    return TEST_PRECISION


@pytest.fixture(scope='session')
def ctx(prec):
    """Arithmetic context at the test precision."""
    return context(prec)


@pytest.fixture(scope='session')
def gamma_model():
    return GammaProcess()


@pytest.fixture(scope='session')
def vg_benchmark_model():
    """VG model of the pricing benchmark, calibrated to the benchmark rate."""
    params = BenchmarkConfig.VG_PARAMS
    return calibrated(VarianceGamma(params['a'], params['a_hat'], params['nu']), BenchmarkConfig.RATE)


@pytest.fixture(scope='session')
def cgmy_benchmark_model():
    """CGMY model of the pricing benchmark, calibrated to the benchmark rate."""
    params = BenchmarkConfig.CGMY_PARAMS
    return calibrated(CGMY(params['C'], params['G'], params['M'], params['Y']), BenchmarkConfig.RATE)


@pytest.fixture(scope='session')
def contract():
    """Benchmark European call contract."""
    return BenchmarkConfig.get_contract_params()


# === Function-scoped Fixtures ===

@pytest.fixture(autouse=True)
def restore_config():
    """
    Restore the config classes after each test.
    CLI runs may change precision or grid defaults through flags and env files.
    """
    saved = {
        config: {key: getattr(config, key) for key in keys}
        for config, keys in CONFIG_KEYS.items()
    }
    yield
    for config, values in saved.items():
        for key, value in values.items():
            setattr(config, key, value)


@pytest.fixture
def default_grid():
    """Fourier grid built from the current config defaults."""
    return InversionGrid.from_config()


# === Data Fixtures ===

@pytest.fixture
def sample_hep():
    """Provide the reference hyperexponential process."""
    return HyperExpProcess.from_dict(VALID_HEP)


@pytest.fixture
def random_hep():
    """Provide a randomly generated hyperexponential process."""
    return HyperExpProcess.from_dict(SampleGenerator.generate_hep_doc())


@pytest.fixture
def data_generator():
    """Provide access to the SampleGenerator class."""
    return SampleGenerator


# === Pytest Hooks ===

def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "numkernel: Tests for the extended-precision kernel")
    config.addinivalue_line("markers", "pade: Tests for Pade approximants")
    config.addinivalue_line("markers", "quadrature: Tests for Gaussian quadrature rules")
    config.addinivalue_line("markers", "processes: Tests for the Levy model catalogue")
    config.addinivalue_line("markers", "hyperexp: Tests for hyperexponential approximations")
    config.addinivalue_line("markers", "transforms: Tests for Fourier inversion and pricing")
    config.addinivalue_line("markers", "harness: Tests for verification reports")
    config.addinivalue_line("markers", "cli: Tests for the command-line front end")
    config.addinivalue_line("markers", "acceptance: Published table reproduction")
    config.addinivalue_line("markers", "performance: Tests for runtime budgets")
    config.addinivalue_line("markers", "smoke: Quick smoke tests")
    config.addinivalue_line("markers", "regression: Full regression tests")


def pytest_html_report_title(report):
    """Set the title for HTML report."""
    report.title = "Hyperexponential Approximation Test Report"
