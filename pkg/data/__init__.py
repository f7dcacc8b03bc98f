from data.test_data import (
    SampleGenerator,
    GAMMA_AT_HALF,
    IG_AT_HALF_KAPPA_1,
    VG_SMALL,
    VG_SMALL_CUMULANTS,
    VALID_HEP,
    INVALID_HEP_DATA,
    INVALID_MODEL_DATA
)

from data.benchmarks import (
    TABLE1,
    TABLE1_ACCEPTANCE,
    TABLE2,
    TABLE2_ACCEPTANCE,
    TABLE3,
    TABLE3_ACCEPTANCE,
    VG_BENCHMARK,
    CGMY_BENCHMARK
)

__all__ = [
    # test data
    'SampleGenerator',
    'GAMMA_AT_HALF',
    'IG_AT_HALF_KAPPA_1',
    'VG_SMALL',
    'VG_SMALL_CUMULANTS',
    'VALID_HEP',
    'INVALID_HEP_DATA',
    'INVALID_MODEL_DATA',
    # benchmarks
    'TABLE1',
    'TABLE1_ACCEPTANCE',
    'TABLE2',
    'TABLE2_ACCEPTANCE',
    'TABLE3',
    'TABLE3_ACCEPTANCE',
    'VG_BENCHMARK',
    'CGMY_BENCHMARK'
]
