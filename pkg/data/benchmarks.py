"""
Published benchmark values.
Gamma CDF errors, and European call pricing errors for the VG and CGMY models.
"""

from typing import Dict, List, Tuple

# === Gamma CDF errors: max_x |P(X_t ≤ x) - P(X_t^(n,k) ≤ x)| ===

TABLE1: Dict[Tuple[int, int, int], float] = {
    # (n, k, t): error
    (5, 0, 1): 1.1e-2, (5, 1, 1): 1.1e-2, (5, 2, 1): 8.8e-3,
    (10, 0, 1): 2.8e-3, (10, 1, 1): 3.4e-3, (10, 2, 1): 2.8e-3,
    (15, 0, 1): 1.3e-3, (15, 1, 1): 1.6e-3, (15, 2, 1): 1.4e-3,
    (20, 0, 1): 7.5e-4, (20, 1, 1): 9.3e-4, (20, 2, 1): 8.1e-4,
    (5, 0, 2): 3.3e-4, (5, 1, 2): 3.2e-4, (5, 2, 2): 5.4e-4,
    (10, 0, 2): 2.6e-5, (10, 1, 2): 2.8e-5, (10, 2, 2): 5.6e-5,
    (15, 0, 2): 5.4e-6, (15, 1, 2): 6.4e-6, (15, 2, 2): 1.3e-5,
    (20, 0, 2): 1.8e-6, (20, 1, 2): 2.1e-6, (20, 2, 2): 4.6e-6,
}

TABLE1_ACCEPTANCE: List[Tuple[int, int, int]] = [(5, 0, 1), (10, 0, 1), (20, 0, 1), (5, 0, 2), (10, 0, 2)]

TABLE1_X_STEP = 0.01
TABLE1_X_MAX = 40.0
TABLE1_TOLERANCE = 0.15

# === European call errors (approximation minus benchmark) ===

TWO_SIDED_COLUMN = '[2N+1/2N]'
ONE_SIDED_COLUMNS = {0: '[N/N]', 1: '[N+1/N]', 2: '[N+2/N]'}

VG_BENCHMARK = 2.5002779303
CGMY_BENCHMARK = 11.9207826467
BENCHMARK_TOLERANCE = 1e-6

TABLE2: Dict[int, Dict[str, float]] = {
    1: {'[2N+1/2N]': -1.58e-2, '[N/N]': 9.12e-2, '[N+1/N]': 7.02e-3, '[N+2/N]': -3.02e-2},
    2: {'[2N+1/2N]': 1.66e-3, '[N/N]': -6.16e-3, '[N+1/N]': 4.80e-3, '[N+2/N]': -7.82e-4},
    3: {'[2N+1/2N]': 6.20e-4, '[N/N]': -1.28e-3, '[N+1/N]': -4.32e-5, '[N+2/N]': 6.78e-4},
    4: {'[2N+1/2N]': 1.25e-4, '[N/N]': 1.88e-4, '[N+1/N]': -1.98e-4, '[N+2/N]': 9.81e-5},
    5: {'[2N+1/2N]': -7.19e-5, '[N/N]': 8.82e-5, '[N+1/N]': -2.62e-5, '[N+2/N]': -2.40e-5},
    7: {'[2N+1/2N]': 4.34e-6, '[N/N]': -8.48e-6, '[N+1/N]': 5.82e-6, '[N+2/N]': -1.71e-6},
    9: {'[2N+1/2N]': -7.72e-8, '[N/N]': 3.31e-7, '[N+1/N]': -6.99e-7, '[N+2/N]': 7.35e-7},
    12: {'[2N+1/2N]': 4.85e-7, '[N/N]': -1.81e-8, '[N+1/N]': 4.97e-8, '[N+2/N]': -6.10e-8},
    15: {'[2N+1/2N]': -8.56e-8, '[N/N]': -1.37e-9, '[N+1/N]': -3.31e-9, '[N+2/N]': 6.06e-9},
}

TABLE2_ACCEPTANCE: List[Tuple[int, str]] = [(2, '[N+1/N]'), (5, '[N+1/N]'), (9, '[N+1/N]')]
TABLE2_TOLERANCE = 0.20

TABLE3: Dict[int, Dict[str, float]] = {
    1: {'[2N+1/2N]': -2.75e-2, '[N+1/N]': 1.93e-2, '[N+2/N]': -3.72e-3},
    2: {'[2N+1/2N]': -4.86e-6, '[N+1/N]': -4.19e-6, '[N+2/N]': 9.5e-5},
    3: {'[2N+1/2N]': 4.80e-7, '[N+1/N]': -1.48e-5, '[N+2/N]': -2.54e-7},
    4: {'[2N+1/2N]': 2.9e-8, '[N+1/N]': 6.41e-7, '[N+2/N]': -1.55e-7},
    5: {'[2N+1/2N]': 1.14e-9, '[N+1/N]': 5.58e-9, '[N+2/N]': 6.95e-9},
}

TABLE3_ACCEPTANCE: List[Tuple[int, str]] = [(2, '[2N+1/2N]'), (4, '[2N+1/2N]')]
TABLE3_TOLERANCE = 0.30
