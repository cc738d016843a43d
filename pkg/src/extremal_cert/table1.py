"""Published (λ'_N, β_N) pairs for 13 <= N <= 31, used with u = w_{7/2}.

Comparison data only: nothing in the certifier reads these values.  For
N >= 32 the published row is the closed form λ' = 8(N-2)(N-4)e^2, β = H_N.
"""

from __future__ import annotations

from typing import Optional

PROVENANCE = "Summary table of the singularity paper (Maple computations, tolerance unstated)"

ROWS: dict[int, tuple[int, int]] = {
    31: (20000, 86900),
    30: (18500, 76500),
    29: (17000, 67100),
    28: (16000, 58500),
    27: (14500, 50800),
    26: (13500, 43870),
    25: (12200, 37630),
    24: (11100, 32050),
    23: (10100, 27100),
    22: (9050, 22730),
    21: (8150, 18890),
    20: (7250, 15540),
    19: (6400, 12645),
    18: (5650, 10155),
    17: (4900, 8035),
    16: (4230, 6250),
    15: (3610, 4765),
    14: (3050, 3545),
    13: (2525, 2560),
}

# Least dimension reached by the classical Hardy-Rellich bound with w_{7/2}.
CLASSICAL_THRESHOLD = 22


def row(N: int) -> Optional[tuple[int, int]]:
    return ROWS.get(N)
