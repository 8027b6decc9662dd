# algebra/__init__.py
# Точная алгебра: поля, композиционные алгебры, J_C и W_C.
from typing import Dict, List

DIMENSIONS = (1, 2, 4, 8)


def dimension_table() -> List[Dict[str, int]]:
    """dim C, dim J_C = 3 + 3 dim C, dim W_C = 8 + 6 dim C."""
    return [
        {"dim_C": n, "dim_J": 3 + 3 * n, "dim_W": 2 + 2 * (3 + 3 * n)}
        for n in DIMENSIONS
    ]
