"""Search kernels: compiled extension when available, pure Python otherwise.

Set CLUSTERCERT_PURE=1 to force the pure backend. Both backends produce
bit-identical results (same incumbents, node counts, and float values);
BACKEND reports which one is live.
"""

import os

DEFAULT_BUDGET = 10_000_000

_force_pure = os.environ.get("CLUSTERCERT_PURE", "").strip().lower() in {"1", "true", "yes", "on"}

if _force_pure:
    from . import _pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        from . import _pure as _impl  # type: ignore[no-redef]

        BACKEND = "pure"

max_weight_clique = _impl.max_weight_clique
count_anticliques = _impl.count_anticliques
best_assignment = _impl.best_assignment

__all__ = [
    "BACKEND",
    "DEFAULT_BUDGET",
    "max_weight_clique",
    "count_anticliques",
    "best_assignment",
]
