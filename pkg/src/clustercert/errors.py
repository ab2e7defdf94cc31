"""Exception types shared across the package.

Every error carries enough context (offending indices, limits, node counts)
for the CLI to render a useful machine-readable report.
"""

from __future__ import annotations


class ClusterCertError(Exception):
    """Base class for all package errors."""

    code = "error"

    def details(self) -> dict:
        """Structured payload for JSON error reports."""
        return {}

    def to_dict(self) -> dict:
        return {"type": self.code, "message": str(self), "details": self.details()}


class DimensionMismatch(ClusterCertError):
    code = "dimension_mismatch"


class AsymmetricMatrix(ClusterCertError):
    code = "asymmetric_matrix"

    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"distance matrix asymmetric at ({i}, {j})")

    def details(self) -> dict:
        return {"i": self.i, "j": self.j}


class NonzeroDiagonal(ClusterCertError):
    code = "nonzero_diagonal"

    def __init__(self, i: int):
        self.i = i
        super().__init__(f"nonzero diagonal entry at index {i}")

    def details(self) -> dict:
        return {"i": self.i}


class NegativeDistance(ClusterCertError):
    code = "negative_distance"

    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"negative or non-finite distance at ({i}, {j})")

    def details(self) -> dict:
        return {"i": self.i, "j": self.j}


class NonpositiveWeight(ClusterCertError):
    code = "nonpositive_weight"

    def __init__(self, i: int):
        self.i = i
        super().__init__(f"weight at index {i} is not strictly positive")

    def details(self) -> dict:
        return {"i": self.i}


class IndexOutOfRange(ClusterCertError):
    code = "index_out_of_range"

    def __init__(self, index: int, n: int):
        self.index, self.n = index, n
        super().__init__(f"point index {index} out of range for n={n}")

    def details(self) -> dict:
        return {"index": self.index, "n": self.n}


class EmptySet(ClusterCertError):
    code = "empty_set"

    def __init__(self, what: str = "index set"):
        super().__init__(f"{what} must be non-empty")


class InvalidParams(ClusterCertError):
    code = "invalid_params"


class BudgetExceeded(ClusterCertError):
    """Search crossed its node budget; carries the incumbent when one exists."""

    code = "budget_exceeded"

    def __init__(self, nodes: int, best_so_far=None):
        self.nodes = nodes
        self.best_so_far = best_so_far
        super().__init__(
            f"search budget exceeded after {nodes} nodes"
            " (rerun with a larger --budget, or use --approx / --mc-samples)"
        )

    def details(self) -> dict:
        return {"nodes": self.nodes}


class TooLarge(ClusterCertError):
    code = "too_large"

    def __init__(self, n: int, limit: int):
        self.n, self.limit = n, limit
        super().__init__(f"exhaustive search limited to {limit} points, got {n}")

    def details(self) -> dict:
        return {"n": self.n, "limit": self.limit}


class DenominatorBoundTooSmall(ClusterCertError):
    code = "denominator_bound_too_small"

    def __init__(self, cell: int, bound: int):
        self.cell, self.bound = cell, bound
        super().__init__(
            f"no admissible rational weight with denominator <= {bound} for cell {cell}"
        )

    def details(self) -> dict:
        return {"cell": self.cell, "bound": self.bound}


class StructureViolation(ClusterCertError):
    code = "structure_violation"
