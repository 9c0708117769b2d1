"""Exact Hermite and Smith normal forms of integer matrices (Kannan-Bachem
style), constructive homology of boundary-matrix pairs, and a generator of
benchmark matrices with planted Smith forms."""
from .bezout import BezoutTriple, OperationRecord, extended_gcd_minimal
from .benchgen import ExperimentConfig, generate_instance, run_experiment
from .fileio import MatrixFormatError, read_matrix, write_matrix
from .hermite import BudgetExhausted, HermiteResult, hnf1, hnf2
from .matrix import ExactMatrix, matrix_product, minor_gcd_oracle, new_matrix, rank_oracle
from .smith import (
    SmithDecomposition, divisor_normalize, run_length, smith, smith_kb1, smith_kb2, smith_kb3,
    verify_decomposition,
)

__version__ = "0.1.0"
