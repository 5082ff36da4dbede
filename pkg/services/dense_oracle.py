"""
Dense-matrix oracle for Pauli-string algebras.
Builds explicit 2^n x 2^n operators and measures spans and commutants with
floating-point linear algebra, independently of the GF(2) engine.
"""

import logging
from functools import reduce
from typing import Iterable, List

import numpy as np
from scipy import linalg

from models.algebra import AlgebraBasis, PauliString

logger = logging.getLogger(__name__)

MAX_DENSE_SITES = 6
RANK_TOLERANCE = 1e-9

_SINGLE = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_size(n: int) -> None:
    if n > MAX_DENSE_SITES:
        raise ValueError(f"Dense oracle limited to {MAX_DENSE_SITES} sites, got {n}")


def pauli_matrix(string: PauliString) -> np.ndarray:
    """Tensor product over sites; site 0 is the leftmost factor."""
    _check_size(string.n)
    factors = [_SINGLE[string.letter(i)] for i in range(string.n)]
    return reduce(np.kron, factors, np.eye(1, dtype=complex))


def _generators(algebra: AlgebraBasis) -> List[np.ndarray]:
    return [pauli_matrix(s) for s in algebra.strings()]


def _span_elements(algebra: AlgebraBasis) -> List[np.ndarray]:
    """All 2^k products of basis strings, i.e. the operator span."""
    elements = [np.eye(2 ** algebra.n, dtype=complex)]
    for generator in _generators(algebra):
        elements = elements + [generator @ e for e in elements]
    return elements


def dense_span_dimension(algebra: AlgebraBasis) -> int:
    """Complex dimension of the operator span of the algebra."""
    _check_size(algebra.n)
    stacked = np.array([e.ravel() for e in _span_elements(algebra)])
    return int(np.linalg.matrix_rank(stacked, tol=RANK_TOLERANCE))


def dense_commutant_basis(algebra: AlgebraBasis) -> np.ndarray:
    """Columns span {M : M a = a M for every generator a} (vectorized row-major)."""
    _check_size(algebra.n)
    size = 2 ** algebra.n
    identity = np.eye(size, dtype=complex)
    generators = _generators(algebra)
    if not generators:
        return np.eye(size * size, dtype=complex)
    # row-major vec: vec(M a) = (I kron a^T) vec(M), vec(a M) = (a kron I) vec(M)
    system = np.vstack([np.kron(a, identity) - np.kron(identity, a.T) for a in generators])
    return linalg.null_space(system, rcond=RANK_TOLERANCE)


def dense_commutant_dimension(algebra: AlgebraBasis) -> int:
    return int(dense_commutant_basis(algebra).shape[1])


def dense_span_contains(algebra: AlgebraBasis, operators: Iterable[np.ndarray]) -> bool:
    """Whether every operator lies in the complex span of the algebra."""
    span = np.array([e.ravel() for e in _span_elements(algebra)])
    extra = [np.asarray(op).ravel() for op in operators]
    if not extra:
        return True
    base_rank = np.linalg.matrix_rank(span, tol=RANK_TOLERANCE)
    extended = np.vstack([span, np.array(extra)])
    return bool(np.linalg.matrix_rank(extended, tol=RANK_TOLERANCE) == base_rank)


def dense_commutant_matches(algebra: AlgebraBasis, commutant: AlgebraBasis) -> bool:
    """Dense commutant and the span of the symplectic commutant coincide."""
    dense = dense_commutant_basis(algebra)
    if dense.shape[1] != 2 ** commutant.dim_log:
        logger.debug("Dense commutant dimension %d, symplectic 2^%d", dense.shape[1], commutant.dim_log)
        return False
    columns = [dense[:, k].reshape(2 ** algebra.n, 2 ** algebra.n) for k in range(dense.shape[1])]
    return dense_span_contains(commutant, columns)
