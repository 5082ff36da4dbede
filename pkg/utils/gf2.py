"""
Linear algebra over GF(2) on numpy bool matrices.
Rows are vectors; addition is XOR.
"""

from typing import List, Tuple

import numpy as np


def rref(matrix: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns."""
    work = np.array(matrix, dtype=bool, copy=True)
    if work.ndim != 2:
        raise ValueError("Expected a 2-D matrix")
    rows, cols = work.shape
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        candidates = np.flatnonzero(work[row:, col])
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
        hits = np.flatnonzero(work[:, col])
        hits = hits[hits != row]
        work[hits] ^= work[row]
        pivots.append(col)
        row += 1
    return work[:row], pivots


def rank(matrix: np.ndarray) -> int:
    if np.size(matrix) == 0:
        return 0
    return len(rref(matrix)[1])


def nullspace(matrix: np.ndarray) -> np.ndarray:
    """Basis (as rows) of {v : matrix @ v = 0 mod 2}."""
    matrix = np.asarray(matrix, dtype=bool)
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        return np.eye(cols, dtype=bool)
    reduced, pivots = rref(matrix)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=bool)
    for k, f in enumerate(free):
        basis[k, f] = True
        for r, p in enumerate(pivots):
            basis[k, p] = reduced[r, f]
    return basis


def row_space_contains(basis: np.ndarray, vectors: np.ndarray) -> bool:
    """Whether every row of vectors lies in the row space of basis."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=bool))
    if vectors.shape[0] == 0:
        return True
    if np.size(basis) == 0:
        return not vectors.any()
    return rank(np.vstack([basis, vectors])) == rank(basis)


def same_row_space(first: np.ndarray, second: np.ndarray) -> bool:
    return row_space_contains(first, second) and row_space_contains(second, first)
