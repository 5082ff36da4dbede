"""
Pauli-string algebra models for CausalLab.
Strings are (x|z) bit masks over n sites; an algebra is the span of a set of
strings, stored as a canonical row-reduced basis over GF(2).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Sequence

import numpy as np

from utils.gf2 import row_space_contains, rref

from .causet import Causet, Region
from .errors import DimensionMismatchError

_LETTERS = {(False, False): 'I', (True, False): 'X', (False, True): 'Z', (True, True): 'Y'}
_BITS = {letter: bits for bits, letter in _LETTERS.items()}


@dataclass(frozen=True)
class PauliString:
    """Phase-free Pauli string; site i carries X, Z or Y by its mask bits."""
    n: int
    x_mask: int = 0
    z_mask: int = 0

    def __post_init__(self):
        limit = 1 << self.n
        if self.n < 0 or not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise ValueError(f"Masks do not fit in {self.n} sites")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse 'IXZY'-style labels; character i is site i."""
        x_mask = z_mask = 0
        for site, letter in enumerate(label.upper()):
            if letter not in _BITS:
                raise ValueError(f"Invalid Pauli letter '{letter}' in '{label}'")
            x_bit, z_bit = _BITS[letter]
            x_mask |= int(x_bit) << site
            z_mask |= int(z_bit) << site
        return cls(len(label), x_mask, z_mask)

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "PauliString":
        vector = np.asarray(vector, dtype=bool)
        n = len(vector) // 2
        x_mask = sum(1 << i for i in np.flatnonzero(vector[:n]))
        z_mask = sum(1 << i for i in np.flatnonzero(vector[n:]))
        return cls(n, int(x_mask), int(z_mask))

    @classmethod
    def single(cls, n: int, site: int, letter: str) -> "PauliString":
        x_bit, z_bit = _BITS[letter.upper()]
        return cls(n, int(x_bit) << site, int(z_bit) << site)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def support(self) -> frozenset:
        mask = self.x_mask | self.z_mask
        return frozenset(i for i in range(self.n) if mask >> i & 1)

    def letter(self, site: int) -> str:
        return _LETTERS[(bool(self.x_mask >> site & 1), bool(self.z_mask >> site & 1))]

    def label(self) -> str:
        return "".join(self.letter(i) for i in range(self.n))

    def vector(self) -> np.ndarray:
        bits = [(self.x_mask >> i) & 1 for i in range(self.n)] + [(self.z_mask >> i) & 1 for i in range(self.n)]
        return np.array(bits, dtype=bool)

    def commutes_with(self, other: "PauliString") -> bool:
        """Vanishing symplectic product."""
        overlap = (self.x_mask & other.z_mask) ^ (self.z_mask & other.x_mask)
        return bin(overlap).count("1") % 2 == 0

    def __str__(self) -> str:
        return self.label()


@dataclass(eq=False)
class AlgebraBasis:
    """Canonical GF(2) basis of a span of Pauli strings on n sites."""
    n: int
    rows: np.ndarray = field(repr=False)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=bool)
        if rows.ndim != 2 or rows.shape[1] != 2 * self.n:
            raise ValueError(f"Rows of shape {rows.shape} do not match {self.n} sites")
        reduced, _ = rref(rows)
        reduced.setflags(write=False)
        self.rows = reduced

    @classmethod
    def span(cls, n: int, strings: Iterable[PauliString]) -> "AlgebraBasis":
        strings = list(strings)
        for s in strings:
            if s.n != n:
                raise DimensionMismatchError(f"String on {s.n} sites in a {n}-site algebra")
        vectors = np.zeros((len(strings), 2 * n), dtype=bool)
        for i, s in enumerate(strings):
            vectors[i] = s.vector()
        return cls(n, vectors)

    @classmethod
    def identity(cls, n: int) -> "AlgebraBasis":
        return cls(n, np.zeros((0, 2 * n), dtype=bool))

    @classmethod
    def full(cls, n: int) -> "AlgebraBasis":
        return cls(n, np.eye(2 * n, dtype=bool))

    @classmethod
    def supported_on(cls, n: int, sites: Iterable[int]) -> "AlgebraBasis":
        """All strings with support inside the given sites."""
        ids = sorted(set(int(s) for s in sites))
        if any(not 0 <= s < n for s in ids):
            raise ValueError(f"Sites {ids} out of range for n={n}")
        rows = np.zeros((2 * len(ids), 2 * n), dtype=bool)
        for k, site in enumerate(ids):
            rows[k, site] = True
            rows[len(ids) + k, n + site] = True
        return cls(n, rows)

    @property
    def dim_log(self) -> int:
        return len(self.rows)

    @property
    def is_trivial(self) -> bool:
        return self.dim_log == 0

    def strings(self) -> List[PauliString]:
        return [PauliString.from_vector(row) for row in self.rows]

    def support(self) -> frozenset:
        if not len(self.rows):
            return frozenset()
        used = self.rows[:, :self.n].any(axis=0) | self.rows[:, self.n:].any(axis=0)
        return frozenset(int(i) for i in np.flatnonzero(used))

    def _require_same_n(self, other: "AlgebraBasis") -> None:
        if self.n != other.n:
            raise DimensionMismatchError(f"Algebras on {self.n} and {other.n} sites")

    def contains(self, other: "AlgebraBasis") -> bool:
        self._require_same_n(other)
        return row_space_contains(self.rows, other.rows)

    def contains_string(self, string: PauliString) -> bool:
        if string.n != self.n:
            raise DimensionMismatchError(f"String on {string.n} sites in a {self.n}-site algebra")
        return row_space_contains(self.rows, string.vector())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraBasis):
            return NotImplemented
        return self.n == other.n and self.rows.shape == other.rows.shape and np.array_equal(self.rows, other.rows)

    def __hash__(self) -> int:
        return hash((self.n, self.rows.shape, np.packbits(self.rows).tobytes()))

    def to_hex(self) -> List[str]:
        """Rows as hex integers; bit k of the integer is column k of (x|z)."""
        width = (2 * self.n + 3) // 4
        return [format(sum(1 << int(k) for k in np.flatnonzero(row)), f'0{width}x') for row in self.rows]

    @classmethod
    def from_hex(cls, n: int, rows: Sequence[str]) -> "AlgebraBasis":
        vectors = np.zeros((len(rows), 2 * n), dtype=bool)
        for i, text in enumerate(rows):
            value = int(text, 16)
            if value >> (2 * n):
                raise ValueError(f"Row {text} has bits beyond {2 * n} columns")
            for k in range(2 * n):
                vectors[i, k] = bool(value >> k & 1)
        return cls(n, vectors)

    def to_dict(self) -> dict:
        return {'n': self.n, 'dim_log': self.dim_log, 'rows': self.to_hex()}


class NetRule(Enum):
    """Assignment of algebras to regions."""
    FULL = "full"  # every string supported in the region


@dataclass
class NetAssignment:
    """A region family on a causet with its algebra rule; site i is point i."""
    causet: Causet
    family: List[Region]
    rule: NetRule = NetRule.FULL

    @property
    def n_sites(self) -> int:
        return self.causet.n

    def algebra(self, points: Iterable[int]) -> AlgebraBasis:
        if self.rule is NetRule.FULL:
            return AlgebraBasis.supported_on(self.n_sites, points)
        raise ValueError(f"Unsupported net rule {self.rule}")
