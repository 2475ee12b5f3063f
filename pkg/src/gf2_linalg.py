"""GF(2) linear algebra: bit-packed matrices, incremental spans and span enumeration."""
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np


def _row_bytes(cols: int) -> int:
    return max(1, (cols + 7) // 8)


@dataclass(frozen=True)
class RowReduceResult:
    matrix: "Gf2Matrix"
    rank: int
    pivots: Tuple[int, ...]


class Gf2Matrix:
    """
    Dense matrix over GF(2) with every row packed little-endian into uint8 words.

    Entry (r, c) is bit (c % 8) of word c // 8 of row r, so a row converts to and from
    a Python integer whose bit c is the entry in column c. Row operations XOR whole
    packed rows at once.

    Attributes:
        rows (int): Number of rows.
        cols (int): Number of columns.
    """

    def __init__(self, rows: int, cols: int, words: Optional[np.ndarray] = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self._rows = rows
        self._cols = cols
        width = _row_bytes(cols)
        if words is None:
            words = np.zeros((rows, width), dtype=np.uint8)
        elif words.shape != (rows, width) or words.dtype != np.uint8:
            raise ValueError(f"packed words must have shape {(rows, width)} and dtype uint8")
        self._words = words

    @classmethod
    def from_row_ints(cls, rows: Sequence[int], cols: int) -> "Gf2Matrix":
        width = _row_bytes(cols)
        words = np.zeros((len(rows), width), dtype=np.uint8)
        for index, row in enumerate(rows):
            if row >> cols:
                raise ValueError(f"row {index} has bits beyond column {cols - 1}")
            words[index] = np.frombuffer(row.to_bytes(width, "little"), dtype=np.uint8)
        return cls(len(rows), cols, words)

    @classmethod
    def from_column_ints(cls, columns: Sequence[int], rows: int) -> "Gf2Matrix":
        """Builds the matrix whose column j has bit r set iff columns[j] has bit r set."""
        row_ints = []
        for r in range(rows):
            row = 0
            for c, column in enumerate(columns):
                if (column >> r) & 1:
                    row |= 1 << c
            row_ints.append(row)
        return cls.from_row_ints(row_ints, len(columns))

    @classmethod
    def identity(cls, size: int) -> "Gf2Matrix":
        return cls.from_row_ints([1 << i for i in range(size)], size)

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    def get(self, r: int, c: int) -> int:
        return int((self._words[r, c >> 3] >> (c & 7)) & 1)

    def row_int(self, r: int) -> int:
        return int.from_bytes(self._words[r].tobytes(), "little")

    def column_int(self, c: int) -> int:
        bits = (self._words[:, c >> 3] >> (c & 7)) & 1
        return sum(int(bit) << r for r, bit in enumerate(bits))

    def apply(self, vector: int) -> int:
        """Matrix-vector product; vector bit c is coordinate c, result bit r is row r."""
        result = 0
        for r in range(self._rows):
            if bin(self.row_int(r) & vector).count("1") & 1:
                result |= 1 << r
        return result

    def row_reduce(self) -> RowReduceResult:
        """
        Reduced row echelon form by Gauss-Jordan elimination.

        Returns:
            RowReduceResult: The reduced matrix, its rank and the pivot columns.
        """
        words = self._words.copy()
        pivots: List[int] = []
        row = 0
        for col in range(self._cols):
            if row == self._rows:
                break
            word, shift = col >> 3, col & 7
            hits = np.flatnonzero((words[row:, word] >> shift) & 1)
            if hits.size == 0:
                continue
            pivot = row + int(hits[0])
            if pivot != row:
                words[[row, pivot]] = words[[pivot, row]]
            mask = ((words[:, word] >> shift) & 1).astype(bool)
            mask[row] = False
            words[mask] ^= words[row]
            pivots.append(col)
            row += 1
        reduced = Gf2Matrix(self._rows, self._cols, words)
        return RowReduceResult(matrix=reduced, rank=len(pivots), pivots=tuple(pivots))

    def rank(self) -> int:
        return self.row_reduce().rank

    def nullspace(self) -> List[int]:
        """Basis of {v : self.apply(v) = 0}, one vector per free column."""
        reduced = self.row_reduce()
        pivot_set = set(reduced.pivots)
        basis = []
        for free in range(self._cols):
            if free in pivot_set:
                continue
            vector = 1 << free
            for prow, pcol in enumerate(reduced.pivots):
                if reduced.matrix.get(prow, free):
                    vector |= 1 << pcol
            basis.append(vector)
        return basis

    def solve(self, rhs: int) -> Optional[int]:
        """
        One solution of self.apply(x) = rhs, free coordinates set to zero.

        Args:
            rhs: Right-hand side, bit r for row r.

        Returns:
            The solution vector, or None when the system is inconsistent.
        """
        augmented = Gf2Matrix.from_row_ints(
            [self.row_int(r) | (((rhs >> r) & 1) << self._cols) for r in range(self._rows)],
            self._cols + 1,
        )
        reduced = augmented.row_reduce()
        if reduced.pivots and reduced.pivots[-1] == self._cols:
            return None
        solution = 0
        for prow, pcol in enumerate(reduced.pivots):
            if reduced.matrix.get(prow, self._cols):
                solution |= 1 << pcol
        return solution

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return (self._rows, self._cols) == (other._rows, other._cols) and np.array_equal(
            self._words, other._words
        )

    def __repr__(self) -> str:
        return f"Gf2Matrix({self._rows}x{self._cols}, rank={self.rank()})"


class Gf2Span:
    """Incrementally built GF(2) subspace of integer-encoded vectors."""

    def __init__(self, vectors: Sequence[int] = ()):
        self._pivots: Dict[int, int] = {}
        for vector in vectors:
            self.add(vector)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, vector: int) -> int:
        while vector:
            pivot = self._pivots.get(vector.bit_length() - 1)
            if pivot is None:
                return vector
            vector ^= pivot
        return 0

    def add(self, vector: int) -> bool:
        """Adds vector to the span; returns True if the rank grew."""
        reduced = self.reduce(vector)
        if reduced == 0:
            return False
        self._pivots[reduced.bit_length() - 1] = reduced
        return True

    def __contains__(self, vector: int) -> bool:
        return self.reduce(vector) == 0


def independent_subset(vectors: Sequence[int]) -> List[int]:
    """Indices of the vectors that increase the rank, scanning in order."""
    span = Gf2Span()
    return [index for index, vector in enumerate(vectors) if span.add(vector)]


def enumerate_span(basis: Sequence[int], offset: int = 0) -> Iterator[int]:
    """
    Every element of offset + span(basis), walked in Gray-code order.

    Args:
        basis: Linearly independent integer-encoded vectors.
        offset: Coset representative (0 for the span itself).

    Returns:
        An iterator of 2^len(basis) distinct vectors.
    """
    current = offset
    yield current
    for step in range(1, 1 << len(basis)):
        # the bit that flips between Gray codes step-1 and step
        current ^= basis[(step & -step).bit_length() - 1]
        yield current
