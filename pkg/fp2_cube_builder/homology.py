from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Optional, Sequence

import networkx as nx
from networkx.utils import UnionFind
from sympy import Matrix, factorint
from sympy.matrices.normalforms import smith_normal_form as dense_smith_normal_form
from sympy.polys.domains import ZZ

from fp2_cube_builder.simplicial import SimplicialComplex, Simplex

LOGGER = logging.getLogger(__name__)

DENSE_THRESHOLD: float = 0.5


@dataclass
class IntegerMatrix:
    """Sparse integer matrix; absent entries are zero."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> IntegerMatrix:
        n_cols = len(rows[0]) if rows else 0
        entries = {
            (i, j): int(value)
            for i, row in enumerate(rows)
            for j, value in enumerate(row)
            if value
        }
        return cls(len(rows), n_cols, entries)

    @classmethod
    def from_columns(
        cls, rows: int, columns: Iterable[dict[int, int]]
    ) -> IntegerMatrix:
        entries: dict[tuple[int, int], int] = {}
        n_cols = 0
        for j, column in enumerate(columns):
            n_cols = j + 1
            entries.update({(i, j): v for i, v in column.items() if v})
        return cls(rows, n_cols, entries)

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            dense[i][j] = value
        return dense

    def compose(self, other: IntegerMatrix) -> IntegerMatrix:
        """Matrix product self * other."""
        if self.cols != other.rows:
            raise ValueError(
                f"Cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (i, j), value in self.entries.items():
            by_row.setdefault(j, []).append((i, value))
        product: dict[tuple[int, int], int] = {}
        for (k, j), value in other.entries.items():
            for i, left in by_row.get(k, ()):
                product[(i, j)] = product.get((i, j), 0) + left * value
        return IntegerMatrix(
            self.rows, other.cols, {key: v for key, v in product.items() if v}
        )

    def hstack(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.rows != other.rows:
            raise ValueError("Row counts differ")
        entries = dict(self.entries)
        entries.update({(i, j + self.cols): v for (i, j), v in other.entries.items()})
        return IntegerMatrix(self.rows, self.cols + other.cols, entries)

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def dumps_triplets(self) -> str:
        """Coordinate triplet dump, one "row col value" line per entry."""
        lines = [f"{i} {j} {v}" for (i, j), v in sorted(self.entries.items()) if v]
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class SNFResult:
    divisors: tuple[int, ...]
    rank: int
    transforms: Optional[tuple[Any, Any]] = None


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...] = ()

    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion

    def to_data(self) -> dict[str, Any]:
        return {"betti": self.betti, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        summands = [f"Z/{t}" for t in self.torsion]
        if self.betti:
            summands.insert(0, "Z" if self.betti == 1 else f"Z^{self.betti}")
        return " + ".join(summands) or "0"


def invariant_factors(values: Iterable[int]) -> tuple[int, ...]:
    """
    Turn the non-zero diagonal of any diagonalisation into the divisibility
    chain d1 | d2 | ... through elementary divisors.
    """
    nonzero = [abs(v) for v in values if v]
    factors = [1] * len(nonzero)
    powers: dict[int, list[int]] = {}
    for value in nonzero:
        for prime, exponent in factorint(value).items():
            powers.setdefault(prime, []).append(exponent)
    for prime, exponents in powers.items():
        exponents.sort(reverse=True)
        for offset, exponent in enumerate(exponents):
            factors[len(factors) - 1 - offset] *= prime**exponent
    return tuple(factors)


class _SparseEliminator:
    """
    Unit-pivot elimination with Markowitz-style pivot choice. Every pivot of
    absolute value one contributes an invariant factor 1 and removes its row
    and column without changing the remaining invariant factors.
    """

    def __init__(self, matrix: IntegerMatrix):
        self._rows: dict[int, dict[int, int]] = {}
        self._cols: dict[int, set[int]] = {}
        self._nnz = 0
        for (i, j), value in matrix.entries.items():
            if value:
                self._rows.setdefault(i, {})[j] = value
                self._cols.setdefault(j, set()).add(i)
                self._nnz += 1
        self.unit_pivots = 0

    def density(self) -> float:
        size = len(self._rows) * len(self._cols)
        return self._nnz / size if size else 0.0

    def _best_unit_row(self, col: int) -> Optional[int]:
        best: Optional[int] = None
        for row in self._cols[col]:
            if abs(self._rows[row][col]) == 1 and (
                best is None or len(self._rows[row]) < len(self._rows[best])
            ):
                best = row
        return best

    def _set(self, row: int, col: int, value: int) -> None:
        entries = self._rows[row]
        if value:
            if col not in entries:
                self._cols.setdefault(col, set()).add(row)
                self._nnz += 1
            entries[col] = value
        elif col in entries:
            del entries[col]
            self._cols[col].discard(row)
            self._nnz -= 1

    def _pivot(self, row: int, col: int) -> set[int]:
        pivot_entries = self._rows.pop(row)
        unit = pivot_entries[col]
        for other_col in pivot_entries:
            self._cols[other_col].discard(row)
        self._nnz -= len(pivot_entries)
        for other_row in list(self._cols[col]):
            factor = self._rows[other_row][col] * unit
            for other_col, value in pivot_entries.items():
                current = self._rows[other_row].get(other_col, 0)
                self._set(other_row, other_col, current - factor * value)
            if not self._rows[other_row]:
                del self._rows[other_row]
        del self._cols[col]
        touched = set(pivot_entries) - {col}
        for other_col in list(touched):
            if not self._cols[other_col]:
                del self._cols[other_col]
                touched.discard(other_col)
        self.unit_pivots += 1
        return touched

    def eliminate(self, dense_threshold: float) -> None:
        heap = [(len(rows), col) for col, rows in self._cols.items()]
        heapq.heapify(heap)
        while heap:
            size, col = heapq.heappop(heap)
            rows = self._cols.get(col)
            if rows is None:
                continue
            if len(rows) != size:
                heapq.heappush(heap, (len(rows), col))
                continue
            row = self._best_unit_row(col)
            if row is None:
                continue
            for touched in self._pivot(row, col):
                heapq.heappush(heap, (len(self._cols[touched]), touched))
            if self.density() > dense_threshold and len(self._rows) > 1:
                break

    def remainder(self) -> list[list[int]]:
        row_ids = sorted(self._rows)
        col_ids = sorted(self._cols)
        return [[self._rows[i].get(j, 0) for j in col_ids] for i in row_ids]


def _dense_divisors(rows: list[list[int]]) -> list[int]:
    if not rows or not rows[0]:
        return []
    snf = dense_smith_normal_form(Matrix(rows), domain=ZZ)
    return [
        abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0
    ]


def smith_normal_form(
    matrix: IntegerMatrix, dense_threshold: float = DENSE_THRESHOLD
) -> SNFResult:
    """
    Invariant factors of an integer matrix: sparse unit-pivot elimination
    followed by a dense Smith normal form of whatever is left.
    """
    eliminator = _SparseEliminator(matrix)
    eliminator.eliminate(dense_threshold)
    rest = eliminator.remainder()
    if rest:
        LOGGER.debug(
            "SNF of %dx%d: %d unit pivots, dense remainder %dx%d",
            matrix.rows,
            matrix.cols,
            eliminator.unit_pivots,
            len(rest),
            len(rest[0]),
        )
    divisors = invariant_factors(
        [1] * eliminator.unit_pivots + _dense_divisors(rest)
    )
    return SNFResult(divisors, len(divisors))


def boundary_matrix(complex_: SimplicialComplex, k: int) -> IntegerMatrix:
    """
    Augmented boundary map from k-faces to (k-1)-faces; k = 0 maps every
    vertex to the empty face.
    """
    targets = complex_.faces(k - 1)
    sources = complex_.faces(k)
    index: dict[Simplex, int] = {face: i for i, face in enumerate(targets)}
    entries: dict[tuple[int, int], int] = {}
    for j, face in enumerate(sources):
        for i in range(len(face)):
            entries[(index[face[:i] + face[i + 1 :]], j)] = -1 if i % 2 else 1
    return IntegerMatrix(len(targets), len(sources), entries)


def boundary_matrices(complex_: SimplicialComplex) -> list[IntegerMatrix]:
    """Boundary maps indexed by source dimension 0..dim."""
    return [boundary_matrix(complex_, k) for k in range(complex_.dimension + 1)]


@lru_cache(maxsize=4096)
def _boundary_snf(complex_: SimplicialComplex, k: int) -> SNFResult:
    if k < 0 or k > complex_.dimension:
        return SNFResult((), 0)
    return smith_normal_form(boundary_matrix(complex_, k))


def homology(complex_: SimplicialComplex, i: int) -> HomologyGroup:
    """Reduced integral homology in dimension i."""
    if i < -1 or i > complex_.dimension:
        return HomologyGroup(0)
    chains = len(complex_.faces(i))
    outgoing = _boundary_snf(complex_, i)
    incoming = _boundary_snf(complex_, i + 1)
    betti = chains - outgoing.rank - incoming.rank
    torsion = tuple(d for d in incoming.divisors if d > 1)
    return HomologyGroup(betti, torsion)


def connected_components(complex_: SimplicialComplex) -> int:
    forest = UnionFind(complex_.vertices)
    for a, b in complex_.faces(1):
        forest.union(a, b)
    return len(list(forest.to_sets()))


def _edge_column(
    index: dict[Simplex, int], order: dict[Any, int], a: Any, b: Any
) -> tuple[int, int]:
    if order[a] < order[b]:
        return index[(a, b)], 1
    return index[(b, a)], -1


def fundamental_cycles(
    small: SimplicialComplex, big: SimplicialComplex
) -> list[dict[int, int]]:
    """
    A Z-basis of the cycle space of small's 1-skeleton, written in the edge
    coordinates of big (which must contain small).
    """
    index = {edge: i for i, edge in enumerate(big.faces(1))}
    order = {v: big.sort_key(v) for v in big.vertices}
    cycles: list[dict[int, int]] = []
    graph = small.graph()
    for component in nx.connected_components(graph):
        root = min(component, key=order.__getitem__)
        parent: dict[Any, Any] = {}
        depth = {root: 0}
        for node, up in nx.bfs_predecessors(graph, root):
            parent[node] = up
            depth[node] = depth[up] + 1
        tree = {frozenset((child, up)) for child, up in parent.items()}
        for a, b in graph.subgraph(component).edges():
            if frozenset((a, b)) in tree:
                continue
            cycle: dict[int, int] = {}

            def add(u: Any, v: Any) -> None:
                col, sign = _edge_column(index, order, u, v)
                cycle[col] = cycle.get(col, 0) + sign

            add(a, b)
            u, v = b, a
            # walk b and a up to their common ancestor
            up_b: list[Any] = []
            up_a: list[Any] = []
            while u != v:
                if depth[u] >= depth[v]:
                    up_b.append(u)
                    u = parent[u]
                else:
                    up_a.append(v)
                    v = parent[v]
            for node in up_b:
                add(node, parent[node])
            for node in reversed(up_a):
                add(parent[node], node)
            cycles.append({c: s for c, s in cycle.items() if s})
    return cycles


@dataclass(frozen=True)
class InclusionReport:
    h0_iso: bool
    h1_surjective: bool
    h1_iso: bool
    h1_small: HomologyGroup
    h1_big: HomologyGroup

    def to_data(self) -> dict[str, Any]:
        return {
            "h0_iso": self.h0_iso,
            "h1_surjective": self.h1_surjective,
            "h1_iso": self.h1_iso,
            "h1_small": self.h1_small.to_data(),
            "h1_big": self.h1_big.to_data(),
        }


def inclusion_h0_iso(small: SimplicialComplex, big: SimplicialComplex) -> bool:
    """Whether the inclusion induces a bijection on connected components."""
    forest = UnionFind(big.vertices)
    for a, b in big.faces(1):
        forest.union(a, b)
    small_components = list(nx.connected_components(small.graph()))
    hit = {forest[next(iter(component))] for component in small_components}
    return len(hit) == len(small_components) == connected_components(big)


def inclusion_h1_surjective(small: SimplicialComplex, big: SimplicialComplex) -> bool:
    """
    H1(small) -> H1(big) is onto iff the cycles of small together with the
    2-boundaries of big span the full, saturated cycle lattice of big.
    """
    edges = len(big.faces(1))
    if edges == 0:
        return True
    cycles = IntegerMatrix.from_columns(edges, fundamental_cycles(small, big))
    spanned = smith_normal_form(cycles.hstack(boundary_matrix(big, 2)))
    cycle_rank = edges - _boundary_snf(big, 1).rank
    return spanned.rank == cycle_rank and all(d == 1 for d in spanned.divisors)


def inclusion_report(small: SimplicialComplex, big: SimplicialComplex) -> InclusionReport:
    if not small.vertices <= big.vertices or not all(
        big.has_face(face) for face in small.maximal_faces
    ):
        raise ValueError("First complex is not a subcomplex of the second")
    h1_small = homology(small, 1)
    h1_big = homology(big, 1)
    surjective = inclusion_h1_surjective(small, big)
    return InclusionReport(
        h0_iso=inclusion_h0_iso(small, big),
        h1_surjective=surjective,
        h1_iso=surjective and h1_small == h1_big,
        h1_small=h1_small,
        h1_big=h1_big,
    )
