"""
Link shapes of the blowup of V_n * V_n * V_n and S(S(L')), built from L alone
so that computed links can be compared against them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Sequence

from fp2_cube_builder.simplicial import (
    SimplicialComplex,
    Vertex,
    barycentric_subdivision,
    is_flag,
    join,
    link,
    octahedralise,
)
from fp2_cube_builder.util import cycle, discrete_set, sphere0

LOGGER = logging.getLogger(__name__)

# Rows of the vertex link table, keyed by side pattern.
TABLE1_ROWS: dict[str, str] = {
    "AAA": "S(S(L'))",
    "AAB": "S(S(hexagon)) * V4",
    "ABA": "S(S(V_n * S0)) * V4",
    "ABB": "S(S(S0)) * V4 * V4",
    "BAA": "S(S(Lambda')) * V4",
    "BAB": "S(S(S0)) * V4 * V4",
    "BBA": "S(S(V_n)) * V4 * V4",
    "BBB": "V4 * V4 * V4",
}

# Rows of the ascending/descending link table; both links have the same shape.
TABLE2_ROWS: dict[str, str] = {
    "AAA": "S(L')",
    "AAB": "S(hexagon) * S0",
    "ABA": "S(V_n * S0) * S0",
    "ABB": "S(S0) * S0 * S0",
    "BAA": "S(Lambda') * S0",
    "BAB": "S(S0) * S0 * S0",
    "BBA": "S(V_n) * S0 * S0",
    "BBB": "S0 * S0 * S0",
}

Chain = Sequence[tuple[tuple[Vertex, ...], int]]


def lprime_vertex(vertex: Vertex) -> tuple[tuple[Vertex, ...], int]:
    """Barycentre (face, dimension) under a vertex ((barycentre, s1), s2) of S(S(L'))."""
    (inner, _), _ = vertex  # type: ignore[misc]
    return inner  # type: ignore[no-any-return]


def _cofaces(complex_: SimplicialComplex, face: Iterable[Vertex], dimension: int) -> int:
    target = frozenset(face)
    return sum(1 for f in complex_.faces(dimension) if target <= frozenset(f))


def shape_key(complex_: SimplicialComplex, chain: Chain) -> tuple[Hashable, ...]:
    """What determines Lk(chain, L') up to isomorphism."""
    dims = tuple(sorted(d for _, d in chain))
    by_dim = dict((d, f) for f, d in chain)
    if dims in ((1,), (0, 1)):
        return dims, _cofaces(complex_, by_dim[1], 2)
    if dims == (0,):
        return dims, by_dim[0]
    return (dims,)


def lprime_link_model(complex_: SimplicialComplex, chain: Chain) -> SimplicialComplex:
    """
    Lk(chain, L') for a chain of faces of a 2-dimensional L, by cases on the
    dimensions occurring in the chain.
    """
    dims = tuple(sorted(d for _, d in chain))
    if len(set(dims)) != len(dims):
        raise ValueError(f"Not a chain of faces: dimensions {dims}")
    by_dim = dict((d, f) for f, d in chain)
    if dims == ():
        return barycentric_subdivision(complex_)
    if dims == (2,):
        return cycle(6, "h")
    if dims == (1,):
        return join(discrete_set(_cofaces(complex_, by_dim[1], 2), "t"), sphere0("e"))
    if dims == (0,):
        return barycentric_subdivision(link(complex_, by_dim[0]))
    if dims in ((1, 2), (0, 2)):
        return sphere0("e")
    if dims == (0, 1):
        return discrete_set(_cofaces(complex_, by_dim[1], 2), "t")
    if dims == (0, 1, 2):
        return SimplicialComplex([])
    raise ValueError(f"No link model for a chain with dimensions {dims}")


def _join_discrete(base: SimplicialComplex, sizes: Iterable[int]) -> SimplicialComplex:
    result = base
    for i, size in enumerate(sizes):
        result = join(result, discrete_set(size, f"a{i}_"))
    return result


def table1_target(
    complex_: SimplicialComplex, chain: Chain, a_sizes: Iterable[int]
) -> SimplicialComplex:
    """S(S(Lk(chain, L'))) * V_{|A_i|} over the B coordinates of a vertex."""
    model = lprime_link_model(complex_, chain)
    return _join_discrete(octahedralise(octahedralise(model)), a_sizes)


def table2_target(
    complex_: SimplicialComplex, chain: Chain, a_sizes: Iterable[int]
) -> SimplicialComplex:
    """S(Lk(chain, L')) * V_{|A_i^s|}; a_sizes counts the reachable half of each A_i."""
    model = lprime_link_model(complex_, chain)
    return _join_discrete(octahedralise(model), a_sizes)


def generator_b(complex_: SimplicialComplex) -> SimplicialComplex:
    """Gamma_B = S(S(L')) with parts given by barycentre dimension."""
    return octahedralise(octahedralise(barycentric_subdivision(complex_)))


def is_complete_partite(complex_: SimplicialComplex) -> bool:
    """Whether a partite complex is the join of its parts."""
    if complex_.parts is None or not is_flag(complex_):
        return False
    parts = complex_.parts
    return all(
        parts[a] == parts[b] or complex_.has_face((a, b))
        for a in complex_.vertices
        for b in complex_.vertices
    )


@dataclass
class TableRow:
    pattern: str
    formula: str
    checked: int = 0
    passed: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checked == self.passed

    def to_data(self) -> dict[str, Any]:
        return {
            "pattern": self.pattern,
            "formula": self.formula,
            "checked": self.checked,
            "passed": self.passed,
            "failures": self.failures[:10],
        }


@dataclass
class TableReport:
    name: str
    rows: dict[str, TableRow] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows.values())

    def row(self, pattern: str, formula: str) -> TableRow:
        if pattern not in self.rows:
            self.rows[pattern] = TableRow(pattern, formula)
        return self.rows[pattern]

    def record(self, pattern: str, formula: str, passed: bool, witness: str) -> None:
        row = self.row(pattern, formula)
        row.checked += 1
        if passed:
            row.passed += 1
        else:
            row.failures.append(witness)
            LOGGER.warning("%s: %s row fails at %s", self.name, pattern, witness)

    def to_data(self) -> dict[str, Any]:
        return {
            "table": self.name,
            "ok": self.ok,
            "rows": [self.rows[p].to_data() for p in sorted(self.rows)],
        }
