from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx

from fp2_cube_builder._utils import MINUS, PLUS, sort_vertices
from fp2_cube_builder.blowup import (
    SIDE_A,
    SIDE_B,
    Coordinate,
    Cube,
    CubeComplex,
    CubeVertex,
    check_standard_shapes,
    matches_shape,
    vertex_link,
)
from fp2_cube_builder.errors import PreconditionError, VerificationError
from fp2_cube_builder.homology import HomologyGroup, InclusionReport, homology, inclusion_report
from fp2_cube_builder.presentation import fundamental_group_presentation, tietze_simplify
from fp2_cube_builder.report import Assumption
from fp2_cube_builder.simplicial import (
    SimplicialComplex,
    is_flag,
    is_isomorphic,
    is_retraction,
    join_factors,
)
from fp2_cube_builder.tables import (
    TABLE2_ROWS,
    TableReport,
    lprime_vertex,
    shape_key,
    table2_target,
)

LOGGER = logging.getLogger(__name__)

ASCENDING: str = "ascending"
DESCENDING: str = "descending"

WINDOW_MODEL: str = "order complex of the lifted cells meeting the level window"


@dataclass(frozen=True)
class MorseOrientation:
    """
    Signs on the tagged vertices of every A_i and B_i. The edge a - b of
    A_i * B_i points from a to b when the signs agree and from b to a otherwise.
    """

    sign_of: Mapping[Coordinate, str]

    def sign(self, coordinate: Coordinate) -> str:
        try:
            return self.sign_of[coordinate]
        except KeyError as e:
            raise ValueError(f"No sign given for {coordinate!r}") from e

    def weight(self, source: Coordinate, target: Coordinate) -> int:
        """+1 when traversing the edge source - target along its orientation."""
        if source[0] == target[0]:
            raise ValueError(f"{source!r} and {target!r} are not joined by an edge")
        agree = self.sign(source) == self.sign(target)
        forward = agree if source[0] == SIDE_A else not agree
        return 1 if forward else -1

    def axis_weight(self, axis: Sequence[Coordinate]) -> int:
        """Level change from the A end to the B end of an edge."""
        return self.weight(axis[0], axis[1])

    def plus(self, side: str, values: Iterable[Any]) -> list[Any]:
        return [v for v in values if self.sign((side, v)) == PLUS]

    def to_data(self) -> dict[str, Any]:
        return {
            f"{side}:{value}": sign
            for (side, value), sign in sorted(self.sign_of.items(), key=str)
        }


def default_orientation(
    complex_: CubeComplex,
    a_plus: Optional[Sequence[Iterable[Any]]] = None,
    a_plus_size: int = 2,
) -> MorseOrientation:
    """
    A_i^+ is given explicitly or is the first a_plus_size vertices of A_i in
    vertex order; B signs are the outer octahedralisation signs.
    """
    signs: dict[Coordinate, str] = {}
    for i in range(complex_.n_coordinates):
        values = complex_.values(SIDE_A, i)
        chosen = set(values[:a_plus_size]) if a_plus is None else set(a_plus[i])
        unknown = chosen - set(values)
        if unknown:
            raise ValueError(f"A^+ of coordinate {i + 1} names non-vertices {sorted(map(str, unknown))}")
        for value in values:
            signs[(SIDE_A, value)] = PLUS if value in chosen else MINUS
        for value in complex_.values(SIDE_B, i):
            if not (isinstance(value, tuple) and len(value) == 2 and value[1] in (PLUS, MINUS)):
                raise PreconditionError(f"B vertex {value!r} carries no octahedralisation sign")
            signs[(SIDE_B, value)] = value[1]
    return MorseOrientation(signs)


@dataclass(frozen=True)
class OrientedEdges:
    heads: dict[Cube, CubeVertex]
    tails: dict[Cube, CubeVertex]
    squares_checked: int


def _step(orientation: MorseOrientation, source: CubeVertex, target: CubeVertex) -> int:
    (i,) = [k for k in range(len(source.coords)) if source.tagged(k) != target.tagged(k)]
    return orientation.weight(source.tagged(i), target.tagged(i))


def orient_edges(complex_: CubeComplex, orientation: MorseOrientation) -> OrientedEdges:
    heads: dict[Cube, CubeVertex] = {}
    tails: dict[Cube, CubeVertex] = {}
    for edge in complex_.cubes_of_dim(1):
        first, second = edge.vertices()
        if _step(orientation, first, second) > 0:
            tails[edge], heads[edge] = first, second
        else:
            tails[edge], heads[edge] = second, first
    squares = complex_.cubes_of_dim(2)
    for square in squares:
        corner = square.a_corner()
        i, j = square.directions()
        around = [
            corner,
            corner.moved(i, square.axes[i][1]),
            corner.moved(i, square.axes[i][1]).moved(j, square.axes[j][1]),
            corner.moved(j, square.axes[j][1]),
        ]
        total = sum(
            _step(orientation, around[k], around[(k + 1) % 4]) for k in range(4)
        )
        if total != 0:
            raise VerificationError(f"Weight sum {total} around square {square}")
    return OrientedEdges(heads, tails, len(squares))


def _directed_link(
    complex_: CubeComplex,
    orientation: MorseOrientation,
    vertex: CubeVertex,
    ascending: bool,
) -> SimplicialComplex:
    if vertex not in complex_.vertices:
        raise ValueError(f"{vertex} is not a vertex of the complex")
    full = complex_.joined_link(vertex)
    assert full.parts is not None
    chosen = [
        w
        for w in full.vertices
        if (orientation.weight(vertex.tagged(full.parts[w] - 1), w) > 0) == ascending
    ]
    return full.induced(chosen)


def ascending_link(
    complex_: CubeComplex, orientation: MorseOrientation, vertex: CubeVertex
) -> SimplicialComplex:
    return _directed_link(complex_, orientation, vertex, True)


def descending_link(
    complex_: CubeComplex, orientation: MorseOrientation, vertex: CubeVertex
) -> SimplicialComplex:
    return _directed_link(complex_, orientation, vertex, False)


def link_retraction_check(
    complex_: CubeComplex, orientation: MorseOrientation, vertex: CubeVertex
) -> bool:
    """
    For a vertex with all coordinates in A: folding every B sign onto the
    ascending sign of its coordinate retracts the link onto the ascending link.
    """
    if vertex.delta_b():
        raise PreconditionError(f"{vertex} has B coordinates")
    full = vertex_link(complex_, vertex)
    up = ascending_link(complex_, orientation, vertex)
    assert full.parts is not None
    mapping: dict[Any, Any] = {}
    for side, value in full.vertices:
        inner, _ = value
        i = full.parts[(side, value)] - 1
        mapping[(side, value)] = (side, (inner, orientation.sign(vertex.tagged(i))))
    return is_retraction(full, up, mapping)


def verify_table2(
    complex_: CubeComplex, orientation: MorseOrientation, base: SimplicialComplex
) -> TableReport:
    check_standard_shapes(complex_, base)
    report = TableReport("table2")
    targets: dict[Any, SimplicialComplex] = {}
    verdicts: dict[tuple[Any, SimplicialComplex], bool] = {}
    a_values = [complex_.values(SIDE_A, i) for i in range(complex_.n_coordinates)]
    for vertex in complex_.sorted_vertices():
        chain = [lprime_vertex(b) for b in vertex.delta_b()]
        full = complex_.joined_link(vertex)
        links = {
            ASCENDING: ascending_link(complex_, orientation, vertex),
            DESCENDING: descending_link(complex_, orientation, vertex),
        }
        if sum(len(k.vertices) for k in links.values()) != len(full.vertices):
            raise VerificationError(f"Link of {vertex} is not split by the orientation")
        for kind, directed in links.items():
            sizes = []
            for i, side in enumerate(vertex.sides):
                if side != SIDE_B:
                    continue
                sign = orientation.sign(vertex.tagged(i))
                # B -> A edges leave a B vertex towards the opposite sign
                wanted = sign if kind == DESCENDING else (MINUS if sign == PLUS else PLUS)
                sizes.append(
                    sum(orientation.sign((SIDE_A, a)) == wanted for a in a_values[i])
                )
            key = (kind, shape_key(base, chain), tuple(sizes))
            if key not in targets:
                targets[key] = table2_target(base, chain, sizes)
            if (key, directed) not in verdicts:
                verdicts[(key, directed)] = matches_shape(directed, targets[key])
            report.record(
                f"{vertex.pattern}:{kind}",
                TABLE2_ROWS[vertex.pattern],
                verdicts[(key, directed)],
                str(vertex),
            )
    LOGGER.info(
        "Ascending/descending table checked on %d vertices, %d distinct links",
        len(complex_.vertices),
        len(verdicts),
    )
    return report


@dataclass(frozen=True)
class LevelFunction:
    """Levels on the cyclic cover: vertex v lifts to height[v] + period[v] * Z."""

    height: dict[CubeVertex, int]
    period: dict[CubeVertex, int]

    def levels(self, vertex: CubeVertex, low: int, high: int) -> list[int]:
        h, p = self.height[vertex], self.period[vertex]
        if p == 0:
            return [h] if low <= h <= high else []
        first = low + (h - low) % p
        return list(range(first, high + 1, p))


def _edge_graph(complex_: CubeComplex) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(complex_.vertices)
    for edge in complex_.cubes_of_dim(1):
        graph.add_edge(*edge.vertices())
    return graph


def level_function(complex_: CubeComplex, orientation: MorseOrientation) -> LevelFunction:
    graph = _edge_graph(complex_)
    height: dict[CubeVertex, int] = {}
    period: dict[CubeVertex, int] = {}
    for component in nx.connected_components(graph):
        root = sort_vertices(component)[0]
        height[root] = 0
        for parent, child in nx.bfs_edges(graph, root, sort_neighbors=sort_vertices):
            height[child] = height[parent] + _step(orientation, parent, child)
        gcd = 0
        for u, v in graph.subgraph(component).edges():
            gcd = math.gcd(gcd, height[u] + _step(orientation, u, v) - height[v])
        period.update({v: gcd for v in component})
    return LevelFunction(height, period)


LiftedCell = tuple[Cube, int]


def _offsets(orientation: MorseOrientation, cube: Cube) -> tuple[int, int]:
    weights = [orientation.axis_weight(cube.axes[i]) for i in cube.directions()]
    return sum(min(0, w) for w in weights), sum(max(0, w) for w in weights)


@dataclass
class LevelWindow:
    """
    Cells of the cyclic cover over a level window. A lifted cell is a cube
    with the level of its A corner. cells holds the maximal subcomplex with
    every vertex inside the window, meeting every cell whose level range
    meets it.
    """

    base: CubeComplex
    orientation: MorseOrientation
    low: int
    high: int
    cells: frozenset[LiftedCell]
    meeting: frozenset[LiftedCell]

    @property
    def range(self) -> tuple[int, int]:
        return self.low, self.high

    @property
    def lifted_vertices(self) -> frozenset[tuple[CubeVertex, int]]:
        return frozenset((c.a_corner(), k) for c, k in self.cells if c.dimension == 0)

    def level_counts(self) -> dict[int, int]:
        counts = {k: 0 for k in range(self.low, self.high + 1)}
        for _, level in self.lifted_vertices:
            counts[level] += 1
        return counts

    def facets(self, cell: LiftedCell) -> Iterator[LiftedCell]:
        cube, level = cell
        for i in cube.directions():
            a_end, b_end = cube.axes[i]
            for end, shift in ((a_end, 0), (b_end, self.orientation.weight(a_end, b_end))):
                yield Cube(cube.axes[:i] + ((end,),) + cube.axes[i + 1 :]), level + shift

    @cached_property
    def order_complex(self) -> SimplicialComplex:
        """Homotopy model of the preimage of the window in the cover."""
        below: dict[LiftedCell, list[LiftedCell]] = {
            cell: [f for f in self.facets(cell) if f in self.meeting] for cell in self.meeting
        }
        covered = {f for faces in below.values() for f in faces}
        chains: list[tuple[LiftedCell, ...]] = []

        def descend(prefix: tuple[LiftedCell, ...]) -> None:
            lower = below[prefix[-1]]
            if not lower:
                chains.append(prefix)
            for cell in lower:
                descend(prefix + (cell,))

        for top in self.meeting - covered:
            descend((top,))
        LOGGER.debug("Window [%d, %d] order complex from %d chains", self.low, self.high, len(chains))
        return SimplicialComplex(chains)

    def to_data(self) -> dict[str, Any]:
        return {
            "range": [self.low, self.high],
            "level_counts": {str(k): n for k, n in self.level_counts().items()},
            "cells": len(self.cells),
            "meeting_cells": len(self.meeting),
            "model": WINDOW_MODEL,
        }


def level_window(
    complex_: CubeComplex,
    orientation: MorseOrientation,
    low: int,
    high: int,
    levels: Optional[LevelFunction] = None,
) -> LevelWindow:
    if low > high:
        raise ValueError(f"Empty level range [{low}, {high}]")
    orient_edges(complex_, orientation)
    levels = levels or level_function(complex_, orientation)
    cells: set[LiftedCell] = set()
    meeting: set[LiftedCell] = set()
    for cube in complex_.cubes:
        down, up = _offsets(orientation, cube)
        for level in levels.levels(cube.a_corner(), low - up, high - down):
            meeting.add((cube, level))
            if low <= level + down and level + up <= high:
                cells.add((cube, level))
    window = LevelWindow(complex_, orientation, low, high, frozenset(cells), frozenset(meeting))
    for cube, level in window.cells:
        if cube.dimension == 1:
            (i,) = cube.directions()
            if abs(orientation.axis_weight(cube.axes[i])) != 1:
                raise VerificationError(f"Lifted edge {cube} at level {level} skips a level")
    LOGGER.info("Level window [%d, %d]: %s", low, high, window.level_counts())
    return window


def cyclic_cover_window(
    complex_: CubeComplex, orientation: MorseOrientation, radius: int
) -> LevelWindow:
    if radius < 0:
        raise ValueError(f"Window radius must be non-negative, got {radius}")
    return level_window(complex_, orientation, -radius, radius)


def bfs_window_vertices(
    complex_: CubeComplex, orientation: MorseOrientation, low: int, high: int
) -> set[tuple[CubeVertex, int]]:
    """
    Lifted vertices in a window found by walking the cover from each root at
    level 0. With s the height span of a breadth-first tree, s + 1 bounds
    the period and the walk may leave the window by 3 (s + 1) levels.
    """
    graph = _edge_graph(complex_)
    found: set[tuple[CubeVertex, int]] = set()
    for component in nx.connected_components(graph):
        root = sort_vertices(component)[0]
        tree = {root: 0}
        for parent, child in nx.bfs_edges(graph, root):
            tree[child] = tree[parent] + _step(orientation, parent, child)
        margin = 3 * (max(tree.values()) - min(tree.values()) + 1)
        start = (root, 0)
        seen = {start}
        queue = deque([start])
        while queue:
            vertex, level = queue.popleft()
            if low <= level <= high:
                found.add((vertex, level))
            for neighbour in graph.neighbors(vertex):
                lifted = (neighbour, level + _step(orientation, vertex, neighbour))
                if lifted not in seen and min(low, 0) - margin <= lifted[1] <= max(high, 0) + margin:
                    seen.add(lifted)
                    queue.append(lifted)
    return found


@dataclass(frozen=True)
class WindowComparison:
    small: tuple[int, int]
    big: tuple[int, int]
    inclusion: InclusionReport
    links_connected: bool
    disconnected: tuple[str, ...] = ()

    def to_data(self) -> dict[str, Any]:
        return {
            "small": list(self.small),
            "big": list(self.big),
            "model": WINDOW_MODEL,
            "inclusion": self.inclusion.to_data(),
            "added_links_connected": self.links_connected,
            "disconnected_links": list(self.disconnected[:20]),
        }


def _is_connected(complex_: SimplicialComplex) -> bool:
    return not complex_.is_empty() and nx.is_connected(complex_.graph())


def level_inclusion_homology(small: LevelWindow, big: LevelWindow) -> WindowComparison:
    if small.base is not big.base:
        raise PreconditionError("Windows lie over different complexes")
    if not big.low <= small.low <= small.high <= big.high:
        raise PreconditionError(f"Window {small.range} is not inside {big.range}")
    report = inclusion_report(small.order_complex, big.order_complex)
    disconnected: list[str] = []
    for vertex, level in sorted(big.lifted_vertices, key=lambda x: (x[1], str(x[0]))):
        if small.high < level:
            directed = descending_link(big.base, big.orientation, vertex)
        elif level < small.low:
            directed = ascending_link(big.base, big.orientation, vertex)
        else:
            continue
        if not _is_connected(directed):
            disconnected.append(f"{vertex}@{level}")
    hypothesis = not disconnected
    if hypothesis and not (report.h0_iso and report.h1_surjective):
        raise VerificationError(
            f"Inclusion {small.range} -> {big.range} fails on homology although every added link is connected"
        )
    return WindowComparison(small.range, big.range, report, hypothesis, tuple(disconnected))


def simple_connectivity_certificate(complex_: SimplicialComplex) -> Optional[str]:
    """A sound reason why the complex is simply connected, or None."""
    if not _is_connected(complex_):
        return None
    if is_flag(complex_):
        factors = join_factors(complex_)
        if len(factors) >= 2:
            bound = sum(0 if _is_connected(f) else -1 for f in factors) + 2 * (len(factors) - 1)
            if bound >= 1:
                return f"join of {len(factors)} non-empty factors, connectivity at least {bound}"
    basepoint = sort_vertices(complex_.vertices)[0]
    simplified = tietze_simplify(fundamental_group_presentation(complex_, basepoint))
    if not simplified.generators:
        return "edge-path presentation simplifies to the trivial group"
    return None


@dataclass
class CensusEntry:
    name: str
    kind: str
    pattern: str
    formula: str
    representative: SimplicialComplex
    count: int = 1
    role: Optional[str] = None

    @cached_property
    def connected(self) -> bool:
        return _is_connected(self.representative)

    @cached_property
    def h1(self) -> HomologyGroup:
        return homology(self.representative, 1)

    @cached_property
    def h2(self) -> HomologyGroup:
        return homology(self.representative, 2)

    @cached_property
    def simply_connected(self) -> Optional[str]:
        return simple_connectivity_certificate(self.representative)

    def to_data(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind,
            "pattern": self.pattern,
            "formula": self.formula,
            "count": self.count,
            "f_vector": self.representative.f_vector(),
            "connected": self.connected,
            "h1": self.h1.to_data(),
            "simply_connected": self.simply_connected,
            "role": self.role,
        }


def link_census(
    complex_: CubeComplex, orientation: MorseOrientation
) -> list[CensusEntry]:
    """Ascending and descending links grouped into isomorphism classes."""
    entries: list[CensusEntry] = []
    known: dict[tuple[str, str, SimplicialComplex], CensusEntry] = {}
    for vertex in complex_.sorted_vertices():
        for kind, directed in (
            (ASCENDING, ascending_link(complex_, orientation, vertex)),
            (DESCENDING, descending_link(complex_, orientation, vertex)),
        ):
            if (kind, vertex.pattern, directed) in known:
                known[(kind, vertex.pattern, directed)].count += 1
                continue
            for entry in entries:
                if (
                    entry.kind == kind
                    and entry.pattern == vertex.pattern
                    and is_isomorphic(entry.representative, directed)
                ):
                    entry.count += 1
                    known[(kind, vertex.pattern, directed)] = entry
                    break
            else:
                index = sum(e.kind == kind and e.pattern == vertex.pattern for e in entries)
                entries.append(
                    CensusEntry(
                        f"{kind}:{vertex.pattern}#{index}",
                        kind,
                        vertex.pattern,
                        TABLE2_ROWS.get(vertex.pattern, "?"),
                        directed,
                        role="S(L')" if not vertex.delta_b() else None,
                    )
                )
                known[(kind, vertex.pattern, directed)] = entries[-1]
    LOGGER.info("Link census: %d classes", len(entries))
    return entries


@dataclass(frozen=True)
class VerdictLine:
    claim: str
    computed: tuple[str, ...] = ()
    assumed: tuple[str, ...] = ()

    def to_data(self) -> dict[str, Any]:
        return {"claim": self.claim, "computed": list(self.computed), "assumed": list(self.assumed)}


@dataclass
class FinitenessReport:
    verdict: str
    lines: list[VerdictLine] = field(default_factory=list)

    def to_data(self) -> dict[str, Any]:
        return {"verdict": self.verdict, "lines": [line.to_data() for line in self.lines]}


PI1_L: str = "pi1_L"


def _lookup(assumptions: Sequence[Assumption], key: str) -> Optional[Assumption]:
    for assumption in assumptions:
        if assumption.key == key:
            return assumption
    return None


def finiteness_report(
    census: Sequence[CensusEntry], assumptions: Sequence[Assumption] = ()
) -> FinitenessReport:
    """
    Decision table over the census. Each line lists the computed facts and
    the recorded assumptions it rests on.
    """
    disconnected = [e for e in census if not e.connected]
    if disconnected:
        return FinitenessReport(
            "no finiteness conclusion",
            [
                VerdictLine(
                    "no finiteness conclusion: some ascending/descending links are disconnected or empty",
                    tuple(f"{e.name} disconnected ({e.count} vertices)" for e in disconnected),
                )
            ],
        )
    lines = [
        VerdictLine(
            "FP1 evidence: all ascending/descending links connected",
            (f"{len(census)} link classes connected",),
        )
    ]
    verdict = "FP1"
    if all(e.h1.is_trivial() for e in census):
        lines.append(
            VerdictLine(
                "FP2 evidence: all ascending/descending links have H1 = 0",
                tuple(f"{e.name}: H1 = 0" for e in census),
            )
        )
        verdict = "FP2"
    pi1 = _lookup(assumptions, PI1_L)
    computed: list[str] = []
    assumed: list[str] = []
    for entry in census:
        if entry.simply_connected:
            computed.append(f"{entry.name}: {entry.simply_connected}")
            continue
        recorded = _lookup(assumptions, f"simply_connected:{entry.name}")
        if recorded is not None and recorded.value == "true":
            assumed.append(f"{entry.name}: {recorded.describe()}")
        elif entry.role == "S(L')" and pi1 is not None and pi1.value == "trivial":
            assumed.append(f"{entry.name}: S(L') simply connected because {pi1.describe()}")
        else:
            break
    else:
        lines.append(
            VerdictLine(
                "F2 evidence: links simply connected, so the kernel is finitely presented",
                tuple(computed),
                tuple(assumed),
            )
        )
        verdict = "F2"
    octahedral = [e for e in census if e.role == "S(L')"]
    if pi1 is not None and pi1.value == "perfect_nontrivial":
        acyclic = [e for e in octahedral if e.h1.is_trivial()]
        if acyclic:
            lines.append(
                VerdictLine(
                    "FP2, not finitely presented: a link S(L') has H1 = 0 and non-trivial perfect fundamental group",
                    tuple(f"{e.name}: H1 = 0" for e in acyclic),
                    (pi1.describe(),),
                )
            )
            verdict = "FP2, not finitely presented"
    if verdict == "F2" and pi1 is not None and pi1.value == "trivial":
        spherical = [e for e in octahedral if not e.h2.is_trivial()]
        if spherical:
            lines.append(
                VerdictLine(
                    "finitely presented, not of type FP3: H2(S(L')) is non-zero",
                    tuple(f"{e.name}: H2 = {e.h2}" for e in spherical),
                    (pi1.describe(),),
                )
            )
    return FinitenessReport(verdict, lines)
