from __future__ import annotations

import hashlib
import itertools
import logging
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, NamedTuple, Optional, Sequence

import networkx as nx
from networkx.utils import UnionFind

from fp2_cube_builder._utils import (
    format_vertex,
    parallel_map,
    sort_vertices,
    worker_count,
)
from fp2_cube_builder.errors import PreconditionError, VerificationError
from fp2_cube_builder.simplicial import (
    Face,
    SimplicialComplex,
    Vertex,
    dumps_complex,
    is_flag,
    is_isomorphic,
    join,
    link,
    verify_partite,
)
from fp2_cube_builder.tables import (
    TABLE1_ROWS,
    TableReport,
    generator_b,
    is_complete_partite,
    lprime_vertex,
    shape_key,
    table1_target,
)

LOGGER = logging.getLogger(__name__)

SIDE_A: str = "A"
SIDE_B: str = "B"

Coordinate = tuple[str, Vertex]
Axis = tuple[Coordinate, ...]


def opposite(side: str) -> str:
    return SIDE_B if side == SIDE_A else SIDE_A


class CubeVertex(NamedTuple):
    coords: tuple[Vertex, ...]
    sides: tuple[str, ...]

    @property
    def pattern(self) -> str:
        return "".join(self.sides)

    def tagged(self, i: int) -> Coordinate:
        return self.sides[i], self.coords[i]

    def delta(self, side: str) -> frozenset[Vertex]:
        return frozenset(c for c, s in zip(self.coords, self.sides) if s == side)

    def delta_a(self) -> frozenset[Vertex]:
        return self.delta(SIDE_A)

    def delta_b(self) -> frozenset[Vertex]:
        return self.delta(SIDE_B)

    def moved(self, i: int, coordinate: Coordinate) -> CubeVertex:
        side, value = coordinate
        return CubeVertex(
            self.coords[:i] + (value,) + self.coords[i + 1 :],
            self.sides[:i] + (side,) + self.sides[i + 1 :],
        )

    def __str__(self) -> str:
        return "(" + ", ".join(f"{s}:{format_vertex(c)}" for c, s in zip(self.coords, self.sides)) + ")"


class Cube(NamedTuple):
    """
    Axis-aligned cube: per coordinate either a fixed tagged value or an edge
    ((A, a), (B, b)) of A_i * B_i.
    """

    axes: tuple[Axis, ...]

    @property
    def dimension(self) -> int:
        return sum(len(axis) == 2 for axis in self.axes)

    def directions(self) -> tuple[int, ...]:
        return tuple(i for i, axis in enumerate(self.axes) if len(axis) == 2)

    def vertices(self) -> list[CubeVertex]:
        result = []
        for choice in itertools.product(*self.axes):
            result.append(
                CubeVertex(tuple(v for _, v in choice), tuple(s for s, _ in choice))
            )
        return result

    def a_corner(self) -> CubeVertex:
        return CubeVertex(
            tuple(axis[0][1] for axis in self.axes),
            tuple(axis[0][0] for axis in self.axes),
        )

    def contains(self, vertex: CubeVertex) -> bool:
        return all(vertex.tagged(i) in axis for i, axis in enumerate(self.axes))

    def is_face_of(self, other: Cube) -> bool:
        return all(
            axis == big or (len(axis) == 1 and axis[0] in big)
            for axis, big in zip(self.axes, other.axes)
        )

    def faces(self) -> Iterator[Cube]:
        """Every face, the cube itself included."""
        options = [
            [axis] if len(axis) == 1 else [axis, (axis[0],), (axis[1],)]
            for axis in self.axes
        ]
        for choice in itertools.product(*options):
            yield Cube(tuple(choice))

    def facets(self) -> Iterator[Cube]:
        for i in self.directions():
            for end in self.axes[i]:
                yield Cube(self.axes[:i] + ((end,),) + self.axes[i + 1 :])

    def edge_opposite(self, vertex: CubeVertex, i: int) -> Coordinate:
        """The far end of axis i seen from a vertex of the cube."""
        first, second = self.axes[i]
        return second if vertex.tagged(i) == first else first

    def __str__(self) -> str:
        return " x ".join(
            "-".join(f"{s}:{format_vertex(v)}" for s, v in axis) for axis in self.axes
        )


def vertex_cube(vertex: CubeVertex) -> Cube:
    return Cube(tuple((vertex.tagged(i),) for i in range(len(vertex.coords))))


def faces_by_parts(complex_: SimplicialComplex) -> dict[frozenset[int], list[Face]]:
    """Faces of a partite complex grouped by the 0-based coordinates they occupy."""
    assert complex_.parts is not None
    grouped: dict[frozenset[int], list[Face]] = {}
    for k in range(-1, complex_.dimension + 1):
        for face in complex_.faces(k):
            key = frozenset(complex_.parts[v] - 1 for v in face)
            grouped.setdefault(key, []).append(frozenset(face))
    return grouped


class CubeComplex:
    """
    Subcomplex of the product of the A_i * B_i given by its vertices and
    all of its cubes.
    """

    def __init__(
        self,
        gamma_a: SimplicialComplex,
        gamma_b: SimplicialComplex,
        vertices: Iterable[CubeVertex],
        cubes: Iterable[Cube],
        n_coordinates: int = 3,
    ):
        self.gamma_a = gamma_a
        self.gamma_b = gamma_b
        self.n_coordinates = n_coordinates
        self.vertices: frozenset[CubeVertex] = frozenset(vertices)
        self.cubes: frozenset[Cube] = frozenset(cubes)

    @cached_property
    def _star(self) -> dict[CubeVertex, list[Cube]]:
        star: dict[CubeVertex, list[Cube]] = {v: [] for v in self.vertices}
        for cube in self.cubes:
            for vertex in cube.vertices():
                star[vertex].append(cube)
        return star

    @cached_property
    def _by_dimension(self) -> dict[int, list[Cube]]:
        grouped: dict[int, list[Cube]] = {}
        for cube in self.cubes:
            grouped.setdefault(cube.dimension, []).append(cube)
        return {k: sort_vertices(cubes) for k, cubes in grouped.items()}  # type: ignore[misc]

    @cached_property
    def link_parts(self) -> dict[Coordinate, int]:
        """Part of every side-tagged generator vertex, the part structure of vertex links."""
        parts: dict[Coordinate, int] = {}
        for side, gamma in ((SIDE_A, self.gamma_a), (SIDE_B, self.gamma_b)):
            assert gamma.parts is not None
            parts.update({(side, v): p for v, p in gamma.parts.items()})
        return parts

    @cached_property
    def _factor_links(self) -> dict[tuple[str, frozenset[Vertex]], SimplicialComplex]:
        return {}

    @cached_property
    def _joined_links(self) -> dict[tuple[SimplicialComplex, SimplicialComplex], SimplicialComplex]:
        return {}

    def factor_link(self, side: str, delta: frozenset[Vertex]) -> SimplicialComplex:
        """Lk(delta, Gamma_side) with side-tagged vertices."""
        key = (side, delta)
        if key not in self._factor_links:
            gamma = self.gamma_a if side == SIDE_A else self.gamma_b
            self._factor_links[key] = link(gamma, delta).relabel(lambda v: (side, v))
        return self._factor_links[key]

    def joined_link(self, vertex: CubeVertex) -> SimplicialComplex:
        """
        Lk(Delta_A, Gamma_A) * Lk(Delta_B, Gamma_B), tagged by side. Vertices
        with equal factor links get the same instance.
        """
        key = (
            self.factor_link(SIDE_A, vertex.delta_a()),
            self.factor_link(SIDE_B, vertex.delta_b()),
        )
        if key not in self._joined_links:
            joined = join(*key)
            self._joined_links[key] = joined.with_parts(
                {v: self.link_parts[v] for v in joined.vertices}
            )
        return self._joined_links[key]

    def cubes_at(self, vertex: CubeVertex) -> list[Cube]:
        return self._star[vertex]

    def cubes_of_dim(self, k: int) -> list[Cube]:
        return self._by_dimension.get(k, [])

    def sorted_vertices(self) -> list[CubeVertex]:
        return sort_vertices(self.vertices)  # type: ignore[return-value]

    def values(self, side: str, i: int) -> list[Vertex]:
        gamma = self.gamma_a if side == SIDE_A else self.gamma_b
        assert gamma.parts is not None
        return sort_vertices(v for v, p in gamma.parts.items() if p == i + 1)

    def counts(self) -> dict[str, int]:
        names = ["vertices", "edges", "squares", "cubes"]
        result = {"vertices": len(self.vertices)}
        for k in range(1, self.n_coordinates + 1):
            name = names[k] if k < len(names) else f"{k}-cubes"
            result[name] = len(self.cubes_of_dim(k))
        return result

    def pattern_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for vertex in self.vertices:
            counts[vertex.pattern] = counts.get(vertex.pattern, 0) + 1
        return dict(sorted(counts.items()))

    def __repr__(self) -> str:
        return f"CubeComplex({self.counts()})"


def _check_generator(gamma: SimplicialComplex, name: str) -> None:
    if gamma.parts is None:
        raise PreconditionError(f"{name} has no partite structure")
    if not verify_partite(gamma, gamma.parts):
        raise PreconditionError(f"{name} is not partite: an edge joins a part to itself")
    if not is_flag(gamma):
        raise PreconditionError(f"{name} is not flag")


def _sides_patterns(n: int) -> Iterator[tuple[str, ...]]:
    return itertools.product((SIDE_A, SIDE_B), repeat=n)


def build_blowup(
    gamma_a: SimplicialComplex, gamma_b: SimplicialComplex
) -> CubeComplex:
    _check_generator(gamma_a, "Gamma_A")
    _check_generator(gamma_b, "Gamma_B")
    assert gamma_a.parts is not None and gamma_b.parts is not None
    n = max(list(gamma_a.parts.values()) + list(gamma_b.parts.values()) + [1])
    by_parts_a = faces_by_parts(gamma_a)
    by_parts_b = faces_by_parts(gamma_b)
    vertices: list[CubeVertex] = []
    for sides in _sides_patterns(n):
        on_a = frozenset(i for i, s in enumerate(sides) if s == SIDE_A)
        on_b = frozenset(range(n)) - on_a
        for delta_a in by_parts_a.get(on_a, []):
            for delta_b in by_parts_b.get(on_b, []):
                coords: list[Vertex] = [None] * n
                for v in delta_a:
                    coords[gamma_a.parts[v] - 1] = v
                for v in delta_b:
                    coords[gamma_b.parts[v] - 1] = v
                vertices.append(CubeVertex(tuple(coords), sides))
    cubes: list[Cube] = []
    link_cache: dict[frozenset[Vertex], SimplicialComplex] = {}
    for corner in vertices:
        delta_b = corner.delta_b()
        if delta_b not in link_cache:
            link_cache[delta_b] = link(gamma_b, delta_b)
        moves = link_cache[delta_b]
        for k in range(-1, moves.dimension + 1):
            for face in moves.faces(k):
                axes: list[Axis] = [(corner.tagged(i),) for i in range(n)]
                for b in face:
                    i = gamma_b.parts[b] - 1
                    if corner.sides[i] != SIDE_A:
                        raise VerificationError(
                            f"Move to {b!r} leaves a B coordinate of {corner}"
                        )
                    axes[i] = (corner.tagged(i), (SIDE_B, b))
                cubes.append(Cube(tuple(axes)))
    complex_ = CubeComplex(gamma_a, gamma_b, vertices, cubes, n)
    LOGGER.info("Built blowup %s", complex_.counts())
    return complex_


def _part_values(gamma: SimplicialComplex, i: int) -> list[Vertex]:
    assert gamma.parts is not None
    return sort_vertices(v for v, p in gamma.parts.items() if p == i + 1)


def _passes_simplex_test(
    gamma_a: SimplicialComplex, gamma_b: SimplicialComplex, vertex: CubeVertex
) -> bool:
    return gamma_a.has_face(vertex.delta_a()) and gamma_b.has_face(vertex.delta_b())


def brute_force_vertices(
    gamma_a: SimplicialComplex, gamma_b: SimplicialComplex, n: int = 3
) -> set[CubeVertex]:
    """Oracle: test every coordinate triple of the product."""
    choices = [
        [(SIDE_A, v) for v in _part_values(gamma_a, i)]
        + [(SIDE_B, v) for v in _part_values(gamma_b, i)]
        for i in range(n)
    ]
    found: set[CubeVertex] = set()
    for combo in itertools.product(*choices):
        vertex = CubeVertex(tuple(v for _, v in combo), tuple(s for s, _ in combo))
        if _passes_simplex_test(gamma_a, gamma_b, vertex):
            found.add(vertex)
    return found


def brute_force_cubes(
    gamma_a: SimplicialComplex, gamma_b: SimplicialComplex, n: int = 3
) -> set[Cube]:
    """Oracle: every cell of the product all of whose vertices pass the simplex test."""
    vertices = brute_force_vertices(gamma_a, gamma_b, n)
    options: list[list[Axis]] = []
    for i in range(n):
        a_values = [(SIDE_A, v) for v in _part_values(gamma_a, i)]
        b_values = [(SIDE_B, v) for v in _part_values(gamma_b, i)]
        options.append(
            [(c,) for c in a_values + b_values]
            + [(a, b) for a in a_values for b in b_values]
        )
    return {
        Cube(axes)
        for axes in itertools.product(*options)
        if all(v in vertices for v in Cube(axes).vertices())
    }


def direct_vertex_link(complex_: CubeComplex, vertex: CubeVertex) -> SimplicialComplex:
    """Link read off the cubes at the vertex; link vertices are tagged far ends."""
    if vertex not in complex_.vertices:
        raise ValueError(f"{vertex} is not a vertex of the complex")
    simplices = [
        frozenset(cube.edge_opposite(vertex, i) for i in cube.directions())
        for cube in complex_.cubes_at(vertex)
    ]
    result = SimplicialComplex(simplices)
    return result.with_parts({v: complex_.link_parts[v] for v in result.vertices})


def formula_vertex_link(complex_: CubeComplex, vertex: CubeVertex) -> SimplicialComplex:
    """Lk(Delta_A, Gamma_A) * Lk(Delta_B, Gamma_B), tagged by side."""
    if vertex not in complex_.vertices:
        raise ValueError(f"{vertex} is not a vertex of the complex")
    return complex_.joined_link(vertex)


def vertex_link(
    complex_: CubeComplex, vertex: CubeVertex, cross_check: bool = True
) -> SimplicialComplex:
    direct = direct_vertex_link(complex_, vertex)
    if cross_check:
        formula = formula_vertex_link(complex_, vertex)
        if direct != formula:
            raise VerificationError(
                f"Link of {vertex} differs from the join of the links: {direct!r} vs {formula!r}"
            )
    return direct


def cube_link(complex_: CubeComplex, cube: Cube) -> SimplicialComplex:
    """Link of a cube: one simplex per cube containing it, in tagged far ends."""
    base = cube.vertices()[0]
    fixed = [i for i, axis in enumerate(cube.axes) if len(axis) == 1]
    simplices = []
    for other in complex_.cubes_at(base):
        if cube.is_face_of(other):
            simplices.append(
                frozenset(
                    other.edge_opposite(base, i)
                    for i in fixed
                    if len(other.axes[i]) == 2
                )
            )
    result = SimplicialComplex(simplices)
    return result.with_parts({v: complex_.link_parts[v] for v in result.vertices})


@dataclass
class NPCReport:
    ok: bool
    checked: int
    failures: list[str] = field(default_factory=list)

    def to_data(self) -> dict[str, Any]:
        return {"ok": self.ok, "checked": self.checked, "failures": self.failures[:20]}


def _chunks(items: Sequence[Any], count: int) -> list[Sequence[Any]]:
    size = max(1, -(-len(items) // count))
    return [items[i : i + size] for i in range(0, len(items), size)]


def _non_flag_links(job: tuple[CubeComplex, Sequence[CubeVertex]]) -> list[str]:
    complex_, vertices = job
    flag: dict[SimplicialComplex, bool] = {}
    failures = []
    for vertex in vertices:
        vertex_link_ = direct_vertex_link(complex_, vertex)
        if vertex_link_ not in flag:
            flag[vertex_link_] = is_flag(vertex_link_)
        if not flag[vertex_link_]:
            failures.append(str(vertex))
    return failures


def verify_npc(complex_: CubeComplex) -> NPCReport:
    """Gromov's link condition: every vertex link is flag."""
    vertices = complex_.sorted_vertices()
    jobs = [(complex_, chunk) for chunk in _chunks(vertices, worker_count())]
    failures = [f for found in parallel_map(_non_flag_links, jobs) for f in found]
    return NPCReport(not failures, len(vertices), failures)


@dataclass(frozen=True)
class HyperplaneClass:
    direction: int
    dual_edges: frozenset[Cube]
    hyperplanes: tuple[frozenset[Cube], ...]

    def to_data(self) -> dict[str, Any]:
        return {
            "direction": self.direction + 1,
            "edges": len(self.dual_edges),
            "hyperplanes": len(self.hyperplanes),
        }


def _square_sides(square: Cube) -> list[tuple[Cube, Cube]]:
    """For each direction of a square, its two parallel edges."""
    i, j = square.directions()
    pairs = []
    for moving, fixed in ((i, j), (j, i)):
        edges = []
        for end in square.axes[fixed]:
            axes = list(square.axes)
            axes[fixed] = (end,)
            edges.append(Cube(tuple(axes)))
        pairs.append((edges[0], edges[1]))
    return pairs


def hyperplane_directions(complex_: CubeComplex) -> tuple[HyperplaneClass, ...]:
    edges = complex_.cubes_of_dim(1)
    forest = UnionFind(edges)
    squares = complex_.cubes_of_dim(2)
    for square in squares:
        for first, second in _square_sides(square):
            forest.union(first, second)
    hyperplanes = [frozenset(h) for h in forest.to_sets()]
    direction_of: dict[Cube, int] = {}
    for hyperplane in hyperplanes:
        directions = {edge.directions()[0] for edge in hyperplane}
        if len(directions) != 1:
            raise VerificationError(
                f"Hyperplane with dual edges in directions {sorted(directions)}"
            )
        direction = directions.pop()
        for edge in hyperplane:
            direction_of[edge] = direction
    for square in squares:
        (first, _), (second, _) = _square_sides(square)
        if direction_of[first] == direction_of[second]:
            raise VerificationError(f"Two hyperplanes of one direction cross in {square}")
    classes = []
    for direction in range(complex_.n_coordinates):
        members = sorted(
            (h for h in hyperplanes if direction_of[next(iter(h))] == direction),
            key=len,
        )
        classes.append(
            HyperplaneClass(
                direction,
                frozenset(e for h in members for e in h),
                tuple(members),
            )
        )
    return tuple(classes)


def in_branch_region(cube: Cube) -> bool:
    """
    Whether the cube lies in Z: for some k the coordinate after k is a fixed
    B value and the one after that a fixed A value.
    """
    axes = cube.axes
    for k in range(3):
        after, last = axes[(k + 1) % 3], axes[(k + 2) % 3]
        if (
            len(after) == 1
            and after[0][0] == SIDE_B
            and len(last) == 1
            and last[0][0] == SIDE_A
        ):
            return True
    return False


def branch_direction(vertex: CubeVertex) -> Optional[int]:
    """The free coordinate of the piece of Z containing a vertex, if any."""
    for k in range(3):
        if vertex.sides[(k + 1) % 3] == SIDE_B and vertex.sides[(k + 2) % 3] == SIDE_A:
            return k
    return None


@dataclass(frozen=True)
class BranchLocus:
    cells: frozenset[Cube]

    @property
    def dimension(self) -> int:
        return max((cell.dimension for cell in self.cells), default=-1)

    def is_graph(self) -> bool:
        return self.dimension <= 1

    def vertices(self) -> set[CubeVertex]:
        return {cell.a_corner() for cell in self.cells if cell.dimension == 0}

    def edges(self) -> set[Cube]:
        return {cell for cell in self.cells if cell.dimension == 1}

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices())
        for edge in self.edges():
            first, second = edge.vertices()
            graph.add_edge(first, second)
        return graph


def branch_locus(complex_: CubeComplex) -> BranchLocus:
    if complex_.n_coordinates != 3:
        raise PreconditionError("The branching locus is defined for three coordinates")
    locus = BranchLocus(frozenset(c for c in complex_.cubes if in_branch_region(c)))
    if not locus.is_graph():
        raise VerificationError(f"Branching locus has dimension {locus.dimension}")
    LOGGER.info(
        "Branching locus: %d vertices, %d edges",
        len(locus.vertices()),
        len(locus.edges()),
    )
    return locus


@dataclass
class BranchCertificate:
    complement_ok: bool
    local_isometry_ok: bool
    degenerate: bool
    cells_checked: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.complement_ok and self.local_isometry_ok

    def to_data(self) -> dict[str, Any]:
        return {
            "complement_ok": self.complement_ok,
            "local_isometry_ok": self.local_isometry_ok,
            "degenerate": self.degenerate,
            "cells_checked": self.cells_checked,
            "failures": self.failures[:20],
        }


def _edges_at(locus: BranchLocus) -> dict[CubeVertex, list[Cube]]:
    at: dict[CubeVertex, list[Cube]] = {}
    for edge in locus.edges():
        for vertex in edge.vertices():
            at.setdefault(vertex, []).append(edge)
    return at


def verify_branching_locus(complex_: CubeComplex, locus: BranchLocus) -> BranchCertificate:
    if not locus.cells:
        warnings.warn("Branching locus is empty; certificate is degenerate", stacklevel=2)
        return BranchCertificate(True, True, True, 0)
    if not locus.is_graph():
        warnings.warn("Branching locus has cells above dimension 1", stacklevel=2)
    edges_at = _edges_at(locus)
    failures: list[str] = []
    complement_ok = True
    for cell in sorted(locus.cells, key=lambda c: (c.dimension, str(c))):
        cell_link = cube_link(complex_, cell)
        if cell.dimension == 0:
            vertex = cell.a_corner()
            removed = {e.edge_opposite(vertex, e.directions()[0]) for e in edges_at.get(vertex, [])}
        else:
            removed = set()
        rest = cell_link.induced(cell_link.vertices - removed)
        if rest.is_empty() or not nx.is_connected(rest.graph()):
            complement_ok = False
            failures.append(f"link complement of {cell} is empty or disconnected")
    isometry_ok = True
    for vertex in complex_.sorted_vertices():
        at = edges_at.get(vertex, [])
        if not at:
            continue
        ends = [e.edge_opposite(vertex, e.directions()[0]) for e in at]
        vertex_link_ = direct_vertex_link(complex_, vertex)
        assert vertex_link_.parts is not None
        if len({vertex_link_.parts[e] for e in ends}) > 1:
            isometry_ok = False
            failures.append(f"locus directions at {vertex} span several parts")
        for first, second in itertools.combinations(ends, 2):
            if vertex_link_.has_face((first, second)):
                isometry_ok = False
                failures.append(f"adjacent locus directions at {vertex}")
                break
    return BranchCertificate(
        complement_ok, isometry_ok, False, len(locus.cells), failures
    )


def matches_shape(link_: SimplicialComplex, target: SimplicialComplex) -> bool:
    """Isomorphism test of a side-tagged link against an untagged target."""
    values = {value for _, value in link_.vertices}
    if len(values) == len(link_.vertices):
        link_ = link_.relabel(lambda tagged: tagged[1])
    return is_isomorphic(link_, target)


def check_standard_shapes(complex_: CubeComplex, base: SimplicialComplex) -> None:
    if not is_complete_partite(complex_.gamma_a):
        raise PreconditionError("Gamma_A is not a join of discrete parts")
    if complex_.gamma_b != generator_b(base):
        raise PreconditionError("Gamma_B is not S(S(L')) for the given L")


def _check_against_cubes(
    complex_: CubeComplex, vertex: CubeVertex, link_: SimplicialComplex, full: bool
) -> None:
    """
    The join formula link of a vertex has one face per cube at the vertex.
    With full set the faces are compared one by one, otherwise only counted.
    """
    cubes = len(complex_.cubes_at(vertex))
    if cubes != link_.face_total() + 1:
        raise VerificationError(
            f"{vertex} lies in {cubes} cubes but its link has {link_.face_total() + 1} faces"
        )
    if full and direct_vertex_link(complex_, vertex) != link_:
        raise VerificationError(f"Link of {vertex} differs from the join of the links")


def verify_table1(complex_: CubeComplex, base: SimplicialComplex) -> TableReport:
    """
    Compare every vertex link with its row of the vertex link table. Links
    are taken from the join formula and checked against the cubes; equal
    links are compared with their row once.
    """
    check_standard_shapes(complex_, base)
    a_sizes = [len(complex_.values(SIDE_A, i)) for i in range(complex_.n_coordinates)]
    targets: dict[Any, SimplicialComplex] = {}
    verdicts: dict[tuple[Any, SimplicialComplex], bool] = {}
    report = TableReport("table1")
    for vertex in complex_.sorted_vertices():
        chain = [lprime_vertex(b) for b in vertex.delta_b()]
        sizes = tuple(a_sizes[i] for i, s in enumerate(vertex.sides) if s == SIDE_B)
        key = (shape_key(base, chain), sizes)
        if key not in targets:
            targets[key] = table1_target(base, chain, sizes)
        link_ = complex_.joined_link(vertex)
        seen = (key, link_) in verdicts
        _check_against_cubes(complex_, vertex, link_, full=not seen)
        if not seen:
            verdicts[(key, link_)] = matches_shape(link_, targets[key])
        report.record(vertex.pattern, TABLE1_ROWS[vertex.pattern], verdicts[(key, link_)], str(vertex))
    LOGGER.info(
        "Vertex link table checked on %d vertices, %d distinct links",
        len(complex_.vertices),
        len(verdicts),
    )
    return report


def _digest(complex_: SimplicialComplex) -> str:
    return hashlib.sha256(dumps_complex(complex_).encode("utf-8")).hexdigest()


def blowup_manifest(
    complex_: CubeComplex, verdicts: Optional[dict[str, Any]] = None
) -> dict[str, Any]:
    return {
        "inputs": {
            "gamma_a_sha256": _digest(complex_.gamma_a),
            "gamma_b_sha256": _digest(complex_.gamma_b),
        },
        "counts": complex_.counts(),
        "pattern_counts": complex_.pattern_counts(),
        "verdicts": dict(verdicts or {}),
    }
