"""
Branched covers over the branching locus: projection graphs, permutation
labelings and their monodromy, covers of vertex links and the ordering
search that shows those covers stay connected and covered by 4-cycles.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping, Optional, Sequence, Union

import networkx as nx
from sympy import isprime, nextprime
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.ntheory import is_primitive_root, n_order, primitive_root

from fp2_cube_builder._utils import format_vertex, sort_vertices, vertex_key
from fp2_cube_builder.blowup import (
    SIDE_A,
    SIDE_B,
    Cube,
    CubeComplex,
    CubeVertex,
    branch_direction,
    direct_vertex_link,
)
from fp2_cube_builder.errors import BudgetExhausted, PreconditionError, VerificationError
from fp2_cube_builder.homology import homology
from fp2_cube_builder.simplicial import SimplicialComplex, Vertex, link

LOGGER = logging.getLogger(__name__)

ALPHA: str = "alpha"
BETA: str = "beta"

# Coordinate pairs (1,2), (2,3), (3,1) are the projections away from 3, 1, 2.
PAIR_ORDER: tuple[int, ...] = (2, 0, 1)

DEFAULT_ORDERING_BUDGET: int = 20_000

Edge = tuple[CubeVertex, CubeVertex]
Path = list[Edge]


def pair_of(k: int) -> tuple[int, int]:
    """0-based coordinates (i, j) left after projecting away from k."""
    if k not in (0, 1, 2):
        raise ValueError(f"Coordinate must be 0, 1 or 2, got {k}")
    return (k + 1) % 3, (k + 2) % 3


def pair_name(k: int) -> str:
    i, j = pair_of(k)
    return f"{i + 1}{j + 1}"


@dataclass(frozen=True)
class PermPair:
    """alpha: x -> x + 1 and beta: x -> l x on Z/q; products apply the left factor first."""

    q: int
    l: int  # noqa: E741
    alpha: Permutation
    beta: Permutation

    @cached_property
    def _alpha_powers(self) -> list[Permutation]:
        return [self.alpha**e for e in range(self.q)]

    @cached_property
    def _beta_powers(self) -> list[Permutation]:
        return [self.beta**e for e in range(max(self.q - 1, 1))]

    def alpha_power(self, exponent: int) -> Permutation:
        return self._alpha_powers[exponent % self.q]

    def beta_power(self, exponent: int) -> Permutation:
        return self._beta_powers[exponent % max(self.q - 1, 1)]

    def to_data(self) -> dict[str, Any]:
        return {"q": self.q, "l": self.l, "beta": list(self.beta.array_form)}


def make_perm_pair(q: int, l: int) -> PermPair:  # noqa: E741
    if not isprime(q):
        raise PreconditionError(f"{q} is not prime")
    if l % q == 0 or not is_primitive_root(l % q, q):
        order = n_order(l, q) if l % q else 0
        raise PreconditionError(f"{l} is not a primitive root mod {q} (order {order})")
    alpha = Permutation([(x + 1) % q for x in range(q)])
    beta = Permutation([(l * x) % q for x in range(q)])
    if ~beta * alpha * beta != alpha ** (l % q):
        raise VerificationError(f"beta^-1 alpha beta != alpha^{l} for q = {q}")
    return PermPair(q, l % q, alpha, beta)


def commutator(pair: PermPair, a: int, b: int) -> Permutation:
    """[alpha^a, beta^b] = alpha^-a beta^-b alpha^a beta^b."""
    first, second = pair.alpha_power(a), pair.beta_power(b)
    return ~first * ~second * first * second


def commutator_identity_check(pair: PermPair) -> bool:
    q, l = pair.q, pair.l  # noqa: E741
    for a in range(1, q):
        for b in range(1, q - 1):
            value = commutator(pair, a, b)
            if value != pair.alpha_power(a * (pow(l, b, q) - 1)) or value.order() != q:
                LOGGER.warning("Commutator identity fails for q=%d at a=%d, b=%d", q, a, b)
                return False
    return True


def _square_vertex(first: tuple[str, Vertex], second: tuple[str, Vertex]) -> CubeVertex:
    return CubeVertex((first[1], second[1]), (first[0], second[0]))


@dataclass(frozen=True)
class ProjectionGraph:
    """
    Image of the blowup in (A_i * B_i) x (A_j * B_j) with the B_i x A_j corners
    removed. lambda_graph is what is left of the 1-skeleton, a subgraph of
    xi = ((A_i * B_i) x B_j) u (A_i x (A_j * B_j)).
    """

    k: int
    lambda_graph: nx.Graph
    xi: nx.Graph
    corners: frozenset[CubeVertex]
    squares: frozenset[Cube]
    a_i: tuple[Vertex, ...]
    b_i: tuple[Vertex, ...]
    a_j: tuple[Vertex, ...]
    b_j: tuple[Vertex, ...]
    euler_characteristic: int

    @property
    def pair(self) -> tuple[int, int]:
        return pair_of(self.k)

    @property
    def valence_bound(self) -> int:
        return max(len(self.a_i), len(self.b_i), len(self.a_j), len(self.b_j))

    def to_data(self) -> dict[str, Any]:
        return {
            "pair": pair_name(self.k),
            "lambda": {
                "vertices": self.lambda_graph.number_of_nodes(),
                "edges": self.lambda_graph.number_of_edges(),
                "euler_characteristic": self.euler_characteristic,
            },
            "xi": {"vertices": self.xi.number_of_nodes(), "edges": self.xi.number_of_edges()},
            "removed_corners": len(self.corners),
            "squares": len(self.squares),
            "valence_bound": self.valence_bound,
        }


def edge_family(u: CubeVertex, v: CubeVertex) -> str:
    """ALPHA for edges of (A_i * B_i) x B_j, BETA for edges of A_i x (A_j * B_j)."""
    if u.tagged(1) == v.tagged(1) and u.sides[0] != v.sides[0] and u.sides[1] == SIDE_B:
        return ALPHA
    if u.tagged(0) == v.tagged(0) and u.sides[1] != v.sides[1] and u.sides[0] == SIDE_A:
        return BETA
    raise ValueError(f"{u} - {v} is not an edge of Xi")


def _xi_graph(
    a_i: Sequence[Vertex], b_i: Sequence[Vertex], a_j: Sequence[Vertex], b_j: Sequence[Vertex]
) -> nx.Graph:
    xi = nx.Graph()
    for a, b, c in itertools.product(a_i, b_i, b_j):
        xi.add_edge(
            _square_vertex((SIDE_A, a), (SIDE_B, c)),
            _square_vertex((SIDE_B, b), (SIDE_B, c)),
            family=ALPHA,
        )
    for a, c, d in itertools.product(a_i, a_j, b_j):
        xi.add_edge(
            _square_vertex((SIDE_A, a), (SIDE_A, c)),
            _square_vertex((SIDE_A, a), (SIDE_B, d)),
            family=BETA,
        )
    return xi


def project_graphs(complex_: CubeComplex, k: int) -> ProjectionGraph:
    if complex_.n_coordinates != 3:
        raise PreconditionError("Projection graphs are defined for three coordinates")
    i, j = pair_of(k)
    cells = {Cube((cube.axes[i], cube.axes[j])) for cube in complex_.cubes}
    squares = frozenset(c for c in cells if c.dimension == 2)
    for square in squares:
        removed = [v for v in square.vertices() if v.sides == (SIDE_B, SIDE_A)]
        if len(removed) != 1:
            raise VerificationError(f"Square {square} has {len(removed)} removed corners")
    points = {c.a_corner() for c in cells if c.dimension == 0}
    corners = frozenset(v for v in points if v.sides == (SIDE_B, SIDE_A))
    lambda_graph = nx.Graph()
    lambda_graph.add_nodes_from(points - corners)
    edges = [c for c in cells if c.dimension == 1]
    at_corners = 0
    for edge in edges:
        u, v = edge.vertices()
        if u in corners or v in corners:
            at_corners += 1
            continue
        try:
            family = edge_family(u, v)
        except ValueError as e:
            raise VerificationError(f"Lambda_{i + 1}{j + 1} leaves Xi: {e}") from e
        lambda_graph.add_edge(u, v, family=family)
    a_i, b_i = complex_.values(SIDE_A, i), complex_.values(SIDE_B, i)
    a_j, b_j = complex_.values(SIDE_A, j), complex_.values(SIDE_B, j)
    xi = _xi_graph(a_i, b_i, a_j, b_j)
    if not set(lambda_graph.nodes) <= set(xi.nodes) or any(
        not xi.has_edge(u, v) for u, v in lambda_graph.edges
    ):
        raise VerificationError(f"Lambda_{i + 1}{j + 1} is not a subgraph of Xi")

    as_complex = SimplicialComplex(lambda_graph.edges, lambda_graph.nodes)
    from_homology = 1 + homology(as_complex, 0).betti - homology(as_complex, 1).betti
    image_euler = len(points) - len(edges) + len(squares)
    removed_cells = len(corners) - at_corners + len(squares)
    if from_homology != image_euler - removed_cells:
        raise VerificationError(
            f"chi(Lambda_{i + 1}{j + 1}) = {from_homology} but the image minus the corner cells has {image_euler - removed_cells}"
        )
    LOGGER.info(
        "Lambda_%d%d: %d vertices, %d edges, %d corners removed",
        i + 1,
        j + 1,
        lambda_graph.number_of_nodes(),
        lambda_graph.number_of_edges(),
        len(corners),
    )
    return ProjectionGraph(
        k,
        lambda_graph,
        xi,
        corners,
        squares,
        tuple(a_i),
        tuple(b_i),
        tuple(a_j),
        tuple(b_j),
        from_homology,
    )


def greedy_labels(
    edges: Iterable[tuple[Vertex, Vertex]], modulus: int
) -> dict[tuple[Vertex, Vertex], int]:
    """
    Give each (tail, head) edge the smallest exponent in 1..modulus not yet
    used at its head.
    """
    used: dict[Vertex, set[int]] = {}
    labels: dict[tuple[Vertex, Vertex], int] = {}
    for tail, head in edges:
        taken = used.setdefault(head, set())
        exponent = next((e for e in range(1, modulus + 1) if e not in taken), None)
        if exponent is None:
            raise ValueError(f"No free exponent mod {modulus} left at {format_vertex(head)}")
        taken.add(exponent)
        labels[(tail, head)] = exponent
    return labels


@dataclass(frozen=True)
class EdgeLabeling:
    """
    Product labels: an alpha edge (a, c) - (b, c) carries alpha^e with e the
    exponent of a -> b in A_i * B_i, a beta edge (a, d) - (a, c) carries
    beta^e with e the exponent of d -> c in A_j * B_j. Traversing an edge
    against its reference orientation gives the inverse.
    """

    graph: ProjectionGraph
    pair: PermPair
    alpha_exponents: Mapping[tuple[Vertex, Vertex], int]
    beta_exponents: Mapping[tuple[Vertex, Vertex], int]

    def reference(self, u: CubeVertex, v: CubeVertex) -> Edge:
        """(tail, head) of the edge u - v in its reference orientation."""
        if edge_family(u, v) == ALPHA:
            return (u, v) if u.sides[0] == SIDE_A else (v, u)
        return (u, v) if u.sides[1] == SIDE_B else (v, u)

    def exponent(self, tail: CubeVertex, head: CubeVertex) -> int:
        if edge_family(tail, head) == ALPHA:
            return self.alpha_exponents[(tail.coords[0], head.coords[0])]
        return self.beta_exponents[(tail.coords[1], head.coords[1])]

    def permutation(self, u: CubeVertex, v: CubeVertex) -> Permutation:
        tail, head = self.reference(u, v)
        sign = 1 if (tail, head) == (u, v) else -1
        exponent = sign * self.exponent(tail, head)
        if edge_family(u, v) == ALPHA:
            return self.pair.alpha_power(exponent)
        return self.pair.beta_power(exponent)

    @cached_property
    def label_of(self) -> dict[Edge, Permutation]:
        labels: dict[Edge, Permutation] = {}
        for u, v in self.graph.lambda_graph.edges:
            tail, head = self.reference(u, v)
            labels[(tail, head)] = self.permutation(tail, head)
        return labels

    def incoming_distinct(self) -> bool:
        """Whether the edges oriented towards each vertex of Lambda carry distinct labels."""
        incoming: dict[CubeVertex, list[Permutation]] = {}
        for (_, head), label in self.label_of.items():
            incoming.setdefault(head, []).append(label)
        return all(len(set(labels)) == len(labels) for labels in incoming.values())

    def to_data(self) -> dict[str, Any]:
        return {
            "pair": pair_name(self.graph.k),
            "perm_pair": self.pair.to_data(),
            "alpha_exponents": [
                [format_vertex(a), format_vertex(b), e]
                for (a, b), e in sorted(self.alpha_exponents.items(), key=str)
            ],
            "beta_exponents": [
                [format_vertex(b), format_vertex(a), e]
                for (b, a), e in sorted(self.beta_exponents.items(), key=str)
            ],
        }


def label_graph(graph: ProjectionGraph, q: int, l: Optional[int] = None) -> EdgeLabeling:  # noqa: E741
    if q <= graph.valence_bound:
        raise PreconditionError(
            f"q = {q} does not exceed the valence bound {graph.valence_bound} of pair {pair_name(graph.k)}"
        )
    pair = make_perm_pair(q, primitive_root(q) if l is None else l)
    alpha_exponents = greedy_labels(((a, b) for a in graph.a_i for b in graph.b_i), q)
    beta_exponents = greedy_labels(((b, a) for b in graph.b_j for a in graph.a_j), q - 1)
    return EdgeLabeling(graph, pair, alpha_exponents, beta_exponents)


def auto_primes(graphs: Mapping[int, ProjectionGraph]) -> dict[int, int]:
    """Smallest distinct primes above each valence bound, in pair order 12, 23, 31."""
    chosen: dict[int, int] = {}
    for k in PAIR_ORDER:
        q = nextprime(graphs[k].valence_bound)
        while q in chosen.values():
            q = nextprime(q)
        chosen[k] = int(q)
    return chosen


def monodromy_of_loop(
    labels: Union[EdgeLabeling, Mapping[tuple[Any, Any], Permutation]],
    loop: Sequence[tuple[Any, Any]],
) -> Permutation:
    """Product of the edge labels along a closed edge path, first edge acting first."""
    if not loop:
        raise ValueError("Empty loop")
    for (_, head), (tail, _) in zip(loop, loop[1:]):
        if head != tail:
            raise ValueError(f"Path breaks between {format_vertex(head)} and {format_vertex(tail)}")
    if loop[-1][1] != loop[0][0]:
        raise ValueError(f"Path from {format_vertex(loop[0][0])} to {format_vertex(loop[-1][1])} is open")
    result: Optional[Permutation] = None
    for u, v in loop:
        if isinstance(labels, EdgeLabeling):
            step = labels.permutation(u, v)
        elif (u, v) in labels:
            step = labels[(u, v)]
        elif (v, u) in labels:
            step = ~labels[(v, u)]
        else:
            raise ValueError(f"No label on {format_vertex(u)} - {format_vertex(v)}")
        result = step if result is None else result * step
    assert result is not None
    return result


def _corner_links(graph: ProjectionGraph) -> dict[CubeVertex, dict[Vertex, set[Vertex]]]:
    """Per removed corner, its link as a bipartite graph A_i -> B_j."""
    links: dict[CubeVertex, dict[Vertex, set[Vertex]]] = {}
    for square in graph.squares:
        ((_, a), (_, b_i)), ((_, a_j), (_, b)) = square.axes
        corner = CubeVertex((b_i, a_j), (SIDE_B, SIDE_A))
        links.setdefault(corner, {}).setdefault(a, set()).add(b)
    return links


def four_loops(graph: ProjectionGraph) -> Iterator[Path]:
    """
    The 8-edge closed paths of Lambda around each removed corner that come
    from 4-cycles a - b - a' - b' of the corner's link.
    """
    links = _corner_links(graph)
    for corner in sorted(links, key=vertex_key):
        b_i, a_j = corner.coords
        adjacency = links[corner]
        for a, a2 in itertools.combinations(sorted(adjacency, key=vertex_key), 2):
            common = sort_vertices(adjacency[a] & adjacency[a2])
            for b, b2 in itertools.combinations(common, 2):
                stops = [
                    _square_vertex((SIDE_A, a), (SIDE_A, a_j)),
                    _square_vertex((SIDE_A, a), (SIDE_B, b)),
                    _square_vertex((SIDE_B, b_i), (SIDE_B, b)),
                    _square_vertex((SIDE_A, a2), (SIDE_B, b)),
                    _square_vertex((SIDE_A, a2), (SIDE_A, a_j)),
                    _square_vertex((SIDE_A, a2), (SIDE_B, b2)),
                    _square_vertex((SIDE_B, b_i), (SIDE_B, b2)),
                    _square_vertex((SIDE_A, a), (SIDE_B, b2)),
                ]
                yield [(stops[n], stops[(n + 1) % 8]) for n in range(8)]


def is_transitive(permutation: Permutation) -> bool:
    return permutation.cycle_structure == {permutation.size: 1}


@dataclass
class LoopReport:
    pair: str
    checked: int = 0
    cycle_types: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_data(self) -> dict[str, Any]:
        return {
            "pair": self.pair,
            "loops": self.checked,
            "cycle_types": dict(sorted(self.cycle_types.items())),
            "failures": self.failures[:20],
        }


def check_four_loops(labeling: EdgeLabeling) -> LoopReport:
    report = LoopReport(pair_name(labeling.graph.k))
    for loop in four_loops(labeling.graph):
        value = monodromy_of_loop(labeling, loop)
        shape = " ".join(f"{n}^{c}" for n, c in sorted(value.cycle_structure.items()))
        report.checked += 1
        report.cycle_types[shape] = report.cycle_types.get(shape, 0) + 1
        if not is_transitive(value):
            report.failures.append(" -> ".join(str(u) for u, _ in loop))
    LOGGER.info("Pair %s: %d 4-loops, cycle types %s", report.pair, report.checked, report.cycle_types)
    return report


@dataclass(frozen=True)
class LinkMonodromy:
    """Voltages on oriented link edges; an edge without a voltage carries the identity."""

    degree: int
    voltages: Mapping[tuple[Vertex, Vertex], Permutation] = field(default_factory=dict)

    @cached_property
    def identity(self) -> Permutation:
        return Permutation(list(range(self.degree)))

    def voltage(self, source: Vertex, target: Vertex) -> Permutation:
        if (source, target) in self.voltages:
            return self.voltages[(source, target)]
        if (target, source) in self.voltages:
            return ~self.voltages[(target, source)]
        return self.identity

    def around(self, cycle: Sequence[Vertex]) -> Permutation:
        result = self.identity
        for n, vertex in enumerate(cycle):
            result = result * self.voltage(vertex, cycle[(n + 1) % len(cycle)])
        return result


@dataclass(frozen=True)
class MonodromyRep:
    labelings: Mapping[int, EdgeLabeling]

    @property
    def primes(self) -> dict[int, int]:
        return {k: self.labelings[k].pair.q for k in PAIR_ORDER}

    @property
    def degree(self) -> int:
        return math.prod(self.primes.values())

    def _index(self, digits: Sequence[int]) -> int:
        index = 0
        for k, digit in zip(PAIR_ORDER, digits):
            index = index * self.labelings[k].pair.q + digit
        return index

    def combined(self, permutations: Mapping[int, Permutation]) -> Permutation:
        """Coordinatewise action on the product of the three fibers."""
        sizes = [self.labelings[k].pair.q for k in PAIR_ORDER]
        images = [
            permutations[k].array_form if k in permutations else list(range(size))
            for k, size in zip(PAIR_ORDER, sizes)
        ]
        array = [
            self._index([image[d] for image, d in zip(images, digits)])
            for digits in itertools.product(*(range(s) for s in sizes))
        ]
        return Permutation(array)

    def base_orbit(self, generators: Iterable[Permutation]) -> set[int]:
        """Orbit of the base point (0, 0, 0): the fiber of the stabiliser cover."""
        group = PermutationGroup(list(generators))
        return set(group.orbit(0))

    def link_monodromy(self, complex_: CubeComplex, vertex: CubeVertex) -> LinkMonodromy:
        """
        Monodromy on the link of a vertex of the branching locus. Only the
        projection sending the vertex to a removed corner contributes.
        """
        k = branch_direction(vertex)
        if k is None:
            raise PreconditionError(f"{vertex} is off the branching locus")
        labeling = self.labelings[k]
        i, j = pair_of(k)
        b_i, a_j = vertex.coords[i], vertex.coords[j]
        full = direct_vertex_link(complex_, vertex)
        assert full.parts is not None
        voltages: dict[tuple[Vertex, Vertex], Permutation] = {}
        for u, w in full.faces(1):
            ends = {full.parts[u] - 1: u, full.parts[w] - 1: w}
            if set(ends) != {i, j}:
                continue
            (_, a), (_, b) = ends[i], ends[j]
            start = _square_vertex((SIDE_A, a), (SIDE_A, a_j))
            far = _square_vertex((SIDE_A, a), (SIDE_B, b))
            end = _square_vertex((SIDE_B, b_i), (SIDE_B, b))
            voltages[(ends[i], ends[j])] = labeling.permutation(start, far) * labeling.permutation(far, end)
        return LinkMonodromy(labeling.pair.q, voltages)

    def to_data(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "primes": {pair_name(k): q for k, q in self.primes.items()},
            "labelings": [self.labelings[k].to_data() for k in PAIR_ORDER],
        }


def build_monodromy(
    graphs: Mapping[int, ProjectionGraph], primes: Optional[Mapping[int, int]] = None
) -> MonodromyRep:
    chosen = dict(primes) if primes is not None else auto_primes(graphs)
    return MonodromyRep({k: label_graph(graphs[k], chosen[k]) for k in PAIR_ORDER})


def voltage_cover(complex_: SimplicialComplex, mono: LinkMonodromy) -> SimplicialComplex:
    """Vertices (v, x); a face lifts from its first vertex v0 through x -> V(v0, v)(x)."""
    faces: list[list[tuple[Vertex, int]]] = []
    for face in complex_.maximal_faces:
        ordered = complex_.ordered(face)
        if not ordered:
            continue
        base, rest = ordered[0], ordered[1:]
        for u, w in itertools.combinations(rest, 2):
            if mono.voltage(base, u) * mono.voltage(u, w) != mono.voltage(base, w):
                raise VerificationError(
                    f"Voltage is not flat on {[format_vertex(v) for v in ordered]}"
                )
        carried = {v: mono.voltage(base, v).array_form for v in rest}
        for x in range(mono.degree):
            faces.append([(base, x)] + [(v, carried[v][x]) for v in rest])
    vertices = [(v, x) for v in complex_.vertices for x in range(mono.degree)]
    parts = None
    if complex_.parts is not None:
        parts = {(v, x): complex_.parts[v] for v, x in vertices}
    return SimplicialComplex(faces, vertices, parts)


def four_cycles(graph: nx.Graph) -> Iterator[tuple[Vertex, Vertex, Vertex, Vertex]]:
    """Every 4-cycle u - v - w - x once, u its smallest vertex and v before x."""
    order = {v: n for n, v in enumerate(sort_vertices(graph.nodes))}
    for u in sort_vertices(graph.nodes):
        beyond = sorted(
            {w for c in graph[u] for w in graph[c] if order[w] > order[u]},
            key=order.__getitem__,
        )
        for w in beyond:
            common = sorted(
                (c for c in nx.common_neighbors(graph, u, w) if order[c] > order[u]),
                key=order.__getitem__,
            )
            for v, x in itertools.combinations(common, 2):
                yield u, v, w, x


def has_four_cycle(graph: nx.Graph) -> bool:
    return next(four_cycles(graph), None) is not None


def is_transitive_branch(around: SimplicialComplex, mono: LinkMonodromy) -> bool:
    """Whether the link of a branch vertex is connected and carries a transitive 4-cycle."""
    if around.is_empty() or not nx.is_connected(around.graph()):
        return False
    return any(is_transitive(mono.around(c)) for c in four_cycles(around.graph()))


def branched_link_cover(
    link_: SimplicialComplex, branch_set: Iterable[Vertex], mono: LinkMonodromy
) -> SimplicialComplex:
    """
    Cover the link away from the branch set, then cone off each component of
    the preimage of every branch vertex's link with a vertex ("cone", w, n).
    """
    branch = frozenset(branch_set)
    if not branch <= link_.vertices:
        raise PreconditionError(
            f"Branch vertices {[format_vertex(v) for v in sort_vertices(branch - link_.vertices)]} are not in the link"
        )
    for u, w in itertools.combinations(sort_vertices(branch), 2):
        if link_.has_face((u, w)):
            raise PreconditionError(f"Branch vertices {format_vertex(u)} and {format_vertex(w)} are adjacent")
    cover = voltage_cover(link_.induced(link_.vertices - branch), mono)
    faces: list[frozenset[Vertex]] = list(cover.maximal_faces)
    vertices: list[Vertex] = list(cover.vertices)
    parts = None if cover.parts is None else dict(cover.parts)
    for w in sort_vertices(branch):
        around = link(link_, [w])
        preimage = voltage_cover(around, mono)
        components = [frozenset(c) for c in nx.connected_components(preimage.graph())]
        components.sort(key=lambda c: vertex_key(min(c, key=vertex_key)))
        if len(components) > 1 and is_transitive_branch(around, mono):
            raise VerificationError(
                f"Preimage of Lk({format_vertex(w)}) has {len(components)} components under a transitive monodromy"
            )
        for n, component in enumerate(components or [frozenset()]):
            apex = ("cone", w, n)
            vertices.append(apex)
            if parts is not None:
                assert link_.parts is not None
                parts[apex] = link_.parts[w]
            faces.extend(f | {apex} for f in preimage.maximal_faces if f and f <= component)
    return SimplicialComplex(faces, vertices, parts)


@dataclass(frozen=True)
class OrderingFailure:
    prefix: tuple[Vertex, ...]
    candidate: Vertex
    reason: str

    def __str__(self) -> str:
        placed = ", ".join(format_vertex(v) for v in self.prefix)
        return f"after [{placed}]: {format_vertex(self.candidate)}: {self.reason}"


@dataclass
class OrderingResult:
    ordering: Optional[tuple[Vertex, ...]]
    witness: Optional[OrderingFailure] = None
    explored: int = 0
    exhausted: bool = False

    @property
    def ok(self) -> bool:
        return self.ordering is not None

    def to_data(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "ordering": None if self.ordering is None else [format_vertex(v) for v in self.ordering],
            "witness": None if self.witness is None else str(self.witness),
            "explored": self.explored,
            "exhausted": self.exhausted,
        }


def _edge_on_four_cycle(graph: nx.Graph, u: Vertex, w: Vertex) -> bool:
    return any(
        graph.has_edge(x, y)
        for x in graph[w]
        if x != u
        for y in graph[u]
        if y not in (w, x)
    )


def _prior_intersection(
    gamma: SimplicialComplex, vertex: Vertex, prior: Sequence[Vertex]
) -> SimplicialComplex:
    """Lk(vertex) intersected with the union of the stars of the prior vertices."""
    around = link(gamma, [vertex])
    stars = {big for u in prior for big in gamma.maximal_faces_containing([u])}
    return SimplicialComplex(m & big for m in around.maximal_faces for big in stars)


def ordering_failure(
    gamma: SimplicialComplex, vertex: Vertex, prior: Sequence[Vertex]
) -> Optional[str]:
    """Why vertex cannot come next after prior, or None."""
    if not prior:
        around = link(gamma, [vertex])
        if around.is_empty():
            return "empty link"
        if not nx.is_connected(around.graph()):
            return "disconnected link"
        return None
    meet = _prior_intersection(gamma, vertex, prior)
    if meet.is_empty():
        return "link misses the earlier stars"
    graph = meet.graph()
    if not nx.is_connected(graph):
        return f"intersection has {nx.number_connected_components(graph)} components"
    if graph.number_of_edges() == 0:
        return "intersection has no 4-cycles"
    for u, w in graph.edges:
        if not _edge_on_four_cycle(graph, u, w):
            return f"edge {format_vertex(u)} - {format_vertex(w)} lies on no 4-cycle"
    return None


def _check_targets(gamma: SimplicialComplex, vertices: Iterable[Vertex]) -> list[Vertex]:
    targets = list(vertices)
    if len(set(targets)) != len(targets):
        raise PreconditionError("Repeated vertex in the ordering targets")
    missing = set(targets) - gamma.vertices
    if missing:
        raise PreconditionError(
            f"{[format_vertex(v) for v in sort_vertices(missing)]} are not vertices of the complex"
        )
    return targets


def find_int4cycles_ordering(
    gamma: SimplicialComplex,
    vertices: Iterable[Vertex],
    budget: int = DEFAULT_ORDERING_BUDGET,
) -> OrderingResult:
    """
    Depth-first search for an ordering in which every vertex meets the stars
    of the earlier ones in a connected graph covered by 4-cycles. Failed sets
    of placed vertices are remembered, since the condition only sees the set.
    """
    targets = sort_vertices(_check_targets(gamma, vertices))
    failed: set[frozenset[Vertex]] = set()
    deepest: list[OrderingFailure] = []
    explored = 0

    def extend(prefix: tuple[Vertex, ...]) -> Optional[tuple[Vertex, ...]]:
        nonlocal explored
        if len(prefix) == len(targets):
            return prefix
        placed = frozenset(prefix)
        if placed in failed:
            return None
        for candidate in targets:
            if candidate in placed:
                continue
            if explored >= budget:
                raise BudgetExhausted(f"Ordering search stopped after {explored} checks")
            explored += 1
            reason = ordering_failure(gamma, candidate, prefix)
            if reason is not None:
                if not deepest or len(prefix) > len(deepest[0].prefix):
                    deepest[:] = [OrderingFailure(prefix, candidate, reason)]
                continue
            found = extend(prefix + (candidate,))
            if found is not None:
                return found
        failed.add(placed)
        return None

    try:
        ordering = extend(())
    except BudgetExhausted:
        LOGGER.warning("Ordering search budget of %d checks exhausted", budget)
        return OrderingResult(None, deepest[0] if deepest else None, explored, True)
    if ordering is None:
        return OrderingResult(None, deepest[0] if deepest else None, explored)
    return OrderingResult(ordering, None, explored)


def check_int4cycles_ordering(
    gamma: SimplicialComplex, ordering: Sequence[Vertex]
) -> list[OrderingFailure]:
    """Every position of a given ordering that violates the condition."""
    _check_targets(gamma, ordering)
    failures = []
    for n, vertex in enumerate(ordering):
        reason = ordering_failure(gamma, vertex, ordering[:n])
        if reason is not None:
            failures.append(OrderingFailure(tuple(ordering[:n]), vertex, reason))
    return failures
