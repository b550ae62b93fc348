from __future__ import annotations

import itertools
import json
import logging
import random
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Any, Callable, Hashable, Iterable, Mapping, Optional, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher, categorical_node_match

from fp2_cube_builder._utils import (
    MINUS,
    PLUS,
    canonical_json,
    format_vertex,
    sort_vertices,
    vertex_key,
)
from fp2_cube_builder.errors import BudgetExhausted, InputError, PreconditionError

LOGGER = logging.getLogger(__name__)

Vertex = Hashable
Simplex = tuple[Vertex, ...]
Face = frozenset[Vertex]

EMPTY_FACE: Face = frozenset()
DEFAULT_SIZE_BOUND: int = 10_000


def simplex(vertices: Iterable[Vertex]) -> Simplex:
    """Strictly ordered vertex sequence of a face."""
    return tuple(sort_vertices(vertices))


def _reduce_to_maximal(faces: Iterable[Face]) -> frozenset[Face]:
    unique = sorted(set(faces), key=len, reverse=True)
    kept: list[Face] = []
    containing: dict[Vertex, list[Face]] = {}
    for face in unique:
        if not face:
            continue
        pivot = min(face, key=lambda v: len(containing.get(v, ())))
        if any(face < other for other in containing.get(pivot, ())):
            continue
        kept.append(face)
        for vertex in face:
            containing.setdefault(vertex, []).append(face)
    if not kept:
        return frozenset({EMPTY_FACE})
    return frozenset(kept)


class SimplicialComplex:
    """
    Finite abstract simplicial complex stored by its maximal faces.

    Every complex contains the empty face, so the complex without vertices is
    the empty complex of dimension -1 and is the unit for joins. Faces of all
    dimensions are enumerated lazily and cached.
    """

    def __init__(
        self,
        maximal_faces: Iterable[Iterable[Vertex]],
        vertices: Iterable[Vertex] = (),
        parts: Optional[Mapping[Vertex, int]] = None,
        *,
        reduced: bool = False,
    ):
        faces: list[Face] = [frozenset(face) for face in maximal_faces]
        covered: set[Vertex] = set().union(*faces)
        faces.extend(frozenset((v,)) for v in vertices if v not in covered)
        if reduced:
            self._maximal: frozenset[Face] = frozenset(faces) or frozenset(
                {EMPTY_FACE}
            )
        else:
            self._maximal = _reduce_to_maximal(faces)
        self._vertices: frozenset[Vertex] = frozenset().union(*self._maximal)
        self._parts: Optional[dict[Vertex, int]] = None
        if parts is not None:
            missing = [v for v in self._vertices if v not in parts]
            if missing:
                raise ValueError(
                    f"Partite structure misses vertices {sort_vertices(missing)[:5]}"
                )
            self._parts = {v: parts[v] for v in self._vertices}
        self._hash: Optional[int] = None

    @property
    def vertices(self) -> frozenset[Vertex]:
        return self._vertices

    @property
    def maximal_faces(self) -> frozenset[Face]:
        return self._maximal

    @property
    def parts(self) -> Optional[dict[Vertex, int]]:
        return self._parts

    @property
    def dimension(self) -> int:
        return max(len(face) for face in self._maximal) - 1

    def is_empty(self) -> bool:
        return not self._vertices

    @cached_property
    def _order(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(sort_vertices(self._vertices))}

    @cached_property
    def _by_vertex(self) -> dict[Vertex, tuple[Face, ...]]:
        index: dict[Vertex, list[Face]] = {v: [] for v in self._vertices}
        for face in self._maximal:
            for vertex in face:
                index[vertex].append(face)
        return {v: tuple(faces) for v, faces in index.items()}

    @cached_property
    def _faces(self) -> dict[int, list[Simplex]]:
        return {}

    def sort_key(self, vertex: Vertex) -> int:
        return self._order[vertex]

    def ordered(self, face: Iterable[Vertex]) -> Simplex:
        return tuple(sorted(face, key=self._order.__getitem__))

    def maximal_faces_containing(self, face: Iterable[Vertex]) -> list[Face]:
        target = frozenset(face)
        if not target:
            return list(self._maximal)
        if not target <= self._vertices:
            return []
        pivot = min(target, key=lambda v: len(self._by_vertex[v]))
        return [m for m in self._by_vertex[pivot] if target <= m]

    def has_face(self, face: Iterable[Vertex]) -> bool:
        target = frozenset(face)
        if not target:
            return True
        if not target <= self._vertices:
            return False
        pivot = min(target, key=lambda v: len(self._by_vertex[v]))
        return any(target <= m for m in self._by_vertex[pivot])

    def faces(self, k: int) -> list[Simplex]:
        """All k-faces as ordered tuples, in lexicographic order of the vertex order."""
        if k < -1:
            return []
        if k == -1:
            return [()]
        if k not in self._faces:
            found: set[Simplex] = set()
            for face in self._maximal:
                if len(face) > k:
                    found.update(itertools.combinations(self.ordered(face), k + 1))
            self._faces[k] = sorted(
                found, key=lambda s: tuple(self._order[v] for v in s)
            )
        return self._faces[k]

    def f_vector(self) -> list[int]:
        return [len(self.faces(k)) for k in range(self.dimension + 1)]

    def face_total(self) -> int:
        return sum(self.f_vector())

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * count for k, count in enumerate(self.f_vector()))

    @cached_property
    def _graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self._vertices)
        graph.add_edges_from(self.faces(1))
        return graph

    def graph(self) -> nx.Graph:
        """The 1-skeleton. Callers must not mutate it."""
        return self._graph

    def induced(self, vertices: Iterable[Vertex]) -> SimplicialComplex:
        """Full subcomplex spanned by the given vertices."""
        keep = frozenset(vertices) & self._vertices
        return SimplicialComplex(
            (face & keep for face in self._maximal),
            parts=self._parts,
        )

    def relabel(self, mapping: Callable[[Vertex], Vertex]) -> SimplicialComplex:
        parts = None
        if self._parts is not None:
            parts = {mapping(v): p for v, p in self._parts.items()}
        return SimplicialComplex(
            (frozenset(mapping(v) for v in face) for face in self._maximal),
            parts=parts,
            reduced=True,
        )

    def with_parts(self, parts: Optional[Mapping[Vertex, int]]) -> SimplicialComplex:
        return SimplicialComplex(self._maximal, parts=parts, reduced=True)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._vertices == other._vertices and self._maximal == other._maximal

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vertices, self._maximal))
        return self._hash

    def __repr__(self) -> str:
        return f"SimplicialComplex(f_vector={self.f_vector()})"


def build_complex(
    maximal_faces: Iterable[Sequence[Vertex]],
    vertices: Iterable[Vertex] = (),
    parts: Optional[Mapping[Vertex, int]] = None,
) -> SimplicialComplex:
    checked: list[Face] = []
    for face in maximal_faces:
        as_set = frozenset(face)
        if len(as_set) != len(face):
            raise ValueError(f"Duplicate vertex in face {list(face)}")
        checked.append(as_set)
    return SimplicialComplex(checked, vertices, parts)


def clique_complex(graph: nx.Graph) -> SimplicialComplex:
    return SimplicialComplex(nx.find_cliques(graph), graph.nodes)


def link(complex_: SimplicialComplex, face: Iterable[Vertex]) -> SimplicialComplex:
    target = frozenset(face)
    if not complex_.has_face(target):
        raise ValueError(f"{simplex(target)} is not a face of the complex")
    if not target:
        return complex_
    return SimplicialComplex(
        (m - target for m in complex_.maximal_faces_containing(target)),
        parts=complex_.parts,
    )


def star(complex_: SimplicialComplex, face: Iterable[Vertex]) -> SimplicialComplex:
    """Closed star: every face of a maximal face containing the given face."""
    target = frozenset(face)
    if not complex_.has_face(target):
        raise ValueError(f"{simplex(target)} is not a face of the complex")
    return SimplicialComplex(
        complex_.maximal_faces_containing(target), parts=complex_.parts, reduced=True
    )


def join(first: SimplicialComplex, second: SimplicialComplex) -> SimplicialComplex:
    if first.vertices & second.vertices:
        first = first.relabel(lambda v: (v, 0))
        second = second.relabel(lambda v: (v, 1))
    parts: Optional[dict[Vertex, int]] = None
    if first.parts is not None and second.parts is not None:
        shift = max(first.parts.values(), default=0)
        parts = dict(first.parts)
        parts.update({v: p + shift for v, p in second.parts.items()})
    return SimplicialComplex(
        (a | b for a in first.maximal_faces for b in second.maximal_faces),
        parts=parts,
        reduced=True,
    )


def join_all(*complexes: SimplicialComplex) -> SimplicialComplex:
    result = SimplicialComplex([])
    for complex_ in complexes:
        result = join(result, complex_)
    return result


def is_flag(complex_: SimplicialComplex) -> bool:
    return all(complex_.has_face(clique) for clique in nx.find_cliques(complex_.graph()))


def barycentric_subdivision(complex_: SimplicialComplex) -> SimplicialComplex:
    """
    Vertices are (face, dimension) pairs, faces are chains of faces and the
    part of a vertex is the dimension of its face plus one.
    """
    chains: set[Face] = set()
    for face in complex_.maximal_faces:
        for flag in itertools.permutations(complex_.ordered(face)):
            chains.add(
                frozenset(
                    (complex_.ordered(flag[: k + 1]), k) for k in range(len(flag))
                )
            )
    parts = {vertex: vertex[1] + 1 for chain in chains for vertex in chain}
    return SimplicialComplex(chains, parts=parts, reduced=True)


def octahedralise(complex_: SimplicialComplex) -> SimplicialComplex:
    """Doubles every vertex v into (v, "+") and (v, "-") and takes all sign choices."""
    faces: list[Face] = []
    for face in complex_.maximal_faces:
        ordered = complex_.ordered(face)
        for signs in itertools.product((PLUS, MINUS), repeat=len(ordered)):
            faces.append(frozenset(zip(ordered, signs)))
    parts = None
    if complex_.parts is not None:
        parts = {
            (v, sign): part
            for v, part in complex_.parts.items()
            for sign in (PLUS, MINUS)
        }
    return SimplicialComplex(faces, parts=parts, reduced=True)


def octahedral_retraction(
    complex_: SimplicialComplex,
    section: Optional[Callable[[Vertex], str]] = None,
) -> dict[Vertex, Vertex]:
    """
    Vertex map on S(K). Without a section it collapses (v, s) to v, onto K.
    With a section it folds (v, s) to (v, section(v)), onto the copy of K
    spanned by the chosen signs.
    """
    mapping: dict[Vertex, Vertex] = {}
    for vertex in complex_.vertices:
        for sign in (PLUS, MINUS):
            mapping[(vertex, sign)] = (
                vertex if section is None else (vertex, section(vertex))
            )
    return mapping


def is_simplicial_map(
    source: SimplicialComplex,
    target: SimplicialComplex,
    mapping: Mapping[Vertex, Vertex],
) -> bool:
    return all(
        target.has_face(mapping[v] for v in face) for face in source.maximal_faces
    )


def is_retraction(
    source: SimplicialComplex,
    target: SimplicialComplex,
    mapping: Mapping[Vertex, Vertex],
) -> bool:
    """True iff mapping is a simplicial map source -> target fixing target."""
    if not target.vertices <= source.vertices:
        return False
    if any(mapping[v] != v for v in target.vertices):
        return False
    return is_simplicial_map(source, target, mapping)


def nlcp_failure(complex_: SimplicialComplex) -> Optional[str]:
    """Reason why the complex has a local cut point, or None if it has none."""
    if complex_.is_empty():
        return "complex is empty"
    if not nx.is_connected(complex_.graph()):
        return "complex is disconnected"
    for vertex in sort_vertices(complex_.vertices):
        vertex_link = link(complex_, (vertex,))
        if len(vertex_link.vertices) < 2:
            return f"link of {format_vertex(vertex)} is empty or a point"
        if not nx.is_connected(vertex_link.graph()):
            return f"link of {format_vertex(vertex)} is disconnected"
    return None


def has_nlcp(complex_: SimplicialComplex) -> bool:
    return nlcp_failure(complex_) is None


def verify_partite(complex_: SimplicialComplex, parts: Mapping[Vertex, int]) -> bool:
    missing = [v for v in complex_.vertices if v not in parts]
    if missing:
        raise ValueError(f"No part given for {sort_vertices(missing)[:5]}")
    return all(parts[a] != parts[b] for a, b in complex_.faces(1))


def join_factors(complex_: SimplicialComplex) -> list[SimplicialComplex]:
    """
    Join decomposition of a flag complex: full subcomplexes on the components
    of the complement of its 1-skeleton.
    """
    if not is_flag(complex_):
        raise ValueError("Join factors are only computed for flag complexes")
    complement = nx.complement(complex_.graph())
    components = sorted(
        (sort_vertices(c) for c in nx.connected_components(complement)),
        key=lambda c: vertex_key(tuple(c)),
    )
    return [complex_.induced(component) for component in components]


@lru_cache(maxsize=8192)
def _invariants(complex_: SimplicialComplex) -> tuple[Any, ...]:
    degrees = sorted(d for _, d in complex_.graph().degree())
    link_sizes = sorted(
        tuple(link(complex_, (v,)).f_vector()) for v in complex_.vertices
    )
    return (tuple(complex_.f_vector()), tuple(degrees), tuple(link_sizes))


def _incidence_graph(complex_: SimplicialComplex) -> nx.Graph:
    graph = nx.Graph()
    for vertex in complex_.vertices:
        graph.add_node(("v", vertex), kind="vertex")
    for face in complex_.maximal_faces:
        graph.add_node(("f", face), kind="face")
        graph.add_edges_from((("f", face), ("v", vertex)) for vertex in face)
    return graph


@lru_cache(maxsize=8192)
def _isomorphic(first: SimplicialComplex, second: SimplicialComplex) -> bool:
    if _invariants(first) != _invariants(second):
        return False
    flag = is_flag(first)
    if flag != is_flag(second):
        return False
    if flag:
        graph_a, graph_b = first.graph(), second.graph()
        attribute = None
    else:
        graph_a, graph_b = _incidence_graph(first), _incidence_graph(second)
        attribute = "kind"
    if nx.weisfeiler_lehman_graph_hash(
        graph_a, node_attr=attribute
    ) != nx.weisfeiler_lehman_graph_hash(graph_b, node_attr=attribute):
        return False
    if attribute is None:
        matcher = GraphMatcher(graph_a, graph_b)
    else:
        matcher = GraphMatcher(
            graph_a, graph_b, node_match=categorical_node_match(attribute, None)
        )
    return bool(matcher.is_isomorphic())


def is_isomorphic(
    first: SimplicialComplex,
    second: SimplicialComplex,
    size_bound: int = DEFAULT_SIZE_BOUND,
) -> bool:
    """
    Exact isomorphism test. Flag complexes are compared through their
    1-skeleta, others through the vertex/maximal-face incidence graph.
    """
    for complex_ in (first, second):
        if complex_.face_total() > size_bound:
            raise PreconditionError(
                f"Complex with {complex_.face_total()} faces exceeds the isomorphism size bound {size_bound}"
            )
    if first == second:
        return True
    return _isomorphic(first, second)


def random_flag_nlcp_complex(
    seed: int, n_vertices: int, edge_density: float, budget: int = 1000
) -> SimplicialComplex:
    if n_vertices < 4:
        raise ValueError(f"Need at least 4 vertices, got {n_vertices}")
    rng = random.Random(seed)
    for attempt in range(budget):
        graph = nx.gnp_random_graph(n_vertices, edge_density, seed=rng.getrandbits(32))
        candidate = clique_complex(graph)
        if has_nlcp(candidate):
            LOGGER.debug("Seed %d accepted after %d attempts", seed, attempt + 1)
            return candidate
    raise BudgetExhausted(
        f"No flag nlcp complex found for seed {seed} within {budget} samples"
    )


def complex_to_data(complex_: SimplicialComplex) -> dict[str, Any]:
    data: dict[str, Any] = {
        "vertices": [format_vertex(v) for v in sort_vertices(complex_.vertices)],
        "maximal_faces": sorted(
            (
                [format_vertex(v) for v in complex_.ordered(face)]
                for face in complex_.maximal_faces
                if face
            ),
            key=lambda face: [vertex_key(v) for v in face],
        ),
    }
    if complex_.parts is not None:
        data["parts"] = {format_vertex(v): p for v, p in complex_.parts.items()}
    return data


def dumps_complex(complex_: SimplicialComplex) -> str:
    return canonical_json(complex_to_data(complex_))


def complex_from_data(data: Any) -> SimplicialComplex:
    if not isinstance(data, dict) or not isinstance(data.get("maximal_faces"), list):
        raise InputError("Complex JSON needs a 'maximal_faces' list")
    faces = data["maximal_faces"]
    vertices = data.get("vertices", [])
    if not isinstance(vertices, list):
        raise InputError("'vertices' must be a list")
    for face in faces:
        if not isinstance(face, list) or not all(isinstance(v, str) for v in face):
            raise InputError(f"Face {face!r} is not a list of vertex names")
    if not all(isinstance(v, str) for v in vertices):
        raise InputError("Vertex names must be strings")
    parts = data.get("parts")
    if parts is not None and (
        not isinstance(parts, dict)
        or not all(isinstance(p, int) and p >= 1 for p in parts.values())
    ):
        raise InputError("'parts' must map vertex names to positive integers")
    try:
        return build_complex(faces, vertices, parts)
    except ValueError as e:
        raise InputError(str(e)) from e


def loads_complex(text: str) -> SimplicialComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"Invalid complex JSON: {e}") from e
    return complex_from_data(data)


def read_complex(path: Path) -> SimplicialComplex:
    if not path.is_file():
        raise InputError(f"Could not find complex file: {path}")
    return loads_complex(path.read_text(encoding="utf-8"))


def write_complex(complex_: SimplicialComplex, path: Path) -> None:
    path.write_text(dumps_complex(complex_), encoding="utf-8")
