import itertools
from typing import Optional

from fp2_cube_builder._utils import MINUS, PLUS
from fp2_cube_builder.simplicial import SimplicialComplex, Vertex, join_all


def discrete_set(n: int, label: str = "p", part: Optional[int] = None) -> SimplicialComplex:
    """V_n: n isolated vertices, optionally all in one part."""
    if n < 0:
        raise ValueError(f"Discrete set size must be non-negative, got {n}")
    vertices = [f"{label}{i}" for i in range(n)]
    parts = None if part is None else {v: part for v in vertices}
    return SimplicialComplex([], vertices, parts)


def sphere0(label: str = "s") -> SimplicialComplex:
    return SimplicialComplex([], [f"{label}{PLUS}", f"{label}{MINUS}"])


def suspension(complex_: SimplicialComplex, label: str = "pole") -> SimplicialComplex:
    poles = SimplicialComplex([], [(label, PLUS), (label, MINUS)])
    return join_all(complex_, poles)


def cycle(n: int, label: str = "c") -> SimplicialComplex:
    if n < 3:
        raise ValueError(f"A cycle needs at least 3 vertices, got {n}")
    return SimplicialComplex(
        [(f"{label}{i}", f"{label}{(i + 1) % n}") for i in range(n)]
    )


def path(n: int, label: str = "x") -> SimplicialComplex:
    if n < 1:
        raise ValueError(f"A path needs at least one vertex, got {n}")
    return SimplicialComplex(
        [(f"{label}{i}", f"{label}{i + 1}") for i in range(n - 1)], [f"{label}0"]
    )


def full_simplex(n: int, label: str = "v") -> SimplicialComplex:
    """The n-simplex on vertices label0..label{n}."""
    return SimplicialComplex([[f"{label}{i}" for i in range(n + 1)]])


def simplex_boundary(n: int, label: str = "v") -> SimplicialComplex:
    """Boundary of the n-simplex, an (n-1)-sphere."""
    vertices = [f"{label}{i}" for i in range(n + 1)]
    return SimplicialComplex(
        [vertices[:i] + vertices[i + 1 :] for i in range(n + 1)], vertices
    )


def octahedron() -> SimplicialComplex:
    """S^0 * S^0 * S^0 with coordinate parts."""
    parts: dict[Vertex, int] = {
        (f"x{i}", sign): i for i in range(1, 4) for sign in (PLUS, MINUS)
    }
    faces = [
        [("x1", s1), ("x2", s2), ("x3", s3)]
        for s1 in (PLUS, MINUS)
        for s2 in (PLUS, MINUS)
        for s3 in (PLUS, MINUS)
    ]
    return SimplicialComplex(faces, parts=parts)


def projective_plane() -> SimplicialComplex:
    """The six-vertex triangulation of the real projective plane."""
    return SimplicialComplex(
        [
            (1, 2, 3),
            (1, 3, 4),
            (1, 4, 5),
            (1, 5, 6),
            (1, 2, 6),
            (2, 3, 5),
            (2, 4, 5),
            (2, 4, 6),
            (3, 4, 6),
            (3, 5, 6),
        ]
    )


def wedge_of_triangles() -> SimplicialComplex:
    """Two 2-simplices sharing a single vertex."""
    return SimplicialComplex([("o", "a", "b"), ("o", "c", "d")])


def complete_partite(sizes: tuple[int, ...], label: str = "a") -> SimplicialComplex:
    """V_{n1} * V_{n2} * ... with part i holding the vertices label{i}_{k}."""
    parts: dict[Vertex, int] = {}
    blocks: list[list[Vertex]] = []
    for i, size in enumerate(sizes, start=1):
        block: list[Vertex] = [f"{label}{i}_{k}" for k in range(size)]
        parts.update({v: i for v in block})
        blocks.append(block)
    faces = [list(choice) for choice in itertools.product(*blocks)]
    return SimplicialComplex(faces, parts=parts)
