from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import networkx as nx

from fp2_cube_builder._utils import sort_vertices
from fp2_cube_builder.errors import InputError, PreconditionError
from fp2_cube_builder.homology import HomologyGroup, IntegerMatrix, smith_normal_form
from fp2_cube_builder.simplicial import SimplicialComplex, Vertex

LOGGER = logging.getLogger(__name__)

Letter = tuple[int, int]


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for generator, exponent in letters:
        if exponent not in (1, -1):
            raise ValueError(f"Letter exponent must be +1 or -1, got {exponent}")
        if stack and stack[-1] == (generator, -exponent):
            stack.pop()
        else:
            stack.append((generator, exponent))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in generators indexed from 0."""

    letters: tuple[Letter, ...] = ()

    @classmethod
    def of(cls, letters: Iterable[Letter]) -> Word:
        return cls(_free_reduce(letters))

    def __post_init__(self) -> None:
        if _free_reduce(self.letters) != self.letters:
            raise ValueError(f"Word {self.letters} is not freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word.of(self.letters + other.letters)

    def __invert__(self) -> Word:
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, exponent: int) -> Word:
        base = self if exponent >= 0 else ~self
        return Word.of(base.letters * abs(exponent))

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def exponent_sums(self, n_generators: int) -> list[int]:
        sums = [0] * n_generators
        for generator, exponent in self.letters:
            sums[generator] += exponent
        return sums

    def cyclically_reduced(self) -> Word:
        letters = self.letters
        while len(letters) > 1 and letters[0] == (letters[-1][0], -letters[-1][1]):
            letters = letters[1:-1]
        return Word(letters)

    def substitute(self, generator: int, image: Word) -> Word:
        result: list[Letter] = []
        for g, e in self.letters:
            if g == generator:
                result.extend(image.letters if e == 1 else (~image).letters)
            else:
                result.append((g, e))
        return Word.of(result)

    def reindex(self, mapping: dict[int, int]) -> Word:
        return Word(tuple((mapping[g], e) for g, e in self.letters))


def commutator(first: Word, second: Word) -> Word:
    return ~first * ~second * first * second


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relations: tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        for relation in self.relations:
            for generator in relation.generators():
                if not 0 <= generator < len(self.generators):
                    raise ValueError(
                        f"Relation references unknown generator {generator}"
                    )

    def to_text(self) -> str:
        lines = ["generators " + " ".join(self.generators)]
        for relation in self.relations:
            tokens: list[str] = []
            for generator, exponent in relation.letters:
                tokens.append(self.generators[generator])
                if exponent == -1:
                    tokens.append("-1")
            lines.append(" ".join(tokens))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Presentation:
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines or not lines[0].startswith("generators"):
            raise InputError("Presentation text must start with a generators line")
        names = tuple(lines[0].split()[1:])
        if len(set(names)) != len(names):
            raise InputError("Duplicate generator names")
        index = {name: i for i, name in enumerate(names)}
        relations: list[Word] = []
        for line in lines[1:]:
            letters: list[Letter] = []
            tokens = line.split()
            position = 0
            while position < len(tokens):
                name = tokens[position]
                if name not in index:
                    raise InputError(f"Unknown generator {name!r} in {line!r}")
                exponent = 1
                if position + 1 < len(tokens) and tokens[position + 1].lstrip(
                    "-"
                ).isdigit():
                    exponent = int(tokens[position + 1])
                    position += 1
                if exponent == 0:
                    raise InputError(f"Zero exponent on {name!r} in {line!r}")
                sign = 1 if exponent > 0 else -1
                letters.extend([(index[name], sign)] * abs(exponent))
                position += 1
            relations.append(Word.of(letters))
        return cls(names, tuple(relations))


def fundamental_group_presentation(
    complex_: SimplicialComplex, basepoint: Vertex
) -> Presentation:
    """
    Edge-path group: one generator per edge outside a breadth-first spanning
    tree, one relation per triangle.
    """
    if basepoint not in complex_.vertices:
        raise ValueError(f"Basepoint {basepoint!r} is not a vertex")
    graph = complex_.graph()
    if not nx.is_connected(graph):
        raise PreconditionError("Fundamental group presentation needs a connected complex")
    tree: set[frozenset[Vertex]] = set()
    seen = {basepoint}
    frontier = [basepoint]
    while frontier:
        following: list[Vertex] = []
        for vertex in frontier:
            for neighbour in sort_vertices(graph.neighbors(vertex)):
                if neighbour not in seen:
                    seen.add(neighbour)
                    tree.add(frozenset((vertex, neighbour)))
                    following.append(neighbour)
        frontier = following
    generator_of: dict[tuple[Vertex, Vertex], int] = {}
    names: list[str] = []
    for a, b in complex_.faces(1):
        if frozenset((a, b)) not in tree:
            generator_of[(a, b)] = len(names)
            names.append(f"g{len(names)}")

    def letter(u: Vertex, v: Vertex) -> list[Letter]:
        if (u, v) in generator_of:
            return [(generator_of[(u, v)], 1)]
        if (v, u) in generator_of:
            return [(generator_of[(v, u)], -1)]
        return []

    relations: list[Word] = []
    for a, b, c in complex_.faces(2):
        word = Word.of(letter(a, b) + letter(b, c) + letter(c, a))
        if word.letters:
            relations.append(word)
    LOGGER.debug(
        "Edge-path presentation with %d generators and %d relations",
        len(names),
        len(relations),
    )
    return Presentation(tuple(names), tuple(relations))


def relation_matrix(presentation: Presentation) -> IntegerMatrix:
    """Exponent-sum matrix, one row per relation."""
    n = len(presentation.generators)
    matrix = IntegerMatrix(len(presentation.relations), n)
    for i, relation in enumerate(presentation.relations):
        for j, total in enumerate(relation.exponent_sums(n)):
            if total:
                matrix.entries[(i, j)] = total
    return matrix


def abelianization(presentation: Presentation) -> HomologyGroup:
    snf = smith_normal_form(relation_matrix(presentation))
    return HomologyGroup(
        len(presentation.generators) - snf.rank,
        tuple(d for d in snf.divisors if d > 1),
    )


def is_perfect(presentation: Presentation) -> bool:
    return abelianization(presentation).is_trivial()


def _normalise(relations: Sequence[Word]) -> list[Word]:
    result: list[Word] = []
    for relation in relations:
        reduced = relation.cyclically_reduced()
        if reduced.letters and reduced not in result:
            result.append(reduced)
    return result


def _elimination(relations: Sequence[Word]) -> Optional[tuple[int, int, Word]]:
    """First sound elimination: (relation index, generator, its replacement)."""
    for position, relation in enumerate(relations):
        if len(relation) == 1:
            generator, _ = relation.letters[0]
            return position, generator, Word()
        if len(relation) == 2:
            (g1, e1), (g2, e2) = relation.letters
            if g1 == g2:
                continue
            if g1 > g2:
                (g1, e1), (g2, e2) = (g2, e2), (g1, e1)
            # x^e y^f = 1 up to rotation, with x the later generator
            return position, g2, Word(((g1, -e1 * e2),))
    return None


def tietze_simplify(presentation: Presentation, budget: int = 1000) -> Presentation:
    """
    Eliminate generators killed by or equated through relations of length
    one or two; free and cyclic reduction in between. Only sound moves.
    """
    names = list(presentation.generators)
    relations = _normalise(presentation.relations)
    steps = 0
    while steps < budget:
        move = _elimination(relations)
        if move is None:
            break
        position, generator, image = move
        relations = [
            r.substitute(generator, image)
            for i, r in enumerate(relations)
            if i != position
        ]
        mapping = {g: g - (g > generator) for g in range(len(names)) if g != generator}
        relations = _normalise([r.reindex(mapping) for r in relations])
        del names[generator]
        steps += 1
    else:
        LOGGER.info("Tietze simplification stopped after a budget of %d moves", budget)
    return Presentation(tuple(names), tuple(relations))


def build_HZ(  # pylint: disable=invalid-name
    base: Presentation, extra: Sequence[Word], selection: Iterable[int]
) -> Presentation:
    """Base relations followed by the selected words of the extra list."""
    chosen = sorted(set(selection))
    for index in chosen:
        if not 0 <= index < len(extra):
            raise ValueError(f"Selector {index} out of range for {len(extra)} words")
    for word in extra:
        for generator in word.generators():
            if not 0 <= generator < len(base.generators):
                raise ValueError(f"Word uses unknown generator {generator}")
    return Presentation(
        base.generators, base.relations + tuple(extra[i] for i in chosen)
    )
