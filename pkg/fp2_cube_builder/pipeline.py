"""
The end-to-end run: from an input complex L to the blowup, its Morse
function, the branching data and the finiteness report, one stage at a time.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Union

import networkx as nx

from fp2_cube_builder._utils import canonical_json, sort_vertices
from fp2_cube_builder.blowup import (
    SIDE_A,
    CubeComplex,
    CubeVertex,
    blowup_manifest,
    branch_direction,
    branch_locus,
    brute_force_vertices,
    build_blowup,
    hyperplane_directions,
    verify_branching_locus,
    verify_npc,
    verify_table1,
)
from fp2_cube_builder.branch import (
    PAIR_ORDER,
    MonodromyRep,
    ProjectionGraph,
    branched_link_cover,
    build_monodromy,
    check_four_loops,
    check_int4cycles_ordering,
    commutator_identity_check,
    find_int4cycles_ordering,
    four_cycles,
    has_four_cycle,
    is_transitive,
    is_transitive_branch,
    pair_name,
    project_graphs,
)
from fp2_cube_builder.errors import InputError, PreconditionError, VerificationError
from fp2_cube_builder.homology import boundary_matrices, homology
from fp2_cube_builder.morse import (
    ASCENDING,
    DESCENDING,
    PI1_L,
    CensusEntry,
    MorseOrientation,
    ascending_link,
    bfs_window_vertices,
    cyclic_cover_window,
    default_orientation,
    descending_link,
    finiteness_report,
    level_function,
    level_inclusion_homology,
    level_window,
    link_census,
    link_retraction_check,
    orient_edges,
    verify_table2,
)
from fp2_cube_builder.presentation import fundamental_group_presentation, tietze_simplify
from fp2_cube_builder.report import (
    COMPUTED,
    LAB_BANNER,
    Assumption,
    Report,
    write_artifacts,
)
from fp2_cube_builder.simplicial import (
    SimplicialComplex,
    barycentric_subdivision,
    dumps_complex,
    is_flag,
    link,
    nlcp_failure,
    read_complex,
)
from fp2_cube_builder.tables import generator_b, lprime_vertex, shape_key
from fp2_cube_builder.util import complete_partite

LOGGER = logging.getLogger(__name__)

STRICT_PART_SIZE: int = 4
STRICT_PLUS_SIZE: int = 2

COVER_NPC: str = "branched_cover_npc"

StageResult = tuple[Optional[bool], dict[str, Any]]


@dataclass(frozen=True)
class PipelineConfig:
    l_path: Path
    a_part_sizes: tuple[int, int, int] = (4, 4, 4)
    # "auto" or primes for the pairs 12, 23, 31
    q_primes: Union[str, tuple[int, int, int]] = "auto"
    # A_i^+ per coordinate, by Gamma_A vertex name
    morse_signs: Optional[tuple[tuple[str, ...], ...]] = None
    window_radius: int = 1
    # recorded in the report; A_i^+ defaults to the first vertices of A_i
    seed: int = 0
    out_dir: Path = Path("fp2_out")
    strict: bool = True
    window_homology: bool = False
    assumptions: tuple[Assumption, ...] = ()

    def __post_init__(self) -> None:
        if len(self.a_part_sizes) != 3 or min(self.a_part_sizes) < 1:
            raise InputError(f"Need three positive A part sizes, got {self.a_part_sizes}")
        if self.strict and min(self.a_part_sizes) < STRICT_PART_SIZE:
            raise PreconditionError(
                f"A part sizes {self.a_part_sizes} are below {STRICT_PART_SIZE}; use lab mode for smaller generators"
            )
        if self.q_primes != "auto" and (
            isinstance(self.q_primes, str) or len(self.q_primes) != 3
        ):
            raise InputError(f"q_primes must be 'auto' or three primes, got {self.q_primes!r}")
        if self.morse_signs is not None and len(self.morse_signs) != 3:
            raise InputError("Morse signs need one A^+ set per coordinate")
        if self.window_radius < 0:
            raise InputError(f"Window radius must be non-negative, got {self.window_radius}")

    @property
    def a_plus_size(self) -> int:
        if self.strict:
            return STRICT_PLUS_SIZE
        return max(1, min(self.a_part_sizes) // 2)

    def to_data(self) -> dict[str, Any]:
        """The settings a run depends on; paths are left out."""
        return {
            "a_part_sizes": list(self.a_part_sizes),
            "q_primes": self.q_primes if isinstance(self.q_primes, str) else list(self.q_primes),
            "morse_signs": None if self.morse_signs is None else [list(s) for s in self.morse_signs],
            "window_radius": self.window_radius,
            "seed": self.seed,
            "strict": self.strict,
            "window_homology": self.window_homology,
        }

    def primes(self) -> Optional[dict[int, int]]:
        if isinstance(self.q_primes, str):
            return None
        return dict(zip(PAIR_ORDER, self.q_primes))


def y_representatives(
    complex_: CubeComplex, base: SimplicialComplex
) -> list[CubeVertex]:
    """One vertex of the branching locus per side pattern and link shape."""
    chosen: dict[Any, CubeVertex] = {}
    for vertex in complex_.sorted_vertices():
        if branch_direction(vertex) is None:
            continue
        chain = [lprime_vertex(b) for b in vertex.delta_b()]
        chosen.setdefault((vertex.pattern, shape_key(base, chain)), vertex)
    return list(chosen.values())


class Pipeline:
    """Runs the stages in order and stops at the first failing one."""

    def __init__(self, cfg: PipelineConfig):
        self.cfg = cfg
        self.report = Report(
            assumptions=list(cfg.assumptions)
            + [
                Assumption(
                    COVER_NPC,
                    "true",
                    note="a branched cover of a non-positively curved cube complex over a branching locus is non-positively curved",
                )
            ],
            banner=None if cfg.strict else LAB_BANNER,
            config=cfg.to_data(),
        )
        self.artifacts: dict[str, str] = {}
        self.base = SimplicialComplex([])
        self.gamma_b = SimplicialComplex([])
        self.complex_: Optional[CubeComplex] = None
        self.orientation: Optional[MorseOrientation] = None
        self.projections: dict[int, ProjectionGraph] = {}
        self.monodromy: Optional[MonodromyRep] = None
        self.certificate: dict[str, Any] = {}
        self.census: list[CensusEntry] = []

    @property
    def blowup(self) -> CubeComplex:
        assert self.complex_ is not None
        return self.complex_

    @property
    def morse(self) -> MorseOrientation:
        assert self.orientation is not None
        return self.orientation

    def stages(self) -> list[tuple[str, Callable[[], StageResult], tuple[str, ...]]]:
        return [
            ("nlcp", self.check_nlcp, ()),
            ("subdivision", self.subdivide, ("nlcp",)),
            ("octahedralisation", self.octahedralise, ("subdivision",)),
            ("blowup", self.build, ("octahedralisation",)),
            ("table1", self.table1, ("blowup",)),
            ("npc", self.npc, ("blowup",)),
            ("directions", self.directions, ("blowup",)),
            ("morse", self.morse_function, ("directions",)),
            ("table2", self.table2, ("morse",)),
            ("windows", self.windows, ("morse",)),
            ("branch_locus", self.locus, ("blowup",)),
            ("labelings", self.labelings, ("branch_locus",)),
            ("link_covers", self.link_covers, ("labelings", "table2", COVER_NPC)),
            ("finiteness", self.finiteness, ("table2",)),
        ]

    def run(self) -> Report:
        if not self.cfg.strict:
            warnings.warn(LAB_BANNER, stacklevel=3)
        try:
            for name, body, citations in self.stages():
                LOGGER.info("Stage %s", name)
                try:
                    passed, data = body()
                except PreconditionError as e:
                    raise PreconditionError(f"stage {name}: {e}") from e
                except VerificationError as e:
                    self.report.add(name, False, {"error": str(e)}, citations)
                    break
                self.report.add(name, passed, data, self._citations(name, citations))
                if passed is False:
                    break
        finally:
            if self.report.stages:
                self.write()
        return self.report

    def _citations(self, name: str, citations: tuple[str, ...]) -> tuple[str, ...]:
        if name == "finiteness" and any(a.key == PI1_L for a in self.report.assumptions):
            return citations + (PI1_L,)
        return citations

    def check_nlcp(self) -> StageResult:
        self.base = read_complex(self.cfg.l_path)
        failure = nlcp_failure(self.base)
        if failure is not None:
            raise PreconditionError(f"L has a local cut point: {failure}")
        if self.base.dimension != 2:
            raise PreconditionError(f"L must be 2-dimensional, got dimension {self.base.dimension}")
        self.artifacts["L.json"] = dumps_complex(self.base)
        for k, matrix in enumerate(boundary_matrices(self.base)):
            self.artifacts[f"L_boundary_{k}.txt"] = matrix.dumps_triplets()
        self.artifacts["L_homology.json"] = canonical_json(
            {str(i): homology(self.base, i).to_data() for i in range(3)}
        )
        return True, {"f_vector": self.base.f_vector(), "flag": is_flag(self.base)}

    def subdivide(self) -> StageResult:
        subdivided = barycentric_subdivision(self.base)
        return is_flag(subdivided), {"f_vector": subdivided.f_vector(), "flag": is_flag(subdivided)}

    def octahedralise(self) -> StageResult:
        subdivided = barycentric_subdivision(self.base)
        self.gamma_b = generator_b(self.base)
        assert self.gamma_b.parts is not None
        sizes = [sum(p == i for p in self.gamma_b.parts.values()) for i in (1, 2, 3)]
        doubled = len(self.gamma_b.vertices) == 4 * len(subdivided.vertices)
        self.artifacts["gamma_b.json"] = dumps_complex(self.gamma_b)
        return doubled and is_flag(self.gamma_b), {
            "f_vector": self.gamma_b.f_vector(),
            "part_sizes": sizes,
            "vertex_law": doubled,
        }

    def build(self) -> StageResult:
        gamma_a = complete_partite(self.cfg.a_part_sizes)
        self.complex_ = build_blowup(gamma_a, self.gamma_b)
        brute = brute_force_vertices(gamma_a, self.gamma_b)
        agrees = brute == set(self.blowup.vertices)
        return agrees, {
            "counts": self.blowup.counts(),
            "pattern_counts": self.blowup.pattern_counts(),
            "brute_force_vertices": len(brute),
        }

    def table1(self) -> StageResult:
        table = verify_table1(self.blowup, self.base)
        return table.ok, table.to_data()

    def npc(self) -> StageResult:
        result = verify_npc(self.blowup)
        return result.ok, result.to_data()

    def directions(self) -> StageResult:
        classes = hyperplane_directions(self.blowup)
        return len(classes) == 3, {"directions": [c.to_data() for c in classes]}

    def _a_plus(self) -> list[list[Any]]:
        if self.cfg.morse_signs is not None:
            for i, signs in enumerate(self.cfg.morse_signs):
                unknown = set(signs) - set(self.blowup.values(SIDE_A, i))
                if unknown:
                    raise InputError(f"A^+ of coordinate {i + 1} names non-vertices {sorted(unknown)}")
            return [list(signs) for signs in self.cfg.morse_signs]
        return [self.blowup.values(SIDE_A, i)[: self.cfg.a_plus_size] for i in range(3)]

    def morse_function(self) -> StageResult:
        a_plus = self._a_plus()
        self.orientation = default_orientation(self.blowup, a_plus)
        oriented = orient_edges(self.blowup, self.morse)
        corners = [v for v in self.blowup.sorted_vertices() if not v.delta_b()]
        retracts = [link_retraction_check(self.blowup, self.morse, v) for v in corners]
        return all(retracts), {
            "a_plus": a_plus,
            "edges": len(oriented.heads),
            "squares_checked": oriented.squares_checked,
            "retractions_checked": len(retracts),
        }

    def table2(self) -> StageResult:
        table = verify_table2(self.blowup, self.morse, self.base)
        return table.ok, table.to_data()

    def windows(self) -> StageResult:
        levels = level_function(self.blowup, self.morse)
        window = cyclic_cover_window(self.blowup, self.morse, self.cfg.window_radius)
        walked = bfs_window_vertices(self.blowup, self.morse, window.low, window.high)
        data: dict[str, Any] = {
            "window": window.to_data(),
            "periods": sorted(set(levels.period.values())),
            "walk_agrees": walked == set(window.lifted_vertices),
        }
        if self.cfg.window_homology or not self.cfg.strict:
            zero = level_window(self.blowup, self.morse, 0, 0, levels)
            data["inclusion"] = level_inclusion_homology(zero, window).to_data()
        return data["walk_agrees"], data

    def locus(self) -> StageResult:
        found = branch_locus(self.blowup)
        certificate = verify_branching_locus(self.blowup, found)
        self.certificate["branching_locus"] = certificate.to_data()
        return certificate.ok, {
            "vertices": len(found.vertices()),
            "edges": len(found.edges()),
            "components": nx.number_connected_components(found.graph()) if found.cells else 0,
            "certificate": certificate.to_data(),
        }

    def labelings(self) -> StageResult:
        self.projections = {k: project_graphs(self.blowup, k) for k in PAIR_ORDER}
        self.monodromy = build_monodromy(self.projections, self.cfg.primes())
        pairs: dict[str, Any] = {}
        passed = True
        generators = []
        for k in PAIR_ORDER:
            labeling = self.monodromy.labelings[k]
            loops = check_four_loops(labeling)
            powers = {k: labeling.pair.alpha}, {k: labeling.pair.beta}
            combined = [self.monodromy.combined(p) for p in powers]
            generators.extend(combined)
            orbit = len(self.monodromy.base_orbit(combined))
            entry = {
                "projection": self.projections[k].to_data(),
                "q": labeling.pair.q,
                "l": labeling.pair.l,
                "commutator_identity": commutator_identity_check(labeling.pair),
                "incoming_distinct": labeling.incoming_distinct(),
                "four_loops": loops.to_data(),
                "base_orbit": orbit,
            }
            passed = passed and loops.ok and entry["commutator_identity"] and entry["incoming_distinct"]
            passed = passed and orbit == labeling.pair.q
            pairs[pair_name(k)] = entry
        full_orbit = len(self.monodromy.base_orbit(generators))
        passed = passed and full_orbit == self.monodromy.degree
        self.certificate["monodromy"] = self.monodromy.to_data()
        self.certificate["four_loops"] = {name: pair["four_loops"] for name, pair in pairs.items()}
        return passed, {"degree": self.monodromy.degree, "full_orbit": full_orbit, "pairs": pairs}

    def _cover_entry(self, vertex: CubeVertex, kind: str, directed: SimplicialComplex) -> dict[str, Any]:
        assert self.monodromy is not None and directed.parts is not None
        k = branch_direction(vertex)
        assert k is not None
        mono = self.monodromy.link_monodromy(self.blowup, vertex)
        branch = [w for w in sort_vertices(directed.vertices) if directed.parts[w] == k + 1]
        rest = directed.induced(directed.vertices - set(branch))
        cover = branched_link_cover(directed, branch, mono)
        transitive = [is_transitive_branch(link(directed, [w]), mono) for w in branch]
        expected = mono.degree * len(rest.vertices) + len(branch)
        lifted = cover.induced(v for v in cover.vertices if v[0] != "cone")
        rest_transitive = all(is_transitive(mono.around(c)) for c in four_cycles(rest.graph()))
        ordering = find_int4cycles_ordering(directed, branch)
        recheck = [] if ordering.ordering is None else check_int4cycles_ordering(directed, ordering.ordering)
        entry: dict[str, Any] = {
            "vertex": str(vertex),
            "pattern": vertex.pattern,
            "kind": kind,
            "degree": mono.degree,
            "branch_vertices": len(branch),
            "cover_vertices": len(cover.vertices),
            "all_transitive": all(transitive),
            "vertex_law": not all(transitive) or len(cover.vertices) == expected,
            "four_cycle_free": not rest_transitive or not has_four_cycle(lifted.graph()),
            "cover_connected": not cover.is_empty() and nx.is_connected(cover.graph()),
            "ordering": ordering.to_data(),
            "ordering_recheck": [str(f) for f in recheck],
        }
        entry["ok"] = (
            entry["all_transitive"]
            and entry["vertex_law"]
            and entry["four_cycle_free"]
            and ordering.ok
            and not recheck
        )
        return entry

    def link_covers(self) -> StageResult:
        entries = []
        for vertex in y_representatives(self.blowup, self.base):
            for kind, directed in (
                (ASCENDING, ascending_link(self.blowup, self.morse, vertex)),
                (DESCENDING, descending_link(self.blowup, self.morse, vertex)),
            ):
                entries.append(self._cover_entry(vertex, kind, directed))
        self.certificate["link_covers"] = entries
        passed = all(e["ok"] for e in entries)
        return passed, {
            "representatives": len(entries) // 2,
            "checked": len(entries),
            "failures": [f"{e['kind']} link at {e['vertex']}" for e in entries if not e["ok"]],
        }

    def _fundamental_group(self) -> None:
        basepoint = sort_vertices(self.base.vertices)[0]
        presentation = fundamental_group_presentation(self.base, basepoint)
        simplified = tietze_simplify(presentation)
        self.artifacts["L_presentation.txt"] = simplified.to_text()
        if simplified.generators:
            return
        self.report.assumptions = [a for a in self.report.assumptions if a.key != PI1_L]
        self.report.assumptions.append(
            Assumption(PI1_L, "trivial", COMPUTED, "edge-path presentation simplifies to the trivial group")
        )

    def finiteness(self) -> StageResult:
        self._fundamental_group()
        self.census = link_census(self.blowup, self.morse)
        self.artifacts["census.json"] = canonical_json([e.to_data() for e in self.census])
        verdict = finiteness_report(self.census, self.report.assumptions)
        return None, verdict.to_data()

    def write(self) -> Optional[Path]:
        artifacts = dict(self.artifacts)
        artifacts["report.json"] = self.report.dumps()
        if self.complex_ is not None:
            verdicts = {stage.name: stage.verdict for stage in self.report.stages}
            artifacts["blowup_manifest.json"] = canonical_json(blowup_manifest(self.blowup, verdicts))
        if self.certificate:
            artifacts["branch_certificate.json"] = canonical_json(self.certificate)
        return write_artifacts(self.cfg.out_dir, artifacts)


def run_pipeline(cfg: PipelineConfig) -> Report:
    return Pipeline(cfg).run()
