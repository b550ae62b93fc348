import unittest
from typing import Optional

from fp2_cube_builder.blowup import SIDE_A, SIDE_B, CubeVertex, build_blowup
from fp2_cube_builder.errors import PreconditionError
from fp2_cube_builder.morse import (
    ASCENDING,
    DESCENDING,
    PI1_L,
    CensusEntry,
    LevelFunction,
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
    simple_connectivity_certificate,
    verify_table2,
)
from fp2_cube_builder.report import Assumption
from fp2_cube_builder.simplicial import SimplicialComplex, is_isomorphic, octahedralise
from fp2_cube_builder.util import (
    complete_partite,
    cycle,
    discrete_set,
    full_simplex,
    simplex_boundary,
)

CORNER = CubeVertex(("a1_0", "a2_0", "a3_0"), (SIDE_A, SIDE_A, SIDE_A))


class TestMorse(unittest.TestCase):
    """Three 4-cycles A_i * B_i with all cells present: the blowup is a 3-torus."""

    @classmethod
    def setUpClass(cls) -> None:
        gamma_b = octahedralise(complete_partite((1, 1, 1), "b"))
        cls.complex_ = build_blowup(complete_partite((2, 2, 2)), gamma_b)
        cls.orientation = default_orientation(cls.complex_, a_plus_size=1)

    def test_orientation(self) -> None:
        orientation = self.orientation
        self.assertEqual(orientation.sign((SIDE_A, "a1_0")), "+")
        self.assertEqual(orientation.sign((SIDE_A, "a1_1")), "-")
        self.assertEqual(orientation.weight((SIDE_A, "a1_0"), (SIDE_B, ("b1_0", "+"))), 1)
        self.assertEqual(orientation.weight((SIDE_B, ("b1_0", "+")), (SIDE_A, "a1_0")), -1)
        self.assertEqual(orientation.weight((SIDE_B, ("b1_0", "+")), (SIDE_A, "a1_1")), 1)
        with self.assertRaises(ValueError):
            orientation.weight((SIDE_A, "a1_0"), (SIDE_A, "a1_1"))
        with self.assertRaises(ValueError):
            orientation.sign((SIDE_A, "missing"))
        self.assertEqual(orientation.to_data()["A:a1_0"], "+")

    def test_explicit_a_plus(self) -> None:
        explicit = default_orientation(self.complex_, [["a1_0"], ["a2_0"], ["a3_0"]])
        self.assertEqual(explicit, self.orientation)
        with self.assertRaises(ValueError):
            default_orientation(self.complex_, [["nope"], [], []])
        unsigned = build_blowup(complete_partite((2, 2, 2)), complete_partite((1, 1, 1), "b"))
        with self.assertRaises(PreconditionError):
            default_orientation(unsigned)

    def test_square_sums(self) -> None:
        oriented = orient_edges(self.complex_, self.orientation)
        self.assertEqual(len(oriented.heads), 192)
        self.assertEqual(oriented.squares_checked, 192)

    def test_directed_links(self) -> None:
        up = ascending_link(self.complex_, self.orientation, CORNER)
        down = descending_link(self.complex_, self.orientation, CORNER)
        self.assertTrue(is_isomorphic(up, full_simplex(2)))
        self.assertTrue(is_isomorphic(down, full_simplex(2)))
        self.assertTrue(all(value[1] == "+" for _, value in up.vertices))
        self.assertTrue(link_retraction_check(self.complex_, self.orientation, CORNER))
        with self.assertRaises(PreconditionError):
            link_retraction_check(
                self.complex_,
                self.orientation,
                CubeVertex((("b1_0", "+"), "a2_0", "a3_0"), (SIDE_B, SIDE_A, SIDE_A)),
            )

    def test_table2_needs_standard_shapes(self) -> None:
        with self.assertRaises(PreconditionError):
            verify_table2(self.complex_, self.orientation, full_simplex(2))

    def test_level_function(self) -> None:
        levels = level_function(self.complex_, self.orientation)
        self.assertEqual(set(levels.period.values()), {4})
        self.assertEqual(LevelFunction({CORNER: 1}, {CORNER: 4}).levels(CORNER, -5, 5), [-3, 1, 5])
        self.assertEqual(LevelFunction({CORNER: 1}, {CORNER: 0}).levels(CORNER, 2, 5), [])

    def test_window_walk(self) -> None:
        window = cyclic_cover_window(self.complex_, self.orientation, 1)
        self.assertEqual(window.range, (-1, 1))
        walked = bfs_window_vertices(self.complex_, self.orientation, -1, 1)
        self.assertEqual(walked, set(window.lifted_vertices))
        self.assertEqual(sum(window.level_counts().values()), len(window.lifted_vertices))
        with self.assertRaises(ValueError):
            level_window(self.complex_, self.orientation, 1, 0)
        with self.assertRaises(ValueError):
            cyclic_cover_window(self.complex_, self.orientation, -1)

    def test_window_inclusion(self) -> None:
        levels = level_function(self.complex_, self.orientation)
        small = level_window(self.complex_, self.orientation, 0, 0, levels)
        big = cyclic_cover_window(self.complex_, self.orientation, 1)
        comparison = level_inclusion_homology(small, big)
        self.assertTrue(comparison.links_connected)
        self.assertTrue(comparison.inclusion.h0_iso)
        self.assertTrue(comparison.inclusion.h1_surjective)
        with self.assertRaises(PreconditionError):
            level_inclusion_homology(big, small)

    def test_census(self) -> None:
        census = link_census(self.complex_, self.orientation)
        self.assertEqual(sum(entry.count for entry in census), 2 * 64)
        self.assertEqual({entry.kind for entry in census}, {ASCENDING, DESCENDING})
        self.assertTrue(all(entry.connected for entry in census))
        self.assertEqual(finiteness_report(census).verdict, "F2")

    def test_simple_connectivity_certificate(self) -> None:
        self.assertIsNone(simple_connectivity_certificate(cycle(4)))
        self.assertIsNone(simple_connectivity_certificate(discrete_set(2)))
        self.assertIsNotNone(simple_connectivity_certificate(full_simplex(2)))
        self.assertIsNotNone(simple_connectivity_certificate(simplex_boundary(3)))

    def test_finiteness_decisions(self) -> None:
        def entry(representative: SimplicialComplex, role: Optional[str] = None) -> CensusEntry:
            return CensusEntry("x", ASCENDING, "AAA", "S(L')", representative, role=role)

        self.assertEqual(
            finiteness_report([entry(discrete_set(2))]).verdict, "no finiteness conclusion"
        )
        self.assertEqual(finiteness_report([entry(cycle(4))]).verdict, "FP1")
        self.assertEqual(finiteness_report([entry(full_simplex(2), "S(L')")]).verdict, "F2")
        perfect = Assumption(PI1_L, "perfect_nontrivial")
        self.assertEqual(
            finiteness_report([entry(full_simplex(2), "S(L')")], [perfect]).verdict,
            "FP2, not finitely presented",
        )
        sphere = finiteness_report(
            [entry(simplex_boundary(3), "S(L')")], [Assumption(PI1_L, "trivial")]
        )
        self.assertEqual(sphere.verdict, "F2")
        self.assertIn("not of type FP3", sphere.lines[-1].claim)

class TestTwoMaxima(unittest.TestCase):
    """Every A vertex positive over V2 * V2 * V2 and octahedralised V2 * V1 * V1: two peaks."""

    @classmethod
    def setUpClass(cls) -> None:
        gamma_b = octahedralise(complete_partite((2, 1, 1), "b"))
        cls.complex_ = build_blowup(complete_partite((2, 2, 2)), gamma_b)
        cls.orientation = default_orientation(
            cls.complex_, [["a1_0", "a1_1"], ["a2_0", "a2_1"], ["a3_0", "a3_1"]]
        )
        cls.levels = level_function(cls.complex_, cls.orientation)

    def test_levels(self) -> None:
        self.assertEqual(set(self.levels.period.values()), {0})
        self.assertEqual(max(self.levels.height.values()) - min(self.levels.height.values()), 6)

    def test_window_splits(self) -> None:
        top = max(self.levels.height.values())
        small = level_window(self.complex_, self.orientation, top, top, self.levels)
        big = level_window(self.complex_, self.orientation, top - 1, top, self.levels)
        self.assertEqual(small.level_counts(), {top: 2})
        comparison = level_inclusion_homology(small, big)
        self.assertFalse(comparison.links_connected)
        self.assertFalse(comparison.inclusion.h0_iso)
        shared = CubeVertex(("a1_0", ("b2_0", "+"), ("b3_0", "+")), (SIDE_A, SIDE_B, SIDE_B))
        self.assertEqual(
            ascending_link(self.complex_, self.orientation, shared).vertices,
            {(SIDE_B, ("b1_0", "+")), (SIDE_B, ("b1_1", "+"))},
        )
        self.assertIn(f"{shared}@{top - 1}", comparison.disconnected)


if __name__ == "__main__":
    unittest.main()
