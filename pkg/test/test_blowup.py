import unittest

from fp2_cube_builder.blowup import (
    SIDE_A,
    SIDE_B,
    BranchLocus,
    Cube,
    CubeComplex,
    CubeVertex,
    blowup_manifest,
    branch_direction,
    branch_locus,
    brute_force_cubes,
    brute_force_vertices,
    build_blowup,
    cube_link,
    direct_vertex_link,
    formula_vertex_link,
    hyperplane_directions,
    in_branch_region,
    vertex_cube,
    vertex_link,
    verify_branching_locus,
    verify_npc,
)
from fp2_cube_builder.errors import PreconditionError
from fp2_cube_builder.simplicial import is_isomorphic
from fp2_cube_builder.util import complete_partite, cycle, full_simplex


class TestBlowup(unittest.TestCase):
    """Gamma_A = V2 * V2 * V2 against a single triangle: a product of three stars."""

    @classmethod
    def setUpClass(cls) -> None:
        cls.gamma_a = complete_partite((2, 2, 2))
        cls.gamma_b = complete_partite((1, 1, 1), "b")
        cls.complex_ = build_blowup(cls.gamma_a, cls.gamma_b)

    def test_counts(self) -> None:
        self.assertEqual(
            self.complex_.counts(),
            {"vertices": 27, "edges": 54, "squares": 36, "cubes": 8},
        )
        self.assertEqual(self.complex_.pattern_counts()["AAA"], 8)
        self.assertEqual(self.complex_.pattern_counts()["BBB"], 1)

    def test_matches_brute_force(self) -> None:
        self.assertEqual(
            brute_force_vertices(self.gamma_a, self.gamma_b), set(self.complex_.vertices)
        )
        self.assertEqual(brute_force_cubes(self.gamma_a, self.gamma_b), set(self.complex_.cubes))

    def test_links(self) -> None:
        for vertex in self.complex_.sorted_vertices():
            self.assertEqual(
                direct_vertex_link(self.complex_, vertex),
                formula_vertex_link(self.complex_, vertex),
            )
        corner = CubeVertex(("a1_0", "a2_0", "a3_0"), (SIDE_A, SIDE_A, SIDE_A))
        self.assertTrue(is_isomorphic(vertex_link(self.complex_, corner), full_simplex(2)))
        self.assertEqual(cube_link(self.complex_, vertex_cube(corner)), direct_vertex_link(self.complex_, corner))
        with self.assertRaises(ValueError):
            direct_vertex_link(self.complex_, CubeVertex(("x", "y", "z"), (SIDE_A, SIDE_A, SIDE_A)))

    def test_npc(self) -> None:
        report = verify_npc(self.complex_)
        self.assertTrue(report.ok)
        self.assertEqual(report.checked, 27)

    def test_hyperplanes(self) -> None:
        classes = hyperplane_directions(self.complex_)
        self.assertEqual(len(classes), 3)
        for direction in classes:
            self.assertEqual(len(direction.dual_edges), 18)
            self.assertEqual(len(direction.hyperplanes), 2)

    def test_branch_direction(self) -> None:
        coords = ("x", "y", "z")
        self.assertEqual(branch_direction(CubeVertex(coords, ("A", "B", "A"))), 0)
        self.assertEqual(branch_direction(CubeVertex(coords, ("B", "B", "A"))), 0)
        self.assertEqual(branch_direction(CubeVertex(coords, ("A", "A", "B"))), 1)
        self.assertEqual(branch_direction(CubeVertex(coords, ("A", "B", "B"))), 1)
        self.assertEqual(branch_direction(CubeVertex(coords, ("B", "A", "A"))), 2)
        self.assertEqual(branch_direction(CubeVertex(coords, ("B", "A", "B"))), 2)
        self.assertIsNone(branch_direction(CubeVertex(coords, ("A", "A", "A"))))
        self.assertIsNone(branch_direction(CubeVertex(coords, ("B", "B", "B"))))

    def test_branch_region(self) -> None:
        edge = Cube(((("A", "a"), ("B", "b")), (("B", "c"),), (("A", "d"),)))
        self.assertTrue(in_branch_region(edge))
        moving = Cube(((("A", "a"),), (("A", "c"), ("B", "c")), (("A", "d"),)))
        self.assertFalse(in_branch_region(moving))

    def test_branch_locus(self) -> None:
        locus = branch_locus(self.complex_)
        self.assertTrue(locus.is_graph())
        self.assertEqual(len(locus.vertices()), 18)
        self.assertEqual(len(locus.edges()), 12)

    def test_branch_certificate(self) -> None:
        locus = branch_locus(self.complex_)
        self.assertTrue(verify_branching_locus(self.complex_, locus).local_isometry_ok)
        edge = min(locus.edges(), key=str)
        vertex = edge.vertices()[0]
        extra = next(
            cube
            for cube in sorted(self.complex_.cubes_at(vertex), key=str)
            if cube.dimension == 1 and cube.directions() != edge.directions()
        )
        self.assertNotIn(extra, locus.cells)
        certificate = verify_branching_locus(self.complex_, BranchLocus(locus.cells | {extra}))
        self.assertFalse(certificate.local_isometry_ok)
        self.assertFalse(certificate.ok)
        self.assertIn(f"locus directions at {vertex} span several parts", certificate.failures)

    def test_degenerate_loci(self) -> None:
        with self.assertWarnsRegex(UserWarning, "empty"):
            certificate = verify_branching_locus(self.complex_, BranchLocus(frozenset()))
        self.assertTrue(certificate.degenerate)
        self.assertEqual(certificate.cells_checked, 0)
        square = self.complex_.cubes_of_dim(2)[0]
        with self.assertWarnsRegex(UserWarning, "above dimension 1"):
            certificate = verify_branching_locus(self.complex_, BranchLocus(frozenset({square})))
        self.assertFalse(certificate.degenerate)
        self.assertEqual(certificate.cells_checked, 1)

    def test_cube(self) -> None:
        cube = Cube(((("A", "a"), ("B", "b")), (("A", "c"),), (("B", "d"),)))
        self.assertEqual(cube.dimension, 1)
        self.assertEqual(cube.directions(), (0,))
        self.assertEqual(len(cube.vertices()), 2)
        self.assertEqual(len(list(cube.faces())), 3)
        self.assertEqual(len(list(cube.facets())), 2)
        corner = cube.a_corner()
        self.assertEqual(corner.pattern, "AAB")
        self.assertEqual(cube.edge_opposite(corner, 0), ("B", "b"))
        self.assertEqual(corner.moved(0, ("B", "b")).pattern, "BAB")

    def test_rejects_unpartite_generators(self) -> None:
        with self.assertRaises(PreconditionError):
            build_blowup(cycle(4), self.gamma_b)

    def test_manifest(self) -> None:
        manifest = blowup_manifest(self.complex_, {"npc": "pass"})
        self.assertEqual(manifest["counts"]["vertices"], 27)
        self.assertEqual(manifest["verdicts"], {"npc": "pass"})
        self.assertEqual(len(manifest["inputs"]["gamma_a_sha256"]), 64)

class TestHollowCube(unittest.TestCase):
    """One triangle against one triangle, with the 3-cube left out."""

    def test_npc_fails(self) -> None:
        gamma_a = complete_partite((1, 1, 1))
        gamma_b = complete_partite((1, 1, 1), "b")
        full = build_blowup(gamma_a, gamma_b)
        self.assertEqual(full.counts()["cubes"], 1)
        hollow = CubeComplex(
            gamma_a, gamma_b, full.vertices, [c for c in full.cubes if c.dimension < 3]
        )
        corner = CubeVertex(("a1_0", "a2_0", "a3_0"), (SIDE_A, SIDE_A, SIDE_A))
        self.assertEqual(direct_vertex_link(hollow, corner).dimension, 1)
        report = verify_npc(hollow)
        self.assertFalse(report.ok)
        self.assertEqual(report.checked, 8)
        self.assertIn(str(corner), report.failures)
        self.assertTrue(verify_npc(full).ok)


if __name__ == "__main__":
    unittest.main()
