import unittest

from fp2_cube_builder.simplicial import (
    SimplicialComplex,
    barycentric_subdivision,
    is_isomorphic,
    link,
)
from fp2_cube_builder.tables import (
    TABLE1_ROWS,
    TABLE2_ROWS,
    TableReport,
    generator_b,
    is_complete_partite,
    lprime_link_model,
    lprime_vertex,
    shape_key,
    table1_target,
    table2_target,
)
from fp2_cube_builder.util import complete_partite, cycle, full_simplex, octahedron, path

TRIANGLE = ("v0", "v1", "v2")
EDGE = ("v0", "v1")
CORNER = ("v0",)


class TestTables(unittest.TestCase):
    def setUp(self) -> None:
        self.base = full_simplex(2)

    def test_rows_cover_every_pattern(self) -> None:
        self.assertEqual(len(TABLE1_ROWS), 8)
        self.assertEqual(set(TABLE1_ROWS), set(TABLE2_ROWS))

    def test_link_models(self) -> None:
        base = self.base
        self.assertEqual(lprime_link_model(base, []), barycentric_subdivision(base))
        self.assertTrue(is_isomorphic(lprime_link_model(base, [(TRIANGLE, 2)]), cycle(6)))
        self.assertTrue(is_isomorphic(lprime_link_model(base, [(EDGE, 1)]), path(3)))
        self.assertTrue(is_isomorphic(lprime_link_model(base, [(CORNER, 0)]), path(3)))
        self.assertEqual(len(lprime_link_model(base, [(EDGE, 1), (TRIANGLE, 2)]).vertices), 2)
        self.assertEqual(len(lprime_link_model(base, [(CORNER, 0), (EDGE, 1)]).vertices), 1)
        self.assertTrue(lprime_link_model(base, [(CORNER, 0), (EDGE, 1), (TRIANGLE, 2)]).is_empty())
        with self.assertRaises(ValueError):
            lprime_link_model(base, [(EDGE, 1), (("v1", "v2"), 1)])

    def test_models_match_subdivision_links(self) -> None:
        subdivided = barycentric_subdivision(self.base)
        for chain in ([(TRIANGLE, 2)], [(EDGE, 1)], [(CORNER, 0)], [(CORNER, 0), (TRIANGLE, 2)]):
            self.assertTrue(is_isomorphic(link(subdivided, chain), lprime_link_model(self.base, chain)))

    def test_shape_key(self) -> None:
        self.assertEqual(shape_key(self.base, [(EDGE, 1)]), ((1,), 1))
        self.assertEqual(shape_key(self.base, [(CORNER, 0)]), ((0,), CORNER))
        self.assertEqual(shape_key(self.base, [(TRIANGLE, 2), (CORNER, 0)]), ((0, 2),))

    def test_lprime_vertex(self) -> None:
        self.assertEqual(lprime_vertex((((EDGE, 1), "+"), "-")), (EDGE, 1))

    def test_targets(self) -> None:
        self.assertEqual(table1_target(self.base, [], ()), generator_b(self.base))
        hexagon = table2_target(self.base, [(TRIANGLE, 2)], (2,))
        self.assertEqual(len(hexagon.vertices), 14)
        self.assertEqual(len(table1_target(self.base, [(TRIANGLE, 2)], (4,)).vertices), 28)

    def test_complete_partite(self) -> None:
        self.assertTrue(is_complete_partite(complete_partite((2, 3))))
        self.assertTrue(is_complete_partite(octahedron()))
        self.assertFalse(is_complete_partite(cycle(5)))
        square = SimplicialComplex([("a", "b")], ["c"], {"a": 1, "b": 2, "c": 2})
        self.assertFalse(is_complete_partite(square))

    def test_report(self) -> None:
        report = TableReport("table1")
        report.record("AAA", TABLE1_ROWS["AAA"], True, "v")
        self.assertTrue(report.ok)
        with self.assertLogs("fp2_cube_builder.tables", level="WARNING"):
            report.record("AAA", TABLE1_ROWS["AAA"], False, "w")
        self.assertFalse(report.ok)
        data = report.to_data()
        self.assertEqual(data["rows"][0]["checked"], 2)
        self.assertEqual(data["rows"][0]["failures"], ["w"])


if __name__ == "__main__":
    unittest.main()
