import unittest

import networkx as nx
from sympy.combinatorics import Permutation
from sympy.ntheory import primitive_root

from fp2_cube_builder._utils import MINUS, PLUS
from fp2_cube_builder.blowup import branch_direction, build_blowup
from fp2_cube_builder.branch import (
    ALPHA,
    BETA,
    LinkMonodromy,
    auto_primes,
    branched_link_cover,
    build_monodromy,
    check_four_loops,
    check_int4cycles_ordering,
    commutator,
    commutator_identity_check,
    edge_family,
    find_int4cycles_ordering,
    four_cycles,
    four_loops,
    greedy_labels,
    has_four_cycle,
    is_transitive,
    is_transitive_branch,
    label_graph,
    make_perm_pair,
    monodromy_of_loop,
    pair_name,
    project_graphs,
    voltage_cover,
)
from fp2_cube_builder.errors import PreconditionError, VerificationError
from fp2_cube_builder.simplicial import is_isomorphic, join, octahedralise
from fp2_cube_builder.util import complete_partite, cycle, discrete_set, full_simplex, octahedron


class TestPermPairs(unittest.TestCase):
    def test_perm_pair(self) -> None:
        pair = make_perm_pair(5, 2)
        self.assertEqual(pair.alpha.array_form, [1, 2, 3, 4, 0])
        self.assertEqual(pair.beta.array_form, [0, 2, 4, 1, 3])
        self.assertEqual(~pair.beta * pair.alpha * pair.beta, pair.alpha**2)
        self.assertEqual(make_perm_pair(3, 2).beta.array_form, [0, 2, 1])
        self.assertEqual(pair.alpha_power(-1), ~pair.alpha)
        self.assertEqual(pair.beta_power(4), pair.beta_power(0))

    def test_rejects_bad_parameters(self) -> None:
        with self.assertRaises(PreconditionError):
            make_perm_pair(5, 4)
        with self.assertRaises(PreconditionError):
            make_perm_pair(6, 5)
        with self.assertRaises(PreconditionError):
            make_perm_pair(7, 7)

    def test_commutator_identity(self) -> None:
        for q in (3, 5, 7, 11):
            self.assertTrue(commutator_identity_check(make_perm_pair(q, primitive_root(q))))

    def test_commutator_conventions(self) -> None:
        pair = make_perm_pair(7, 3)
        for a, b in ((1, 1), (2, 1), (4, 5)):
            value = commutator(pair, a, b)
            self.assertEqual(value, pair.alpha_power(a * (pow(3, b, 7) - 1)))
            first, second = pair.alpha_power(a), pair.beta_power(b)
            reverse = first * second * ~first * ~second
            self.assertEqual(reverse, pair.alpha_power(a * (1 - pow(3, -b, 7))))
            self.assertTrue(is_transitive(value))
            self.assertTrue(is_transitive(reverse))


class TestLabels(unittest.TestCase):
    def test_greedy_star(self) -> None:
        labels = greedy_labels([("x", "h"), ("y", "h"), ("z", "h"), ("x", "k")], 5)
        self.assertEqual(labels[("x", "h")], 1)
        self.assertEqual(labels[("y", "h")], 2)
        self.assertEqual(labels[("z", "h")], 3)
        self.assertEqual(labels[("x", "k")], 1)
        with self.assertRaises(ValueError):
            greedy_labels([(n, "h") for n in range(4)], 3)

    def test_loop_monodromy(self) -> None:
        p = Permutation([1, 2, 0])
        r = Permutation([0, 2, 1])
        labels = {(0, 1): p, (1, 2): r, (2, 0): p}
        forward = monodromy_of_loop(labels, [(0, 1), (1, 2), (2, 0)])
        self.assertEqual(forward, p * r * p)
        self.assertEqual(monodromy_of_loop(labels, [(0, 2), (2, 1), (1, 0)]), ~forward)
        self.assertEqual(
            monodromy_of_loop(labels, [(0, 1), (1, 2), (2, 0), (0, 1), (1, 0)]), forward
        )
        self.assertEqual(monodromy_of_loop(labels, [(0, 1), (1, 0)]), Permutation([0, 1, 2]))
        for broken in ([], [(0, 1), (2, 0)], [(0, 1), (1, 2)], [(0, 3), (3, 0)]):
            with self.assertRaises(ValueError):
                monodromy_of_loop(labels, broken)

    def test_four_cycles(self) -> None:
        self.assertEqual(list(four_cycles(nx.cycle_graph(4))), [(0, 1, 2, 3)])
        self.assertEqual(len(list(four_cycles(nx.complete_bipartite_graph(2, 3)))), 3)
        self.assertFalse(has_four_cycle(nx.cycle_graph(5)))


class TestProjection(unittest.TestCase):
    """V2 * V2 * V2 against the octahedron: every pair sees 2 values on each side."""

    @classmethod
    def setUpClass(cls) -> None:
        gamma_b = octahedralise(complete_partite((1, 1, 1), "b"))
        cls.complex_ = build_blowup(complete_partite((2, 2, 2)), gamma_b)
        cls.graphs = {k: project_graphs(cls.complex_, k) for k in (2, 0, 1)}

    def test_projection(self) -> None:
        graph = self.graphs[2]
        self.assertEqual(graph.pair, (0, 1))
        self.assertEqual(pair_name(2), "12")
        self.assertEqual(graph.valence_bound, 2)
        self.assertEqual(len(graph.corners), 4)
        for u, v in graph.lambda_graph.edges:
            self.assertIn(edge_family(u, v), (ALPHA, BETA))
            self.assertNotIn(u, graph.corners)

    def test_labeling(self) -> None:
        with self.assertRaises(PreconditionError):
            label_graph(self.graphs[2], 2)
        labeling = label_graph(self.graphs[2], 3)
        self.assertTrue(labeling.incoming_distinct())
        self.assertEqual(labeling.alpha_exponents, label_graph(self.graphs[2], 3).alpha_exponents)
        self.assertEqual(len(list(four_loops(self.graphs[2]))), 4)
        report = check_four_loops(labeling)
        self.assertTrue(report.ok)
        self.assertEqual(report.checked, 4)
        self.assertEqual(report.cycle_types, {"3^1": 4})

    def test_monodromy(self) -> None:
        self.assertEqual(auto_primes(self.graphs), {2: 3, 0: 5, 1: 7})
        monodromy = build_monodromy(self.graphs)
        self.assertEqual(monodromy.degree, 105)
        alphas = [monodromy.combined({k: monodromy.labelings[k].pair.alpha}) for k in (2, 0, 1)]
        self.assertEqual(len(monodromy.base_orbit(alphas[:1])), 3)
        self.assertEqual(len(monodromy.base_orbit(alphas)), 105)
        on_locus = next(v for v in self.complex_.sorted_vertices() if branch_direction(v) == 0)
        local = monodromy.link_monodromy(self.complex_, on_locus)
        self.assertEqual(local.degree, 5)
        self.assertTrue(local.voltages)
        off_locus = next(v for v in self.complex_.sorted_vertices() if v.pattern == "AAA")
        with self.assertRaises(PreconditionError):
            monodromy.link_monodromy(self.complex_, off_locus)


class TestCovers(unittest.TestCase):
    def setUp(self) -> None:
        self.alpha = make_perm_pair(5, 2).alpha
        self.twisted = LinkMonodromy(5, {("c0", "c1"): self.alpha})

    def test_cycle_cover(self) -> None:
        cover = voltage_cover(cycle(4), self.twisted)
        self.assertEqual(len(cover.vertices), 20)
        self.assertTrue(nx.is_connected(cover.graph()))
        self.assertTrue(is_isomorphic(cover, cycle(20)))
        self.assertTrue(is_isomorphic(voltage_cover(cycle(4), LinkMonodromy(1)), cycle(4)))

    def test_euler_characteristic(self) -> None:
        trivial = voltage_cover(octahedron(), LinkMonodromy(3))
        self.assertEqual(trivial.euler_characteristic(), 3 * octahedron().euler_characteristic())
        self.assertEqual(voltage_cover(cycle(4), self.twisted).euler_characteristic(), 0)

    def test_flatness(self) -> None:
        with self.assertRaises(VerificationError):
            voltage_cover(full_simplex(2), LinkMonodromy(5, {("v0", "v1"): self.alpha}))

    def test_branched_cone(self) -> None:
        cone = join(cycle(4), discrete_set(1, "w"))
        self.assertTrue(is_transitive_branch(cycle(4), self.twisted))
        cover = branched_link_cover(cone, ["w0"], self.twisted)
        self.assertEqual(len(cover.vertices), 21)
        self.assertIn(("cone", "w0", 0), cover.vertices)
        self.assertTrue(is_isomorphic(cover, join(cycle(20), discrete_set(1, "w"))))

    def test_branched_untwisted(self) -> None:
        cone = join(cycle(4), discrete_set(1, "w"))
        trivial = LinkMonodromy(3)
        self.assertFalse(is_transitive_branch(cycle(4), trivial))
        cover = branched_link_cover(cone, ["w0"], trivial)
        self.assertEqual(len(cover.vertices), 15)
        self.assertEqual(nx.number_connected_components(cover.graph()), 3)

    def test_branch_set_checks(self) -> None:
        with self.assertRaises(PreconditionError):
            branched_link_cover(cycle(4), ["c0", "c1"], self.twisted)
        with self.assertRaises(PreconditionError):
            branched_link_cover(cycle(4), ["w0"], self.twisted)


class TestOrdering(unittest.TestCase):
    def test_antipodal_pair(self) -> None:
        result = find_int4cycles_ordering(octahedron(), [("x1", MINUS), ("x1", PLUS)])
        self.assertTrue(result.ok)
        self.assertEqual(result.ordering, (("x1", PLUS), ("x1", MINUS)))
        self.assertEqual(check_int4cycles_ordering(octahedron(), result.ordering), [])

    def test_single_vertex(self) -> None:
        self.assertTrue(find_int4cycles_ordering(octahedron(), [("x2", PLUS)]).ok)
        result = find_int4cycles_ordering(cycle(5), ["c0"])
        self.assertFalse(result.ok)
        assert result.witness is not None
        self.assertEqual(result.witness.reason, "disconnected link")

    def test_failing_ordering(self) -> None:
        failures = check_int4cycles_ordering(octahedron(), [("x1", PLUS), ("x2", PLUS)])
        self.assertEqual(len(failures), 1)
        self.assertEqual(failures[0].candidate, ("x2", PLUS))
        self.assertIn("no 4-cycle", failures[0].reason)

    def test_budget(self) -> None:
        result = find_int4cycles_ordering(octahedron(), sorted(octahedron().vertices), budget=1)
        self.assertTrue(result.exhausted)
        self.assertFalse(result.ok)
        self.assertFalse(result.to_data()["ok"])

    def test_target_checks(self) -> None:
        with self.assertRaises(PreconditionError):
            find_int4cycles_ordering(octahedron(), [("x1", PLUS), ("x1", PLUS)])
        with self.assertRaises(PreconditionError):
            check_int4cycles_ordering(octahedron(), ["missing"])


if __name__ == "__main__":
    unittest.main()
