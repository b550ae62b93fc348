import hashlib
import json
import tempfile
import unittest
from pathlib import Path

from fp2_cube_builder.errors import InputError, PreconditionError
from fp2_cube_builder.morse import PI1_L
from fp2_cube_builder.pipeline import PipelineConfig, run_pipeline
from fp2_cube_builder.report import COMPUTED, INFO
from fp2_cube_builder.simplicial import write_complex
from fp2_cube_builder.util import full_simplex, simplex_boundary, wedge_of_triangles

STAGES = [
    "nlcp",
    "subdivision",
    "octahedralisation",
    "blowup",
    "table1",
    "npc",
    "directions",
    "morse",
    "table2",
    "windows",
    "branch_locus",
    "labelings",
    "link_covers",
    "finiteness",
]


class TestConfig(unittest.TestCase):
    def setUp(self) -> None:
        self.l_path = Path("L.json")

    def test_strict_sizes(self) -> None:
        with self.assertRaises(PreconditionError):
            PipelineConfig(self.l_path, a_part_sizes=(2, 2, 2))
        self.assertEqual(PipelineConfig(self.l_path).a_plus_size, 2)
        lab = PipelineConfig(self.l_path, a_part_sizes=(2, 2, 2), strict=False)
        self.assertEqual(lab.a_plus_size, 1)

    def test_rejects_bad_values(self) -> None:
        with self.assertRaises(InputError):
            PipelineConfig(self.l_path, q_primes=(13, 17))  # type: ignore[arg-type]
        with self.assertRaises(InputError):
            PipelineConfig(self.l_path, q_primes="13,17,19")
        with self.assertRaises(InputError):
            PipelineConfig(self.l_path, window_radius=-1)
        with self.assertRaises(InputError):
            PipelineConfig(self.l_path, a_part_sizes=(4, 0, 4))

    def test_primes(self) -> None:
        self.assertIsNone(PipelineConfig(self.l_path).primes())
        cfg = PipelineConfig(self.l_path, q_primes=(13, 17, 19))
        self.assertEqual(cfg.primes(), {2: 13, 0: 17, 1: 19})

    def test_local_cut_point(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            l_path = Path(tmp) / "wedge.json"
            write_complex(wedge_of_triangles(), l_path)
            with self.assertRaises(PreconditionError) as context:
                run_pipeline(PipelineConfig(l_path, out_dir=Path(tmp) / "out"))
            self.assertIn("stage nlcp", str(context.exception))
            self.assertFalse((Path(tmp) / "out").exists())


class TestTriangle(unittest.TestCase):
    """L is a single 2-simplex, Gamma_A = V4 * V4 * V4."""

    @classmethod
    def setUpClass(cls) -> None:
        cls.tmp = tempfile.TemporaryDirectory()
        root = Path(cls.tmp.name)
        cls.l_path = root / "L.json"
        write_complex(full_simplex(2), cls.l_path)
        cls.out = root / "out"
        cls.report = run_pipeline(PipelineConfig(cls.l_path, out_dir=cls.out))
        cls.stages = {stage.name: stage for stage in cls.report.stages}

    @classmethod
    def tearDownClass(cls) -> None:
        cls.tmp.cleanup()

    def test_stages(self) -> None:
        self.assertEqual([stage.name for stage in self.report.stages], STAGES)
        self.assertTrue(self.report.ok)
        self.assertNotIn("banner", self.report.to_data())

    def test_blowup(self) -> None:
        self.assertEqual(self.stages["octahedralisation"].data["part_sizes"], [12, 12, 4])
        data = self.stages["blowup"].data
        self.assertEqual(data["counts"]["vertices"], 1664)
        self.assertEqual(
            data["pattern_counts"],
            {
                "AAA": 64,
                "BAA": 192,
                "ABA": 192,
                "AAB": 64,
                "BBA": 384,
                "BAB": 192,
                "ABB": 192,
                "BBB": 384,
            },
        )
        self.assertEqual(data["brute_force_vertices"], 1664)

    def test_default_a_plus(self) -> None:
        self.assertEqual(
            self.stages["morse"].data["a_plus"],
            [["a1_0", "a1_1"], ["a2_0", "a2_1"], ["a3_0", "a3_1"]],
        )
        self.assertEqual(self.report.to_data()["config"]["seed"], 0)

    def test_same_config_same_report(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            again = run_pipeline(PipelineConfig(self.l_path, out_dir=Path(tmp)))
            self.assertEqual(again.dumps(), self.report.dumps())
            first = json.loads((self.out / "manifest.json").read_text(encoding="utf-8"))
            second = json.loads((Path(tmp) / "manifest.json").read_text(encoding="utf-8"))
        self.assertEqual(first, second)

    def test_labelings(self) -> None:
        data = self.stages["labelings"].data
        self.assertEqual({name: pair["q"] for name, pair in data["pairs"].items()}, {"12": 13, "23": 17, "31": 19})
        self.assertEqual(data["degree"], 4199)
        self.assertEqual(data["full_orbit"], 4199)

    def test_finiteness(self) -> None:
        self.assertEqual(self.stages["finiteness"].verdict, INFO)
        computed = [a for a in self.report.assumptions if a.key == PI1_L]
        self.assertEqual(len(computed), 1)
        self.assertEqual(computed[0].provenance, COMPUTED)
        self.assertIn(PI1_L, self.stages["finiteness"].citations)

    def test_artifacts(self) -> None:
        manifest = json.loads((self.out / "manifest.json").read_text(encoding="utf-8"))
        for name in ("report.json", "blowup_manifest.json", "branch_certificate.json", "L_presentation.txt"):
            self.assertIn(name, manifest["artifacts"])
        for name, digest in manifest["artifacts"].items():
            self.assertEqual(hashlib.sha256((self.out / name).read_bytes()).hexdigest(), digest)


class TestTetrahedronBoundary(unittest.TestCase):
    """L is the boundary of the 3-simplex, Gamma_A = V4 * V4 * V4."""

    def test_sphere(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            l_path = Path(tmp) / "L.json"
            write_complex(simplex_boundary(3), l_path)
            report = run_pipeline(PipelineConfig(l_path, out_dir=Path(tmp) / "out"))
        self.assertIsNone(report.failed_stage)
        stages = {stage.name: stage for stage in report.stages}
        self.assertEqual(
            stages["blowup"].data["pattern_counts"],
            {
                "AAA": 64,
                "AAB": 256,
                "ABA": 384,
                "ABB": 768,
                "BAA": 256,
                "BAB": 768,
                "BBA": 768,
                "BBB": 1536,
            },
        )
        self.assertTrue(stages["table1"].ok)
        self.assertTrue(stages["table2"].ok)
        self.assertIn(stages["finiteness"].data["verdict"], ("FP2", "F2"))


if __name__ == "__main__":
    unittest.main()
