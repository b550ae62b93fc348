import io
import json
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from fp2_cube_builder.__main__ import main
from fp2_cube_builder.simplicial import loads_complex, write_complex
from fp2_cube_builder.util import full_simplex, projective_plane, wedge_of_triangles


class TestCli(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)
        self.triangle = self.root / "triangle.json"
        write_complex(full_simplex(2), self.triangle)

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def call(self, *argv: str) -> tuple[int, str]:
        out = io.StringIO()
        with redirect_stdout(out), redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as context:
                main(list(argv))
        code = context.exception.code
        assert isinstance(code, int)
        return code, out.getvalue()

    def test_homology(self) -> None:
        rp2 = self.root / "rp2.json"
        write_complex(projective_plane(), rp2)
        code, out = self.call("homology", "--file", str(rp2), "--dim", "1")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out), {"betti": 0, "torsion": [2]})
        code, out = self.call("homology", "--file", str(rp2))
        self.assertEqual(json.loads(out)["2"], {"betti": 0, "torsion": []})

    def test_octahedralise(self) -> None:
        code, out = self.call("octahedralise", "--file", str(self.triangle))
        self.assertEqual(code, 0)
        self.assertEqual(len(loads_complex(out).vertices), 6)
        target = self.root / "out.json"
        self.assertEqual(self.call("octahedralise", "--file", str(self.triangle), "--out", str(target))[0], 0)
        self.assertEqual(len(loads_complex(target.read_text(encoding="utf-8")).maximal_faces), 8)

    def test_input_errors(self) -> None:
        missing = str(self.root / "missing.json")
        self.assertEqual(self.call("homology", "--file", missing)[0], 2)
        self.assertEqual(self.call("run", missing)[0], 2)
        self.assertEqual(self.call("run", str(self.triangle), "--a-sizes", "4,x,4")[0], 2)
        self.assertEqual(self.call("run", str(self.triangle), "--a-sizes", "4,4")[0], 2)
        self.assertEqual(self.call("run", str(self.triangle), "--assume", "broken")[0], 2)
        garbage = self.root / "garbage.json"
        garbage.write_text("{not json", encoding="utf-8")
        self.assertEqual(self.call("homology", "--file", str(garbage))[0], 2)

    def test_precondition_errors(self) -> None:
        self.assertEqual(self.call("run", str(self.triangle), "--a-sizes", "2,2,2")[0], 3)
        wedge = self.root / "wedge.json"
        write_complex(wedge_of_triangles(), wedge)
        out_dir = str(self.root / "out")
        self.assertEqual(self.call("run", str(wedge), "--out-dir", out_dir)[0], 3)

    def test_no_command(self) -> None:
        self.assertEqual(self.call()[0], 2)


if __name__ == "__main__":
    unittest.main()
