from argparse import ArgumentParser
from pathlib import Path


def parser_arguments(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--a-sizes",
        type=str,
        default="4,4,4",
        help="Sizes of the three parts of Gamma_A. Separated by commas.",
    )
    parser.add_argument(
        "--q-primes",
        type=str,
        default="auto",
        help="'auto' or primes for the pairs 12, 23, 31. Separated by commas.",
    )
    parser.add_argument(
        "--morse-signs",
        type=str,
        help="A^+ per coordinate: vertex names separated by commas, coordinates by semicolons.",
    )
    parser.add_argument(
        "--radius", type=int, default=1, help="Radius of the level window"
    )
    parser.add_argument("--seed", type=int, default=0, help="Seed recorded with the run configuration")
    parser.add_argument(
        "--out-dir",
        type=Path,
        default=Path("fp2_out"),
        help="Directory the artifacts and manifest are written to",
    )
    parser.add_argument(
        "--lab",
        action="store_true",
        help="Allow generators below the strict sizes. Results are marked as lab results.",
    )
    parser.add_argument(
        "--window-homology",
        action="store_true",
        help="Compare window homology even in strict mode",
    )
    parser.add_argument(
        "--assume",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Record an assumption that is not computed. May be repeated.",
    )
    parser.add_argument(
        "--emit-manifest",
        action="store_true",
        help="Print the artifact manifest after the report",
    )
