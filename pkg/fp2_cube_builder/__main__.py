import json
import logging
import sys
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Optional

from fp2_cube_builder._handling_arguments import parser_arguments
from fp2_cube_builder._utils import canonical_json
from fp2_cube_builder.errors import Fp2Error, InputError
from fp2_cube_builder.homology import homology
from fp2_cube_builder.pipeline import Pipeline, PipelineConfig, run_pipeline
from fp2_cube_builder.report import parse_assumption
from fp2_cube_builder.simplicial import dumps_complex, octahedralise, read_complex, write_complex


def _integers(text: str, name: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as e:
        raise InputError(f"{name} must be integers separated by commas, got {text!r}") from e


def config_from_args(args: Namespace, l_path: Path) -> PipelineConfig:
    sizes = _integers(args.a_sizes, "--a-sizes")
    primes: Any = "auto" if args.q_primes == "auto" else _integers(args.q_primes, "--q-primes")
    signs = None
    if args.morse_signs:
        signs = tuple(
            tuple(name.strip() for name in coordinate.split(",") if name.strip())
            for coordinate in args.morse_signs.split(";")
        )
    if len(sizes) != 3:
        raise InputError(f"--a-sizes needs three sizes, got {len(sizes)}")
    return PipelineConfig(
        l_path=l_path,
        a_part_sizes=(sizes[0], sizes[1], sizes[2]),
        q_primes=primes,
        morse_signs=signs,
        window_radius=args.radius,
        seed=args.seed,
        out_dir=args.out_dir,
        strict=not args.lab,
        window_homology=args.window_homology,
        assumptions=tuple(parse_assumption(text) for text in args.assume),
    )


def run(args: Namespace) -> int:
    cfg = config_from_args(args, args.file)
    report = run_pipeline(cfg)
    print(report.dumps(), end="")
    if args.emit_manifest:
        print((cfg.out_dir / "manifest.json").read_text(encoding="utf-8"), end="")
    return 0 if report.ok else 1


def verify_tables(args: Namespace) -> int:
    pipeline = Pipeline(config_from_args(args, args.l))
    results: dict[str, Any] = {}
    ok = True
    for name, body in (
        ("nlcp", pipeline.check_nlcp),
        ("octahedralisation", pipeline.octahedralise),
        ("blowup", pipeline.build),
        ("table1", pipeline.table1),
        ("morse", pipeline.morse_function),
        ("table2", pipeline.table2),
    ):
        passed, data = body()
        ok = ok and passed is not False
        if name.startswith("table"):
            results[name] = data
    print(canonical_json(results), end="")
    return 0 if ok else 1


def morse_report(args: Namespace) -> int:
    pipeline = Pipeline(config_from_args(args, args.l))
    for body in (
        pipeline.check_nlcp,
        pipeline.octahedralise,
        pipeline.build,
        pipeline.morse_function,
    ):
        body()
    passed, windows = pipeline.windows()
    _, finiteness = pipeline.finiteness()
    data = {
        "orientation": pipeline.morse.to_data(),
        "windows": windows,
        "census": [entry.to_data() for entry in pipeline.census],
        "finiteness": finiteness,
    }
    print(canonical_json(data), end="")
    return 0 if passed else 1


def homology_command(args: Namespace) -> int:
    complex_ = read_complex(args.file)
    if args.dim is not None:
        print(canonical_json(homology(complex_, args.dim).to_data()), end="")
    else:
        groups = {str(i): homology(complex_, i).to_data() for i in range(complex_.dimension + 1)}
        print(canonical_json(groups), end="")
    return 0


def octahedralise_command(args: Namespace) -> int:
    result = octahedralise(read_complex(args.file))
    if args.out is not None:
        write_complex(result, args.out)
    else:
        print(dumps_complex(result), end="")
    return 0


def main(argv: Optional[list[str]] = None) -> None:
    parser = ArgumentParser(prog="fp2_cube_builder")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress")
    subparsers = parser.add_subparsers()
    run_parser = subparsers.add_parser("run", help="Run the whole construction on L", aliases=["r"])
    run_parser.add_argument("file", type=Path, help="JSON file of the complex L")
    parser_arguments(run_parser)
    run_parser.set_defaults(func="run")
    tables = subparsers.add_parser("verify-tables", help="Check both link tables for L")
    tables.add_argument("--l", type=Path, required=True, help="JSON file of the complex L")
    parser_arguments(tables)
    tables.set_defaults(func="verify-tables")
    morse = subparsers.add_parser("morse-report", help="Level windows and link census for L")
    morse.add_argument("--l", type=Path, required=True, help="JSON file of the complex L")
    parser_arguments(morse)
    morse.set_defaults(func="morse-report")
    homology_parser = subparsers.add_parser("homology", help="Reduced homology of a complex")
    homology_parser.add_argument("--file", type=Path, required=True)
    homology_parser.add_argument("--dim", type=int, help="Only this dimension")
    homology_parser.set_defaults(func="homology")
    octahedral = subparsers.add_parser("octahedralise", help="Octahedralisation of a complex")
    octahedral.add_argument("--file", type=Path, required=True)
    octahedral.add_argument("--out", type=Path, help="Write here instead of stdout")
    octahedral.set_defaults(func="octahedralise")
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if not hasattr(args, "func"):
        # No subcommand provided
        parser.print_help()
        sys.exit(2)
    commands = {
        "run": run,
        "verify-tables": verify_tables,
        "morse-report": morse_report,
        "homology": homology_command,
        "octahedralise": octahedralise_command,
    }
    try:
        code = commands[args.func](args)
    except Fp2Error as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(e.exit_code)
    except (FileNotFoundError, json.JSONDecodeError) as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(InputError.exit_code)
    sys.exit(code)


if __name__ == "__main__":
    main()
