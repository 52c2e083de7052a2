"""``jcm`` command line.

Exit codes: 0 success, 2 usage error, 3 numerical-check failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    DomainError,
    IntegratorError,
    InvalidParameterError,
    TruncationError,
    UndefinedObservableError,
    UnsupportedSectorError,
)
from .runner import FIGURES, OBSERVABLES, RunConfig, emit, figure_preset, run

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CHECK = 3
EXIT_IO = 4

_USAGE_ERRORS = (
    InvalidParameterError,
    DomainError,
    TruncationError,
    UnsupportedSectorError,
    UndefinedObservableError,
)


def _observables(text: str) -> tuple[str, ...]:
    items = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in items if s not in OBSERVABLES]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"choose from {','.join(OBSERVABLES)}; got {text!r}")
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jcm", description="Jaynes-Cummings model with a finite spin-j (Kerr) field mode."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate observables on a time grid")
    p.add_argument("--config", type=Path, help="JSON run configuration, or a doc-format output to re-run")
    p.add_argument("--two-j", type=int, help="maximum excitation number 2j (default 1000)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--mean-n", type=float, help="mean photon number <n> (default 20)")
    group.add_argument("--chi", type=float, help="filling fraction <n>/2j")
    p.add_argument("--omega", type=float)
    p.add_argument("--omega0", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--t-max", type=float, help="final time in units of 1/lambda")
    p.add_argument("--steps", type=int)
    p.add_argument("--observables", type=_observables, help="comma list of inversion,mandel_q,quadratures")
    p.add_argument("--picture", choices=("schrodinger", "interaction"))
    p.add_argument("--atom", dest="atom_init", choices=("excited", "ground"))
    p.add_argument("--phase", dest="phase_phi", type=float, help="coherent-state phase phi")
    p.add_argument("--standard", action="store_true", help="ordinary JCM reference (2j -> infinity)")
    p.add_argument("--oracle-check", action="store_true", default=None)
    p.add_argument("--format", choices=("csv", "doc"))
    p.add_argument("--output", type=Path)

    f = sub.add_parser("figure", help="reproduce the data behind a figure")
    f.add_argument("name", choices=FIGURES)
    f.add_argument("--format", choices=("csv", "doc"), default="csv")
    f.add_argument("--output", type=Path)

    sub.add_parser("check", help="run the acceptance checks and print a pass/fail table")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if args.config is not None:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        base = data.get("config", data)
    overrides = {
        key: getattr(args, key)
        for key in (
            "two_j", "omega", "omega0", "lam", "t_max", "steps", "observables", "picture",
            "atom_init", "phase_phi", "oracle_check", "format",
        )
        if getattr(args, key) is not None
    }
    if args.mean_n is not None:
        overrides.update(mean_n=args.mean_n, chi=None)
    if args.chi is not None:
        overrides.update(chi=args.chi, mean_n=None)
    if args.standard:
        overrides.update(model="standard", two_j=None)
    if args.output is not None:
        overrides["output_path"] = str(args.output)
    data = {**base, **overrides}
    return RunConfig.from_dict(data)


def _suffixed(path: Path, two_j) -> Path:
    return path.with_name(f"{path.stem}-2j{two_j}{path.suffix}")


def _write(series_list, fmt: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write("\n".join(emit(s, fmt) for s in series_list))
        return
    if len(series_list) == 1:
        emit(series_list[0], fmt, output)
        return
    for s in series_list:
        emit(s, fmt, _suffixed(output, s.config.two_j))


def _oracle_failed(series_list) -> bool:
    return any(s.metadata.get("oracle_passed") is False for s in series_list)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            from .checks import run_all

            results = run_all()
            for r in results:
                print(r.line())
            failed = [r.key for r in results if not r.passed]
            print(f"{len(results) - len(failed)}/{len(results)} checks passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
            return EXIT_CHECK if failed else EXIT_OK

        if args.command == "figure":
            configs = [c.replace(format=args.format) for c in figure_preset(args.name)]
            series_list = [run(c) for c in configs]
            _write(series_list, args.format, args.output)
            return EXIT_OK

        config = _config_from_args(args)
        series = run(config)
        out = Path(config.output_path) if config.output_path else None
        _write([series], config.format, out)
        if _oracle_failed([series]):
            dev = series.metadata["oracle_max_deviation"]
            print(f"jcm: oracle deviation {dev:.3e} exceeds tolerance", file=sys.stderr)
            return EXIT_CHECK
        return EXIT_OK
    except _USAGE_ERRORS as exc:
        print(f"jcm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegratorError as exc:
        print(f"jcm: integrator failure: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except json.JSONDecodeError as exc:
        print(f"jcm: error: malformed configuration file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"jcm: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
