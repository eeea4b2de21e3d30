"""Command-line entry point.

``ackmine <subcommand> --config <path>`` plus per-flag overrides; the
ACKMINE_OUTPUT_DIR environment variable overrides the output directory.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .corpus import FORMATS
from .pipeline import (PipelineConfig, PipelineError, SUBCOMMANDS,
                       load_config, run)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the pipeline reserves 2 for data
    errors, so usage problems exit 1 instead."""

    def error(self, message: str) -> None:  # noqa: D401 (argparse override)
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ackmine",
                     description="Acknowledgment mining and network analysis")
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand",
                                parser_class=_Parser, required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} stage")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--input", help="input records file (ingest)")
        p.add_argument("--format", choices=FORMATS, help="input record layout")
        p.add_argument("--output-dir", help="artifact directory")
        p.add_argument("--alias-threshold", type=float,
                       help="similarity threshold for variant candidates")
        p.add_argument("--auto-merge", action="store_true", default=None,
                       help="merge all variant candidates without curation")
        p.add_argument("--curated-merges", help="curated merge decision file")
        p.add_argument("--high-threshold", type=int,
                       help="mention count making an acknowledgee highly visible")
        p.add_argument("--keyword-families", help="keyword family definition file")
        p.add_argument("--top-cutoff", type=int,
                       help="rank acknowledgees with strictly more mentions than this")
        p.add_argument("--resolution", type=float, help="Louvain resolution")
        p.add_argument("--binarize", action="store_true", default=None,
                       help="run Louvain on binarized coupling networks")
        p.add_argument("--metadata", help="acknowledgee metadata join file")
        p.add_argument("--workers", type=int, help="parallel workers")
    return parser


_FLAG_FIELDS = {
    "input": "input_path",
    "format": "input_format",
    "output_dir": "output_dir",
    "alias_threshold": "alias_threshold",
    "auto_merge": "auto_merge",
    "curated_merges": "curated_merges",
    "high_threshold": "high_threshold",
    "keyword_families": "keyword_families",
    "top_cutoff": "top_cutoff",
    "resolution": "louvain_resolution",
    "binarize": "binarize_coupling",
    "metadata": "metadata_path",
    "workers": "workers",
}


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    overrides = {}
    for flag, field in _FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    return replace(cfg, **overrides) if overrides else cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        summary = run(args.subcommand, cfg)
    except (PipelineError, ValueError, OSError) as exc:
        print(f"ackmine: error: {exc}", file=sys.stderr)
        return 2
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
