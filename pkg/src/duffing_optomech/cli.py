"""Command-line front end.

    duffing-optomech <fig2|fig3|fig4|fig5|fig6|sweep|check> [options]

Options: --config <path> (flat key = value file; defaults used when absent),
--out <dir> (default $DUFFING_OPTOMECH_OUT or ./out), --workers <n>,
--include-nt (integrate covariances through the ODE route with the
oscillating diffusion block), --frame {bogoliubov|bare} (transfer scoring
frame). Exit codes: 0 success, 2 configuration error, 3 numerical failure
(partial results are still written, failed rows flagged).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import experiments
from .config import default_config, parse_config, serialize_config
from .errors import ConfigError, SimulationError
from .io import write_manifest, write_table
from .observables import FRAME_BARE, FRAME_BOGOLIUBOV
from .params import reduce_params
from .config import config_to_params

OUT_ENV_VAR = "DUFFING_OPTOMECH_OUT"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_RUNNERS = {
    "fig2": experiments.run_fig2,
    "fig3": experiments.run_fig3,
    "fig4": experiments.run_fig4,
    "fig5": experiments.run_fig5,
    "fig6": experiments.run_fig6,
    "sweep": experiments.run_sweep,
    "check": experiments.run_check,
}
_FRAME_AWARE = ("fig5", "fig6", "sweep")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duffing-optomech",
        description="Gaussian simulator of a driven cavity with two Duffing mirrors "
                    "and an atomic ensemble: squeezing and state-transfer experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("fig2", "enhanced/transformed coupling versus drive power"),
        ("fig3", "atomic squeezing versus atom-field coupling"),
        ("fig4", "peak squeezing versus cavity decay and temperature"),
        ("fig5", "transfer fidelity versus enhanced coupling"),
        ("fig6", "transfer fidelity robustness scans"),
        ("sweep", "free-form Cartesian parameter sweep"),
        ("check", "numerical identity and physicality diagnostics"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, default=None, help="flat key=value configuration file")
        p.add_argument("--out", type=Path, default=None,
                       help=f"output directory (default ${OUT_ENV_VAR} or ./out)")
        p.add_argument("--workers", type=int, default=1, help="worker processes for sweep points")
        p.add_argument("--include-nt", action="store_true",
                       help="propagate covariances through the ODE route with the "
                            "oscillating thermal diffusion included")
        p.add_argument("--frame", choices=(FRAME_BOGOLIUBOV, FRAME_BARE), default=FRAME_BOGOLIUBOV,
                       help="frame in which transfer fidelity compares input and output")
    return parser


def _load_config(path: Path | None) -> tuple[dict, str]:
    if path is None:
        cfg = default_config()
        return cfg, serialize_config(cfg)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text), text


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, config_text = _load_config(args.config)
        out_dir = args.out or Path(os.environ.get(OUT_ENV_VAR, "out"))
        method = "ode-nt" if args.include_nt else "closed"
        runner = _RUNNERS[args.command]
        kwargs = {"workers": max(1, args.workers), "method": method}
        if args.command in _FRAME_AWARE:
            kwargs["frame"] = args.frame

        started = time.perf_counter()
        result = runner(cfg, **kwargs)
        elapsed = time.perf_counter() - started

        reduced = reduce_params(config_to_params(cfg))
        for table in result.tables:
            path = write_table(table, out_dir)
            print(f"wrote {path}")
        manifest = write_manifest(
            out_dir,
            args.command,
            config_text,
            reduced,
            result.tables,
            result.diagnostics,
            {args.command: elapsed},
        )
        print(f"wrote {manifest}")

        if args.command == "check":
            for name, status, detail in result.tables[0].rows:
                print(f"check: {name:40s} {status:5s} {detail}")
        if result.n_failed:
            print(f"{result.n_failed} point(s) failed; rows flagged with converged=0",
                  file=sys.stderr)
            return EXIT_NUMERICAL
        return EXIT_OK
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
