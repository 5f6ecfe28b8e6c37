"""Command line interface.

```
prm-weights predict --q 3 --n 2 --d 2
prm-weights verify --field 4:1,1,1 --n 2 --d 3 --format md
prm-weights tables --q 3 --n-max 4 --format html --out table.html
```

Exit codes: 0 when everything agrees, 1 on usage or parameter errors,
2 on a discrepancy or a witness mismatch, 3 when a budget is exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any, NoReturn, Sequence

from prm_weights import debug
from prm_weights.codes import STRATEGIES, Family
from prm_weights.config import load_config
from prm_weights.exceptions import ParameterError, PrmWeightsError
from prm_weights.gf import field_of_order, parse_field_option
from prm_weights.harness import (
    WITNESS_KINDS,
    ExperimentRecord,
    TableDocument,
    run_explore,
    run_geometry,
    run_predict,
    run_support_check,
    run_tables,
    run_verify,
    run_witness,
)
from prm_weights.logger import get_logger, setup_logging
from prm_weights.render import FORMATS, records_markdown, table_markdown, to_csv, to_html, to_json

if TYPE_CHECKING:
    from prm_weights.config import WorkbenchConfig
    from prm_weights.gf import FieldSpec

_logger = get_logger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class _DebugInfo(argparse.Action):
    def __init__(self, nargs: int | str | None = 0, **kwargs: Any) -> None:
        super().__init__(nargs=nargs, **kwargs)

    def __call__(self, *args: Any, **kwargs: Any) -> None:  # noqa: ARG002
        debug.print_debug_info()
        sys.exit(0)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    field = common.add_argument_group("field")
    field.add_argument("--q", type=int, help="Field order, with the configured or built-in modulus.")
    field.add_argument("--field", help="Field as `q`, `p^m` or `q:coefficients`, e.g. `4:1,1,1` for x^2+x+1.")
    run = common.add_argument_group("run")
    run.add_argument("--config", help="YAML configuration file.")
    run.add_argument("--budget", type=int, help="Maximum number of codewords enumerated.")
    run.add_argument("--threads", type=int, help="Worker processes of exhaustive enumerations.")
    run.add_argument("--seed", type=int, help="Seed of randomized steps.")
    run.add_argument("--time-limit", type=float, help="Wall-clock cap of one enumeration, in seconds.")
    run.add_argument("--timing", action="store_true", default=None, help="Record wall-clock times.")
    output = common.add_argument_group("output")
    output.add_argument("--format", choices=FORMATS, help="Output format (default: json).")
    output.add_argument("--out", help="Write to this file instead of standard output.")
    output.add_argument(
        "--log-level",
        type=str.upper,
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default="WARNING",
        help="Logging level (default: WARNING).",
    )
    return common


def get_parser() -> argparse.ArgumentParser:
    """Return the CLI argument parser.

    Returns:
        An argparse parser.
    """
    parser = _ArgumentParser(
        prog="prm-weights",
        description="Predict and verify the low weights of affine and projective Reed-Muller codes.",
    )
    parser.add_argument("-V", "--version", action="version", version=f"%(prog)s {debug.get_version()}")
    parser.add_argument("--debug-info", action=_DebugInfo, help="Print debug information.")
    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND", parser_class=_ArgumentParser)

    def add(name: str, help_text: str, *, degree: bool = True) -> argparse.ArgumentParser:
        subparser = subparsers.add_parser(name, help=help_text, description=help_text, parents=[common])
        if degree:
            subparser.add_argument("--n", type=int, required=True, help="Dimension of the space.")
            subparser.add_argument("--d", type=int, required=True, help="Degree of the code.")
        return subparser

    add("predict", "Closed-form weights of RM(n, d) and PRM(n, d).")
    verify = add("verify", "Check predictions against the exhaustive oracle.")
    verify.add_argument("--family", choices=[family.value for family in Family], default=Family.PRM.value)

    tables = add("tables", "Next-to-minimal weights for every (n, d) up to a dimension.", degree=False)
    tables.add_argument("--n-max", type=int, required=True, help="Largest dimension.")
    tables.add_argument("--oracle-dim", type=int, help="Run the oracle on codes of at most this dimension.")

    witness = add("witness", "Build and verify a low-weight codeword.")
    witness.add_argument("--kind", choices=WITNESS_KINDS, default="second", help="Construction (default: second).")
    witness.add_argument("--method", choices=("construction", "search"), default="construction")

    explore = add("explore", "Randomized search for light codewords of PRM(n, d).")
    explore.add_argument("--strategies", default=",".join(STRATEGIES), help="Comma-separated candidate generators.")
    explore.add_argument("--samples", type=int, help="Number of candidates.")

    geometry = add("geometry", "Describe the support of a homogeneous polynomial.")
    geometry.add_argument("--poly", required=True, help="Polynomial in X0..Xn, like `X0*X1 + 2*X2^2`.")

    add("support", "Check support properties on every codeword of PRM(n, d).")
    return parser


def _field(opts: argparse.Namespace, config: WorkbenchConfig) -> FieldSpec:
    if opts.field is not None:
        return parse_field_option(opts.field, max_q=config.max_q)
    if opts.q is not None:
        return field_of_order(opts.q, moduli=config.moduli, max_q=config.max_q)
    raise ParameterError("One of --q or --field is required")


def _strategies(text: str) -> list[str]:
    names = [name.strip() for name in text.split(",") if name.strip()]
    unknown = sorted(set(names) - set(STRATEGIES))
    if unknown or not names:
        raise ParameterError(f"Unknown strategies {unknown}, expected some of {', '.join(STRATEGIES)}")
    return names


def _run(opts: argparse.Namespace, config: WorkbenchConfig) -> ExperimentRecord | TableDocument:
    field_spec = _field(opts, config)
    if opts.command == "tables":
        return run_tables(
            field_spec.q,
            opts.n_max,
            field_spec=field_spec,
            config=config,
            oracle_dimension=opts.oracle_dim,
        )
    if opts.command == "predict":
        return run_predict(field_spec, opts.n, opts.d)
    if opts.command == "verify":
        return run_verify(field_spec, opts.n, opts.d, family=Family(opts.family), config=config)
    if opts.command == "witness":
        return run_witness(field_spec, opts.n, opts.d, opts.kind, method=opts.method, config=config)
    if opts.command == "explore":
        return run_explore(field_spec, opts.n, opts.d, _strategies(opts.strategies), config=config)
    if opts.command == "geometry":
        return run_geometry(field_spec, opts.n, opts.d, opts.poly, config=config)
    return run_support_check(field_spec, opts.n, opts.d, config=config)


def render(result: ExperimentRecord | TableDocument, output_format: str) -> str:
    """Render a record or a table document.

    Parameters:
        result: What a command returned.
        output_format: One of `json`, `csv`, `md` and `html`.

    Returns:
        The rendered text.
    """
    if isinstance(result, TableDocument):
        if output_format == "json":
            return to_json(result.as_dict())
        if output_format == "csv":
            return to_csv(result.rows)
        text = table_markdown(result)
        return text if output_format == "md" else to_html(text, f"Next-to-minimal weights, q = {result.q}")
    if output_format == "json":
        return to_json(result.as_dict())
    if output_format == "csv":
        return to_csv([result.as_dict()])
    text = records_markdown([result])
    title = f"{result.command}: {result.family}({result.n}, {result.d}) over {result.field}"
    return text if output_format == "md" else to_html(text, title)


def main(args: Sequence[str] | None = None) -> int:
    """Run the main program.

    This function is executed when you type `prm-weights` or `python -m prm_weights`.

    Parameters:
        args: Arguments passed from the command line.

    Returns:
        An exit code.
    """
    parser = get_parser()
    opts = parser.parse_args(args=args)
    setup_logging(opts.log_level)
    try:
        config = load_config(
            opts.config,
            budget=opts.budget,
            threads=opts.threads,
            seed=opts.seed,
            time_limit=opts.time_limit,
            timing=opts.timing,
            output_format=opts.format,
            samples=getattr(opts, "samples", None),
        )
        result = _run(opts, config)
    except PrmWeightsError as error:
        print(f"prm-weights: error: {error}", file=sys.stderr)
        return error.exit_code

    text = render(result, config.output_format)
    if opts.out:
        Path(opts.out).write_text(text, encoding="utf8")
        _logger.info("Wrote %s", opts.out)
    else:
        sys.stdout.write(text)
    if result.discrepancies:
        _logger.error("%s discrepancies found", len(result.discrepancies))
        return 2
    return 0
