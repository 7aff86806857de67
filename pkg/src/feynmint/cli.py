"""Command-line front end.

Subcommands: catalog, integral, series, descendant, assemble, fit, bench.
Graphs come from the built-in catalog or from a file (JSON object or one
"u v" pair per line).  All data output is deterministic: identical inputs
produce byte-identical bytes (bench timing columns excepted).

Exit codes: 0 success, 2 input error, 3 computation limit, 4 internal
invariant failure; failures print a machine-readable error object to stderr.
"""

from __future__ import annotations

import functools
import json
import os
import sys
import time
from dataclasses import dataclass

import click

from .errors import FeynmintError, InputError, InternalError
from .graph import (
    FeynmanGraph,
    catalog_automorphisms,
    catalog_entry,
    catalog_graph,
    catalog_names,
    first_betti,
    validate,
)
from .integral import (
    DegreeSeries,
    assemble_generating_series,
    collapse_to_univariate,
    descendant_integral_branchtype,
    descendant_integral_degree,
    feynman_integral_branchtype,
    feynman_integral_degree,
)
from .oracle import TruncationSpec, naive_integral
from .polyarith import coeff_str
from .quasimodular import fit_quasimodular, qseries_from_collapsed

THREADS_ENV = "FEYNMAN_GW_THREADS"


# -- graph ingestion -----------------------------------------------------------


def parse_graph(text: str) -> FeynmanGraph:
    """Parse the JSON or terse text graph format and validate the result."""
    stripped = text.strip()
    if not stripped:
        raise InputError("empty graph input")
    if stripped.startswith("{"):
        g = _parse_graph_json(stripped)
    else:
        g = _parse_graph_text(text)
    validate(g)
    return g


def _parse_graph_json(text: str) -> FeynmanGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise InputError("top level: expected an object")
    vertices = obj.get("vertices")
    if not isinstance(vertices, int) or isinstance(vertices, bool):
        raise InputError("vertices: expected an integer")
    edges = obj.get("edges")
    if not isinstance(edges, list):
        raise InputError("edges: expected a list of pairs")
    pairs = []
    for idx, item in enumerate(edges):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(e, int) and not isinstance(e, bool) for e in item)
        ):
            raise InputError(f"edges[{idx}]: expected a pair of integers")
        pairs.append((item[0], item[1]))
    return FeynmanGraph(vertices, tuple(pairs))


def _parse_graph_text(text: str) -> FeynmanGraph:
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise InputError(f"line {lineno}: expected two integers 'u v'")
        try:
            pairs.append((int(fields[0]), int(fields[1])))
        except ValueError:
            raise InputError(f"line {lineno}: expected two integers 'u v'") from None
    if not pairs:
        raise InputError("no edges found in text input")
    vertices = max(max(u, v) for u, v in pairs)
    return FeynmanGraph(vertices, tuple(pairs))


# -- run configuration ----------------------------------------------------------


@dataclass
class RunConfig:
    """Resolved invocation: command, graph source, and parameters."""

    command: str
    catalog_name: str | None = None
    graph_path: str | None = None
    branch_type: tuple[int, ...] | None = None
    max_degree: int | None = None
    genus_function: tuple[int, ...] | None = None
    collapse: bool = False
    raw: bool = False
    output_format: str = "json"
    catalog_list: tuple[str, ...] = ()
    weight: int | None = None
    input_path: str | None = None
    degrees: tuple[int, ...] = ()
    algorithms: tuple[str, ...] = ()
    budget: float | None = None
    repetitions: int = 1
    threads: int = 1

    def __post_init__(self) -> None:
        if self.command in ("integral", "series", "descendant"):
            if (self.catalog_name is None) == (self.graph_path is None):
                raise InputError("exactly one of --catalog/--graph is required")
        if self.command == "descendant" and self.genus_function is None:
            raise InputError("descendant mode requires --genus-function")

    def resolve_graph(self) -> FeynmanGraph:
        if self.catalog_name is not None:
            return catalog_graph(self.catalog_name)
        with open(self.graph_path, encoding="utf-8") as handle:
            return parse_graph(handle.read())


def run(config: RunConfig) -> str:
    """Execute the configured pipeline and return the serialized payload."""
    handler = _HANDLERS.get(config.command)
    if handler is None:
        raise InputError(f"unknown command {config.command!r}")
    return handler(config)


# -- command implementations -------------------------------------------------


def _emit_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _series_text(series: DegreeSeries, raw: bool) -> str:
    double = series.mode == "hurwitz" and not raw
    if series.collapsed is not None:
        parts = [
            f"{coeff_str(c)}*q^{2 * d if double else d}"
            for d, c in sorted(series.collapsed.items())
            if c != 0
        ]
        return (" + ".join(parts) if parts else "0") + "\n"
    lines = []
    for a, c in sorted(series.multivariate.items()):
        factors = [
            f"q{k + 1}^{2 * e if double else e}" for k, e in enumerate(a) if e
        ]
        lines.append(f"{coeff_str(c)}" + ("*" + "*".join(factors) if factors else ""))
    return ("\n".join(lines) if lines else "0") + "\n"


def _render_series(series: DegreeSeries, config: RunConfig) -> str:
    if config.output_format == "text":
        return _series_text(series, config.raw)
    return _emit_json(series.to_obj())


def _cmd_catalog(config: RunConfig) -> str:
    if config.output_format == "json":
        return _emit_json({name: catalog_entry(name) for name in catalog_names()})
    lines = ["name vertices edges genus aut"]
    for name in catalog_names():
        entry = catalog_entry(name)
        lines.append(
            f"{name} {entry['vertices']} {len(entry['edges'])} "
            f"{entry['genus']} {entry['aut']}"
        )
    return "\n".join(lines) + "\n"


def _cmd_integral(config: RunConfig) -> str:
    if config.branch_type is None:
        raise InputError("integral requires --branch-type")
    g = config.resolve_graph()
    value = feynman_integral_branchtype(g, config.branch_type)
    return f"{value}\n"


def _cmd_series(config: RunConfig) -> str:
    if config.max_degree is None or config.max_degree < 0:
        raise InputError("series requires --degree >= 0")
    g = config.resolve_graph()
    series = feynman_integral_degree(g, config.max_degree, threads=config.threads)
    if config.collapse:
        series = collapse_to_univariate(series)
        series.multivariate = None
    return _render_series(series, config)


def _cmd_descendant(config: RunConfig) -> str:
    g = config.resolve_graph()
    gf = config.genus_function
    if config.branch_type is not None:
        value = descendant_integral_branchtype(g, gf, config.branch_type)
        return coeff_str(value) + "\n"
    if config.max_degree is None:
        raise InputError("descendant requires --branch-type or --degree")
    series = descendant_integral_degree(
        g, gf, config.max_degree, threads=config.threads
    )
    if config.collapse:
        series = collapse_to_univariate(series)
        series.multivariate = None
    return _render_series(series, config)


def _resolve_catalog_list(names: tuple[str, ...]) -> list[tuple[FeynmanGraph, int]]:
    return [(catalog_graph(n), catalog_automorphisms(n)) for n in names]


def _cmd_assemble(config: RunConfig) -> str:
    if config.max_degree is None or config.max_degree < 1:
        raise InputError("assemble requires --degree >= 1")
    items = _resolve_catalog_list(config.catalog_list)
    series = assemble_generating_series(
        items, config.max_degree, threads=config.threads
    )
    return _render_series(series, config)


def _cmd_fit(config: RunConfig) -> str:
    if config.input_path is not None:
        with open(config.input_path, encoding="utf-8") as handle:
            try:
                obj = json.load(handle)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed series JSON: {exc}") from None
        series = DegreeSeries.from_obj(obj)
        if series.collapsed is None:
            if series.multivariate is None:
                raise InputError("series has neither multivariate nor collapsed terms")
            series = collapse_to_univariate(series)
        weight = config.weight
        if weight is None:
            raise InputError("--weight is required with --input")
    else:
        if config.max_degree is None or config.max_degree < 1:
            raise InputError("fit requires --degree >= 1")
        items = _resolve_catalog_list(config.catalog_list)
        series = assemble_generating_series(
            items, config.max_degree, threads=config.threads
        )
        weight = config.weight
        if weight is None:
            genus = first_betti(items[0][0])
            weight = 6 * genus - 6
    fit = fit_quasimodular(qseries_from_collapsed(series), weight)
    return _emit_json(fit.to_obj())


def _cmd_bench(config: RunConfig) -> str:
    if not config.degrees:
        raise InputError("bench requires --degrees")
    if config.catalog_name is None and config.graph_path is None:
        raise InputError("bench requires --catalog or --graph")
    g = config.resolve_graph()
    runners = {
        "flip": lambda d: feynman_integral_degree(g, d),
        "naive": lambda d: naive_integral(g, TruncationSpec(d, d)),
    }
    for algo in config.algorithms:
        if algo not in runners:
            raise InputError(f"unknown algorithm {algo!r}; use flip and/or naive")
    lines = ["degree,algorithm,seconds"]
    for algo in config.algorithms:
        over_budget = False
        for degree in config.degrees:
            if over_budget:
                lines.append(f"{degree},{algo},--")
                continue
            best = None
            for _ in range(max(1, config.repetitions)):
                start = time.perf_counter()
                runners[algo](degree)
                elapsed = time.perf_counter() - start
                best = elapsed if best is None else min(best, elapsed)
            lines.append(f"{degree},{algo},{best:.6f}")
            if config.budget is not None and best > config.budget:
                over_budget = True
    return "\n".join(lines) + "\n"


_HANDLERS = {
    "catalog": _cmd_catalog,
    "integral": _cmd_integral,
    "series": _cmd_series,
    "descendant": _cmd_descendant,
    "assemble": _cmd_assemble,
    "fit": _cmd_fit,
    "bench": _cmd_bench,
}


# -- click wiring -----------------------------------------------------------


def _emit_error(code: str, message: str) -> None:
    payload = {"error": {"code": code, "message": message}}
    click.echo(json.dumps(payload, sort_keys=True), err=True)


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FeynmintError as exc:
            _emit_error(exc.code, str(exc))
            raise SystemExit(exc.exit_code) from None
        except (click.ClickException, SystemExit, KeyboardInterrupt):
            raise
        except Exception as exc:  # invariant failure: stable exit code 4
            _emit_error("internal", f"{type(exc).__name__}: {exc}")
            raise SystemExit(InternalError.exit_code) from None

    return wrapper


def _parse_int_list(text: str, label: str) -> tuple[int, ...]:
    try:
        return tuple(int(part.strip()) for part in text.split(",") if part.strip())
    except ValueError:
        raise InputError(f"{label}: expected comma-separated integers") from None


def _parse_degrees(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            return tuple(range(int(lo), int(hi) + 1))
        except ValueError:
            raise InputError("--degrees: expected 'lo..hi' or a comma list") from None
    return _parse_int_list(text, "--degrees")


def _resolve_threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"{THREADS_ENV} must be an integer") from None
    return 1


def _write_output(text: str, output: str | None) -> None:
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


_graph_source = [
    click.option("--catalog", "catalog_name", default=None, help="Built-in graph name."),
    click.option(
        "--graph", "graph_path", default=None, type=click.Path(), help="Graph file."
    ),
]


def _add_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return wrap


@click.group()
def cli() -> None:
    """Exact Feynman-graph integrals for covers of elliptic curves."""


@cli.command("catalog")
@click.option("--format", "output_format", type=click.Choice(["json", "text"]), default="text")
@click.option("--output", default=None, type=click.Path())
@_handle_errors
def catalog_cmd(output_format: str, output: str | None) -> None:
    """List the built-in graphs."""
    config = RunConfig(command="catalog", output_format=output_format)
    _write_output(run(config), output)


@cli.command("integral")
@_add_options(_graph_source)
@click.option("--branch-type", required=True, help="Comma-separated edge degrees.")
@click.option("--output", default=None, type=click.Path())
@_handle_errors
def integral_cmd(catalog_name, graph_path, branch_type, output) -> None:
    """Branch-type coefficient of the Hurwitz-mode series."""
    config = RunConfig(
        command="integral",
        catalog_name=catalog_name,
        graph_path=graph_path,
        branch_type=_parse_int_list(branch_type, "--branch-type"),
    )
    _write_output(run(config), output)


@cli.command("series")
@_add_options(_graph_source)
@click.option("--degree", type=int, required=True, help="Maximum total degree.")
@click.option("--collapse", is_flag=True, help="Collapse to the univariate series.")
@click.option("--raw", is_flag=True, help="Print internal branch degrees (no doubling).")
@click.option("--format", "output_format", type=click.Choice(["json", "text"]), default="json")
@click.option("--threads", type=int, default=None)
@click.option("--output", default=None, type=click.Path())
@_handle_errors
def series_cmd(catalog_name, graph_path, degree, collapse, raw, output_format, threads, output) -> None:
    """Multivariate Hurwitz-mode series up to a total degree."""
    config = RunConfig(
        command="series",
        catalog_name=catalog_name,
        graph_path=graph_path,
        max_degree=degree,
        collapse=collapse,
        raw=raw,
        output_format=output_format,
        threads=_resolve_threads(threads),
    )
    _write_output(run(config), output)


@cli.command("descendant")
@_add_options(_graph_source)
@click.option("--genus-function", required=True, help="Comma-separated vertex genera.")
@click.option("--branch-type", default=None, help="Comma-separated edge degrees.")
@click.option("--degree", type=int, default=None, help="Maximum total degree.")
@click.option("--collapse", is_flag=True)
@click.option("--format", "output_format", type=click.Choice(["json", "text"]), default="json")
@click.option("--threads", type=int, default=None)
@click.option("--output", default=None, type=click.Path())
@_handle_errors
def descendant_cmd(
    catalog_name, graph_path, genus_function, branch_type, degree, collapse,
    output_format, threads, output,
) -> None:
    """Descendant-mode coefficients with vertex genus contributions."""
    config = RunConfig(
        command="descendant",
        catalog_name=catalog_name,
        graph_path=graph_path,
        genus_function=_parse_int_list(genus_function, "--genus-function"),
        branch_type=None if branch_type is None else _parse_int_list(branch_type, "--branch-type"),
        max_degree=degree,
        collapse=collapse,
        output_format=output_format,
        threads=_resolve_threads(threads),
    )
    _write_output(run(config), output)


@cli.command("assemble")
@click.option("--catalog", "catalog_list", default="theta,dumbbell", show_default=True,
              help="Comma-separated catalog names, all of one genus.")
@click.option("--degree", type=int, required=True)
@click.option("--format", "output_format", type=click.Choice(["json", "text"]), default="json")
@click.option("--threads", type=int, default=None)
@click.option("--output", default=None, type=click.Path())
@_handle_errors
def assemble_cmd(catalog_list, degree, output_format, threads, output) -> None:
    """Generating series F_g: sum of collapsed series weighted by 1/|Aut|."""
    config = RunConfig(
        command="assemble",
        catalog_list=tuple(n.strip() for n in catalog_list.split(",") if n.strip()),
        max_degree=degree,
        output_format=output_format,
        threads=_resolve_threads(threads),
    )
    _write_output(run(config), output)


@cli.command("fit")
@click.option("--catalog", "catalog_list", default="theta,dumbbell", show_default=True)
@click.option("--degree", type=int, default=12, show_default=True)
@click.option("--weight", type=int, default=None,
              help="Target weight; default 6*genus - 6 for catalog input.")
@click.option("--input", "input_path", default=None, type=click.Path(),
              help="Fit a stored series JSON instead of assembling.")
@click.option("--threads", type=int, default=None)
@click.option("--output", default=None, type=click.Path())
@_handle_errors
def fit_cmd(catalog_list, degree, weight, input_path, threads, output) -> None:
    """Exact Eisenstein-basis fit of a generating series."""
    config = RunConfig(
        command="fit",
        catalog_list=tuple(n.strip() for n in catalog_list.split(",") if n.strip()),
        max_degree=degree,
        weight=weight,
        input_path=input_path,
        threads=_resolve_threads(threads),
    )
    _write_output(run(config), output)


@cli.command("bench")
@_add_options(_graph_source)
@click.option("--degrees", required=True, help="'lo..hi' or comma list.")
@click.option("--algos", default="flip,naive", show_default=True)
@click.option("--budget", type=float, default=None,
              help="Seconds; larger degrees emit '--' once a cell exceeds it.")
@click.option("--reps", type=int, default=1, show_default=True)
@click.option("--output", default=None, type=click.Path())
@_handle_errors
def bench_cmd(catalog_name, graph_path, degrees, algos, budget, reps, output) -> None:
    """Time the signature pipeline against the naive expansion (CSV)."""
    config = RunConfig(
        command="bench",
        catalog_name=catalog_name,
        graph_path=graph_path,
        degrees=_parse_degrees(degrees),
        algorithms=tuple(a.strip() for a in algos.split(",") if a.strip()),
        budget=budget,
        repetitions=reps,
    )
    _write_output(run(config), output)


def main(argv=None) -> int:
    """Console entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, prog_name="feynmint", standalone_mode=False)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        _emit_error("input", exc.format_message())
        return InputError.exit_code
    except click.Abort:
        return 130
    return 0


if __name__ == "__main__":
    sys.exit(main())
