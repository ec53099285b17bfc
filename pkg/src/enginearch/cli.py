"""Command line entry point: ``enginearch [global options] <command>``.

Exit codes: 0 success, 2 configuration or input error, 1 internal error.
"""

from __future__ import annotations

import logging
import sys

import click

from . import pipeline
from .config import CorpusConfig, Options, load_config
from .emit import write_text
from .errors import ConfigurationError
from .metrics import AveragingMode
from .scanner import RepoSpec
from .subsystems import format_mapping

log = logging.getLogger("enginearch")


def _pairs(values, flag):
    out = {}
    for v in values:
        name, sep, rhs = v.partition("=")
        if not sep or not name or not rhs:
            raise click.BadParameter(f"expected NAME=VALUE, got {v!r}", param_hint=flag)
        out[name] = rhs
    return out


class Context:
    def __init__(self, config: CorpusConfig, out_dir: str, jobs: int, options: Options):
        self.config = config
        self.out_dir = out_dir
        self.jobs = jobs
        self.options = options

    def specs(self, names):
        if not names:
            if not self.config.repos:
                raise ConfigurationError("no repositories configured (use --config or --repo)")
            return list(self.config.repos)
        return [self.config.repo(n) for n in names]


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Corpus configuration (INI).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Engines processed in parallel.")
@click.option("--repo", "repos", multiple=True, metavar="NAME=ROOT", help="Add a repository ad hoc.")
@click.option("--mapping", "mappings", multiple=True, metavar="NAME=FILE", help="Mapping file for a repository.")
@click.option("--pair-threshold", type=click.IntRange(min=1), help="Minimum engine count for a frequent pair [6].")
@click.option("--inner-core-size", type=click.IntRange(min=1), help="Subsystems in the inner core [4].")
@click.option("--averaging", type=click.Choice([m.value for m in AveragingMode]),
              help="How absent subsystems enter averages [present_only].")
@click.option("--strict-resolve/--no-strict-resolve", default=None,
              help="Leave second-pass ties unresolved instead of picking the smallest path.")
@click.option("--normalize/--no-normalize", default=None, help="Normalise betweenness by (n-1)(n-2).")
@click.option("--include-unassigned/--no-include-unassigned", default=None,
              help="Keep unmapped files as an UNASSIGNED pseudo-subsystem.")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def main(ctx, config_path, out_dir, jobs, repos, mappings, pair_threshold, inner_core_size, averaging,
         strict_resolve, normalize, include_unassigned, verbose):
    """Recover subsystem coupling from C/C++ include graphs."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    config = load_config(config_path) if config_path else CorpusConfig()
    mapping_files = _pairs(mappings, "--mapping")
    for name, root in _pairs(repos, "--repo").items():
        config = config.with_repo(RepoSpec(name=name, root=root, mapping_file=mapping_files.pop(name, None)))
    for name, path in mapping_files.items():
        spec = config.repo(name)
        config = config.with_repo(RepoSpec(spec.name, spec.root, spec.extensions, spec.exclude_dirs,
                                           spec.include_dirs, path))

    opts = config.options
    overrides = {
        "pair_threshold": pair_threshold,
        "inner_core_size": inner_core_size,
        "averaging": averaging,
        "strict_resolve": strict_resolve,
        "normalize_centrality": normalize,
        "include_unassigned": include_unassigned,
    }
    options = Options(**{k: (v if v is not None else getattr(opts, k)) for k, v in overrides.items()})
    ctx.obj = Context(config, out_dir or config.output_dir, jobs, options)


def _print_scan(s):
    c = s.counts
    click.echo(
        f"{s.engine}: files={c['files']} includes={c['includes']} edges={c['edges']} "
        f"first_pass={c['first_pass']} second_pass={c['second_pass']} "
        f"ambiguous={c['ambiguous']} unresolved={c['unresolved']}"
    )


@main.command()
@click.argument("names", nargs=-1)
@click.pass_obj
def scan(obj: Context, names):
    """Build include graphs (<engine>-includes.dot, <engine>-includes-unr.csv)."""
    for s in pipeline.run_engines(pipeline.run_scan, obj.specs(names), obj.out_dir, obj.options, obj.jobs):
        _print_scan(s)


def _print_analyse(a):
    _print_scan(a.scan)
    click.echo(f"{a.engine}: subsystems={len(a.nodes)} subsystem_edges={a.n_edges} "
               f"mapped={a.coverage:.1f}% unassigned_files={a.unassigned}")


@main.command()
@click.argument("names", nargs=-1)
@click.pass_obj
def analyse(obj: Context, names):
    """Tag files by subsystem and write per-engine models and metrics."""
    for a in pipeline.run_engines(pipeline.run_analyse, obj.specs(names), obj.out_dir, obj.options, obj.jobs):
        _print_analyse(a)


def _print_aggregate(agg):
    click.echo(f"engines: {' '.join(agg.engines)}")
    click.echo(f"frequent pairs: {agg.n_pairs}")
    click.echo(f"inner core: {' '.join(agg.inner_core)}")
    click.echo(f"outer core: {' '.join(agg.outer_core)}")
    click.echo(f"periphery: {' '.join(agg.periphery)}")


@main.command()
@click.pass_obj
def aggregate(obj: Context):
    """Combine analysed engines into the corpus heatmap, pairs and architecture."""
    _print_aggregate(pipeline.run_aggregate(obj.config, obj.out_dir, obj.options))


@main.command(name="all")
@click.pass_obj
def all_(obj: Context):
    """scan + analyse every configured engine, then aggregate."""
    for a in pipeline.run_engines(pipeline.run_analyse, obj.specs(()), obj.out_dir, obj.options, obj.jobs):
        _print_analyse(a)
    _print_aggregate(pipeline.run_aggregate(obj.config, obj.out_dir, obj.options))


@main.command(name="suggest-mapping")
@click.argument("name")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write to a file instead of stdout.")
@click.pass_obj
def suggest_mapping_cmd(obj: Context, name, output):
    """Print name-based mapping suggestions for review (advisory only)."""
    rows = pipeline.suggestions_for(obj.config.repo(name))
    text = format_mapping(rows, comment=f"advisory name-based suggestions for {name}; review before use")
    if output:
        write_text(output, text)
    else:
        click.echo(text, nl=False)


def run(argv=None) -> int:
    """Invoke the CLI and translate failures into exit codes."""
    try:
        main.main(args=argv, prog_name="enginearch", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 2
    except ConfigurationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        click.echo(f"internal error: {exc}", err=True)
        return 1
    return 0


def entry_point():
    sys.exit(run())


if __name__ == "__main__":
    entry_point()
