"""CLI for class-granularity."""
import logging
import sys
from pathlib import Path
from typing import Dict

import click

from . import SUPPORTED_ADAPTER_NAMES
from .errors import GranularityError, ReportError
from .metrics import EmptyClassPolicy, TiePolicy
from .ontology import PredicateMode
from .parser import Compression
from .report import (
    GranularityReport,
    Grouping,
    OutputFormat,
    RunConfig,
    class_detail,
    compare,
    render_class_detail,
    render_comparison,
    render_report,
    run,
)

TIE_POLICIES = {"keep": TiePolicy.KEEP_ON_TIE, "zero": TiePolicy.ZERO_ON_TIE}
EMPTY_CLASS_POLICIES = {"idppa-zero": EmptyClassPolicy.IDPPA_ZERO, "exclude": EmptyClassPolicy.EXCLUDE_FROM_AVERAGE}


def _section(**values) -> Dict:
    """Keep only the options given on the command line."""
    return {key: value for key, value in values.items() if value not in (None, (), [])}


def _write(text: str, output):
    if output:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ReportError(f"Unable to write {output}: {exc}") from exc
    else:
        click.echo(text, nl=False)


@click.command()
@click.option("--config", "config_file", type=click.Path(dir_okay=False), help="TOML run configuration.")
@click.option("--data", multiple=True, help="Data dump (repeatable).")
@click.option("--ontology", multiple=True, help="Ontology dump (repeatable). Default: the data dumps.")
@click.option("--adapter", help=f"Dataset adapter ({', '.join(SUPPORTED_ADAPTER_NAMES)}) or adapter TOML file.")
@click.option("--compression", type=click.Choice([item.value for item in Compression]), help="Dump compression.")
@click.option("--strict/--skip-bad-lines", default=None, help="Abort on the first malformed line, or skip it.")
@click.option("--instance-of", multiple=True, help="Instance-of predicate IRI (repeatable).")
@click.option("--subclass-of", multiple=True, help="Subclass-of predicate IRI (repeatable).")
@click.option("--hierarchy-profile", type=click.Choice(["default", "wikidata"]), help="Hierarchy vocabulary.")
@click.option("--root", "root_iri", help="Pin the root class; parentless classes are attached below it.")
@click.option("--virtual-root/--no-virtual-root", default=None, help="Add a virtual root above multiple roots.")
@click.option("--mode", type=click.Choice([item.value for item in PredicateMode]), help="Predicate definitions.")
@click.option("--tie-policy", type=click.Choice(list(TIE_POLICIES)), help="IDPP on an exact tie.")
@click.option("--empty-class", type=click.Choice(list(EMPTY_CLASS_POLICIES)), help="Classes without instances.")
@click.option("--format", "output_format", type=click.Choice([item.value for item in OutputFormat]))
@click.option("--precision", type=click.IntRange(0, 30), help="Decimal places of rendered ratios.")
@click.option("--label", help="Dataset label in reports.")
@click.option("--workers", type=click.IntRange(1), help="Worker threads.")
@click.option("--grouping", type=click.Choice([item.value for item in Grouping]), help="Data triple order.")
@click.option("--stats-out", type=click.Path(dir_okay=False), help="Write the statistics snapshot here.")
@click.option("--stats-in", type=click.Path(dir_okay=False), help="Compute metrics from a statistics snapshot.")
@click.option("--class", "class_iri", help="Show the per-predicate breakdown of one class.")
@click.option("--compare", "compare_files", multiple=True, help="JSON report to compare (repeatable).")
@click.option("--force", is_flag=True, help="Compare reports computed under different metric policies.")
@click.option("--output", type=click.Path(dir_okay=False), help="Write the output here instead of stdout.")
@click.option("-v", "--verbose", count=True, help="Increase logging verbosity (repeatable)")
def main(  # pylint: disable=too-many-arguments,too-many-locals
    config_file,
    data,
    ontology,
    adapter,
    compression,
    strict,
    instance_of,
    subclass_of,
    hierarchy_profile,
    root_iri,
    virtual_root,
    mode,
    tie_policy,
    empty_class,
    output_format,
    precision,
    label,
    workers,
    grouping,
    stats_out,
    stats_in,
    class_iri,
    compare_files,
    force,
    output,
    verbose,
):
    """Compute the Class Granularity of a knowledge graph dump, or compare saved reports."""
    # Default logging level is WARNING; specifying -v/--verbose repeatedly can lower the threshold.
    verbosity = logging.WARNING - (10 * verbose)
    logging.basicConfig(level=verbosity)

    overrides = _section(
        label=label,
        input=_section(
            data=list(data),
            ontology=list(ontology),
            adapter=adapter,
            compression=compression,
            strictness=None if strict is None else ("strict" if strict else "skip-bad-lines"),
            workers=workers,
            grouping=grouping,
            stats_in=stats_in,
        ),
        hierarchy=_section(
            profile=hierarchy_profile,
            instance_of=list(instance_of),
            subclass_of=list(subclass_of),
            root_iri=root_iri,
            inject_virtual_root=virtual_root,
        ),
        metrics=_section(
            predicate_definition_mode=mode,
            tie_policy=TIE_POLICIES.get(tie_policy),
            empty_class_policy=EMPTY_CLASS_POLICIES.get(empty_class),
        ),
        output=_section(format=output_format, precision=precision, stats_out=stats_out, path=output),
    )
    overrides = {key: value for key, value in overrides.items() if value != {}}

    try:
        reports = [GranularityReport.load(path) for path in compare_files]
        if config_file or data or stats_in or not compare_files:
            if config_file:
                config = RunConfig.from_toml(config_file, **overrides)
            else:
                config = RunConfig.build(**overrides)
            report = run(config)
            precision = config.output.precision
            output_format = config.output.format
            output = config.output.path
            reports.insert(0, report)
        else:
            report = None
            precision = reports[0].settings.precision if precision is None else precision
            output_format = output_format or OutputFormat.PLAIN.value

        if compare_files:
            text = render_comparison(compare(reports, force=force), output_format, precision)
        elif class_iri:
            text = render_class_detail(class_detail(report, class_iri), output_format, precision)
        else:
            text = render_report(report, output_format)
        _write(text, output)

    except GranularityError as exc:
        stage = getattr(exc, "stage", None)
        click.echo(f"Error{f' in {stage}' if stage else ''}: {exc}", err=True)
        sys.exit(exc.exit_code)
