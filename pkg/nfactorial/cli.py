"""CLI commands for nfactorial"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
from pydantic import ValidationError

from nfactorial import __version__
from nfactorial.cache import ResultCache
from nfactorial.config import Settings, get_settings
from nfactorial.errors import NFactorialError, UsageError
from nfactorial.models import TaskResult
from nfactorial.partitions import Partition
from nfactorial.tasks import run_task, verify_all

logger = logging.getLogger("nfactorial")


class PartitionType(click.ParamType):
    """A partition written as comma-separated parts, e.g. 3,1,1"""

    name = "partition"

    def convert(self, value, param, ctx):
        if isinstance(value, Partition):
            return value
        try:
            return Partition.parse(value)
        except UsageError as exc:
            self.fail(str(exc), param, ctx)


PARTITION = PartitionType()


def run_options(command):
    """Options shared by every computing subcommand"""
    options = [
        click.option('--format', 'fmt', type=click.Choice(['json', 'tsv']), default='json',
                     show_default=True, help='Output format'),
        click.option('--timings', is_flag=True, help='Include elapsed milliseconds in output'),
        click.option('--no-cache', is_flag=True, help='Neither read nor write the result cache'),
        click.option('--cache-dir', type=click.Path(file_okay=False, path_type=Path),
                     default=None, help='Cache directory (env: NFACT_CACHE_DIR)'),
        click.option('--workers', type=click.IntRange(min=1), default=None,
                     help='Worker count (env: NFACT_WORKERS)'),
        click.option('--max-n', type=click.IntRange(min=1), default=None,
                     help='Desk-scale bound on n (env: NFACT_MAX_N)'),
        click.option('--deep', is_flag=True, default=None,
                     help='Enable the n = 6 and p = 3 tiers (env: NFACT_DEEP)'),
        click.option('--verbose', '-v', is_flag=True, help='Debug logging on stderr'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _setup_logging(verbose: bool) -> None:
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[nfactorial] %(levelname)s %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


def _settings(options: Dict[str, Any]) -> Settings:
    _setup_logging(options['verbose'])
    try:
        return get_settings(
            workers=options['workers'],
            max_n=options['max_n'],
            deep=options['deep'] or None,
            cache_dir=options['cache_dir'],
            use_cache=False if options['no_cache'] else None,
        )
    except ValidationError as e:
        click.echo(f"Error: invalid settings: {e}", err=True)
        sys.exit(2)


def _open_cache(settings: Settings) -> Optional[ResultCache]:
    if not settings.use_cache:
        return None
    return ResultCache(settings.cache_dir)


def _emit(results: List[TaskResult], fmt: str) -> None:
    for result in results:
        click.echo(result.to_tsv() if fmt == 'tsv' else result.to_json())


def _run(task: str, inputs: Dict[str, Any], options: Dict[str, Any]) -> None:
    settings = _settings(options)
    cache = _open_cache(settings)
    try:
        result = run_task(task, inputs, settings, cache, timings=options['timings'])
    except UsageError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(2)
    except NFactorialError as e:
        click.echo(f"Error: {type(e).__name__}: {e}", err=True)
        sys.exit(1)
    finally:
        if cache is not None:
            cache.dispose()
    _emit([result], options['fmt'])
    sys.exit(0 if result.passed else 1)


@click.group()
@click.version_option(version=__version__, prog_name="nfactorial")
def cli():
    """nfactorial - exact checks of the n! theorem and the objects around it"""
    pass


@cli.command()
@click.option('--sigma', type=PARTITION, required=True, help='Partition, e.g. 2,1')
@click.option('--field', default='q', show_default=True, help="Coefficient field: q or fp:PRIME")
@click.option('--mode', type=click.Choice(['exact', 'consensus']), default='exact',
              show_default=True, help='Exact rationals or two-prime consensus')
@run_options
def dim(sigma: Partition, field: str, mode: str, **options):
    """Dimension, characters and pairing of the harmonic module of SIGMA"""
    _run('dim', {'sigma': str(sigma), 'field': field, 'mode': mode}, options)


@cli.command()
@click.option('--sigma', type=PARTITION, default=None, help='Sign analysis of this partition')
@click.option('--n', 'n', type=int, default=None, help='Lowest sign degree of the 2n-variable ring')
@click.option('--mode', type=click.Choice(['exact', 'consensus']), default='exact',
              show_default=True)
@run_options
def sign(sigma: Optional[Partition], n: Optional[int], mode: str, **options):
    """Where the sign character occurs"""
    if (sigma is None) == (n is None):
        click.echo("Error: give exactly one of --sigma and --n", err=True)
        sys.exit(2)
    if n is not None:
        _run('sign', {'n': n}, options)
    else:
        _run('sign', {'sigma': str(sigma), 'mode': mode}, options)


@cli.command()
@click.option('--sigma', type=PARTITION, required=True)
@click.option('--field', default='q', show_default=True, help="Coefficient field: q or fp:PRIME")
@run_options
def springer(sigma: Partition, field: str, **options):
    """Tanisaki and de Concini-Procesi quotients for SIGMA and its dual"""
    _run('springer', {'sigma': str(sigma), 'field': field}, options)


@cli.command()
@click.option('--sigma', type=PARTITION, required=True)
@run_options
def tsigma(sigma: Partition, **options):
    """The Gorenstein quotient T_sigma compared with the harmonic module"""
    _run('tsigma', {'sigma': str(sigma)}, options)


@cli.command()
@click.option('--p', 'p', type=int, required=True)
@click.option('--q', 'q', type=int, required=True)
@click.option('--r', 'r', type=int, default=0, show_default=True)
@click.option('--mode', type=click.Choice(['exact', 'consensus']), default='exact',
              show_default=True)
@run_options
def gr(p: int, q: int, r: int, mode: str, **options):
    """Associated graded of the coinvariant filtration for a box plus one row"""
    _run('gr', {'p': p, 'q': q, 'r': r, 'mode': mode}, options)


@cli.command()
@click.option('--n', 'n', type=int, default=None)
@click.option('--p', 'p', type=int, required=True)
@click.option('--counterexample', is_flag=True,
              help='Run the two-variable counterexample instead of an n instance')
@run_options
def charp(n: Optional[int], p: int, counterexample: bool, **options):
    """Divided-power closure of the Vandermonde over F_p"""
    if counterexample:
        _run('counterexample', {'p': p}, options)
    elif n is None:
        click.echo("Error: --n is required unless --counterexample is given", err=True)
        sys.exit(2)
    else:
        _run('charp', {'n': n, 'p': p}, options)


@cli.command()
@click.option('--sigma', type=PARTITION, required=True)
@run_options
def nilpair(sigma: Partition, **options):
    """Principal nilpotent pair of SIGMA and its associated semisimple pair"""
    _run('nilpair', {'sigma': str(sigma)}, options)


@cli.command()
@click.option('--sigma', type=PARTITION, required=True)
@run_options
def hilb(sigma: Partition, **options):
    """Monomial ideal of SIGMA and the one-point family through it"""
    _run('hilb', {'sigma': str(sigma)}, options)


@cli.command('verify-all')
@click.option('--progress', is_flag=True, help='Show a progress bar on stderr')
@run_options
def verify_all_command(progress: bool, **options):
    """Run every acceptance check up to --max-n"""
    settings = _settings(options)
    cache = _open_cache(settings)
    try:
        results = verify_all(settings, cache, progress=progress, timings=options['timings'])
    finally:
        if cache is not None:
            cache.dispose()
    _emit(results, options['fmt'])
    failed = [r for r in results if not r.passed]
    for result in failed:
        click.echo(f"FAIL {result.task} {result.inputs}", err=True)
    click.echo(f"{len(results) - len(failed)}/{len(results)} passed", err=True)
    sys.exit(1 if failed else 0)


@cli.command('init-config')
@click.option('--output', '-o', default='.env', help='Output file path')
@click.option('--force', '-f', is_flag=True, help='Overwrite existing file without asking')
def init_config(output: str, force: bool):
    """Write a .env file with the NFACT_* settings"""
    config_template = """# nfactorial configuration
# Command-line flags override these values.

# Worker count for verify-all and span closures
NFACT_WORKERS=1

# Result cache
# NFACT_CACHE_DIR=~/.nfactorial
NFACT_USE_CACHE=true

# Scale: max n for harmonic computations; deep enables n = 6 and p = 3
NFACT_MAX_N=5
NFACT_DEEP=false

# Seed of the modular prime generator
NFACT_PRIME_SEED=20011
"""

    output_path = Path(output)
    if output_path.exists() and not force:
        if not click.confirm(f"{output} already exists. Overwrite?"):
            click.echo("Aborted.")
            return

    output_path.write_text(config_template)
    click.echo(f"Configuration file created: {output}")


@cli.command()
def version():
    """Show version information"""
    from nfactorial import ENGINE_VERSION
    click.echo(f"nfactorial v{__version__} (engine {ENGINE_VERSION})")


if __name__ == '__main__':
    cli()
