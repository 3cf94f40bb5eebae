"""
Main CLI entry point for fockflow
"""

import sys
from pathlib import Path
from typing import Optional

import click

from ..config.settings import Config, load_config
from ..core.exceptions import ConfigurationError, FockFlowError
from ..core.verification import registered_identities
from ..utils.helpers import RichOutputHelper
from ..utils.logger import setup_logging
from .commands import (
    EXIT_DOMAIN,
    EXIT_USAGE,
    emit_error,
    eval_command,
    exit_code_for,
    field_command,
    images_command,
    run_command,
    schema_command,
    streamlines_command,
    verify_command,
    zeros_command,
)

# Global variables for CLI context
_config: Optional[Config] = None
_output_helper: Optional[RichOutputHelper] = None
_logger = None


def _setup_cli_context(config_path: str, debug: bool) -> None:
    """Setup CLI context with configuration and logging"""
    global _config, _output_helper, _logger

    try:
        _config = load_config(config_path)

        _logger = setup_logging(_config.logging_config, debug=debug)
        _output_helper = RichOutputHelper(enabled=_config.app_config.enable_rich_output)

        _logger.info(f"CLI initialized with config: {config_path}")

    except ConfigurationError as e:
        emit_error(e, EXIT_USAGE)
        sys.exit(EXIT_USAGE)


@click.group()
@click.option(
    '--config',
    default=None,
    help='Path to configuration file (default: use built-in config)'
)
@click.option(
    '--debug/--no-debug',
    default=False,
    help='Enable debug logging'
)
@click.pass_context
def cli(ctx: click.Context, config: Optional[str], debug: bool):
    """
    fockflow - Fock-Bargmann wave functions as planar potential flows

    Evaluates holomorphic wave functions, turns them into vortex or source
    flows, locates their zeros, builds method-of-images systems and checks
    the underlying identities numerically. Artifacts go to stdout unless
    --out is given; messages go to stderr.

    Examples:

        # Velocity of the odd-cat vortex flow at a point
        fockflow eval --state '{"kind":"cat","parity":"odd","alpha":"1+0i"}' --z 0.3+0.2i

        # Sample a field to CSV
        fockflow field --state '{"kind":"fock","n":1}' --grid -2:2:-2:2:50 --out field.csv

        # Run the verification battery
        fockflow verify --all
    """
    ctx.ensure_object(dict)

    if config is None:
        config_path = Path(__file__).parent.parent / "config" / "config.yaml"
    else:
        config_path = Path(config)

    if not config_path.exists():
        emit_error(ConfigurationError(f"Configuration file not found: {config_path}"), EXIT_USAGE)
        sys.exit(EXIT_USAGE)

    _setup_cli_context(str(config_path), debug)

    ctx.obj['config'] = _config
    ctx.obj['output_helper'] = _output_helper
    ctx.obj['logger'] = _logger


cli.add_command(eval_command, name="eval")
cli.add_command(field_command, name="field")
cli.add_command(zeros_command, name="zeros")
cli.add_command(images_command, name="images")
cli.add_command(verify_command, name="verify")
cli.add_command(streamlines_command, name="streamlines")
cli.add_command(run_command, name="run")
cli.add_command(schema_command, name="schema")


@cli.command()
@click.pass_context
def version(ctx: click.Context):
    """Show version information"""
    output_helper = ctx.obj['output_helper']

    from .. import __author__, __description__, __version__

    version_info = {
        "version": __version__,
        "author": __author__,
        "description": __description__,
        "config_path": str(_config.config_path) if _config else "Unknown",
    }
    output_helper.print_json(version_info, title="fockflow - Version Information")


@cli.command(name="config-info")
@click.pass_context
def config_info(ctx: click.Context):
    """Show current configuration"""
    output_helper = ctx.obj['output_helper']
    config = ctx.obj['config']

    info = {
        "config_file": str(config.config_path),
        "truncation": config.truncation_config.model_dump(),
        "quadrature": config.quadrature_config.model_dump(),
        "zero_search": config.zero_search_config.model_dump(),
        "streamlines": config.streamline_config.model_dump(),
        "verification": {
            "seed": config.verification_config.seed,
            "identities": registered_identities(),
        },
        "logging": {
            "level": config.logging_config.level,
            "file": config.logging_config.file,
        },
        "app": config.app_config.model_dump(),
    }
    output_helper.print_json(info, title="Current Configuration")


def handle_cli_error(func):
    """Decorator to handle CLI errors gracefully"""
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FockFlowError as e:
            code = exit_code_for(e)
            emit_error(e, code)
            sys.exit(code)
        except KeyboardInterrupt:
            if _output_helper:
                _output_helper.print_warning("Operation cancelled by user")
            else:
                click.echo("Operation cancelled", err=True)
            sys.exit(130)
        except Exception as e:
            if _logger:
                _logger.exception("Unexpected error in CLI")
            emit_error(e, EXIT_DOMAIN)
            if _output_helper:
                _output_helper.print_info("Use --debug for more details")
            sys.exit(EXIT_DOMAIN)

    return wrapper


def main():
    """Main entry point for the CLI"""
    handle_cli_error(cli)()


if __name__ == "__main__":
    main()
