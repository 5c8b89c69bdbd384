import json
import logging
import os

import click

from .. import __version__
from ..core.errors import GarlandError
from .commands import COMMANDS
from .constants import ENV_PREFIX, EXIT_INPUT_ERROR, TRUTHY


class GarlandGroup(click.Group):
    """Reports any ``GarlandError`` as JSON on stderr with exit code 1."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except GarlandError as exc:
            logging.getLogger(__name__).debug("command failed", exc_info=True)
            click.echo(json.dumps(exc.to_dict(), ensure_ascii=False), err=True)
            ctx.exit(EXIT_INPUT_ERROR)


def create_cli() -> click.Group:
    """Create the command group with every subcommand registered."""

    @click.group(cls=GarlandGroup)
    @click.option("--verbose", "-v", is_flag=True, help="Debug logging.")
    @click.version_option(version=__version__, message="%(version)s")
    def cli(verbose: bool):
        """Twisted cochains, link spectral gaps and the H¹ vanishing criterion."""
        # ---- Logging -------------------------------------------------------
        env_verbose = os.getenv(ENV_PREFIX + "VERBOSE", "").lower() in TRUTHY
        if verbose or env_verbose:
            logging.getLogger("garland_vanishing").setLevel(logging.DEBUG)

    # ---- Register commands -------------------------------------------------
    for command in COMMANDS:
        cli.add_command(command)
    return cli
