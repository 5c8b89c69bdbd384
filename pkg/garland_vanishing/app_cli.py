import logging
import os

from garland_vanishing.cli_io import create_cli

# ----------------------------------------------------------------------
# Configuration – read from environment variables with the prefix
# GARLAND_VANISHING_*.  Analysis defaults are read by AnalysisConfig.
# ----------------------------------------------------------------------
LOG_LEVEL = os.getenv("GARLAND_VANISHING_LOG_LEVEL", "WARNING").upper()

logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.WARNING),
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)

# Expose the click group as a module-level variable for console scripts.
cli = create_cli()

if __name__ == "__main__":
    cli()
