"""
fading-limits

Data-oriented limits of ORA and OPRA transmission over Rayleigh block
fading: delay outage, information outage, capacity and crossovers.

Run with:
    python main.py threshold --snr-db 6
    python main.py dor-curve --preset fig1 --out fig1.csv
"""

import logging
import sys

from fading_limits.core.config import config

# Configure logging
logging.basicConfig(
    level=config.log_level,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    stream=sys.stderr,
)

from fading_limits.cli import main


if __name__ == "__main__":
    sys.exit(main())
