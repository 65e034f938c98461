import logging

import typer

from src.core.config import settings
from src.services.harness.router import router as harness_router

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)

app = typer.Typer(
    name="swarm-bench",
    help="Particle swarm optimizer with pseudo-adaptive constraint tolerances, and its g01-g13 benchmark harness.",
    no_args_is_help=True,
    add_completion=False,
)
app.add_typer(harness_router)


if __name__ == "__main__":
    app()
