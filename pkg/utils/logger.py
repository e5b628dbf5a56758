# =============================================================
# IBGAS — LOGGER
# =============================================================
import logging
import os
from datetime import datetime

from rich.console import Console
from rich.logging import RichHandler

from config.settings import settings
from utils.errors import DomainError

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# stdout carries CSV/JSON, so everything human-facing goes to stderr
console = Console(stderr=True)


def _build_handlers() -> list[logging.Handler]:
    handlers: list[logging.Handler] = [
        RichHandler(console=console, show_path=False, rich_tracebacks=False)
    ]

    if settings.LOG_DIR:
        os.makedirs(settings.LOG_DIR, exist_ok=True)
        log_file = os.path.join(
            settings.LOG_DIR, f"ibgas_{datetime.now().strftime('%Y-%m-%d')}.log"
        )
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(
            logging.Formatter(
                "[%(asctime)s] IBGAS | %(levelname)s | %(name)s | %(message)s",
                datefmt="%H:%M:%S",
            )
        )
        handlers.append(file_handler)

    return handlers


logger = logging.getLogger("ibgas")

if not logger.handlers:
    for handler in _build_handlers():
        logger.addHandler(handler)
    logger.setLevel(settings.LOG_LEVEL)
    logger.propagate = False


def get_logger(name: str) -> logging.Logger:
    """Child logger of the ibgas root, e.g. get_logger("gas")."""
    return logger.getChild(name)


def set_level(level: str) -> None:
    name = level.strip().upper()
    if name not in LEVELS:
        raise DomainError(f"unknown log level {level!r}")
    logger.setLevel(name)


def info(message: str):
    console.print(f"[yellow]•[/yellow] {message}")
    logger.debug(message)


def success(message: str):
    console.print(f"[green]✔[/green] {message}")
    logger.debug(message)


def warning(message: str):
    console.print(f"[bright_red]![/bright_red] {message}")
    logger.debug(message)


def error(message: str):
    console.print(f"[red]✖[/red] {message}")
    logger.debug(message)
