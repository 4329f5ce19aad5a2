import os
import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel

load_dotenv()

logger = logging.getLogger(__name__)

# Most recent errors, newest last
recent_errors: List[str] = []
MAX_RECENT_ERRORS = 10


class Settings(BaseModel):
    threads: int
    log_level: str = "INFO"
    max_attempts: int = 500
    host: str = "0.0.0.0"
    port: int = 8000


def _int_env(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
        if value < 1:
            raise ValueError(raw)
        return value
    except ValueError:
        logger.warning(f"Ignoring invalid {name}={raw!r}, using {default}")
        return default


def get_settings() -> Settings:
    default_threads = min(os.cpu_count() or 1, 8)
    return Settings(
        threads=_int_env("PARACOH_THREADS", default_threads),
        log_level=os.getenv("PARACOH_LOG_LEVEL", "INFO").upper(),
        max_attempts=_int_env("PARACOH_MAX_ATTEMPTS", 500),
        host=os.getenv("PARACOH_HOST", "0.0.0.0"),
        port=_int_env("PARACOH_PORT", 8000),
    )


def setup_logging(level: Optional[str] = None):
    level = level or get_settings().log_level
    logging.basicConfig(level=getattr(logging, level, logging.INFO))


def log_error(error_message, context=None):
    if context:
        logger.error(f"{error_message} ({context})")
    else:
        logger.error(f"{error_message}")
    recent_errors.append(f"{datetime.now()}: {error_message}")
    # Keep only last 10 errors
    if len(recent_errors) > MAX_RECENT_ERRORS:
        del recent_errors[:-MAX_RECENT_ERRORS]


def ordered_map(fn, items, max_workers=None):
    """Apply ``fn`` to ``items`` on the worker pool; results keep input order."""
    items = list(items)
    if not items:
        return []
    workers = max_workers or get_settings().threads
    workers = max(1, min(workers, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
