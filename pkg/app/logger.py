import logging
import sys
from pathlib import Path

from app.config import Settings
from app.utils.timezone import TimezoneAwareFormatter

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(settings: Settings, verbose: bool = False) -> logging.Logger:
    """
    Корневой логгер: stdout + файл (если LOG_FILE не пуст).

    Args:
        settings: окружение запуска
        verbose: принудительно DEBUG

    Returns:
        Логгер приложения
    """
    formatter = TimezoneAwareFormatter(LOG_FORMAT, timezone_name=settings.timezone)

    handlers: list[logging.Handler] = []
    stream_handler = logging.StreamHandler(sys.stdout)
    stream_handler.setFormatter(formatter)
    handlers.append(stream_handler)

    if settings.log_file:
        log_path = Path(settings.log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, encoding="utf-8")
        file_handler.setFormatter(formatter)
        handlers.append(file_handler)

    level = logging.DEBUG if verbose else getattr(logging, settings.log_level)
    logging.basicConfig(level=level, handlers=handlers, force=True)

    # шумные сторонние логгеры
    logging.getLogger("PIL").setLevel(logging.WARNING)
    logging.getLogger("asyncio").setLevel(logging.WARNING)

    return logging.getLogger("app")
