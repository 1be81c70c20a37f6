"""
Helper utilities and common functions
Argument parsing helpers, timestamps and performance logging
"""
import logging
import time
from datetime import datetime
from typing import Any, List

logger = logging.getLogger(__name__)


def get_current_iso_timestamp() -> str:
    """Get current timestamp in ISO format"""
    return datetime.now().isoformat()


def format_duration(seconds: float) -> str:
    """Format duration in seconds to human readable format"""
    if seconds < 60:
        return f"{seconds:.1f} seconds"
    elif seconds < 3600:
        minutes = seconds / 60
        return f"{minutes:.1f} minutes"
    else:
        hours = seconds / 3600
        return f"{hours:.1f} hours"


def parse_dims(text: str) -> List[int]:
    """Parse an inclusive dimension range 'a..b' (or a single integer)"""
    text = text.strip()
    try:
        if '..' in text:
            low, high = (int(part) for part in text.split('..', 1))
        else:
            low = high = int(text)
    except ValueError:
        raise ValueError(f"Invalid dimension range '{text}', expected a..b")

    if low < 1 or high < low:
        raise ValueError(f"Invalid dimension range '{text}'")
    return list(range(low, high + 1))


def parse_float_list(text: str) -> List[float]:
    """Parse a comma separated list of floats"""
    try:
        values = [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise ValueError(f"Invalid number list '{text}'")
    if not values:
        raise ValueError("Number list must not be empty")
    return values


def parse_name_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(',') if item.strip()]


def chunk_list(lst: List[Any], chunk_size: int) -> List[List[Any]]:
    """Split a list into chunks of specified size"""
    return [lst[i:i + chunk_size] for i in range(0, len(lst), chunk_size)]


def log_performance_metrics(operation_name: str, start_time: float,
                            items_processed: int = 0, **kwargs) -> None:
    """Log performance metrics for operations"""
    elapsed = time.time() - start_time

    logger.info(f"⏱️  Performance metrics for '{operation_name}':")
    logger.info(f"   Duration: {format_duration(elapsed)}")

    if items_processed > 0 and elapsed > 0:
        rate = items_processed / elapsed
        logger.info(f"   Items processed: {items_processed:,}")
        logger.info(f"   Processing rate: {rate:.2f} items/second")

    for key, value in kwargs.items():
        logger.info(f"   {key}: {value}")
