"""Utility to run blocking numerical work off the event loop with a timeout."""

import asyncio
from typing import Any, Callable

from .base import EXIT_INTERNAL, CommandError


async def run_blocking(func: Callable[..., Any], *args, timeout: float | None = None, **kwargs) -> Any:
    """Run `func` in a worker thread; a timeout becomes an internal CommandError."""
    try:
        return await asyncio.wait_for(asyncio.to_thread(func, *args, **kwargs), timeout=timeout)
    except asyncio.TimeoutError as exc:
        raise CommandError(f"'{getattr(func, '__name__', func)}' timed out after {timeout} seconds",
                           exit_code=EXIT_INTERNAL) from exc
