"""Shared record of acceptance outcomes, one line per criterion."""

import time
from functools import wraps

RESULTS = {}


def criterion(number: int, title: str):
    """Record PASS/FAIL for a check function and print the line immediately."""

    def wrap(fn):
        @wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as e:
                line = f"criterion {number:2d} FAIL  {title}: {type(e).__name__}: {e}"
                RESULTS[number] = line
                print(line)
                raise
            elapsed = time.perf_counter() - start
            line = f"criterion {number:2d} PASS  {title}: {detail} ({elapsed:.1f}s)"
            RESULTS[number] = line
            print(line)

        return run

    return wrap
