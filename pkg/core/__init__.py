"""
Shared plumbing: errors, configuration, console and the oracle history cache.
"""

__version__ = "0.1.0"
