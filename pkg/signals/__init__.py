"""
Ground-motion records: parsing, resampling and amplitude measures

Spectral measures live in `signals.spectrum`, which depends on the time
integrators of `dynamics`; it is not imported here.
"""

from .records import G, G_IN, GroundMotionRecord, TimeSeries, parse_at2, pga, read_at2, resample, serialize_at2

__all__ = [
    'G',
    'G_IN',
    'GroundMotionRecord',
    'TimeSeries',
    'parse_at2',
    'pga',
    'read_at2',
    'resample',
    'serialize_at2',
]
