# formatters/__init__.py
"""
Tables and static figures
"""

from .report_formatter import ReportFormatter

__all__ = ['ReportFormatter']
