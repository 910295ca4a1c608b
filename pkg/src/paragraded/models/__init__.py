"""
Paragraded Models
=================

Report schemas shared across modules.
"""

from .reports import AuditReport, AuditSummary, Finding, ResidualCheck, Severity

__all__ = [
    "AuditReport",
    "AuditSummary",
    "Finding",
    "ResidualCheck",
    "Severity",
]
