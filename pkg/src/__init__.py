"""
Linearizability Monitor Package
Checkers for register, set, stack, queue and priority-queue histories.
"""

__version__ = "1.0.0"
__author__ = "linmon developers"

# Make imports easier
from src.model import AdtKind, History, Method, Operation, parse_history, serialize_history
from src.framework import CheckReport, Verdict, Stage
from src.monitor import Monitor
from src.generator import GenConfig, generate_linearizable

__all__ = [
    'AdtKind',
    'History',
    'Method',
    'Operation',
    'parse_history',
    'serialize_history',
    'CheckReport',
    'Verdict',
    'Stage',
    'Monitor',
    'GenConfig',
    'generate_linearizable',
]
