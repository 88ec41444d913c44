"""Transitive election tables, their inference kernel and certificates."""

from .certificate import Certificate, Goal, ReplayReport, Step, read_certificate, replay, write_certificate
from .kernel import Conclusion, FactBase, Term, combine, infer
from .paren import Leaf, Node, ParenTree, left_comb, parse_paren
from .table import (
    TransitiveElectionTable,
    ValidationReport,
    Violation,
    format_table,
    m0_distribution,
    parse_table,
    row_distribution,
    row_distributions,
    validate,
)

__all__ = [
    "Certificate", "Conclusion", "FactBase", "Goal", "Leaf", "Node", "ParenTree", "ReplayReport", "Step", "Term",
    "TransitiveElectionTable", "ValidationReport", "Violation", "combine", "format_table", "infer", "left_comb",
    "m0_distribution", "parse_paren", "parse_table", "read_certificate", "replay", "row_distribution",
    "row_distributions", "validate", "write_certificate",
]
