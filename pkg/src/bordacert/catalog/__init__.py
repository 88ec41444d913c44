"""Parameterized table constructors and the certificate generator."""

from .lemmas import BuiltTable, LemmaId, build_table, check_built
from .prover import Builder, prove_sign_constant, prove_tie
from .reductions import gamma_select, reduce_margins, split_profile
from .samplers import sample_params

__all__ = [
    "Builder", "BuiltTable", "LemmaId", "build_table", "check_built", "gamma_select", "prove_sign_constant",
    "prove_tie", "reduce_margins", "sample_params", "split_profile",
]
