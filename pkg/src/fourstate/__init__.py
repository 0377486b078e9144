"""Exact certification of a four-state counterexample operator and its laminates."""
from .exact import determinant, parse_rational, rank, solve_linear
from .operator import OperatorFamily, constant_rank_certificate, symbol_A, symbol_B, wave_cone_member
from .t4 import LargeT4Data, T4Config, solve_t4, verify_large_t4, verify_t4_chain

__all__ = [
    "LargeT4Data",
    "OperatorFamily",
    "T4Config",
    "constant_rank_certificate",
    "determinant",
    "parse_rational",
    "rank",
    "solve_linear",
    "solve_t4",
    "symbol_A",
    "symbol_B",
    "verify_large_t4",
    "verify_t4_chain",
    "wave_cone_member",
]
