"""Relative type inference for linear dependent types over PCF."""
from .pcf_syntax import parse_term, pretty, term_size, infer_pcf_type
from .index_lang import eval_index, forest_cardinality, parse_index, show_index
from .inference import infer, mainfct, check_soundness_contract
from .machines import run

__all__ = [
    "parse_term", "pretty", "term_size", "infer_pcf_type", "eval_index",
    "forest_cardinality", "parse_index", "show_index", "infer", "mainfct",
    "check_soundness_contract", "run",
]
