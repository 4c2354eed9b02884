"""Association schemes from p-ary functions: exact Walsh spectra, scheme criteria, bent analysis and trace codes."""

from .cyclo import Cyc, gauss_sum
from .func import PFunc, from_expr, load_table, parse_expr
from .gf import FieldCtx, field_new, parse_field_spec
from .walsh import WalshSpectrum, walsh_fast, walsh_naive

__all__ = [
    "Cyc", "gauss_sum", "PFunc", "from_expr", "load_table", "parse_expr",
    "FieldCtx", "field_new", "parse_field_spec", "WalshSpectrum", "walsh_fast", "walsh_naive",
]
__version__ = "0.1.0"
