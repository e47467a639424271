"""Frontend for the supported Go subset."""

from .analyze import Analysis, CaseResult, analyze_file, analyze_source
from .goast import Program, render_program
from .lexer import GoSyntaxError
from .parser import Unsupported, parse
from .translate import compute_m, unresolved_condition_preds

__all__ = [
    "Analysis",
    "CaseResult",
    "GoSyntaxError",
    "Program",
    "Unsupported",
    "analyze_file",
    "analyze_source",
    "compute_m",
    "parse",
    "render_program",
    "unresolved_condition_preds",
]
