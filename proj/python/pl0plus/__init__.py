"""pl0+ compiler and p+ virtual machine."""

from ._pl0plus import (
    LoadError,
    XmlError,
    canonical_equal,
    compile,
    phases,
    reference_eval,
    run_pcode,
    run_source,
    tokenize,
)

__all__ = [
    "LoadError",
    "XmlError",
    "canonical_equal",
    "compile",
    "phases",
    "reference_eval",
    "run_pcode",
    "run_source",
    "tokenize",
]
