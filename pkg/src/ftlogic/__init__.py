"""Fault-tolerant Boolean logic through pole coding in Hamming space."""

from .coding import (
    ClassLabel,
    CodingScheme,
    Codeword,
    FiniteMetricSpace,
    HPolicy,
    SchemeQuality,
    UncorrectableCodeError,
    build_scheme,
    classify,
    correct,
    enumerate_schemes,
    generalized_decode,
    hamming_distance,
    parse_scheme,
    rank_schemes,
    scheme_quality,
)
from .synth import (
    AND,
    NOT,
    OR,
    XOR,
    LogicOp,
    TolerantGateSpec,
    TranslatorSpec,
    custom_op,
    minterm_lists,
    synthesize_function,
    tolerant_gate,
    translator,
)
from .circuit import Gate, Netlist, NetlistError, build_nmr, evaluate, substitute
from .netlist_io import load_fixture, load_netlist, parse_netlist, serialize_netlist

__version__ = "0.1.0"
