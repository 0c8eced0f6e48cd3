"""Workbench for divisibility-sequence topologies on the integers.

Exact circle arithmetic, balanced digit expansions over divisibility chains,
torsion character windows, decidable neighborhood membership with audit
records, certified bounded search in bracket neighborhoods, the
sequence-killing construction, and exhaustive small-case lemma verifiers.
"""

from .circle import ZERO, CircleElem, centered_mod
from .dseq import (
    BlockGrowth,
    DigitExpansion,
    DSequence,
    RatioBound,
    expansion_value,
    parse_spec,
)
from .chars import Character, character_window
from .topo import (
    GammaCheck,
    NeighborhoodSpec,
    PrefixCertificate,
    TauCheck,
    gamma_check,
    gamma_member,
    lambda_member,
    null_prefix_certificate,
    tau_check,
    tau_member,
)
from .graev import (
    ASet,
    Certificate,
    CertTerm,
    GraevPolar,
    GraevSpec,
    TailWindow,
    VMemberResult,
    build_a_set,
    graev_polar_window,
    tail_set,
    v_member,
)
from .analysis import (
    ChainSweep,
    KillReport,
    KillRound,
    Lemma1Sweep,
    LqcModReport,
    QuasiConvexity,
    is_quasiconvex_window,
    kill_sequence,
    polar_window,
    qc_hull_window,
    verify_lemma1,
    verify_lemma_chain,
    verify_lqc_modification,
)
from . import errors

__all__ = [
    "ZERO",
    "CircleElem",
    "centered_mod",
    "DSequence",
    "DigitExpansion",
    "RatioBound",
    "BlockGrowth",
    "expansion_value",
    "parse_spec",
    "Character",
    "character_window",
    "lambda_member",
    "tau_member",
    "tau_check",
    "TauCheck",
    "gamma_member",
    "gamma_check",
    "GammaCheck",
    "null_prefix_certificate",
    "PrefixCertificate",
    "NeighborhoodSpec",
    "GraevSpec",
    "Certificate",
    "CertTerm",
    "TailWindow",
    "tail_set",
    "VMemberResult",
    "v_member",
    "ASet",
    "build_a_set",
    "GraevPolar",
    "graev_polar_window",
    "polar_window",
    "qc_hull_window",
    "is_quasiconvex_window",
    "QuasiConvexity",
    "kill_sequence",
    "KillReport",
    "KillRound",
    "verify_lemma1",
    "Lemma1Sweep",
    "verify_lemma_chain",
    "ChainSweep",
    "verify_lqc_modification",
    "LqcModReport",
    "errors",
]
