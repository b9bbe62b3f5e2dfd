"""xnfkit: a 2-XNF SAT toolkit.

Convert Boolean polynomial systems (ANF) and k-XNF formulas into 2-XNF,
decide satisfiability with a graph-based DPLL solver built on implication
graph structures, and export to CNF-XOR or plain CNF.
"""

from .anf import AnfPoly, parse_anf, write_anf
from .convert import (
    Quadratization,
    anf_to_2xnf,
    find_substitution,
    qanf_to_2xnf,
    system_to_2xnf,
    vanishing_quadrics,
    xnf_to_2xnf,
)
from .encode import export_cnf, export_cnfxor
from .generate import GenSpec, gen_random
from .gf2 import LinSystem, Lineral, affine_meet
from .igs import Igs, cr_ggcp, ggcp, preprocess, scc_condense, tfls, trivial_igs
from .oracle import brute_force_solve, count_models, enumerate_models
from .solver import (
    Decision,
    SolveResult,
    SolveStats,
    SolverConfig,
    decide_maxbottleneck,
    decide_maxpath,
    decide_maxreach,
    dpll_solve,
    verify_model,
)
from .xnf import XnfFormula, parse_xnf, write_xnf

__all__ = [
    "AnfPoly",
    "Decision",
    "GenSpec",
    "Igs",
    "LinSystem",
    "Lineral",
    "Quadratization",
    "SolveResult",
    "SolveStats",
    "SolverConfig",
    "XnfFormula",
    "affine_meet",
    "anf_to_2xnf",
    "brute_force_solve",
    "count_models",
    "cr_ggcp",
    "decide_maxbottleneck",
    "decide_maxpath",
    "decide_maxreach",
    "dpll_solve",
    "enumerate_models",
    "export_cnf",
    "export_cnfxor",
    "find_substitution",
    "gen_random",
    "ggcp",
    "parse_anf",
    "parse_xnf",
    "preprocess",
    "qanf_to_2xnf",
    "scc_condense",
    "system_to_2xnf",
    "tfls",
    "trivial_igs",
    "vanishing_quadrics",
    "verify_model",
    "write_anf",
    "write_xnf",
    "xnf_to_2xnf",
]

__version__ = "0.1.0"
