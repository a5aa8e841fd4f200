"""Exact multi-soliton solutions of the cubic NLS system and their numerical checks."""

from .exppoly import ExpPoly, ExpTerm
from .hirota import SolitonParams, SolutionRep, Spectrum, build, build_solution, eval_component

__all__ = ["ExpPoly", "ExpTerm", "SolitonParams", "SolutionRep", "Spectrum", "build",
           "build_solution", "eval_component"]
