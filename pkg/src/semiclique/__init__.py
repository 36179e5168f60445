"""Planted-clique laboratory for the semirandom model."""
from .instance import (DegreeBoost, FakeCliques, Instance, InstanceParams, Random, SignMatch, generate,
                       load, parse_adversary, save, validate)
from .linalg import (FormatError, IntVector, SignedGraph, SignedVector, aggregate, column, degree, index_set,
                     inner, l1_norm, restrict, triple_column)
from .solvers import (SolverConfig, candidate_single, candidate_triple, post_process, prune_list, solve_degree,
                      solve_semirandom, solve_single_full, solve_spectral)

__version__ = "0.1.0"
