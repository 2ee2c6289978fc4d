"""Localization of continuous-time quantum walks on networks."""

from .graph import Graph, Hamiltonian, build_graph, hamiltonian, mean_clustering
from .netgen import GeneratorSpec, generate, recursive_triangle
from .qwalk import LongTimeResult, evolve, ipr, longtime, longtime_ipr, longtime_transition_matrix
from .spectral import SpectralDecomposition, eig_sym

__all__ = [
    "Graph",
    "Hamiltonian",
    "build_graph",
    "hamiltonian",
    "mean_clustering",
    "GeneratorSpec",
    "generate",
    "recursive_triangle",
    "LongTimeResult",
    "evolve",
    "ipr",
    "longtime",
    "longtime_ipr",
    "longtime_transition_matrix",
    "SpectralDecomposition",
    "eig_sym",
]

__version__ = "0.1.0"
