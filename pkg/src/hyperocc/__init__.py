"""Occupancy-method bounds for independent sets in linear hypergraphs."""
from .hypergraph import Hypergraph, StructuralError, validate

__version__ = "0.1.0"

__all__ = ["Hypergraph", "StructuralError", "validate", "__version__"]
