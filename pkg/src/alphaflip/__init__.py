"""Distributive lattices of plane-graph orientations and their Markov chains."""

from .planegraph import EmbeddingInvalid, FaceWalk, PlaneGraph, load_instance
from .orientations import (AlphaSpec, CapExceeded, EssentialCycle, Infeasible,
                           Lattice, NotDirected, Orientation, StateSpace)

__all__ = [
    "AlphaSpec", "CapExceeded", "EmbeddingInvalid", "EssentialCycle",
    "FaceWalk", "Infeasible", "Lattice", "NotDirected", "Orientation",
    "PlaneGraph", "StateSpace", "load_instance",
]
