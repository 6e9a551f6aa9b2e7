"""Simulation of the hidden-state / binary-observation dynamics."""

from .kernel import DynamicsKernel
from .simulator import State, initial_state, simulate, step
from .trajectory import Trajectory, load_trajectory, save_trajectory

__all__ = [
    "DynamicsKernel",
    "State",
    "initial_state",
    "simulate",
    "step",
    "Trajectory",
    "load_trajectory",
    "save_trajectory",
]
