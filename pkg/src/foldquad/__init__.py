"""Simulation and control of a quadrotor with passively folding, spring-hinged arms."""

__version__ = "0.1.0"
