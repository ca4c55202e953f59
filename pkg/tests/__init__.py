"""Test suite for the qubit geometric-phase simulations."""
