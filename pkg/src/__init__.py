"""Top-level package for qubit geometric-phase simulations under Davies dynamics."""
