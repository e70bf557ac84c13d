"""Computational services: closed forms, sensitivities, Fock-space oracle, sweeps."""
