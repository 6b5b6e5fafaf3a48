"""Real-space Chern numbers, Fredholm indices and cocycle pairings."""

import json

from ._core import (
    NcblochError,
    __version__,
    bloch_hamiltonian,
    chern_number,
    clifford,
    cocycle_pairing,
    code_version,
    fermi_projector,
    fredholm_index,
    gallery_names,
    geometric_identity,
    hamiltonian,
    kspace_invariant,
    sweep_lines,
    verify,
)


def sweep(config, overrides=(), threads=1):
    """Run a sweep from config text and return the records as dicts."""
    return [json.loads(line) for line in sweep_lines(config, list(overrides), threads)]


__all__ = [
    "NcblochError",
    "bloch_hamiltonian",
    "chern_number",
    "clifford",
    "cocycle_pairing",
    "code_version",
    "fermi_projector",
    "fredholm_index",
    "gallery_names",
    "geometric_identity",
    "hamiltonian",
    "kspace_invariant",
    "sweep",
    "sweep_lines",
    "verify",
]
