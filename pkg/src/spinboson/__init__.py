"""Spectra of two-level systems coupled to one or two boson modes.

Core pieces: truncated Fock-space operator matrices (fock), su(2)/su(1,1)
ladder realizations with verification (liealg), the general Hamiltonian
family and its presets (models), dense eigensolvers and the shift arbiter
(solver), closed-form spectra (exact), elimination-method recurrences
(reduction), verification suites (suites), and a FastAPI service plus CLI
client on top (service, cli).
"""

__version__ = "0.1.0"
