"""Workbench for quantum expander channels built from random unitaries.

Subpackages and modules:

- matrixcore: seeded RNG streams, Haar unitary sampling, Hilbert-Schmidt tools
- channel:    weighted unitary-Kraus CPTP maps (Hermitian / non-Hermitian / weighted)
- spectrum:   superoperator, eigenvalues, second-eigenvalue extraction, moments
- cayley:     free-group word reduction and exact tree walk combinatorics
- sdengine:   symbolic evaluation of Haar expectations of trace products
- edgex:      edge-expansion ratios and the eigenvector chain inequality
- cli:        experiment harness (sweeps, scaling collapse, file outputs)
"""

__version__ = "0.1.0"
