"""maxlab: spectral laboratory for 2D Maxwell fields in rough anisotropic dielectrics.

Subpackages
-----------
spectral   periodic grids, Littlewood-Paley analysis, norms
material   permittivity models and pointwise symbol algebra
pdo        rough-symbol quantization, Maxwell operator, diagonalizers, probes
fbi        Gaussian phase-space transform and conjugation remainders
evolve     linear / Kerr time evolution, charge and energy tracking
sharpness  derivative-loss counterexample family and exponent scans
harness    CLI, experiment configs, reports
"""

__version__ = "0.1.0"
