"""Entanglement of two remote qubits in Jaynes-Cummings cavities.

Modules: ``qcore`` (states, partial traces), ``entm`` (concurrence),
``jc`` (single-site dynamics), ``vacuum`` and ``coherent`` (exact engines),
``analytic`` (large-field formulas), ``cli`` (the ``entlab`` command).
"""

__version__ = "0.1.0"
