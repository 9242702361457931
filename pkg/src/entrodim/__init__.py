"""entrodim: entropy bounds for Hilbert-space ellipsoids and attractor-dimension
experiments for dissipative reaction-diffusion problems.

Subpackages:

* ``spectra``     eigenvalue sequences, growth certificates, counting function
* ``ellipsoids``  entropy bounds, constructive covers, covering-number oracles
* ``bounds``      closed-form fractal-dimension bounds and their compositions
* ``galerkin``    spectral Galerkin semigroup and equilibrium solver
* ``attractor``   ensemble experiments and the box-counting estimator
* ``report``      end-to-end verification bundles
* ``cli``         the ``entrodim`` command

The hot kernels (IMEX stepping, farthest-point ordering) run from a compiled
extension when available, with a pure-numpy fallback; see ``entrodim.backend``.
"""

from .backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
