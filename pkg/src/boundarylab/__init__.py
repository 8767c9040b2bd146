"""boundarylab: boundary-concentration invariants at desk scale.

Subpackages by capability:

* :mod:`boundarylab.jacobi`      -- comparison kernels and their inverses;
* :mod:`boundarylab.screens`     -- distributions on the ray carrying the
  concentration invariants (partial/observable inscribed radius, boundary
  separation distance, Ky Fan metric);
* :mod:`boundarylab.models`      -- the model-space catalog and comparison
  bounds;
* :mod:`boundarylab.spectral`    -- weighted Sturm-Liouville spectra,
  isoperimetric scans, and inequality audits;
* :mod:`boundarylab.graphs`      -- finite spaces with boundary as weighted
  graphs;
* :mod:`boundarylab.asymptotics` -- distribution laws, critical scale
  orders, and concentration classification;
* :mod:`boundarylab.cli`         -- the command-line front end.
"""

from . import asymptotics, graphs, jacobi, models, screens, spectral
from .errors import DomainError, RegimeError

__version__ = "0.1.0"

__all__ = [
    "asymptotics",
    "graphs",
    "jacobi",
    "models",
    "screens",
    "spectral",
    "DomainError",
    "RegimeError",
    "__version__",
]
