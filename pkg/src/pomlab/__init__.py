"""pomlab: simulation and verification toolkit for parity-oblivious multiplexing.

Subpackages cover exact qubit linear algebra, protocol success and leakage,
classical Fourier analysis with an LP oracle, finite hidden-variable model
checkers, and a photon-counting experiment emulator, all wired together by a
reproducible command-line interface.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .errors import PomlabError

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "PomlabError", "__version__"]
