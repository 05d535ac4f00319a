from .kernels import BACKEND
from .statevector import (
    StateVector,
    ZeroBranchError,
    fidelity,
    fuse_type1,
    graph_state,
    measure_equatorial,
)
from .unitary import unitary_of

__all__ = [
    "BACKEND",
    "StateVector",
    "ZeroBranchError",
    "fidelity",
    "fuse_type1",
    "graph_state",
    "measure_equatorial",
    "unitary_of",
]
