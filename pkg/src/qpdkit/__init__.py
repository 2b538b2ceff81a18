"""Quasi-probability distributions on coherent-state phase spaces.

Two backends share one interface: the sphere for spin j (``SpinPhaseSpace``)
and the plane for a truncated oscillator (``CcrPhaseSpace``). The
s-parameterized family, kernel operators and the axiom checks live in
``qpdkit.spectral``.

Setting ``QPD_THREADS`` before import caps the BLAS/OpenMP thread pools.
"""
import os as _os

_threads = _os.environ.get("QPD_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .ccr import (CcrPhaseSpace, CcrSystem, PlanarGrid, PlanarSpectrum, coherent_dm, fock,  # noqa: E402
                  glauber_sudarshan_ccr, husimi_ccr, thermal, vacuum, wigner_ccr)
from .dynamics import LindbladSpec, Trajectory, evolve, qpd_trajectory  # noqa: E402
from .errors import (AxiomViolation, ConditioningError, ConfigError, CutoffError,  # noqa: E402
                     IntegrationError, QPDError, SingularPError, SingularPWarning, TruncationWarning)
from .fields import QPDField, SWKernelField  # noqa: E402
from .naimark import composite_pair, gaussian_probe, joint_distribution  # noqa: E402
from .spectral import (axiom_report, delta_power, qpd, qpd_via_weak_values, sw_kernel_field,  # noqa: E402
                       transform, weak_value)
from .su2 import SphereGrid, SpinPhaseSpace, SpinSystem, husimi_spin, sphere_quadrature  # noqa: E402

__all__ = [
    "AxiomViolation", "CcrPhaseSpace", "CcrSystem", "ConditioningError", "ConfigError", "CutoffError",
    "IntegrationError", "LindbladSpec", "PlanarGrid", "PlanarSpectrum", "QPDError", "QPDField",
    "SWKernelField", "SingularPError", "SingularPWarning", "SphereGrid", "SpinPhaseSpace", "SpinSystem",
    "Trajectory", "TruncationWarning", "axiom_report", "coherent_dm", "composite_pair", "delta_power",
    "evolve", "fock", "gaussian_probe", "glauber_sudarshan_ccr", "husimi_ccr", "husimi_spin",
    "joint_distribution", "qpd", "qpd_trajectory", "qpd_via_weak_values", "sphere_quadrature",
    "sw_kernel_field", "thermal", "transform", "vacuum", "weak_value", "wigner_ccr",
]
