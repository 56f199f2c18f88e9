"""Shared oracles and hypothesis strategies for the test suite.

The oracles here deliberately avoid the library's own code paths:
matrix exponentials come from scipy, singular values from dense
eigendecompositions of the Gram matrix.  Closed-form results in the
library are always checked against at least one of these routes.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from hypothesis import strategies as st

from ptqsim.model import PTParams


def series_evolution(r: float, t: float) -> np.ndarray:
    """exp(-i H t) via scipy's Pade-based expm, independent of the kernel."""
    h = np.array([[1j * r, 1.0], [1.0, -1j * r]], dtype=complex)
    return scipy.linalg.expm(-1j * t * h)


def brute_singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values (descending) from the Gram matrix eigenvalues."""
    eigs = np.linalg.eigvalsh(m.conj().T @ m)
    eigs = np.clip(eigs, 0.0, None)
    return np.sqrt(eigs[::-1])


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via phase-fixed QR of a Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    return q * (phases / np.abs(phases))


def finite_floats(lo: float, hi: float) -> st.SearchStrategy[float]:
    return st.floats(
        min_value=lo, max_value=hi, allow_nan=False, allow_infinity=False
    )


@st.composite
def complex_matrices(draw, n: int, bound: float = 2.0) -> np.ndarray:
    entries = draw(
        st.lists(
            st.tuples(finite_floats(-bound, bound), finite_floats(-bound, bound)),
            min_size=n * n,
            max_size=n * n,
        )
    )
    flat = np.array([re + 1j * im for re, im in entries], dtype=complex)
    return flat.reshape(n, n)


def pt_params(r_max: float = 2.0, t_max: float = 10.0) -> st.SearchStrategy[PTParams]:
    return st.builds(
        PTParams, r=finite_floats(0.0, r_max), t=finite_floats(0.0, t_max)
    )
