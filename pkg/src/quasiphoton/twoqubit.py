"""Pure two-qubit states: partial traces, von Neumann and Schmidt measures.

Amplitudes are ordered |00>, |01>, |10>, |11> with the first label on
qubit A.  Near-separable states are the common case here (entanglement of
order eps^4), so the small eigenvalue is taken from the determinant
|v1 v4 - v2 v3|^2 rather than from (1 - y)/2, which would cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-9


@dataclass(frozen=True)
class TwoQubitState:
    v: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        v = tuple(complex(x) for x in self.v)
        if len(v) != 4:
            raise ValueError("a two-qubit state has four amplitudes")
        object.__setattr__(self, "v", v)
        if abs(self.norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized (|v|^2 = {self.norm2!r})")

    @property
    def norm2(self) -> float:
        return math.fsum(abs(x) ** 2 for x in self.v)

    @classmethod
    def normalized(cls, v) -> TwoQubitState:
        arr = np.asarray(v, dtype=complex)
        n = np.linalg.norm(arr)
        if n == 0:
            raise ValueError("zero vector")
        return cls(tuple(arr / n))

    def matrix(self) -> np.ndarray:
        """Amplitudes as the 2x2 coefficient matrix psi[a, b]."""
        return np.array(self.v).reshape(2, 2)


@dataclass(frozen=True)
class ReducedDensity:
    rho11: float
    rho12: complex
    rho22: float
    # |det| of the amplitude matrix; carries the small eigenvalue exactly
    det2: float = float("nan")

    @property
    def rho21(self) -> complex:
        return self.rho12.conjugate()

    def matrix(self) -> np.ndarray:
        return np.array([[self.rho11, self.rho12], [self.rho21, self.rho22]])

    @property
    def trace(self) -> float:
        return self.rho11 + self.rho22


@dataclass(frozen=True)
class EntanglementReport:
    y: float
    lam: tuple[float, float]  # (lambda_1, lambda_2) = ((1-y)/2, (1+y)/2)
    E: float
    E_S: float


def reduce_first(state: TwoQubitState) -> ReducedDensity:
    """Trace out qubit B."""
    v1, v2, v3, v4 = state.v
    return ReducedDensity(
        rho11=abs(v1) ** 2 + abs(v2) ** 2,
        rho12=v1 * v3.conjugate() + v2 * v4.conjugate(),
        rho22=abs(v3) ** 2 + abs(v4) ** 2,
        det2=abs(v1 * v4 - v2 * v3) ** 2,
    )


def reduce_second(state: TwoQubitState) -> ReducedDensity:
    """Trace out qubit A."""
    v1, v2, v3, v4 = state.v
    return ReducedDensity(
        rho11=abs(v1) ** 2 + abs(v3) ** 2,
        rho12=v1 * v2.conjugate() + v3 * v4.conjugate(),
        rho22=abs(v2) ** 2 + abs(v4) ** 2,
        det2=abs(v1 * v4 - v2 * v3) ** 2,
    )


def gap_y(rho: ReducedDensity) -> float:
    """y = sqrt((rho11 - rho22)^2 + 4 |rho12|^2), clamped to [0, 1]."""
    y = math.hypot(rho.rho11 - rho.rho22, 2.0 * abs(rho.rho12))
    return min(max(y, 0.0), 1.0)


def eigenvalues(rho: ReducedDensity) -> tuple[float, float]:
    """Ascending eigenvalues of rho / tr(rho), i.e. ((1 - y)/2, (1 + y)/2)."""
    t = rho.trace
    y = min(gap_y(rho) / t, 1.0)
    big = (1.0 + y) / 2.0
    if y > 0.5 and not math.isnan(rho.det2):
        small = rho.det2 / t**2 / big
    else:
        small = (1.0 - y) / 2.0
    return min(max(small, 0.0), 0.5), big


def binary_entropy(p: float) -> float:
    """-p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log(p) + (1.0 - p) * math.log1p(-p)) / math.log(2.0)


def report_from_eigenvalues(small: float, big: float) -> EntanglementReport:
    y = min(max(big - small, 0.0), 1.0)
    return EntanglementReport(
        y=y,
        lam=(small, big),
        E=min(binary_entropy(small), 1.0),
        E_S=2.0 * small * big,
    )


def analyse(state: TwoQubitState) -> EntanglementReport:
    return report_from_eigenvalues(*eigenvalues(reduce_first(state)))


def vonneumann(state: TwoQubitState) -> float:
    return analyse(state).E


def schmidt(state: TwoQubitState) -> float:
    """E_S = 1 - tr(rho_A^2) = 2 lambda_1 lambda_2 = (1 - y^2) / 2."""
    return analyse(state).E_S
