"""Fixed-photon-number sector analytics in the particle picture.

A state with exactly n photons can be read as n pseudo-labeled two-level
particles, each photon carrying the which-arm qubit |mu> (mode a) or |nu>
(mode b). The mode-picture generators and the collective spin operators
(half the sum of single-particle Pauli operators) then agree, which turns
collective-spin moments into single-particle Pauli statistics:

    <sigma_z>          = 2 <Jz> / n
    <sigma_z sigma_z>  = (4 <Jz^2> - n) / (n (n - 1))     for n >= 2

The phase-sensitivity decomposition F = n Var[sigma_z] + n(n-1) Cov[sigma_z,
sigma_z] makes the covariance an entanglement witness: product sectors have
zero covariance and are shot-noise limited.

A brute-force oracle builds the symmetric 2^n qubit vector explicitly
(n <= 10) and evaluates the same quantities directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import List, Optional

import numpy as np
from scipy.linalg import expm

from .errors import ParameterError, SectorSupportError
from .fock import FockState
from .schwinger import DirectionLike, _direction, j_moment

#: Sector weights below this are dropped from decompositions.
WEIGHT_FLOOR = 1e-14

#: Dominant-sector weight required to treat a state as having fixed photon number.
FIXED_N_WEIGHT = 1.0 - 1e-9

#: Default covariance threshold for the entanglement witness.
WITNESS_TOL = 1e-9

ORACLE_MAX_N = 10

# Single-particle Pauli matrices in the basis (|nu>, |mu>): index 1 means the
# photon sits in arm a, so sigma_z = diag(-1, +1).
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=np.complex128)


@dataclass(frozen=True)
class Sector:
    """One total-photon-number component of a state."""

    n: int
    weight: float
    state: FockState


@dataclass(frozen=True)
class SectorDecomposition:
    """Projection of a state onto its total-photon-number sectors."""

    sectors: List[Sector]
    weights_sum: float

    def dominant(self) -> Sector:
        return max(self.sectors, key=lambda s: s.weight)


@dataclass(frozen=True)
class ParticleReport:
    """Single-particle Pauli statistics of one fixed-n sector."""

    n: int
    mean_sigma_z: float
    var_sigma_z: float
    cov_sigma_z: float
    f_particle: float
    witness_entangled: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "mean_sigma_z": self.mean_sigma_z,
            "var_sigma_z": self.var_sigma_z,
            "cov_sigma_z": self.cov_sigma_z,
            "f_particle": self.f_particle,
            "witness_entangled": self.witness_entangled,
        }


def decompose_sectors(state: FockState) -> SectorDecomposition:
    """Project onto each total-photon-number diagonal and renormalize.

    Sector states are re-embedded on the smallest grid that holds them,
    ``min(n, cutoff)``, which keeps decompositions of large-cutoff probes
    cheap.
    """
    grid = state.amplitudes
    sectors = []
    weights_sum = 0.0
    for n in range(2 * state.cutoff + 1):
        ks = np.arange(max(0, n - state.cutoff), min(n, state.cutoff) + 1)
        amps = grid[ks, n - ks]
        weight = float(np.sum(np.abs(amps) ** 2))
        weights_sum += weight
        if weight < WEIGHT_FLOOR:
            continue
        small_cut = min(n, state.cutoff)
        projected = np.zeros((small_cut + 1, small_cut + 1), dtype=np.complex128)
        projected[ks, n - ks] = amps / math.sqrt(weight)
        sectors.append(Sector(n=n, weight=weight, state=FockState(projected, small_cut)))
    return SectorDecomposition(sectors=sectors, weights_sum=weights_sum)


def _single_sector_n(state: FockState) -> int:
    grid = state.amplitudes
    j = np.arange(state.dim)[:, None]
    k = np.arange(state.dim)[None, :]
    weights = np.abs(grid) ** 2
    totals = j + k
    n = int(np.round(float(np.sum(weights * totals))))
    off = float(np.sum(weights[totals != n]))
    if off > 1e-12:
        raise SectorSupportError(
            f"state carries weight {off:.3e} outside photon-number sector {n}; "
            "decompose into sectors first"
        )
    return n


def _report_from_z_stats(
    n: int, mean_z: float, mean_zz: Optional[float], witness_tol: float
) -> ParticleReport:
    var_z = 1.0 - mean_z**2  # sigma_z^2 is the identity on a qubit
    if n == 1:
        cov_z = 0.0  # no particle pairs, covariance term absent by convention
    else:
        assert mean_zz is not None
        cov_z = mean_zz - mean_z**2
    f_particle = n * var_z + n * (n - 1) * cov_z
    return ParticleReport(
        n=n,
        mean_sigma_z=mean_z,
        var_sigma_z=var_z,
        cov_sigma_z=cov_z,
        f_particle=f_particle,
        witness_entangled=cov_z > witness_tol,
    )


def particle_moments(
    sector_state: FockState, n: int, witness_tol: float = WITNESS_TOL
) -> ParticleReport:
    """Pauli statistics of a fixed-n sector via the collective-spin bridge."""
    if n < 1:
        raise ParameterError(f"particle statistics need n >= 1, got {n}")
    actual = _single_sector_n(sector_state)
    if actual != n:
        raise SectorSupportError(f"state occupies sector {actual}, not the requested {n}")
    mean_z = 2.0 * j_moment(sector_state, "jz", 1) / n
    mean_zz = None
    if n >= 2:
        mean_zz = (4.0 * j_moment(sector_state, "jz", 2) - n) / (n * (n - 1))
    return _report_from_z_stats(n, mean_z, mean_zz, witness_tol)


def qfi_particle(decomp: SectorDecomposition, witness_tol: float = WITNESS_TOL) -> Optional[float]:
    """Particle-picture phase information, defined only at fixed photon number.

    Returns ``None`` when the state has particle-number fluctuations (no
    sector holds essentially all the weight); per-sector reports remain
    available through :func:`particle_moments`.
    """
    if not decomp.sectors:
        return None
    top = decomp.dominant()
    if top.weight <= FIXED_N_WEIGHT:
        return None
    if top.n == 0:
        return 0.0  # vacuum: no particles, nothing to estimate with
    return particle_moments(top.state, top.n, witness_tol).f_particle


# ---------------------------------------------------------------------------
# explicit multi-qubit oracle (n <= ORACLE_MAX_N)
# ---------------------------------------------------------------------------


def _bit_table(n: int) -> np.ndarray:
    basis = np.arange(2**n)
    return (basis[:, None] >> np.arange(n)[None, :]) & 1


def symmetric_qubit_vector(sector_state: FockState, n: int) -> np.ndarray:
    """Map sector amplitudes c_k on |k, n-k> to the symmetric 2^n qubit vector.

    Each of the C(n, k) bitstrings with k set bits (k photons in arm a)
    receives c_k / sqrt(C(n, k)).
    """
    if n < 1 or n > ORACLE_MAX_N:
        raise ParameterError(f"oracle supports 1 <= n <= {ORACLE_MAX_N}, got {n}")
    actual = _single_sector_n(sector_state)
    if actual != n:
        raise SectorSupportError(f"state occupies sector {actual}, not the requested {n}")
    ks = np.arange(max(0, n - sector_state.cutoff), min(n, sector_state.cutoff) + 1)
    coeff = np.zeros(n + 1, dtype=np.complex128)
    coeff[ks] = sector_state.amplitudes[ks, n - ks]
    counts = _bit_table(n).sum(axis=1)
    binom = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
    return coeff[counts] / np.sqrt(binom[counts])


def multiqubit_oracle(
    sector_state: FockState, n: int, witness_tol: float = WITNESS_TOL
) -> ParticleReport:
    """Pauli statistics evaluated directly in the 2^n qubit space."""
    vec = symmetric_qubit_vector(sector_state, n)
    probs = np.abs(vec) ** 2
    bits = _bit_table(n)
    z = 2.0 * bits - 1.0
    mean_z = float(probs @ z[:, 0])
    mean_zz = float(probs @ (z[:, 0] * z[:, 1])) if n >= 2 else None
    return _report_from_z_stats(n, mean_z, mean_zz, witness_tol)


def dicke_isometry(n: int) -> np.ndarray:
    """Isometry from the n+1 symmetric states into the 2^n qubit space.

    Column k is the normalized equal superposition of bitstrings with k set
    bits, matching the |k, n-k> sector basis.
    """
    counts = _bit_table(n).sum(axis=1)
    s = np.zeros((2**n, n + 1), dtype=np.complex128)
    for k in range(n + 1):
        s[counts == k, k] = 1.0 / math.sqrt(math.comb(n, k))
    return s


def collective_spin_matrix(n: int, v: DirectionLike) -> np.ndarray:
    """v . J on the full 2^n space, J being half the sum of Pauli vectors."""
    d = _direction(v)
    single = (d.x * SIGMA_X + d.y * SIGMA_Y + d.z * SIGMA_Z) / 2
    eye = np.eye(2, dtype=np.complex128)
    total = np.zeros((2**n, 2**n), dtype=np.complex128)
    for i in range(n):
        factors = [single if j == i else eye for j in range(n)]
        total += reduce(np.kron, factors)
    return total


def locality_defect(n: int, v: DirectionLike, gamma: float) -> float:
    """Operator distance, on the symmetric subspace, between the collective
    rotation exp(-i gamma v.J) and the n-fold tensor power of the matching
    single-qubit rotation."""
    if n < 1:
        raise ParameterError(f"locality check needs n >= 1, got {n}")
    d = _direction(v)
    u_full = expm(-1j * gamma * collective_spin_matrix(n, d))
    single = expm(-1j * gamma * (d.x * SIGMA_X + d.y * SIGMA_Y + d.z * SIGMA_Z) / 2)
    u_tensor = reduce(np.kron, [single] * n)
    s = dicke_isometry(n)
    diff = s.conj().T @ (u_full - u_tensor) @ s
    return float(np.linalg.norm(diff, 2))


def locality_check(n: int, v: DirectionLike, gamma: float, tol: float = 1e-10) -> bool:
    """True when the collective rotation factorizes into per-particle rotations."""
    return locality_defect(n, v, gamma) < tol


def reduced_single_particle(qubit_vector: np.ndarray, n: int) -> np.ndarray:
    """2x2 reduced density matrix of one particle of a symmetric n-qubit vector."""
    psi = qubit_vector.reshape(2**(n - 1), 2) if n > 1 else qubit_vector.reshape(1, 2)
    return psi.conj().T @ psi
