"""Constructors for the interferometer probe-state families.

Families are parameterized by their native parameter (squeezing xi or chi,
displacement alpha, photon count n) or solved from a target mean photon
number. Squeezed families use closed-form single-mode amplitudes; the
two-mode squeezed vacuum uses its geometric number-correlated form; coherent
probes use Poisson amplitudes; fixed-photon-number families are assembled
from basis kets and the beam splitter.

Automatic cutoff selection picks the smallest per-mode cutoff whose discarded
probability is below the loss target, subject to the configurable ceiling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .errors import ParameterError, TruncationLossError, UnattainableTargetError
from .fock import (
    DEFAULT_LOSS_CEILING,
    FockState,
    MomentSpec,
    cutoff_ceiling,
    make_fock,
    moment,
)
from .schwinger import beam_splitter

FAMILIES = (
    "twin-squeezed-vacuum",
    "twin-fock",
    "entangled-coherent",
    "noon",
    "amplified-bell",
    "fraternal-twin-fock",
    "coherent",
    "separable-coherent-probe",
    "two-mode-squeezed-vacuum",
    "fock-pair",
)

INTEGER_FAMILIES = (
    "twin-fock",
    "noon",
    "fraternal-twin-fock",
    "separable-coherent-probe",
    "fock-pair",
)

ParamValue = Union[int, float, complex]


@dataclass(frozen=True)
class ProbeSpec:
    """A probe family plus its native parameters and cutoff policy.

    ``cutoff=None`` selects the cutoff automatically (smallest grid meeting
    the loss target); an explicit cutoff is used as given and may fail if it
    cannot hold the state.
    """

    family: str
    params: Dict[str, ParamValue] = field(default_factory=dict)
    cutoff: Optional[int] = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ParameterError(
                f"unknown family {self.family!r}; choose one of {', '.join(FAMILIES)}"
            )
        if self.cutoff is not None and self.cutoff < 0:
            raise ParameterError("explicit cutoff must be non-negative")


def _require_keys(family: str, params: Mapping[str, ParamValue], keys: Tuple[str, ...]) -> None:
    if set(params) != set(keys):
        raise ParameterError(
            f"family {family!r} takes parameters {keys}, got {tuple(sorted(params))}"
        )


def _squeezing(family: str, params: Mapping[str, ParamValue], key: str) -> float:
    _require_keys(family, params, (key,))
    value = params[key]
    if isinstance(value, complex):
        if value.imag != 0:
            raise ParameterError(f"complex squeezing is not supported, got {key}={value!r}")
        value = value.real
    value = float(value)
    if value < 0:
        raise ParameterError(f"squeezing must be non-negative, got {key}={value!r}")
    return value


def _displacement(family: str, params: Mapping[str, ParamValue]) -> complex:
    _require_keys(family, params, ("alpha",))
    return complex(params["alpha"])


def _photon_count(family: str, params: Mapping[str, ParamValue], minimum: int) -> int:
    _require_keys(family, params, ("n",))
    value = params["n"]
    if not float(value).is_integer():
        raise ParameterError(f"family {family!r} needs an integer n, got {value!r}")
    n = int(value)
    if n < minimum:
        raise ParameterError(f"family {family!r} needs n >= {minimum}, got {n}")
    return n


# ---------------------------------------------------------------------------
# single-mode amplitude vectors (closed forms)
# ---------------------------------------------------------------------------


def squeezed_vacuum_vector(xi: float, dim: int) -> np.ndarray:
    """Amplitudes of exp(i xi (adag^2 + a^2)/2)|0> on levels 0..dim-1.

    Even levels only: c_{2m} = (i tanh xi)^m sqrt((2m)!)/(2^m m!) / sqrt(cosh xi),
    generated by the stable ratio recurrence.
    """
    v = np.zeros(dim, dtype=np.complex128)
    c = 1.0 / math.sqrt(math.cosh(xi))
    v[0] = c
    t = 1j * math.tanh(xi)
    m = 0
    while 2 * (m + 1) < dim:
        c = c * t * math.sqrt((2 * m + 1) * (2 * m + 2)) / (2 * (m + 1))
        m += 1
        v[2 * m] = c
    return v


def squeezed_one_vector(xi: float, dim: int) -> np.ndarray:
    """Amplitudes of the squeezer applied to |1>, via S adag Sdag = cosh adag + i sinh a."""
    v0 = squeezed_vacuum_vector(xi, dim + 1)
    levels = np.arange(dim, dtype=float)
    raised = np.zeros(dim, dtype=np.complex128)
    raised[1:] = np.sqrt(levels[1:]) * v0[: dim - 1]
    lowered = np.sqrt(levels + 1) * v0[1 : dim + 1]
    return math.cosh(xi) * raised + 1j * math.sinh(xi) * lowered


def coherent_vector(beta: complex, dim: int) -> np.ndarray:
    """Poisson amplitudes of |beta> on levels 0..dim-1."""
    v = np.zeros(dim, dtype=np.complex128)
    c = math.exp(-abs(beta) ** 2 / 2)
    v[0] = c
    for n in range(1, dim):
        c = c * beta / math.sqrt(n)
        v[n] = c
    return v


def squeezed_vacuum_reference(xi: float, dim: int) -> np.ndarray:
    """Squeezed vacuum by exponentiating the truncated generator.

    Independent of the closed form above: diagonalizes the Hermitian
    xi (adag^2 + a^2)/2 on ``dim`` levels and applies exp(i H) to |0>. Used to
    cross-check the closed-form route; needs headroom beyond the populated
    levels because truncating the generator reflects weight at the boundary.
    """
    lower = np.diag(np.sqrt(np.arange(1, dim)), k=1)
    h = xi * (lower @ lower + lower.T @ lower.T).real / 2
    evals, evecs = np.linalg.eigh(h)
    return evecs @ (np.exp(1j * evals) * evecs.T[:, 0])


# ---------------------------------------------------------------------------
# family grid builders: cutoff -> (grid, truncation loss)
# ---------------------------------------------------------------------------


def _loss_of(grid: np.ndarray) -> float:
    return max(0.0, 1.0 - float(np.sum(np.abs(grid) ** 2)))


def _grid_twin_squeezed(xi: float, cutoff: int) -> Tuple[np.ndarray, float]:
    v = squeezed_vacuum_vector(xi, cutoff + 1)
    grid = np.outer(v, v)
    return grid, _loss_of(grid)


def _grid_tmsv(chi: float, cutoff: int) -> Tuple[np.ndarray, float]:
    n = np.arange(cutoff + 1)
    grid = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
    grid[n, n] = np.tanh(chi) ** n / np.cosh(chi)
    return grid, _loss_of(grid)


def _split_photon_amplitudes() -> Tuple[complex, complex]:
    """Arm amplitudes (u, v) of one photon behind the first splitter.

    Derived from beam_splitter itself so the composed families inherit its
    phase convention; with the exp(-i pi/2 Jx) splitter, (u, v) =
    (1, -i)/sqrt(2).
    """
    split = beam_splitter(make_fock(1, 0, 1), "first").amplitudes
    return complex(split[1, 0]), complex(split[0, 1])


def _grid_coherent(alpha: complex, cutoff: int) -> Tuple[np.ndarray, float]:
    # Probe inside the interferometer for coherent light injected into port a:
    # the splitter maps |alpha, 0> to the product |u alpha, v alpha>.
    u, v = _split_photon_amplitudes()
    grid = np.outer(
        coherent_vector(u * alpha, cutoff + 1), coherent_vector(v * alpha, cutoff + 1)
    )
    return grid, _loss_of(grid)


def _grid_entangled_coherent(alpha: complex, cutoff: int) -> Tuple[np.ndarray, float]:
    # (|alpha,0> + |0,alpha>)/sqrt(2(1 + e^{-|alpha|^2})), normalized exactly
    # including the vacuum overlap of the two branches.
    v = coherent_vector(alpha, cutoff + 1)
    grid = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
    grid[:, 0] += v
    grid[0, :] += v
    grid /= math.sqrt(2.0 * (1.0 + math.exp(-abs(alpha) ** 2)))
    return grid, _loss_of(grid)


def _grid_amplified_bell(xi: float, cutoff: int) -> Tuple[np.ndarray, float]:
    # Per-mode squeezers on the split single photon u|1,0> + v|0,1>, expanded
    # term by term so the closed-form squeezed vectors keep full precision.
    u, v = _split_photon_amplitudes()
    v0 = squeezed_vacuum_vector(xi, cutoff + 1)
    v1 = squeezed_one_vector(xi, cutoff + 1)
    grid = u * np.outer(v1, v0) + v * np.outer(v0, v1)
    return grid, _loss_of(grid)


def _auto_cutoff(
    grid_at: Callable[[int], Tuple[np.ndarray, float]],
    loss_target: float,
    ceiling: int,
) -> Tuple[np.ndarray, float, int]:
    """Smallest cutoff with loss below target: geometric bracket, then bisection."""
    lo, hi = -1, 8
    while True:
        grid, loss = grid_at(min(hi, ceiling))
        if loss < loss_target:
            hi = min(hi, ceiling)
            break
        if hi >= ceiling:
            raise TruncationLossError(
                f"cutoff ceiling {ceiling} leaves truncation loss {loss:.3e} "
                f"above the {loss_target:.1e} target"
            )
        lo = hi
        hi = hi * 2
    best = (grid, loss, hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        grid, loss = grid_at(mid)
        if loss < loss_target:
            hi, best = mid, (grid, loss, mid)
        else:
            lo = mid
    return best


def _fixed_n_state(j: int, k: int, cutoff: Optional[int], split: bool) -> FockState:
    total = j + k
    n_cut = total if cutoff is None else cutoff
    state = make_fock(j, k, n_cut)
    return beam_splitter(state, "first") if split else state


#: Loss target for automatic cutoff selection. Tighter than the construction
#: ceiling because second moments amplify tail mass by the squared cutoff, and
#: reported quantities must be stable to 1e-8 under cutoff doubling.
AUTO_LOSS_TARGET = 1e-14


def build(spec: ProbeSpec, loss_target: float = AUTO_LOSS_TARGET) -> FockState:
    """Construct the normalized probe state described by ``spec``."""
    family, params = spec.family, spec.params

    if family == "noon":
        n = _photon_count(family, params, 1)
        n_cut = n if spec.cutoff is None else spec.cutoff
        grid = np.zeros((n_cut + 1, n_cut + 1), dtype=np.complex128)
        if n > n_cut:
            raise ParameterError(f"cutoff {n_cut} cannot hold a {n}-photon branch")
        grid[n, 0] = grid[0, n] = 1 / math.sqrt(2)
        return FockState(grid, n_cut, 0.0)
    if family == "fock-pair":
        n = _photon_count(family, params, 0)
        return _fixed_n_state(n, n, spec.cutoff, split=False)
    if family == "twin-fock":
        n = _photon_count(family, params, 0)
        return _fixed_n_state(n, n, spec.cutoff, split=True)
    if family == "fraternal-twin-fock":
        n = _photon_count(family, params, 0)
        return _fixed_n_state(n + 1, n, spec.cutoff, split=True)
    if family == "separable-coherent-probe":
        n = _photon_count(family, params, 0)
        return _fixed_n_state(n, 0, spec.cutoff, split=True)

    if family == "twin-squeezed-vacuum":
        xi = _squeezing(family, params, "xi")
        grid_at = lambda c: _grid_twin_squeezed(xi, c)
    elif family == "two-mode-squeezed-vacuum":
        chi = _squeezing(family, params, "chi")
        grid_at = lambda c: _grid_tmsv(chi, c)
    elif family == "amplified-bell":
        xi = _squeezing(family, params, "xi")
        grid_at = lambda c: _grid_amplified_bell(xi, c)
    elif family == "coherent":
        alpha = _displacement(family, params)
        grid_at = lambda c: _grid_coherent(alpha, c)
    elif family == "entangled-coherent":
        alpha = _displacement(family, params)
        grid_at = lambda c: _grid_entangled_coherent(alpha, c)
    else:  # pragma: no cover - family list is closed
        raise ParameterError(f"unknown family {family!r}")

    if spec.cutoff is not None:
        grid, loss = grid_at(spec.cutoff)
        return FockState.from_grid(grid, loss, loss_ceiling=DEFAULT_LOSS_CEILING)
    grid, loss, _ = _auto_cutoff(grid_at, loss_target, cutoff_ceiling())
    return FockState.from_grid(grid, loss, loss_ceiling=max(loss_target, DEFAULT_LOSS_CEILING))


# ---------------------------------------------------------------------------
# solving native parameters from a target mean photon number
# ---------------------------------------------------------------------------

#: nbar = slope * n + offset and the smallest allowed n, per integer family.
_INTEGER_NBAR = {
    "twin-fock": (2.0, 0.0, 1),
    "noon": (1.0, 0.0, 1),
    "fraternal-twin-fock": (2.0, 1.0, 0),
    "separable-coherent-probe": (1.0, 0.0, 1),
    "fock-pair": (2.0, 0.0, 1),
}


def mean_photon_number(state: FockState) -> float:
    na = moment(state, MomentSpec(1, 1, 0, 0)).real
    nb = moment(state, MomentSpec(0, 0, 1, 1)).real
    return na + nb


def is_integer_family(family: str) -> bool:
    return family in INTEGER_FAMILIES


def solve_param_for_nbar(family: str, nbar: float) -> Tuple[Dict[str, ParamValue], float]:
    """Parameters hitting the target mean photon number, plus the realized value.

    Continuous families are solved by monotone root finding on the numerically
    evaluated mean photon number; integer families round to the nearest
    attainable value and report it.
    """
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}")
    if not nbar > 0:
        raise UnattainableTargetError(f"target mean photon number must be positive, got {nbar!r}")

    if family in _INTEGER_NBAR:
        slope, offset, n_min = _INTEGER_NBAR[family]
        n_exact = (nbar - offset) / slope
        n = int(round(n_exact))
        if n < n_min:
            if n_exact >= n_min - 0.5:
                n = n_min
            else:
                raise UnattainableTargetError(
                    f"family {family!r} cannot reach mean photon number {nbar!r} "
                    f"(minimum is {slope * n_min + offset:g})"
                )
        return {"n": n}, slope * n + offset

    if family == "amplified-bell" and nbar < 1:
        raise UnattainableTargetError(
            f"family 'amplified-bell' cannot reach mean photon number {nbar!r} (minimum is 1)"
        )

    if family == "twin-squeezed-vacuum":
        key, estimate = "xi", math.asinh(math.sqrt(nbar / 2))
    elif family == "two-mode-squeezed-vacuum":
        key, estimate = "chi", math.asinh(math.sqrt(nbar / 2))
    elif family == "amplified-bell":
        key, estimate = "xi", math.asinh(math.sqrt((nbar - 1) / 4)) if nbar > 1 else 0.0
    elif family == "coherent":
        key, estimate = "alpha", math.sqrt(nbar)
    else:  # entangled-coherent
        key, estimate = "alpha", math.sqrt(nbar)

    def realized(value: float) -> float:
        return mean_photon_number(build(ProbeSpec(family, {key: value})))

    if realized(0.0) >= nbar:
        root = 0.0
    else:
        # the analytic estimate is exact or an underestimate; widen until bracketed
        hi = estimate + 1e-3
        for _ in range(60):
            if realized(hi) >= nbar:
                break
            hi = hi * 1.3 + 0.1
        root = float(brentq(lambda p: realized(p) - nbar, 0.0, hi, xtol=1e-13, rtol=8.9e-16))
    return {key: root}, realized(root)


def build_for_nbar(
    family: str, nbar: float, cutoff: Optional[int] = None
) -> Tuple[FockState, Dict[str, ParamValue], float]:
    """Convenience wrapper: solve for the target and build, returning all three."""
    params, realized = solve_param_for_nbar(family, nbar)
    state = build(ProbeSpec(family, params, cutoff))
    return state, params, realized
