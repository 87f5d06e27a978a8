"""Truncated two-mode Fock space: states, ladder actions, and moments.

Amplitude grids are indexed ``[j, k]`` for the basis ket ``|j, k>`` with
``j`` photons in mode a and ``k`` photons in mode b, ``0 <= j, k <= cutoff``.
Normalized states are immutable :class:`FockState` values. Ladder operators
return unnormalized :class:`LadderState` intermediates; all public analytics
accept only normalized states, which keeps the two flavors from mixing
silently.

Normal-ordered moments ``<adag^p a^q bdag^r b^s>`` are evaluated by lowering
on both sides of the inner product, ``<a^p b^r psi | a^q b^s psi>``, so they
never raise past the cutoff.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .errors import (
    CutoffExceededError,
    NormalizationError,
    ParameterError,
    TruncationLossError,
    TruncationOverflowError,
)

#: Default per-mode cutoff ceiling for automatic cutoff selection.
DEFAULT_CUTOFF_CEILING = 256

#: Default ceiling on the probability discarded when a state is truncated.
DEFAULT_LOSS_CEILING = 1e-10

#: Relative population that a raising operator may silently push past the cutoff.
RAISE_HEADROOM = 1e-12

_NORM_TOL = 1e-12


def cutoff_ceiling() -> int:
    """Per-mode cutoff ceiling; MZI_QFI_CUTOFF_CEILING overrides the default."""
    raw = os.environ.get("MZI_QFI_CUTOFF_CEILING")
    if raw is None:
        return DEFAULT_CUTOFF_CEILING
    try:
        value = int(raw)
    except ValueError as exc:
        raise ParameterError(f"MZI_QFI_CUTOFF_CEILING must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ParameterError("MZI_QFI_CUTOFF_CEILING must be non-negative")
    return value


@dataclass(frozen=True)
class FockState:
    """Normalized two-mode state on a square ``(cutoff+1) x (cutoff+1)`` grid.

    ``truncation_loss`` is the probability discarded before the grid was
    renormalized; it is zero for states assembled directly from basis kets.
    Instances are immutable and safe to share across threads.
    """

    amplitudes: np.ndarray
    cutoff: int
    truncation_loss: float = 0.0

    def __post_init__(self) -> None:
        grid = np.asarray(self.amplitudes, dtype=np.complex128)
        if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
            raise ParameterError(f"amplitude grid must be square, got shape {grid.shape}")
        if grid.shape[0] != self.cutoff + 1:
            raise ParameterError(
                f"grid shape {grid.shape} inconsistent with cutoff {self.cutoff}"
            )
        if self.truncation_loss < 0:
            raise ParameterError("truncation_loss must be non-negative")
        nrm = float(np.linalg.norm(grid))
        if abs(nrm - 1.0) > _NORM_TOL:
            raise NormalizationError(f"state norm {nrm!r} deviates from 1 beyond {_NORM_TOL}")
        grid.flags.writeable = False
        object.__setattr__(self, "amplitudes", grid)

    @classmethod
    def from_grid(
        cls,
        grid: np.ndarray,
        truncation_loss: float = 0.0,
        loss_ceiling: float = DEFAULT_LOSS_CEILING,
    ) -> "FockState":
        """Renormalize ``grid`` and wrap it, enforcing the loss ceiling."""
        grid = np.array(grid, dtype=np.complex128)
        if truncation_loss > loss_ceiling:
            raise TruncationLossError(
                f"truncation loss {truncation_loss:.3e} exceeds ceiling {loss_ceiling:.3e}"
            )
        nrm = float(np.linalg.norm(grid))
        if nrm == 0.0:
            raise NormalizationError("cannot normalize a zero amplitude grid")
        return cls(grid / nrm, grid.shape[0] - 1, truncation_loss)

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def probabilities(self) -> np.ndarray:
        """Occupation probabilities ``|<j,k|psi>|^2`` as a real grid."""
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class LadderState:
    """Unnormalized intermediate produced by ladder-operator actions."""

    amplitudes: np.ndarray
    cutoff: int

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


StateLike = Union[FockState, LadderState]


@dataclass(frozen=True)
class MomentSpec:
    """Exponents of the normal-ordered monomial ``adag^p a^q bdag^r b^s``."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self) -> None:
        for name in ("p", "q", "r", "s"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 0 or value > 4:
                raise ParameterError(f"moment exponent {name}={value!r} must be an integer in 0..4")


def make_fock(j: int, k: int, cutoff: int) -> FockState:
    """Basis ket ``|j, k>`` on a grid with the given per-mode cutoff."""
    if cutoff < 0:
        raise ParameterError("cutoff must be non-negative")
    if j < 0 or k < 0 or j > cutoff or k > cutoff:
        raise CutoffExceededError(
            f"occupation ({j}, {k}) exceeds cutoff {cutoff} (or is negative)"
        )
    grid = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
    grid[j, k] = 1.0
    return FockState(grid, cutoff, 0.0)


def pad_to(state: FockState, cutoff: int) -> FockState:
    """Embed ``state`` in a larger grid by zero padding (moments are unchanged)."""
    if cutoff < state.cutoff:
        raise ParameterError(f"cannot pad cutoff {state.cutoff} down to {cutoff}")
    if cutoff == state.cutoff:
        return state
    grid = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
    grid[: state.dim, : state.dim] = state.amplitudes
    return FockState(grid, cutoff, state.truncation_loss)


def _grid_of(state: StateLike) -> np.ndarray:
    return state.amplitudes


def _lower(grid: np.ndarray, axis: int) -> np.ndarray:
    # a|n> = sqrt(n)|n-1>: out[n] = sqrt(n+1) * grid[n+1]
    dim = grid.shape[axis]
    out = np.zeros_like(grid)
    factors = np.sqrt(np.arange(1, dim))
    if axis == 0:
        out[:-1, :] = factors[:, None] * grid[1:, :]
    else:
        out[:, :-1] = factors[None, :] * grid[:, 1:]
    return out


def _raise(grid: np.ndarray, axis: int) -> np.ndarray:
    # adag|n> = sqrt(n+1)|n+1>: out[n] = sqrt(n) * grid[n-1]; weight at the top
    # level would leave the grid and must be negligible (checked by the caller).
    dim = grid.shape[axis]
    out = np.zeros_like(grid)
    factors = np.sqrt(np.arange(1, dim))
    if axis == 0:
        out[1:, :] = factors[:, None] * grid[:-1, :]
    else:
        out[:, 1:] = factors[None, :] * grid[:, :-1]
    return out


def apply_ladder(
    state: StateLike,
    mode: Literal["a", "b"],
    kind: Literal["lower", "raise"],
) -> LadderState:
    """Apply an annihilation or creation operator to one mode.

    Raising fails with :class:`TruncationOverflowError` when the population it
    would create above the cutoff is not negligible relative to the current
    norm.
    """
    if mode not in ("a", "b"):
        raise ParameterError(f"mode must be 'a' or 'b', got {mode!r}")
    if kind not in ("lower", "raise"):
        raise ParameterError(f"kind must be 'lower' or 'raise', got {kind!r}")
    grid = _grid_of(state)
    axis = 0 if mode == "a" else 1
    if kind == "lower":
        return LadderState(_lower(grid, axis), state.cutoff)

    top = grid[-1, :] if axis == 0 else grid[:, -1]
    lost = (state.cutoff + 1) * float(np.sum(np.abs(top) ** 2))
    total = float(np.sum(np.abs(grid) ** 2))
    if total > 0 and lost >= RAISE_HEADROOM * total:
        raise TruncationOverflowError(
            f"raising mode {mode} would push relative weight {lost / total:.3e} "
            f"past cutoff {state.cutoff}"
        )
    return LadderState(_raise(grid, axis), state.cutoff)


def inner(x: StateLike, y: StateLike) -> complex:
    """Inner product ``<x|y>`` with conjugation on ``x``.

    Mismatched cutoffs are reconciled by zero-padding the smaller grid.
    """
    gx, gy = _grid_of(x), _grid_of(y)
    if gx.shape != gy.shape:
        dim = max(gx.shape[0], gy.shape[0])
        px = np.zeros((dim, dim), dtype=np.complex128)
        py = np.zeros((dim, dim), dtype=np.complex128)
        px[: gx.shape[0], : gx.shape[1]] = gx
        py[: gy.shape[0], : gy.shape[1]] = gy
        gx, gy = px, py
    return complex(np.vdot(gx, gy))


def state_distance(x: StateLike, y: StateLike) -> float:
    """Global-phase-insensitive distance ``min_theta ||x - e^{i theta} y||``.

    Computed by aligning the phase of ``y`` to ``x`` first, which avoids the
    catastrophic cancellation of the ``2 - 2|<x|y>|`` form near zero.
    """
    overlap = inner(y, x)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    gx, gy = _grid_of(x), _grid_of(y)
    if gx.shape != gy.shape:
        dim = max(gx.shape[0], gy.shape[0])
        px = np.zeros((dim, dim), dtype=np.complex128)
        py = np.zeros((dim, dim), dtype=np.complex128)
        px[: gx.shape[0], : gx.shape[1]] = gx
        py[: gy.shape[0], : gy.shape[1]] = gy
        gx, gy = px, py
    return float(np.linalg.norm(gx - phase * gy))


def moment(state: FockState, spec: MomentSpec) -> complex:
    """Normal-ordered moment ``<psi| adag^p a^q bdag^r b^s |psi>``."""
    if not isinstance(state, FockState):
        raise ParameterError("moment requires a normalized FockState")
    left = state.amplitudes
    for _ in range(spec.p):
        left = _lower(left, 0)
    for _ in range(spec.r):
        left = _lower(left, 1)
    right = state.amplitudes
    for _ in range(spec.q):
        right = _lower(right, 0)
    for _ in range(spec.s):
        right = _lower(right, 1)
    return complex(np.vdot(left, right))
