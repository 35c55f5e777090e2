"""Sparse truncated-Fock-space linear algebra.

States over M bosonic modes are maps from occupation tuples (n_1, ..., n_M)
to complex amplitudes, with a per-state bound on the *total* photon number.
Operators act on a single mode and are dense matrices in the number basis;
multimode observables are tensor products of mode-local operators, with
``None`` standing for the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

NORM_TOL = 1e-10
PRUNE_THRESHOLD = 1e-15


class FockError(ValueError):
    """Malformed state or operator, or an incompatible combination."""


@dataclass(frozen=True)
class MultiModeState:
    """Pure state of ``num_modes`` bosonic modes, truncated in total photon number.

    ``amplitudes`` maps occupation tuples to complex amplitudes; absent tuples
    are zero.  ``dropped_mass`` accumulates squared amplitude discarded by
    truncation (tensor products, creation past the cutoff).  Instances are
    treated as immutable; every operation returns a new state.
    """

    num_modes: int
    cutoff: int
    amplitudes: dict
    dropped_mass: float = 0.0

    def __post_init__(self):
        if self.num_modes < 1:
            raise FockError("num_modes must be at least 1")
        if self.cutoff < 0:
            raise FockError("cutoff must be non-negative")
        for occ in self.amplitudes:
            if len(occ) != self.num_modes:
                raise FockError(f"occupation {occ!r} does not have {self.num_modes} entries")
            if any(n < 0 for n in occ):
                raise FockError(f"occupation {occ!r} has a negative entry")
            if sum(occ) > self.cutoff:
                raise FockError(f"occupation {occ!r} exceeds total-photon cutoff {self.cutoff}")

    def amplitude(self, occ) -> complex:
        return self.amplitudes.get(tuple(occ), 0j)

    def norm_squared(self) -> float:
        return sum((a.real * a.real + a.imag * a.imag) for a in self.amplitudes.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def is_normalized(self, tol: float = 1e-8) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def normalize(self) -> "MultiModeState":
        n = self.norm()
        if n < 1e-150:
            raise FockError("cannot normalize a zero state")
        inv = 1.0 / n
        return MultiModeState(
            self.num_modes,
            self.cutoff,
            {occ: a * inv for occ, a in self.amplitudes.items()},
            dropped_mass=self.dropped_mass,
        )

    def prune(self, threshold: float = PRUNE_THRESHOLD) -> "MultiModeState":
        """Drop amplitudes with magnitude below ``threshold``."""
        kept = {occ: a for occ, a in self.amplitudes.items() if abs(a) >= threshold}
        return MultiModeState(self.num_modes, self.cutoff, kept, dropped_mass=self.dropped_mass)

    def total_photon_support(self):
        """Set of total photon numbers carried by nonzero amplitudes."""
        return {sum(occ) for occ, a in self.amplitudes.items() if a != 0}


@dataclass(frozen=True)
class ModeOperator:
    """Dense single-mode operator in the number basis, dimension (cutoff+1)^2.

    The ``hermitian`` and ``povm_effect`` flags are enforced at construction:
    hermitian requires max|M - M^dag| < 1e-12, a POVM effect additionally has
    all eigenvalues in [-1e-10, 1 + 1e-10].
    """

    cutoff: int
    matrix: np.ndarray
    hermitian: bool = False
    povm_effect: bool = False

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        dim = self.cutoff + 1
        if mat.shape != (dim, dim):
            raise FockError(f"operator shape {mat.shape} does not match cutoff {self.cutoff}")
        if self.hermitian and np.max(np.abs(mat - mat.conj().T)) >= 1e-12:
            raise FockError("operator flagged hermitian is not hermitian")
        if self.povm_effect:
            evals = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
            if evals.min() < -1e-10 or evals.max() > 1.0 + 1e-10:
                raise FockError("POVM effect has eigenvalues outside [0, 1]")

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @staticmethod
    def identity(cutoff: int) -> "ModeOperator":
        return ModeOperator(cutoff, np.eye(cutoff + 1), hermitian=True, povm_effect=True)

    @staticmethod
    def diagonal(values, hermitian=None, povm_effect=False) -> "ModeOperator":
        values = np.asarray(values)
        if hermitian is None:
            hermitian = bool(np.max(np.abs(values.imag)) < 1e-12) if np.iscomplexobj(values) else True
        return ModeOperator(len(values) - 1, np.diag(values.astype(complex)),
                            hermitian=hermitian, povm_effect=povm_effect)

    @staticmethod
    def number(cutoff: int) -> "ModeOperator":
        return ModeOperator.diagonal(np.arange(cutoff + 1, dtype=float))

    @staticmethod
    def projector(vectors, cutoff: int) -> "ModeOperator":
        """Projector onto the span of the given orthonormal column vectors."""
        v = np.atleast_2d(np.asarray(vectors, dtype=complex))
        if v.shape[0] == cutoff + 1 and v.shape[1] != cutoff + 1:
            cols = v
        else:
            cols = v.T
        mat = cols @ cols.conj().T
        return ModeOperator(cutoff, mat, hermitian=True, povm_effect=True)


def vacuum(num_modes: int, cutoff: int) -> MultiModeState:
    return MultiModeState(num_modes, cutoff, {(0,) * num_modes: 1.0 + 0j})


def single_mode_from_coeffs(coeffs: Sequence[complex], cutoff: int) -> MultiModeState:
    """One-mode state with amplitude coeffs[n] on |n>, normalized.

    Raises on an all-zero vector or when the vector is longer than the space.
    """
    coeffs = [complex(c) for c in coeffs]
    if len(coeffs) - 1 > cutoff:
        raise FockError(f"coefficient vector of degree {len(coeffs) - 1} exceeds cutoff {cutoff}")
    amps = {(n,): c for n, c in enumerate(coeffs) if c != 0}
    if not amps:
        raise FockError("degenerate input: all-zero coefficient vector")
    return MultiModeState(1, cutoff, amps).normalize()


def tensor_product(states: Sequence[MultiModeState]) -> MultiModeState:
    """Combine states into one over the concatenated mode list.

    All factors must share one cutoff, which stays the *total* photon cutoff
    of the product; combined tuples exceeding it are dropped and the lost
    squared amplitude is reported in ``dropped_mass``.
    """
    if not states:
        raise FockError("tensor_product needs at least one state")
    cutoff = states[0].cutoff
    if any(s.cutoff != cutoff for s in states):
        raise FockError("tensor_product requires a common cutoff")
    amps = dict(states[0].amplitudes)
    num_modes = states[0].num_modes
    dropped = states[0].dropped_mass
    for s in states[1:]:
        new = {}
        for occ1, a1 in amps.items():
            n1 = sum(occ1)
            for occ2, a2 in s.amplitudes.items():
                if n1 + sum(occ2) > cutoff:
                    a = a1 * a2
                    dropped += a.real * a.real + a.imag * a.imag
                    continue
                new[occ1 + occ2] = a1 * a2
        amps = new
        num_modes += s.num_modes
        dropped += s.dropped_mass
    return MultiModeState(num_modes, cutoff, amps, dropped_mass=dropped)


def inner_product(a: MultiModeState, b: MultiModeState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.num_modes != b.num_modes:
        raise FockError("inner_product requires matching mode counts")
    small, large, conj_small = (a, b, True) if len(a.amplitudes) <= len(b.amplitudes) else (b, a, False)
    total = 0j
    for occ, amp in small.amplitudes.items():
        other = large.amplitudes.get(occ)
        if other is None:
            continue
        total += (amp.conjugate() * other) if conj_small else (other.conjugate() * amp)
    return total


def apply_ladder(state: MultiModeState, mode: int, kind: str, power: int = 1) -> MultiModeState:
    """Apply an annihilation or creation operator ``power`` times to one mode.

    Returns the unnormalized image.  Creation components that would exceed the
    total cutoff are dropped, with the lost mass recorded in ``dropped_mass``.
    """
    if not (0 <= mode < state.num_modes):
        raise FockError(f"mode {mode} out of range for {state.num_modes}-mode state")
    if kind not in ("annihilate", "create"):
        raise FockError("kind must be 'annihilate' or 'create'")
    if power < 1:
        raise FockError("power must be >= 1")
    amps = state.amplitudes
    dropped = state.dropped_mass
    for _ in range(power):
        new = {}
        dropped_step = 0.0
        for occ, a in amps.items():
            n = occ[mode]
            if kind == "annihilate":
                if n == 0:
                    continue
                target = occ[:mode] + (n - 1,) + occ[mode + 1:]
                val = a * math.sqrt(n)
            else:
                if sum(occ) + 1 > state.cutoff:
                    dropped_step += (n + 1) * (a.real * a.real + a.imag * a.imag)
                    continue
                target = occ[:mode] + (n + 1,) + occ[mode + 1:]
                val = a * math.sqrt(n + 1)
            if target in new:
                new[target] += val
            else:
                new[target] = val
        amps = new
        dropped += dropped_step
    return MultiModeState(state.num_modes, state.cutoff, amps, dropped_mass=dropped)


def _nonzero_columns(op: ModeOperator):
    """Per-column nonzero entries of the operator matrix, as (row, value) lists."""
    mat = op.matrix
    cols = []
    for j in range(mat.shape[1]):
        col = mat[:, j]
        nz = np.nonzero(col)[0]
        cols.append([(int(i), complex(col[i])) for i in nz])
    return cols


def _apply_mode_operator(amps: dict, cols, mode: int, cutoff: int) -> dict:
    new = {}
    for occ, a in amps.items():
        rest = sum(occ) - occ[mode]
        for i, val in cols[occ[mode]]:
            if rest + i > cutoff:
                continue
            target = occ[:mode] + (i,) + occ[mode + 1:]
            contrib = val * a
            if target in new:
                new[target] += contrib
            else:
                new[target] = contrib
    return new


def expectation(state: MultiModeState, ops: Sequence[Optional[ModeOperator]]) -> complex:
    """<state| O_1 x ... x O_M |state> with ``None`` entries meaning identity.

    The state must be normalized (asserted to 1e-8); the result is real to
    within 1e-12 whenever every operator is hermitian.
    """
    if len(ops) != state.num_modes:
        raise FockError(f"expected {state.num_modes} operators, got {len(ops)}")
    for op in ops:
        if op is not None and op.cutoff != state.cutoff:
            raise FockError("operator dimension does not match state cutoff")
    if not state.is_normalized(1e-8):
        raise FockError("expectation requires a normalized state")
    amps = state.amplitudes
    for mode, op in enumerate(ops):
        if op is None:
            continue
        amps = _apply_mode_operator(amps, _nonzero_columns(op), mode, state.cutoff)
    total = 0j
    for occ, a in state.amplitudes.items():
        other = amps.get(occ)
        if other is not None:
            total += a.conjugate() * other
    return total


def fidelity(a: MultiModeState, b: MultiModeState) -> float:
    """|<a|b>|^2 between the normalized versions of the two states."""
    na2, nb2 = a.norm_squared(), b.norm_squared()
    if na2 < 1e-300 or nb2 < 1e-300:
        raise FockError("fidelity of a zero state is undefined")
    ov = inner_product(a, b)
    return (ov.real * ov.real + ov.imag * ov.imag) / (na2 * nb2)
