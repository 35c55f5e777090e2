"""Beam-splitter models: ideal 50:50 mixing and a lossy four-mode dilation.

The lossless splitter substitutes a+ -> (a+ + b+)/sqrt(2), b+ -> (a+ - b+)/sqrt(2).
Loss is modeled by a unitary on four modes (two field, two device): photons
scatter into device modes with weight sqrt(1 - eta) and are never observed
there.  Both transforms conserve the total photon number over all modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fock import FockError, MultiModeState, fidelity, tensor_product
from .states import SingleModeSpec, build_noon, tail_tolerance


def lossless_bs_matrix() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def lossy_bs_matrix(eta: float) -> np.ndarray:
    """Four-mode unitary of a 50:50 splitter with quantum efficiency ``eta``.

    Modes are ordered (field 1, field 2, device 1, device 2).  The top-left
    block reduces to the lossless splitter at eta = 1.
    """
    if not 0.0 <= eta <= 1.0:
        raise FockError("quantum efficiency eta must lie in [0, 1]")
    t = math.sqrt(eta / 2.0)
    s = math.sqrt((1.0 - eta) / 2.0)
    return np.array([
        [t, t, s, s],
        [t, -t, -s, s],
        [-s, -s, t, t],
        [-s, s, -t, t],
    ])


def transmission_absorption_blocks(eta: float):
    """The 2x2 transmission and absorption blocks satisfying T T+ + A A+ = 1."""
    t = math.sqrt(eta / 2.0)
    s = math.sqrt((1.0 - eta) / 2.0)
    T = np.array([[t, t], [t, -t]])
    A = np.array([[s, s], [-s, s]])
    return T, A


@dataclass(frozen=True)
class BeamSplitterModel:
    """Either the ideal 50:50 splitter or its lossy dilation with efficiency eta."""

    kind: str  # "lossless_5050" | "lossy"
    eta: float = 1.0

    def __post_init__(self):
        if self.kind not in ("lossless_5050", "lossy"):
            raise FockError(f"unknown beam splitter kind {self.kind!r}")
        if self.kind == "lossy":
            lam = lossy_bs_matrix(self.eta)
            if np.max(np.abs(lam.T @ lam - np.eye(4))) >= 1e-12:
                raise FockError("lossy beam splitter matrix is not unitary")

    @property
    def is_lossy(self) -> bool:
        return self.kind == "lossy"


class LinearModeTransform:
    """Photon-number-conserving substitution a+_v -> sum_u M[u, v] a+_u.

    Acts on a subset of modes of a sparse state; expansion coefficients use
    exact integer multinomials converted to float at the end.  Expansions are
    cached per input occupation.
    """

    def __init__(self, matrix: np.ndarray):
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise FockError("transform matrix must be square")
        self.matrix = matrix
        self._cache = {}

    def _factor(self, column: int, n: int) -> dict:
        """Expansion of (sum_u M[u, col] a+_u)^n as {exponents: coefficient}."""
        k = self.matrix.shape[0]
        col = self.matrix[:, column]
        out = {}
        for exps in _compositions(n, k):
            coeff = _multinomial(n, exps)
            val = complex(coeff)
            for c, e in zip(col, exps):
                if e:
                    val *= c ** e
            if val != 0:
                out[exps] = val
        return out

    def expand(self, occ: tuple) -> dict:
        """Image of the basis ket |occ> (on the participating modes only)."""
        cached = self._cache.get(occ)
        if cached is not None:
            return cached
        k = len(occ)
        poly = {(0,) * k: 1.0 + 0j}
        for column, n in enumerate(occ):
            if n == 0:
                continue
            factor = self._factor(column, n)
            new = {}
            for e1, c1 in poly.items():
                for e2, c2 in factor.items():
                    key = tuple(a + b for a, b in zip(e1, e2))
                    val = c1 * c2
                    if key in new:
                        new[key] += val
                    else:
                        new[key] = val
            poly = new
        denom = 1
        for n in occ:
            denom *= math.factorial(n)
        out = {}
        for exps, coeff in poly.items():
            numer = 1
            for e in exps:
                numer *= math.factorial(e)
            amp = coeff * math.sqrt(Fraction(numer, denom))
            if amp != 0:
                out[exps] = amp
        self._cache[occ] = out
        return out

    def apply(self, state: MultiModeState, modes) -> MultiModeState:
        modes = tuple(modes)
        if len(modes) != self.matrix.shape[0]:
            raise FockError("mode count does not match transform size")
        if len(set(modes)) != len(modes):
            raise FockError("transform modes must be distinct")
        for m in modes:
            if not (0 <= m < state.num_modes):
                raise FockError(f"mode index {m} out of range")
        new = {}
        for occ, a in state.amplitudes.items():
            sub = tuple(occ[m] for m in modes)
            for exps, coeff in self.expand(sub).items():
                target = list(occ)
                for m, e in zip(modes, exps):
                    target[m] = e
                key = tuple(target)
                val = a * coeff
                if key in new:
                    new[key] += val
                else:
                    new[key] = val
        out = MultiModeState(state.num_modes, state.cutoff, new,
                             dropped_mass=state.dropped_mass)
        return out.prune()


def _compositions(n: int, k: int):
    """All k-tuples of non-negative integers summing to n."""
    if k == 1:
        yield (n,)
        return
    for head in range(n + 1):
        for rest in _compositions(n - head, k - 1):
            yield (head,) + rest


def _multinomial(n: int, exps) -> int:
    out = math.factorial(n)
    for e in exps:
        out //= math.factorial(e)
    return out


_LOSSLESS = None
_LOSSY_CACHE = {}


def apply_lossless_bs(state: MultiModeState, modes=(0, 1)) -> MultiModeState:
    """Mix two modes of the state on an ideal 50:50 splitter."""
    global _LOSSLESS
    i, j = modes
    if i == j:
        raise FockError("beam splitter needs two distinct modes")
    if _LOSSLESS is None:
        _LOSSLESS = LinearModeTransform(lossless_bs_matrix())
    return _LOSSLESS.apply(state, (i, j))


def apply_lossy_bs(state2: MultiModeState, eta: float) -> MultiModeState:
    """Send a two-mode state through the lossy splitter, returning four modes.

    Device modes are appended in the vacuum; the result is a pure state whose
    field modes (0, 1) carry the observable signal.
    """
    if state2.num_modes != 2:
        raise FockError("lossy beam splitter expects a two-mode input")
    tr = _LOSSY_CACHE.get(eta)
    if tr is None:
        tr = LinearModeTransform(lossy_bs_matrix(eta))
        _LOSSY_CACHE[eta] = tr
    four = MultiModeState(4, state2.cutoff,
                          {occ + (0, 0): a for occ, a in state2.amplitudes.items()},
                          dropped_mass=state2.dropped_mass)
    return tr.apply(four, (0, 1, 2, 3))


def apply_lossy_bs_network(state2: MultiModeState, eta: float) -> MultiModeState:
    """Equivalent decomposition of the lossy splitter into elementary mixers.

    Field pair and device pair are each mixed 50:50, then field and device
    partners are cross-mixed eta:(1-eta).  Reproduces ``apply_lossy_bs``
    amplitude for amplitude.
    """
    if state2.num_modes != 2:
        raise FockError("lossy beam splitter expects a two-mode input")
    if not 0.0 <= eta <= 1.0:
        raise FockError("quantum efficiency eta must lie in [0, 1]")
    t, s = math.sqrt(eta), math.sqrt(1.0 - eta)
    h = lossless_bs_matrix()
    cross1 = np.array([[t, s], [-s, t]])
    cross2 = np.array([[t, -s], [-s, -t]])
    state = MultiModeState(4, state2.cutoff,
                           {occ + (0, 0): a for occ, a in state2.amplitudes.items()},
                           dropped_mass=state2.dropped_mass)
    for matrix, modes in ((h, (0, 1)), (h, (2, 3)), (cross1, (0, 2)), (cross2, (1, 3))):
        state = LinearModeTransform(matrix).apply(state, modes)
    return state


@dataclass(frozen=True)
class PreparationCheck:
    fidelity: float
    passed: bool
    cutoff: int


def verify_cat_noon_preparation(alpha: complex, tol: float | None = None) -> PreparationCheck:
    """Check that mixing two half-amplitude even cats on the splitter yields
    the even-cat NOON state.

    Passes when the fidelity between the mixed product state and the directly
    assembled NOON state exceeds 1 - 1e-9.
    """
    tol = tail_tolerance(tol)
    spec_full = SingleModeSpec("cat_even", alpha=alpha)
    if alpha == 0:
        return PreparationCheck(fidelity=1.0, passed=True, cutoff=1)
    spec_half = SingleModeSpec("cat_even", alpha=alpha / math.sqrt(2.0))
    half_cut = spec_half.min_cutoff(tol / 2.0)
    cutoff = spec_full.min_cutoff(tol)
    # the product of two half cats needs headroom for the joint photon count
    while 2.0 * spec_half.tail_mass(cutoff // 2) >= tol and cutoff < 4 * half_cut + 8:
        cutoff += 2
    target = build_noon(spec_full, cutoff=cutoff, tol=tol).state
    pair = tensor_product([spec_half.realize(cutoff, tol), spec_half.realize(cutoff, tol)])
    mixed = apply_lossless_bs(pair.normalize())
    f = fidelity(mixed, target)
    return PreparationCheck(fidelity=f, passed=f > 1.0 - 1e-9, cutoff=cutoff)


def schmidt_coefficients(state: MultiModeState) -> np.ndarray:
    """Singular values of the two-mode amplitude matrix (descending)."""
    if state.num_modes != 2:
        raise FockError("Schmidt decomposition is defined here for two modes")
    dim = state.cutoff + 1
    mat = np.zeros((dim, dim), dtype=complex)
    for (n, m), a in state.amplitudes.items():
        mat[n, m] = a
    return np.linalg.svd(mat, compute_uv=False)
