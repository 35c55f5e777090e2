"""Dichotomic measurement models.

Every model realizes a two-outcome POVM {effect(0), effect(1)} on one mode:

* ``parity``   - ideal projection onto even/odd photon number,
* ``presence`` - vacuum vs at-least-one-photon projection,
* ``qubit``    - rank-1 projections on the {|0>, |1>} subspace,
* ``tke``      - lossy photon-number-resolving detector with binomial
                 miscounting and saturation, coarse-grained by count parity,
* ``sva``      - multiplexed array of N on/off detectors with efficiency and
                 dark counts, coarse-grained by click parity.

Constructors return the canonical outcome labeling described in each
docstring; ``swapped()`` exchanges the outcome bits, which is how one party
relabels outcomes for odd-photon carrier states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import FockError, ModeOperator

COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class DetectorModel:
    """A labeled dichotomic POVM: ``effects[b]`` fires for outcome bit b."""

    kind: str
    effects: tuple  # (ModeOperator for outcome 0, ModeOperator for outcome 1)
    params: tuple = ()

    def __post_init__(self):
        e0, e1 = self.effects
        if e0.cutoff != e1.cutoff:
            raise FockError("detector effects must share a cutoff")
        total = e0.matrix + e1.matrix
        if np.max(np.abs(total - np.eye(e0.cutoff + 1))) >= COMPLETENESS_TOL:
            raise FockError(f"{self.kind} detector effects do not sum to the identity")

    @property
    def cutoff(self) -> int:
        return self.effects[0].cutoff

    def effect(self, outcome: int) -> ModeOperator:
        return self.effects[outcome]

    def swapped(self) -> "DetectorModel":
        """Same POVM with the outcome bits exchanged."""
        return DetectorModel(self.kind, (self.effects[1], self.effects[0]), self.params)


def _diag_effect(values) -> ModeOperator:
    vals = np.clip(np.asarray(values, dtype=float), 0.0, 1.0 + 1e-12)
    return ModeOperator.diagonal(vals, hermitian=True, povm_effect=True)


def parity_effects(cutoff: int) -> DetectorModel:
    """Ideal parity measurement; outcome 0 = even photon number, 1 = odd."""
    n = np.arange(cutoff + 1)
    even = (n % 2 == 0).astype(float)
    return DetectorModel("parity", (_diag_effect(even), _diag_effect(1.0 - even)))


def presence_effects(cutoff: int) -> DetectorModel:
    """Vacuum test; outcome 0 = |0><0|, outcome 1 = one or more photons.

    All support on n >= 2 sits on the photon-present effect, keeping the pair
    complete on the whole truncated space.
    """
    vac = np.zeros(cutoff + 1)
    vac[0] = 1.0
    return DetectorModel("presence", (_diag_effect(vac), _diag_effect(1.0 - vac)))


def qubit_effects(theta: float, epsilon: float, cutoff: int) -> DetectorModel:
    """Projections along cos(t/2)|0> + e^(i eps) sin(t/2)|1> and its orthogonal.

    Outcome 0 fires on the principal direction, outcome 1 on the orthogonal
    one; support on n >= 2 is attached to the orthogonal ("photon present")
    effect so the pair is complete.
    """
    if not -1e-9 <= theta <= math.pi + 1e-9:
        raise FockError("theta must lie in [0, pi]")
    theta = min(max(theta, 0.0), math.pi)
    dim = cutoff + 1
    if dim < 2:
        raise FockError("qubit effects need cutoff >= 1")
    chi = np.zeros(dim, dtype=complex)
    chi[0] = math.cos(theta / 2.0)
    chi[1] = np.exp(1j * epsilon) * math.sin(theta / 2.0)
    principal = np.outer(chi, chi.conj())
    rest = np.eye(dim) - principal
    return DetectorModel(
        "qubit",
        (ModeOperator(cutoff, principal, hermitian=True, povm_effect=True),
         ModeOperator(cutoff, rest, hermitian=True, povm_effect=True)),
        params=(theta, epsilon),
    )


# -- lossy photon-number-resolving detector (binomial miscount + saturation) -----


def pnr_count_effects(kappa: float, saturation: int, cutoff: int) -> list:
    """Diagonal count effects of a lossy PNR detector resolving up to ``saturation``.

    Effect m < saturation has <n|Pi_m|n> = C(n, m) kappa^m (1-kappa)^(n-m);
    the saturation effect absorbs the remainder.  Returned as diagonal vectors.
    """
    if not 0.0 <= kappa <= 1.0:
        raise FockError("detector efficiency kappa must lie in [0, 1]")
    if saturation < 1:
        raise FockError("saturation must be at least 1")
    n = np.arange(cutoff + 1)
    diags = []
    remainder = np.ones(cutoff + 1)
    for m in range(saturation):
        d = np.zeros(cutoff + 1)
        valid = n >= m
        if kappa == 0.0:
            d[valid] = 1.0 if m == 0 else 0.0
        else:
            nv = n[valid]
            with np.errstate(divide="ignore"):
                logc = np.array([math.lgamma(x + 1) - math.lgamma(m + 1) - math.lgamma(x - m + 1)
                                 for x in nv])
            if kappa == 1.0:
                d[valid] = np.where(nv == m, 1.0, 0.0)
            else:
                d[valid] = np.exp(logc + m * math.log(kappa) + (nv - m) * math.log(1.0 - kappa))
        diags.append(d)
        remainder = remainder - d
    diags.append(np.clip(remainder, 0.0, None))
    return diags


def tke_effects(kappa: float, n_sat: int, grouping: str, cutoff: int) -> DetectorModel:
    """Parity coarse-graining of the lossy PNR detector.

    ``grouping`` selects the saturation photon count: "even" saturates at
    2 * n_sat and "odd" at the adjacent odd count 2 * n_sat + 1.  Counted
    effects are grouped by parity and the saturation effect is split evenly
    between the two outcomes.  Outcome 0 = even count, 1 = odd count.
    """
    if grouping not in ("even", "odd"):
        raise FockError("grouping must be 'even' or 'odd'")
    if n_sat < 1:
        raise FockError("n_sat must be at least 1")
    saturation = 2 * n_sat if grouping == "even" else 2 * n_sat + 1
    return tke_effects_from_count(kappa, saturation, cutoff)


def tke_effects_from_count(kappa: float, saturation: int, cutoff: int) -> DetectorModel:
    """Parity coarse-graining for an explicit saturation photon count."""
    diags = pnr_count_effects(kappa, saturation, cutoff)
    even = np.zeros(cutoff + 1)
    odd = np.zeros(cutoff + 1)
    for m in range(saturation):
        if m % 2 == 0:
            even += diags[m]
        else:
            odd += diags[m]
    even += 0.5 * diags[saturation]
    odd += 0.5 * diags[saturation]
    return DetectorModel("tke", (_diag_effect(even), _diag_effect(odd)),
                         params=(kappa, saturation))


# -- multiplexed on/off click counting --------------------------------------------


@lru_cache(maxsize=None)
def _occupancy_table(n_bins: int, max_photons: int) -> np.ndarray:
    """occ[s, j] = P(j distinct bins occupied | s photons i.i.d. uniform over n_bins)."""
    occ = np.zeros((max_photons + 1, n_bins + 1))
    occ[0, 0] = 1.0
    for s in range(max_photons):
        for j in range(min(s, n_bins) + 1):
            p = occ[s, j]
            if p == 0.0:
                continue
            occ[s + 1, j] += p * j / n_bins
            if j < n_bins:
                occ[s + 1, j + 1] += p * (n_bins - j) / n_bins
    return occ


def sva_click_distribution(n_bins: int, kappa: float, nu: float, n_photons: int) -> np.ndarray:
    """P(k clicks | n photons) for the multiplexed on/off array.

    Each photon survives with probability kappa and lands in a uniformly
    random bin; every silent bin dark-clicks with probability 1 - e^(-nu).
    Evaluated by exact convolution (no alternating sums), so it is stable for
    any array size.
    """
    if not 0.0 <= kappa <= 1.0:
        raise FockError("detector efficiency kappa must lie in [0, 1]")
    if nu < 0.0:
        raise FockError("dark count parameter nu must be non-negative")
    occ = _occupancy_table(n_bins, max(n_photons, 1))
    surv = np.array([math.comb(n_photons, s) * kappa ** s * (1.0 - kappa) ** (n_photons - s)
                     for s in range(n_photons + 1)])
    p_click = np.zeros(n_bins + 1)
    for s, ps in enumerate(surv):
        if ps == 0.0:
            continue
        p_click[: n_bins + 1] += ps * occ[s, : n_bins + 1]
    if nu == 0.0:
        return p_click
    d = 1.0 - math.exp(-nu)
    out = np.zeros(n_bins + 1)
    for j, pj in enumerate(p_click):
        if pj == 0.0:
            continue
        empty = n_bins - j
        for extra in range(empty + 1):
            out[j + extra] += pj * math.comb(empty, extra) * d ** extra * (1.0 - d) ** (empty - extra)
    return out


def sva_click_diagonal(n_bins: int, kappa: float, nu: float, cutoff: int) -> np.ndarray:
    """Matrix diag[k, n] = <n|Pi_k|n> for k = 0..n_bins, n = 0..cutoff."""
    diag = np.zeros((n_bins + 1, cutoff + 1))
    for n in range(cutoff + 1):
        diag[:, n] = sva_click_distribution(n_bins, kappa, nu, n)
    return diag


def sva_diagonal_normal_ordered(n_bins: int, kappa: float, nu: float, cutoff: int) -> np.ndarray:
    """Same diagonal via the normal-ordered operator form.

    <n|Pi_k|n> = C(N,k) sum_l (-1)^l C(k,l) e^(-nu (N-k+l)) (1 - kappa (N-k+l)/N)^n.
    The alternating sum cancels catastrophically for large N; kept as an
    independent cross-check at moderate array sizes.
    """
    n = np.arange(cutoff + 1)
    diag = np.zeros((n_bins + 1, cutoff + 1))
    for k in range(n_bins + 1):
        acc = np.zeros(cutoff + 1)
        for l in range(k + 1):
            m = n_bins - k + l
            acc += ((-1.0) ** l * math.comb(k, l) * math.exp(-nu * m)
                    * (1.0 - kappa * m / n_bins) ** n)
        diag[k] = math.comb(n_bins, k) * acc
    return diag


def sva_effects(n_bins: int, kappa: float, nu: float, cutoff: int) -> DetectorModel:
    """Click-parity coarse-graining of the multiplexed array.

    Outcome 0 = even number of clicking detectors, outcome 1 = odd.
    """
    if n_bins < 1:
        raise FockError("the multiplexed array needs at least one detector")
    diag = sva_click_diagonal(n_bins, kappa, nu, cutoff)
    even = diag[0::2].sum(axis=0)
    odd = diag[1::2].sum(axis=0)
    return DetectorModel("sva", (_diag_effect(even), _diag_effect(odd)),
                         params=(n_bins, kappa, nu))
