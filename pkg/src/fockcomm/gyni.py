"""Two-way-communication protocol engine and inequality scoring.

The protocol runs preparation -> input encoding -> beam splitter ->
dichotomic detection for all four input pairs (x, y), assembles the
conditional probability table P(a, b | x, y) and scores

    J = [P(0,0|0,0) + P(0,0|1,1) + P(1,1|0,1) + P(1,1|1,0)] / 4,

which one-way-signaling strategies cannot push above 1/2.  The witness
construction finds, for any embedded single-mode state, the projector on
Alice's side that certifies a violation whenever that state is not coherent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .detectors import DetectorModel, parity_effects, qubit_effects
from .fock import FockError, ModeOperator, MultiModeState, expectation
from .optics import BeamSplitterModel, apply_lossless_bs, apply_lossy_bs
from .states import NoonState, SingleModeSpec, build_noon, phase_encode

INPUT_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))
WINNING_TERMS = ((0, 0, 0, 0), (1, 1, 0, 0), (0, 1, 1, 1), (1, 0, 1, 1))  # (x, y, a, b)

DetectorBuilder = Callable[[int], DetectorModel]


@dataclass(frozen=True)
class GyniResult:
    """Conditional probability table and inequality value of one protocol run.

    ``probs`` maps (x, y, a, b) to P(a, b | x, y); ``metadata`` records the
    state, devices, cutoff and tail diagnostics of the run.
    """

    probs: dict
    j: float
    metadata: dict = field(default_factory=dict)

    def prob(self, a: int, b: int, x: int, y: int) -> float:
        return self.probs[(x, y, a, b)]

    def validate(self, prob_tol: float = 1e-10, sum_tol: float = 1e-9):
        for (x, y, a, b), p in self.probs.items():
            if p < -prob_tol or p > 1.0 + prob_tol:
                raise FockError(f"P({a},{b}|{x},{y}) = {p} outside [0, 1]")
        for x, y in INPUT_PAIRS:
            s = sum(self.probs[(x, y, a, b)] for a in (0, 1) for b in (0, 1))
            if abs(s - 1.0) > sum_tol:
                raise FockError(f"outcome distribution for inputs ({x},{y}) sums to {s}")
        if abs(self.j - gyni_value(self.probs)) > 1e-12:
            raise FockError("stored J does not match the probability table")
        return self


def gyni_value(probs: dict) -> float:
    """The four-term average scoring the two-way-communication game."""
    return 0.25 * sum(probs[(x, y, a, b)] for x, y, a, b in WINNING_TERMS)


def _resolve_detector(det, cutoff: int) -> DetectorModel:
    model = det(cutoff) if callable(det) else det
    if model.cutoff != cutoff:
        raise FockError(f"detector cutoff {model.cutoff} does not match run cutoff {cutoff}")
    return model


def run_protocol(spec: SingleModeSpec,
                 bs_model: BeamSplitterModel,
                 detector_a,
                 detector_b,
                 cutoff: Optional[int] = None,
                 tol: Optional[float] = None) -> GyniResult:
    """Execute the full protocol for all four input pairs.

    ``detector_a`` / ``detector_b`` are DetectorModel instances or callables
    producing one for a given cutoff.  With a lossy splitter the two device
    modes are carried through detection under identity operators.
    """
    noon = build_noon(spec, cutoff=cutoff, tol=tol)
    return run_protocol_from_noon(noon, bs_model, detector_a, detector_b)


def run_protocol_from_noon(noon: NoonState,
                           bs_model: BeamSplitterModel,
                           detector_a,
                           detector_b) -> GyniResult:
    cutoff = noon.cutoff
    det_a = _resolve_detector(detector_a, cutoff)
    det_b = _resolve_detector(detector_b, cutoff)
    probs = {}
    for x, y in INPUT_PAIRS:
        out = _transmit(phase_encode(noon, x, y), bs_model)
        idle = [None] * (out.num_modes - 2)
        for a in (0, 1):
            for b in (0, 1):
                val = expectation(out, [det_a.effect(a), det_b.effect(b), *idle])
                if abs(val.imag) > 1e-10:
                    raise FockError(f"probability has imaginary part {val.imag}")
                probs[(x, y, a, b)] = val.real
    result = GyniResult(
        probs=probs,
        j=gyni_value(probs),
        metadata={
            "spec": noon.spec,
            "bs": bs_model,
            "detector_a": det_a.kind,
            "detector_b": det_b.kind,
            "cutoff": cutoff,
            "tail_mass": noon.spec.tail_mass(cutoff),
        },
    )
    return result.validate()


def _transmit(encoded: NoonState, bs_model: BeamSplitterModel) -> MultiModeState:
    if bs_model.is_lossy:
        return apply_lossy_bs(encoded.state, bs_model.eta)
    return apply_lossless_bs(encoded.state)


# -- witness construction ---------------------------------------------------------


@dataclass(frozen=True)
class WitnessConstruction:
    """Alice-side projector certifying two-way communication.

    ``phi`` is the half-amplitude companion state of the embedded |xi>;
    ``even_family``/``odd_family`` are its even/odd lowering-operator images
    (columns).  ``projector`` annihilates the even family and maximizes the
    captured odd-family weight; ``f_value`` is the two-term score, with the
    protocol value ``j = f_value / 2``.  ``best_projector``/``best_f`` realize
    the unconstrained optimum over Alice's dichotomic projective measurements
    (Bob fixed to parity), which can exceed the annihilating construction for
    states whose lowering images close onto a small subspace.
    """

    coeffs: np.ndarray
    phi: np.ndarray
    even_family: np.ndarray
    odd_family: np.ndarray
    projector: np.ndarray
    rank: str
    f_value: float
    j: float
    best_projector: np.ndarray
    best_f: float
    best_j: float
    violation: bool
    protocol_j: Optional[float] = None
    protocol_best_j: Optional[float] = None


def _ladder_families(coeffs: np.ndarray, cutoff: int):
    """Vectors eta_k with <n|eta_k> = c_{n+k} 2^{-(n+k)/2} C(n+k, k)^{1/2}."""
    dim = cutoff + 1
    weighted = np.array([coeffs[m] / 2.0 ** (m / 2.0) for m in range(len(coeffs))], dtype=complex)
    vectors = []
    for k in range(len(coeffs)):
        v = np.zeros(dim, dtype=complex)
        for n_ in range(len(coeffs) - k):
            v[n_] = weighted[n_ + k] * math.sqrt(math.comb(n_ + k, k))
        if np.linalg.norm(v) >= 1e-12:
            vectors.append((k, v))
    even = [v for k, v in vectors if k % 2 == 0]
    odd = [v for k, v in vectors if k % 2 == 1]
    return (np.array(even, dtype=complex).T if even else np.zeros((dim, 0), dtype=complex),
            np.array(odd, dtype=complex).T if odd else np.zeros((dim, 0), dtype=complex))


def _orthonormal_range(columns: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    if columns.shape[1] == 0:
        return columns
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    keep = s > rel_tol * s[0]
    return u[:, keep]


def build_witness(coeffs,
                  rank: str = "full",
                  cutoff: Optional[int] = None,
                  cross_validate: bool = True) -> WitnessConstruction:
    """Construct Alice's certifying measurement for the given embedded state.

    ``rank`` selects the annihilating projector: "1" keeps the single best
    direction orthogonal to every even lowering image, "full" the whole
    orthogonal complement.  When the lowering images span everything they can
    reach (coherent states), the construction returns f = 1 and no violation.
    """
    coeffs = np.asarray([complex(c) for c in coeffs])
    nrm = np.linalg.norm(coeffs)
    if nrm == 0:
        raise FockError("degenerate input: all-zero coefficient vector")
    coeffs = coeffs / nrm
    top = max(i for i, c in enumerate(coeffs) if abs(c) > 0)
    if cutoff is None:
        cutoff = max(top, 1)
    if top > cutoff:
        raise FockError("coefficients exceed the requested cutoff")
    if rank not in ("1", "full", 1):
        raise FockError("rank must be '1' or 'full'")
    rank = "1" if rank in ("1", 1) else "full"
    dim = cutoff + 1

    lam0 = abs(coeffs[0]) ** 2
    if lam0 > 1.0 - 1e-12:
        raise FockError("degenerate NOON state: embedded state is the vacuum")
    n00 = 2.0 * (1.0 + lam0)
    n01 = 2.0 * (1.0 - lam0)

    even, odd = _ladder_families(coeffs, cutoff)
    phi = even[:, 0] / np.linalg.norm(even[:, 0])

    basis = _orthonormal_range(even)
    complement = np.eye(dim, dtype=complex) - basis @ basis.conj().T
    gram_odd = odd @ odd.conj().T
    compressed = complement @ gram_odd @ complement
    compressed = 0.5 * (compressed + compressed.conj().T)
    evals, evecs = np.linalg.eigh(compressed)

    if rank == "1":
        weight = max(float(evals[-1]), 0.0)
        eta = evecs[:, -1]
        projector = np.outer(eta, eta.conj()) if weight > 1e-12 else np.zeros((dim, dim), dtype=complex)
    else:
        weight = max(float(np.trace(compressed).real), 0.0)
        projector = complement if weight > 1e-12 else np.zeros((dim, dim), dtype=complex)
    f_value = 1.0 + (4.0 / n01) * weight if weight > 1e-12 else 1.0
    violation = weight > 1e-12

    # unconstrained optimum over Alice's projectors with Bob fixed to parity
    a_op = (4.0 / n00) * (even @ even.conj().T)
    b_op = (4.0 / n01) * gram_odd
    diff = 0.5 * ((b_op - a_op) + (b_op - a_op).conj().T)
    devals, devecs = np.linalg.eigh(diff)
    positive = devals > 1e-12
    best_f = 1.0 + float(devals[positive].sum())
    best_projector = devecs[:, positive] @ devecs[:, positive].conj().T

    construction = WitnessConstruction(
        coeffs=coeffs, phi=phi, even_family=even, odd_family=odd,
        projector=projector, rank=rank, f_value=f_value, j=f_value / 2.0,
        best_projector=best_projector, best_f=best_f, best_j=best_f / 2.0,
        violation=violation,
    )
    if not cross_validate:
        return construction
    pj = _protocol_value_for_projector(coeffs, cutoff, projector)
    pbj = _protocol_value_for_projector(coeffs, cutoff, best_projector)
    if abs(pj - construction.j) > 1e-9 or abs(pbj - construction.best_j) > 1e-9:
        raise FockError("witness value disagrees with the protocol engine")
    object.__setattr__(construction, "protocol_j", pj)
    object.__setattr__(construction, "protocol_best_j", pbj)
    return construction


def _protocol_value_for_projector(coeffs: np.ndarray, cutoff: int, projector: np.ndarray) -> float:
    """Protocol J with Alice measuring {1 - P, P} and Bob measuring parity."""
    spec = SingleModeSpec("finite_superposition", coeffs=tuple(coeffs))
    dim = cutoff + 1
    alice = DetectorModel(
        "witness",
        (ModeOperator(cutoff, np.eye(dim) - projector, hermitian=True, povm_effect=True),
         ModeOperator(cutoff, projector, hermitian=True, povm_effect=True)),
    )
    result = run_protocol(spec, BeamSplitterModel("lossless_5050"), alice,
                          parity_effects, cutoff=cutoff)
    # the two J contributions per input class must agree before halving
    for (x1, y1), (x2, y2), (a, b) in (((0, 0), (1, 1), (0, 0)), ((0, 1), (1, 0), (1, 1))):
        if abs(result.prob(a, b, x1, y1) - result.prob(a, b, x2, y2)) > 1e-10:
            raise FockError("protocol lost its input-pair symmetry")
    return result.j


# -- two-dimensional embedded states: closed form and scan ------------------------


def qubit_state_coeffs(lam: float, phi: float = 0.0):
    """Coefficients of sqrt(lam)|0> + e^(i phi) sqrt(1-lam)|1>."""
    if not 0.0 <= lam < 1.0:
        raise FockError("lambda must lie in [0, 1)")
    return (math.sqrt(lam), np.exp(1j * phi) * math.sqrt(1.0 - lam))


def qubit_presence_value(lam: float) -> float:
    """Protocol value with plain vacuum/photon tests on both sides: 1/(1+lambda)."""
    return 1.0 / (1.0 + lam)


def qubit_closed_form(lam: float, theta: float, theta_prime: float) -> float:
    """Closed-form protocol value for rotated qubit measurements.

    The measurement phases are aligned with the state phase for constructive
    interference of the one-photon branch; theta = theta' = 0 recovers the
    plain vacuum/photon strategy.
    """
    bracket = (lam * math.sin(theta / 2.0) ** 2 + math.cos(theta / 2.0) ** 2
               + math.sin(theta) * math.sqrt(lam * (1.0 - lam) / 2.0))
    return math.cos(theta_prime / 2.0) ** 2 / (1.0 + lam) * bracket


@dataclass(frozen=True)
class QubitScanResult:
    lam: float
    thetas: np.ndarray
    theta_primes: np.ndarray
    surface: np.ndarray  # closed-form values, shape (len(thetas), len(theta_primes))
    max_value: float
    argmax: tuple
    presence_value: float
    max_protocol_deviation: float


def qubit_scan(lam: float,
               phi: float = 0.0,
               thetas=None,
               theta_primes=None,
               protocol_stride: int = 1) -> QubitScanResult:
    """Scan the rotated-measurement surface over (theta, theta').

    Every scanned point is evaluated both by the closed form and by the
    protocol engine; the scan fails if they disagree beyond 1e-9.
    ``protocol_stride`` > 1 subsamples the engine comparison for speed.
    The grid maximum reports the first-encountered argmax in row-major order.
    """
    thetas = np.linspace(0.0, math.pi, 181) if thetas is None else np.asarray(thetas, dtype=float)
    theta_primes = (np.linspace(0.0, math.pi, 181) if theta_primes is None
                    else np.asarray(theta_primes, dtype=float))
    if len(thetas) < 2 or len(theta_primes) < 2:
        raise FockError("the scan needs at least 2 points per axis")
    coeffs = qubit_state_coeffs(lam, phi)
    cutoff = 2
    noon = build_noon(SingleModeSpec("finite_superposition", coeffs=coeffs), cutoff=cutoff)
    post_bs = {}
    for x, y in INPUT_PAIRS:
        post_bs[(x, y)] = apply_lossless_bs(phase_encode(noon, x, y).state)
    # constructive-interference measurement phase for the one-photon branch
    eps = phi + math.pi

    surface = np.empty((len(thetas), len(theta_primes)))
    max_dev = 0.0
    for i, th in enumerate(thetas):
        alice = qubit_effects(th, eps, cutoff).swapped()  # outcome 1 on the principal direction
        for j_, tp in enumerate(theta_primes):
            closed = qubit_closed_form(lam, th, tp)
            surface[i, j_] = closed
            if (i * len(theta_primes) + j_) % protocol_stride:
                continue
            bob = qubit_effects(tp, phi, cutoff)
            terms = []
            for (x, y, a, b) in WINNING_TERMS:
                val = expectation(post_bs[(x, y)], [alice.effect(a), bob.effect(b)])
                terms.append(val.real)
            max_dev = max(max_dev, abs(0.25 * sum(terms) - closed))
    if max_dev > 1e-9:
        raise FockError(f"closed form and protocol disagree by {max_dev:.3e}")
    flat = int(np.argmax(surface))
    argmax = np.unravel_index(flat, surface.shape)
    return QubitScanResult(
        lam=lam, thetas=thetas, theta_primes=theta_primes, surface=surface,
        max_value=float(surface[argmax]), argmax=(float(thetas[argmax[0]]), float(theta_primes[argmax[1]])),
        presence_value=qubit_presence_value(lam), max_protocol_deviation=max_dev,
    )
