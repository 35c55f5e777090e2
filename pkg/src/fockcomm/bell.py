"""Reference-frame-independent Bell test with displacement measurements.

Each party measures dichotomic +-1 observables 2|beta><beta| - 1 (outcome +1
exactly on a chosen coherent state), realizable as an optical displacement
followed by vacuum detection.  Setting 0 uses beta = 0 for both parties;
setting 1 uses beta_1 = r e^(i phi1) for Alice and beta_2 = r e^(i phi2) for
Bob.  Local realistic statistics obey I <= 1 for

    I = (1/4) sum_u | sum_v (-1)^(u.v) xi(v) |.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import FockError, ModeOperator, MultiModeState, expectation
from .states import SingleModeSpec

SETTINGS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class BellSettings:
    """Shared displacement magnitude and per-party phases."""

    r: float
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise FockError("displacement magnitude r must be non-negative")

    @property
    def beta1(self) -> complex:
        return self.r * np.exp(1j * self.phi1)

    @property
    def beta2(self) -> complex:
        return self.r * np.exp(1j * self.phi2)


def displacement_measurement(beta: complex, cutoff: int, tol: float | None = None) -> ModeOperator:
    """The +-1 observable 2|beta><beta| - 1 on the truncated space.

    The coherent vector is normalized after truncation, so the operator
    squares to the identity at machine precision; the cutoff must leave a
    coherent tail below the configured tolerance.
    """
    coeffs = SingleModeSpec("coherent", alpha=beta).coefficient_vector(cutoff, tol)
    mat = 2.0 * np.outer(coeffs, coeffs.conj()) - np.eye(cutoff + 1)
    return ModeOperator(cutoff, mat, hermitian=True)


def correlators(state: MultiModeState, settings: BellSettings, tol: float | None = None) -> dict:
    """The four expectations xi(v) = <M^A_v1 M^B_v2> on a two-mode state."""
    if state.num_modes != 2:
        raise FockError("Bell correlators are defined for two-mode states")
    cutoff = state.cutoff
    m0 = displacement_measurement(0j, cutoff, tol)
    ma = {0: m0, 1: displacement_measurement(settings.beta1, cutoff, tol)}
    mb = {0: m0, 1: displacement_measurement(settings.beta2, cutoff, tol)}
    out = {}
    for v1, v2 in SETTINGS:
        val = expectation(state, [ma[v1], mb[v2]])
        if abs(val.imag) > 1e-9:
            raise FockError(f"correlator has imaginary part {val.imag}")
        out[(v1, v2)] = val.real
    return out


def bell_value(corr: dict) -> float:
    """I = (1/4) sum_u |sum_v (-1)^(u.v) xi(v)|."""
    total = 0.0
    for u1, u2 in SETTINGS:
        inner = 0.0
        for v1, v2 in SETTINGS:
            sign = -1.0 if (u1 * v1 + u2 * v2) % 2 else 1.0
            inner += sign * corr[(v1, v2)]
        total += abs(inner)
    return 0.25 * total


@dataclass(frozen=True)
class BellResult:
    settings: BellSettings
    correlators: dict
    i_value: float
    metadata: dict = field(default_factory=dict)

    def validate(self, tol: float = 1e-9):
        for v, xi in self.correlators.items():
            if abs(xi) > 1.0 + tol:
                raise FockError(f"correlator xi{v} = {xi} outside [-1, 1]")
        if abs(self.i_value - bell_value(self.correlators)) > 1e-12:
            raise FockError("stored I does not match the correlators")
        return self


def evaluate(state: MultiModeState, settings: BellSettings, tol: float | None = None) -> BellResult:
    corr = correlators(state, settings, tol)
    return BellResult(settings=settings, correlators=corr,
                      i_value=bell_value(corr)).validate()


def bell_cutoff(spec: SingleModeSpec, r: float, tol: float | None = None) -> int:
    """Cutoff accommodating both the state and the displaced measurement."""
    probe = SingleModeSpec("coherent", alpha=complex(r))
    return max(spec.min_cutoff(tol), probe.min_cutoff(tol), 1)
