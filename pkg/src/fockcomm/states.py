"""Single-mode state constructors and the generalized NOON builder.

A generalized NOON state places one single-mode state |xi> in superposition
across two locations, (|xi>|0> + |0>|xi>)/sqrt(N).  Inputs are encoded as
sign flips on the two branches.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .fock import FockError, ModeOperator, MultiModeState, expectation, single_mode_from_coeffs

DEFAULT_TAIL_TOL = 1e-12
MAX_AUTO_CUTOFF = 400
_TAIL_TOL_ENV = "FOCKCOMM_CUTOFF_TOL"

KINDS = (
    "coherent",
    "cat_even",
    "cat_odd",
    "squeezed_vacuum",
    "photon_added_coherent",
    "fock",
    "finite_superposition",
)


def tail_tolerance(configured: float | None = None) -> float:
    """Resolve the auto-cutoff tail tolerance.

    The FOCKCOMM_CUTOFF_TOL environment variable overrides any configured
    value; without either, the default of 1e-12 applies.
    """
    env = os.environ.get(_TAIL_TOL_ENV)
    if env:
        return float(env)
    if configured is not None:
        return float(configured)
    return DEFAULT_TAIL_TOL


@dataclass(frozen=True)
class SingleModeSpec:
    """Symbolic description of a single-mode pure state.

    Parameters other than the ones relevant for ``kind`` are ignored.
    ``coeffs`` is the number-basis coefficient vector of a finite
    superposition (normalized on realization).
    """

    kind: str
    alpha: complex = 0j
    r: float = 0.0
    theta: float = 0.0
    n: int = 0
    coeffs: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FockError(f"unknown state kind {self.kind!r}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if self.kind == "cat_odd" and self.alpha == 0:
            raise FockError("odd cat with alpha = 0 has zero norm")
        if self.kind == "squeezed_vacuum" and self.r < 0:
            raise FockError("squeeze parameter r must be non-negative")
        if self.kind == "fock" and self.n < 0:
            raise FockError("photon number must be non-negative")
        if self.kind == "finite_superposition":
            if not self.coeffs or all(c == 0 for c in self.coeffs):
                raise FockError("degenerate input: all-zero coefficient vector")

    # -- exact tail bookkeeping -------------------------------------------------

    def tail_mass(self, cutoff: int) -> float:
        """Probability mass of the exact (untruncated) state beyond ``cutoff``."""
        a = abs(self.alpha) ** 2
        if self.kind == "coherent":
            return max(0.0, 1.0 - _poisson_cdf(a, cutoff))
        if self.kind == "cat_even":
            if a == 0:
                return 0.0
            tot, term = 0.0, 1.0  # term_n = a^(2n)/(2n)!
            for n in range(cutoff // 2 + 1):
                tot += term
                term *= a * a / ((2 * n + 1) * (2 * n + 2))
            return max(0.0, 1.0 - tot / math.cosh(a))
        if self.kind == "cat_odd":
            tot, term = 0.0, a  # term_n = a^(2n+1)/(2n+1)!
            for n in range((cutoff - 1) // 2 + 1):
                tot += term
                term *= a * a / ((2 * n + 2) * (2 * n + 3))
            return max(0.0, 1.0 - tot / math.sinh(a)) if a > 0 else 0.0
        if self.kind == "squeezed_vacuum":
            if self.r == 0:
                return 0.0
            t2 = math.tanh(self.r) ** 2
            tot, term = 0.0, 1.0  # term_m = (2m)! tanh^(2m) / (4^m m!^2)
            for m in range(cutoff // 2 + 1):
                tot += term
                term *= t2 * (2 * m + 1) / (2 * m + 2)
            return max(0.0, 1.0 - tot / math.cosh(self.r))
        if self.kind == "photon_added_coherent":
            tot, term = 0.0, math.exp(-a)  # term_n = (n+1) e^-a a^n / n!, n = photon count - 1
            for n in range(cutoff):
                tot += term * (n + 1)
                term *= a / (n + 1)
            return max(0.0, 1.0 - tot / (1.0 + a))
        if self.kind == "fock":
            return 0.0 if self.n <= cutoff else 1.0
        top = max(i for i, c in enumerate(self.coeffs) if c != 0)
        if top <= cutoff:
            return 0.0
        kept = sum(abs(c) ** 2 for c in self.coeffs[:cutoff + 1])
        total = sum(abs(c) ** 2 for c in self.coeffs)
        return 1.0 - kept / total

    def min_cutoff(self, tol: float | None = None) -> int:
        """Smallest total-photon cutoff keeping the tail mass below ``tol``."""
        tol = tail_tolerance(tol)
        if self.kind == "fock":
            return self.n
        if self.kind == "finite_superposition":
            top = max(i for i, c in enumerate(self.coeffs) if c != 0)
            return top
        for cutoff in range(1, MAX_AUTO_CUTOFF + 1):
            if self.tail_mass(cutoff) < tol:
                return cutoff
        raise FockError(f"no cutoff up to {MAX_AUTO_CUTOFF} reaches tail mass < {tol}")

    # -- realization ------------------------------------------------------------

    def coefficient_vector(self, cutoff: int, tol: float | None = None) -> np.ndarray:
        """Normalized number-basis coefficients up to ``cutoff``.

        Raises when the exact state keeps more than ``tol`` mass beyond the
        cutoff (cutoff insufficiency).
        """
        tol = tail_tolerance(tol)
        tail = self.tail_mass(cutoff)
        if tail >= tol:
            raise FockError(
                f"cutoff {cutoff} too small for {self.kind}: tail mass {tail:.3e} >= {tol:.1e}")
        c = self._raw_coefficients(cutoff)
        norm = np.linalg.norm(c)
        if norm == 0:
            raise FockError("degenerate input: zero-norm state")
        return c / norm

    def _raw_coefficients(self, cutoff: int) -> np.ndarray:
        dim = cutoff + 1
        alpha = self.alpha
        if self.kind == "coherent":
            return _coherent_coeffs(alpha, cutoff)
        if self.kind in ("cat_even", "cat_odd"):
            c = _coherent_coeffs(alpha, cutoff)
            start = 0 if self.kind == "cat_even" else 1
            keep = np.zeros(dim, dtype=bool)
            keep[start::2] = True
            return np.where(keep, c, 0)
        if self.kind == "squeezed_vacuum":
            c = np.zeros(dim, dtype=complex)
            c[0] = 1.0
            term = 1.0 + 0j
            t = math.tanh(self.r)
            for m in range(1, cutoff // 2 + 1):
                # ratio of successive even coefficients of the squeezed vacuum
                term *= -np.exp(1j * self.theta) * t * math.sqrt((2 * m - 1) * (2 * m)) / (2 * m)
                c[2 * m] = term
            return c
        if self.kind == "photon_added_coherent":
            base = _coherent_coeffs(alpha, cutoff - 1) if cutoff >= 1 else np.zeros(0, dtype=complex)
            c = np.zeros(dim, dtype=complex)
            for n, cn in enumerate(base):
                c[n + 1] = cn * math.sqrt(n + 1)
            return c
        if self.kind == "fock":
            if self.n > cutoff:
                raise FockError(f"Fock state |{self.n}> exceeds cutoff {cutoff}")
            c = np.zeros(dim, dtype=complex)
            c[self.n] = 1.0
            return c
        c = np.zeros(dim, dtype=complex)
        for n, cn in enumerate(self.coeffs):
            if cn != 0:
                if n > cutoff:
                    raise FockError(f"coefficient on |{n}> exceeds cutoff {cutoff}")
                c[n] = cn
        return c

    def realize(self, cutoff: int, tol: float | None = None) -> MultiModeState:
        return single_mode_from_coeffs(self.coefficient_vector(cutoff, tol), cutoff)


def _coherent_coeffs(alpha: complex, cutoff: int) -> np.ndarray:
    c = np.zeros(cutoff + 1, dtype=complex)
    c[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(cutoff):
        c[n + 1] = c[n] * alpha / math.sqrt(n + 1)
    return c


def _poisson_cdf(mean: float, k: int) -> float:
    term = math.exp(-mean)
    tot = term
    for n in range(k):
        term *= mean / (n + 1)
        tot += term
    return tot


# -- convenience constructors ---------------------------------------------------


def coherent(alpha: complex, cutoff: int, tol: float | None = None) -> MultiModeState:
    return SingleModeSpec("coherent", alpha=alpha).realize(cutoff, tol)


def cat(alpha: complex, parity: str, cutoff: int, tol: float | None = None) -> MultiModeState:
    if parity not in ("even", "odd"):
        raise FockError("parity must be 'even' or 'odd'")
    return SingleModeSpec(f"cat_{parity}", alpha=alpha).realize(cutoff, tol)


def squeezed_vacuum(r: float, theta: float, cutoff: int, tol: float | None = None) -> MultiModeState:
    return SingleModeSpec("squeezed_vacuum", r=r, theta=theta).realize(cutoff, tol)


def photon_added_coherent(alpha: complex, cutoff: int) -> MultiModeState:
    return SingleModeSpec("photon_added_coherent", alpha=alpha).realize(cutoff)


# -- generalized NOON states ------------------------------------------------------


@dataclass(frozen=True)
class NoonState:
    """Two-mode state (|xi>|0> + |0>|xi>)/sqrt(N) with optional sign encoding.

    ``coeffs`` is the realized coefficient vector of |xi>; ``x``/``y`` are the
    encoded input bits (branch signs (-1)^x and (-1)^y).  ``norm_unencoded``
    records N = 2(1 + |c_0|^2) and ``norm_encoded`` the bit-dependent
    N_xy = 2(1 + (-1)^(x+y) |c_0|^2).
    """

    state: MultiModeState
    spec: SingleModeSpec
    coeffs: np.ndarray
    x: int = 0
    y: int = 0
    norm_unencoded: float = 0.0
    norm_encoded: float = 0.0

    @property
    def cutoff(self) -> int:
        return self.state.cutoff


def _noon_state_from_coeffs(coeffs: np.ndarray, cutoff: int, x: int, y: int):
    lam0 = abs(coeffs[0]) ** 2
    sign = 1.0 if (x + y) % 2 == 0 else -1.0
    n_xy = 2.0 * (1.0 + sign * lam0)
    sa, sb = (-1.0) ** x, (-1.0) ** y
    inv = 1.0 / math.sqrt(n_xy)
    amps = {}
    c0 = complex(coeffs[0]) * (sa + sb) * inv
    if c0 != 0:
        amps[(0, 0)] = c0
    for n in range(1, len(coeffs)):
        cn = complex(coeffs[n])
        if cn == 0:
            continue
        amps[(n, 0)] = sa * cn * inv
        amps[(0, n)] = sb * cn * inv
    return MultiModeState(2, cutoff, amps), n_xy


def build_noon(spec: SingleModeSpec, cutoff: int | None = None, tol: float | None = None) -> NoonState:
    """Assemble the generalized NOON state of ``spec`` (inputs not yet encoded).

    The cutoff defaults to the smallest value keeping the tail of |xi| below
    the configured tolerance.  A vacuum-like |xi| is rejected: the assembled
    state would be the product |0,0>.
    """
    if cutoff is None:
        cutoff = spec.min_cutoff(tol)
    coeffs = spec.coefficient_vector(cutoff, tol)
    if abs(coeffs[0]) ** 2 > 1.0 - 1e-12:
        raise FockError("degenerate NOON state: embedded state is the vacuum")
    state, n0 = _noon_state_from_coeffs(coeffs, cutoff, 0, 0)
    return NoonState(state=state, spec=spec, coeffs=coeffs,
                     norm_unencoded=n0, norm_encoded=n0)


def phase_encode(noon: NoonState, x: int, y: int) -> NoonState:
    """Flip the branch signs by (-1)^x and (-1)^y and renormalize.

    Encoding composes bit-wise, so applying the same (x, y) twice returns the
    original state.
    """
    if x not in (0, 1) or y not in (0, 1):
        raise FockError("inputs x, y must be bits")
    nx, ny = noon.x ^ x, noon.y ^ y
    state, n_xy = _noon_state_from_coeffs(noon.coeffs, noon.cutoff, nx, ny)
    return NoonState(state=state, spec=noon.spec, coeffs=noon.coeffs, x=nx, y=ny,
                     norm_unencoded=noon.norm_unencoded, norm_encoded=n_xy)


def average_photon_number(noon: NoonState) -> float:
    """Numerical <N_A + N_B> of the (normalized) NOON state."""
    num = ModeOperator.number(noon.cutoff)
    val = expectation(noon.state, [num, None]) + expectation(noon.state, [None, num])
    return float(val.real)


def embedded_mean_photon(noon: NoonState) -> float:
    """Mean photon number of the embedded single-mode state |xi|."""
    c2 = np.abs(noon.coeffs) ** 2
    return float(np.sum(np.arange(len(c2)) * c2))


def cat_noon_mean_photon_closed_form(alpha: complex) -> float:
    """Closed-form variant for the even-cat NOON mean photon number.

    Kept only as a diagnostic: it follows a different normalization
    convention and disagrees with the numeric expectation on the
    normalized state (e.g. 0.534 vs 0.462 at |alpha|^2 = 1).
    """
    a = abs(alpha) ** 2
    return a / (1.0 + math.exp(-a)) ** 2
