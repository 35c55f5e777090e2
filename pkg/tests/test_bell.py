import cmath
import math

import numpy as np
import pytest

from fockcomm import bell, fock, states
from fockcomm.bell import BellSettings
from fockcomm.fock import FockError
from fockcomm.states import SingleModeSpec


def noon_state(spec, r):
    cutoff = bell.bell_cutoff(spec, r)
    return states.build_noon(spec, cutoff=cutoff).state


# closed-form correlators via coherent-state overlap algebra; used as the
# analytic oracle for the numeric operator route (printed variants of these
# carry transcription errors, see the repository notes)

def cat_noon_correlators(alpha, beta1, beta2):
    a = abs(alpha) ** 2
    d = 2.0 * (1.0 + math.exp(-2.0 * a))
    lam0 = 2.0 * math.exp(-a / 2.0) / math.sqrt(d)
    n2 = 4.0 * (1.0 + math.exp(-a)) ** 2 / d

    def k_of(beta):
        return 2.0 * cmath.exp(-(abs(beta) ** 2 + a) / 2.0) \
            * cmath.cosh(np.conj(beta) * alpha) / math.sqrt(d)

    k1, k2 = k_of(beta1), k_of(beta2)
    b1, b2 = abs(beta1) ** 2, abs(beta2) ** 2
    m00 = (4.0 * lam0 ** 2 - 4.0) / n2 + 1.0

    def m01(kk, bb):
        return (4.0 * lam0 ** 2 * math.exp(-bb) + 2.0 * abs(kk) ** 2
                + 4.0 * lam0 * math.exp(-bb / 2.0) * kk.real
                - 2.0 - 6.0 * lam0 ** 2 - 2.0 * math.exp(-bb)) / n2 + 1.0

    both = abs(k1 * math.exp(-b2 / 2.0) + k2 * math.exp(-b1 / 2.0)) ** 2
    single1 = abs(k1) ** 2 + math.exp(-b1) + 2.0 * lam0 * math.exp(-b1 / 2.0) * k1.real
    single2 = abs(k2) ** 2 + math.exp(-b2) + 2.0 * lam0 * math.exp(-b2 / 2.0) * k2.real
    m11 = (4.0 * both - 2.0 * single1 - 2.0 * single2) / n2 + 1.0
    return {(0, 0): m00, (0, 1): m01(k2, b2), (1, 0): m01(k1, b1), (1, 1): m11}


def photon_added_noon_correlators(alpha, beta1, beta2):
    a = abs(alpha) ** 2

    def w_of(beta):
        return (abs(beta) ** 2 * math.exp(-(a + abs(beta) ** 2))
                * math.exp(2.0 * (np.conj(alpha) * beta).real) / (1.0 + a))

    b1, b2 = abs(beta1) ** 2, abs(beta2) ** 2
    w1, w2 = w_of(beta1), w_of(beta2)
    cross = (4.0 * (np.conj(beta1) * beta2
                    * cmath.exp(alpha * np.conj(beta1) + np.conj(alpha) * beta2)).real
             * math.exp(-a - b1 - b2) / (1.0 + a))
    m11 = (2.0 * w1 * math.exp(-b2) + 2.0 * w2 * math.exp(-b1) + cross
           - math.exp(-b1) - math.exp(-b2) - w1 - w2 + 1.0)
    return {(0, 0): -1.0,
            (0, 1): w2 - math.exp(-b2),
            (1, 0): w1 - math.exp(-b1),
            (1, 1): m11}


def test_displacement_measurement_at_zero():
    m = bell.displacement_measurement(0j, 6)
    expect = -np.eye(7)
    expect[0, 0] = 1.0
    assert np.max(np.abs(m.matrix - expect)) < 1e-12


def test_displacement_measurement_trace_and_square():
    cutoff = 18
    m = bell.displacement_measurement(0.5 + 0.2j, cutoff)
    assert np.trace(m.matrix).real == pytest.approx(2.0 - (cutoff + 1))
    assert np.max(np.abs(m.matrix @ m.matrix - np.eye(cutoff + 1))) < 1e-10


def test_displacement_measurement_cutoff_insufficiency():
    with pytest.raises(FockError, match="cutoff"):
        bell.displacement_measurement(2.0 + 0j, 8)


def test_settings_validation():
    with pytest.raises(FockError):
        BellSettings(-0.1)
    s = BellSettings(0.3, 0.5, 1.0)
    assert s.beta1 == pytest.approx(0.3 * np.exp(0.5j))


def test_bell_value_zero_correlators():
    corr = {v: 0.0 for v in ((0, 0), (0, 1), (1, 0), (1, 1))}
    assert bell.bell_value(corr) == 0.0


def test_bell_value_two_mode_vacuum_local():
    st = fock.vacuum(2, 12)
    res = bell.evaluate(st, BellSettings(0.4, 0.3, 1.2))
    assert res.i_value <= 1.0 + 1e-12


def test_single_photon_m00_is_minus_one():
    st = noon_state(SingleModeSpec("fock", n=1), 0.1)
    corr = bell.correlators(st, BellSettings(0.1, 0.2, 0.9))
    assert corr[(0, 0)] == pytest.approx(-1.0, abs=1e-12)


def test_photon_added_m00_is_minus_one():
    st = noon_state(SingleModeSpec("photon_added_coherent", alpha=0.9), 0.2)
    corr = bell.correlators(st, BellSettings(0.2, 1.0, 2.0))
    assert corr[(0, 0)] == pytest.approx(-1.0, abs=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_cat_correlators_match_closed_form(seed):
    rng = np.random.default_rng(seed)
    alpha = float(rng.uniform(0.4, 1.2))
    r = float(rng.uniform(0.02, 0.8))
    p1, p2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
    spec = SingleModeSpec("cat_even", alpha=alpha)
    settings = BellSettings(r, float(p1), float(p2))
    st = noon_state(spec, r)
    numeric = bell.correlators(st, settings)
    closed = cat_noon_correlators(alpha, settings.beta1, settings.beta2)
    for v in numeric:
        assert numeric[v] == pytest.approx(closed[v], abs=1e-8)


@pytest.mark.parametrize("seed", range(10))
def test_photon_added_correlators_match_closed_form(seed):
    rng = np.random.default_rng(100 + seed)
    alpha = float(rng.uniform(0.3, 1.3))
    r = float(rng.uniform(0.02, 0.8))
    p1, p2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
    spec = SingleModeSpec("photon_added_coherent", alpha=alpha)
    settings = BellSettings(r, float(p1), float(p2))
    st = noon_state(spec, r)
    numeric = bell.correlators(st, settings)
    closed = photon_added_noon_correlators(alpha, settings.beta1, settings.beta2)
    for v in numeric:
        assert numeric[v] == pytest.approx(closed[v], abs=1e-8)


def test_even_cat_reference_point_closed_form():
    # r = 0.1, |alpha|^2 = 0.64: every correlator against the analytic oracle
    spec = SingleModeSpec("cat_even", alpha=0.8)
    settings = BellSettings(0.1, 0.7, 2.1)
    st = noon_state(spec, 0.1)
    numeric = bell.correlators(st, settings)
    closed = cat_noon_correlators(0.8, settings.beta1, settings.beta2)
    for v in numeric:
        assert numeric[v] == pytest.approx(closed[v], abs=1e-8)


def test_result_validation():
    st = noon_state(SingleModeSpec("fock", n=1), 0.1)
    res = bell.evaluate(st, BellSettings(0.1, 0.0, 0.0))
    res.validate()
    assert res.i_value == pytest.approx(bell.bell_value(res.correlators))


@pytest.mark.slow
def test_product_states_respect_local_bound():
    rng = np.random.default_rng(21)
    cutoff = 16
    worst = 0.0
    for _ in range(500):
        c1 = rng.normal(size=3) + 1j * rng.normal(size=3)
        c2 = rng.normal(size=3) + 1j * rng.normal(size=3)
        st = fock.tensor_product([fock.single_mode_from_coeffs(c1, cutoff),
                                  fock.single_mode_from_coeffs(c2, cutoff)]).normalize()
        settings = BellSettings(float(rng.uniform(0, 0.6)),
                                float(rng.uniform(0, 2 * math.pi)),
                                float(rng.uniform(0, 2 * math.pi)))
        worst = max(worst, bell.evaluate(st, settings).i_value)
    assert worst <= 1.0 + 1e-9
