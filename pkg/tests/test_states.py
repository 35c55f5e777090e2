import math

import numpy as np
import pytest

from fockcomm import fock, states
from fockcomm.fock import FockError, ModeOperator
from fockcomm.states import SingleModeSpec


def mean_photon(state):
    return fock.expectation(state, [ModeOperator.number(state.cutoff)]).real


def test_coherent_zero_is_vacuum():
    assert states.coherent(0.0, cutoff=4).amplitudes == {(0,): 1.0 + 0j}


def test_coherent_mean_photon():
    st = states.coherent(1.0, cutoff=30)
    assert mean_photon(st) == pytest.approx(1.0, abs=1e-10)


def test_coherent_coefficient_ratio():
    # lambda_2 / lambda_1 = alpha / sqrt(2) = 1/sqrt(2) at alpha = 1
    st = states.coherent(1.0, cutoff=30)
    ratio = st.amplitude((2,)) / st.amplitude((1,))
    assert ratio == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)


def test_coherent_cutoff_insufficiency():
    with pytest.raises(FockError, match="cutoff"):
        states.coherent(2.0, cutoff=10)


def test_cat_even_small_alpha_limit():
    st = states.cat(1e-8, "even", cutoff=4)
    assert abs(st.amplitude((0,))) == pytest.approx(1.0, abs=1e-12)


def test_cat_even_mean_photon():
    # number-operator expectation oracle: <n> = a tanh(a), a = |alpha|^2
    st = states.cat(1.0, "even", cutoff=30)
    assert mean_photon(st) == pytest.approx(math.tanh(1.0), abs=1e-10)


def test_cat_odd_has_no_even_support():
    st = states.cat(1.3, "odd", cutoff=40)
    assert all(n % 2 == 1 for (n,) in st.amplitudes)


def test_cat_odd_zero_alpha_rejected():
    with pytest.raises(FockError, match="zero norm"):
        SingleModeSpec("cat_odd", alpha=0.0)


def test_squeezed_r0_is_vacuum():
    st = states.squeezed_vacuum(0.0, 0.0, cutoff=4)
    assert st.amplitudes == {(0,): 1.0 + 0j}


def test_squeezed_mean_photon():
    spec = SingleModeSpec("squeezed_vacuum", r=0.7)
    st = spec.realize(spec.min_cutoff())
    assert mean_photon(st) == pytest.approx(math.sinh(0.7) ** 2, abs=1e-9)


def test_squeezed_even_support_only():
    spec = SingleModeSpec("squeezed_vacuum", r=0.9, theta=1.1)
    st = spec.realize(spec.min_cutoff())
    assert all(n % 2 == 0 for (n,) in st.amplitudes)


def test_photon_added_zero_alpha_is_one_photon():
    st = states.photon_added_coherent(0.0, cutoff=4)
    assert st.amplitudes == {(1,): pytest.approx(1.0)}


def test_photon_added_no_vacuum_component():
    st = states.photon_added_coherent(1.0, cutoff=25)
    assert st.amplitude((0,)) == 0


def test_photon_added_mean_photon():
    # brute-force cross-check value (a^2 + 3a + 1)/(1 + a) at a = 1
    spec = SingleModeSpec("photon_added_coherent", alpha=1.0)
    st = spec.realize(spec.min_cutoff())
    assert mean_photon(st) == pytest.approx(2.5, abs=1e-9)


def test_tail_mass_matches_realized_norm():
    for spec in (SingleModeSpec("coherent", alpha=1.3),
                 SingleModeSpec("cat_even", alpha=1.1),
                 SingleModeSpec("cat_odd", alpha=0.8),
                 SingleModeSpec("squeezed_vacuum", r=0.8),
                 SingleModeSpec("photon_added_coherent", alpha=1.2)):
        cutoff = spec.min_cutoff(1e-6)
        raw = spec._raw_coefficients(cutoff + 30)
        kept = float(np.sum(np.abs(raw[:cutoff + 1]) ** 2))
        total = float(np.sum(np.abs(raw) ** 2))
        assert spec.tail_mass(cutoff) == pytest.approx(1.0 - kept / total, abs=1e-9)


def test_min_cutoff_honors_env_override(monkeypatch):
    spec = SingleModeSpec("coherent", alpha=1.0)
    tight = spec.min_cutoff()
    monkeypatch.setenv("FOCKCOMM_CUTOFF_TOL", "1e-4")
    loose = spec.min_cutoff()
    assert loose < tight


# -- generalized NOON states -------------------------------------------------------


def test_build_noon_single_photon():
    noon = states.build_noon(SingleModeSpec("fock", n=1))
    amp = 1.0 / math.sqrt(2.0)
    assert noon.state.amplitude((1, 0)) == pytest.approx(amp)
    assert noon.state.amplitude((0, 1)) == pytest.approx(amp)
    assert noon.norm_unencoded == pytest.approx(2.0)


def test_build_noon_cat_even_structure():
    alpha = 1.0
    noon = states.build_noon(SingleModeSpec("cat_even", alpha=alpha))
    # branch amplitudes proportional to the embedded cat coefficients
    c = noon.coeffs
    for n in range(2, noon.cutoff + 1, 2):
        assert noon.state.amplitude((n, 0)) == pytest.approx(noon.state.amplitude((0, n)))
        ratio = noon.state.amplitude((n, 0)) / noon.state.amplitude((2, 0))
        assert ratio == pytest.approx(c[n] / c[2], abs=1e-12)
    assert abs(noon.norm_unencoded - 2.0 * (1.0 + abs(c[0]) ** 2)) < 1e-12


def test_build_noon_qubit_amplitudes():
    # |psi_1 0> + |0 psi_1> at lambda = 0.5, normalized by hand:
    # amplitudes (2 sqrt(.5), sqrt(.5) e^(i phi), sqrt(.5) e^(i phi)) / sqrt(3)
    phi = 0.4
    coeffs = (math.sqrt(0.5), np.exp(1j * phi) * math.sqrt(0.5))
    noon = states.build_noon(SingleModeSpec("finite_superposition", coeffs=coeffs))
    assert noon.state.amplitude((0, 0)) == pytest.approx(2.0 * math.sqrt(0.5) / math.sqrt(3.0))
    expect = np.exp(1j * phi) * math.sqrt(0.5) / math.sqrt(3.0)
    assert noon.state.amplitude((1, 0)) == pytest.approx(expect)
    assert noon.state.amplitude((0, 1)) == pytest.approx(expect)


def test_build_noon_rejects_vacuum():
    with pytest.raises(FockError, match="degenerate"):
        states.build_noon(SingleModeSpec("fock", n=0))
    with pytest.raises(FockError, match="degenerate"):
        states.build_noon(SingleModeSpec("cat_even", alpha=0.0))


def test_noon_support_structure():
    for spec in (SingleModeSpec("cat_even", alpha=1.2),
                 SingleModeSpec("cat_odd", alpha=0.9),
                 SingleModeSpec("squeezed_vacuum", r=0.8),
                 SingleModeSpec("photon_added_coherent", alpha=0.7),
                 SingleModeSpec("coherent", alpha=1.0)):
        noon = states.build_noon(spec)
        assert all(n == 0 or m == 0 for (n, m) in noon.state.amplitudes)
        assert noon.state.is_normalized(1e-10)


def test_phase_encode_identity_bits():
    noon = states.build_noon(SingleModeSpec("cat_even", alpha=0.9))
    enc = states.phase_encode(noon, 0, 0)
    assert enc.state.amplitudes == noon.state.amplitudes


def test_phase_encode_global_sign_flip():
    noon = states.build_noon(SingleModeSpec("cat_even", alpha=0.9))
    enc = states.phase_encode(noon, 1, 1)
    for occ, amp in noon.state.amplitudes.items():
        assert enc.state.amplitude(occ) == pytest.approx(-amp)
    assert enc.norm_encoded == pytest.approx(noon.norm_encoded)


def test_phase_encode_antisymmetric_kills_vacuum():
    alpha = 0.9
    a = alpha ** 2
    noon = states.build_noon(SingleModeSpec("cat_even", alpha=alpha))
    enc = states.phase_encode(noon, 0, 1)
    assert enc.state.amplitude((0, 0)) == 0
    # branch scaling of the mixed encoding: amplitude(2n, 0) relates to the
    # bare cat expansion through e^(-a/2) / (1 - e^(-a))
    scale = math.exp(-a / 2.0) / (1.0 - math.exp(-a))
    for n in (2, 4):
        bare = alpha ** n / math.sqrt(math.factorial(n))
        assert enc.state.amplitude((n, 0)) == pytest.approx(scale * bare, rel=1e-10)
        assert enc.state.amplitude((0, n)) == pytest.approx(-scale * bare, rel=1e-10)
    lam0 = abs(noon.coeffs[0]) ** 2
    assert enc.norm_encoded == pytest.approx(2.0 * (1.0 - lam0))


def test_phase_encode_involution():
    noon = states.build_noon(SingleModeSpec("photon_added_coherent", alpha=0.8))
    for x, y in ((0, 1), (1, 0), (1, 1)):
        twice = states.phase_encode(states.phase_encode(noon, x, y), x, y)
        keys = set(noon.state.amplitudes) | set(twice.state.amplitudes)
        assert all(abs(noon.state.amplitude(k) - twice.state.amplitude(k)) < 1e-12 for k in keys)


def test_average_photon_single_photon_noon():
    noon = states.build_noon(SingleModeSpec("fock", n=1))
    assert states.average_photon_number(noon) == pytest.approx(1.0, abs=1e-12)


def test_average_photon_cat_noon():
    # independent derivation: <N> = <n>_cat / (1 + |c0|^2) with
    # <n>_cat = tanh(1) and |c0|^2 = 2 e^(-1) / (1 + e^(-2))
    noon = states.build_noon(SingleModeSpec("cat_even", alpha=1.0))
    lam0 = 2.0 * math.exp(-1.0) / (1.0 + math.exp(-2.0))
    expect = math.tanh(1.0) / (1.0 + lam0)
    val = states.average_photon_number(noon)
    assert val == pytest.approx(expect, abs=1e-9)
    assert val == pytest.approx(0.462117157, abs=1e-6)
    # the quoted closed form follows another convention and disagrees
    assert states.cat_noon_mean_photon_closed_form(1.0) == pytest.approx(0.534, abs=1e-3)


def test_average_photon_scalar_multiple_of_embedded():
    for spec in (SingleModeSpec("cat_even", alpha=1.0),
                 SingleModeSpec("squeezed_vacuum", r=0.6),
                 SingleModeSpec("finite_superposition", coeffs=(0.6, 0.8))):
        noon = states.build_noon(spec)
        base = states.embedded_mean_photon(noon)
        lam0 = abs(noon.coeffs[0]) ** 2
        for x in (0, 1):
            for y in (0, 1):
                enc = states.phase_encode(noon, x, y)
                ratio = states.average_photon_number(enc) / base
                assert ratio == pytest.approx(1.0 / (1.0 + (-1.0) ** (x + y) * lam0), abs=1e-10)


def test_squeezed_noon_average_photon_proportional():
    # ratio against the embedded state's mean photon number across r values
    for r in (0.2, 0.45, 0.7, 0.95, 1.2):
        spec = SingleModeSpec("squeezed_vacuum", r=r)
        noon = states.build_noon(spec)
        ratio = states.average_photon_number(noon) / math.sinh(r) ** 2
        lam0 = abs(noon.coeffs[0]) ** 2
        assert ratio == pytest.approx(1.0 / (1.0 + lam0), abs=1e-9)
