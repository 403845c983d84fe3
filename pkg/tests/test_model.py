import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pairblockade.errors import SingularParameterError
from pairblockade.hilbert import HilbertDims, mode_operators
from pairblockade.model import (
    DissipationParams,
    EffectiveParams,
    MicroscopicParams,
    build_hamiltonian,
    dressed_splittings,
    effective_from_microscopic,
    energy_spectrum,
    interference_optimum,
    paper_defaults,
    validate_regime,
)


def hand_assembled(p, n_max):
    """Element-by-element Hamiltonian from the basis labels, no operator algebra."""
    dims = HilbertDims(n_max, n_max)
    h = np.zeros((dims.total, dims.total), dtype=complex)
    for na, nb, s in dims.labels():
        i = dims.index(na, nb, s)
        h[i, i] = p.delta_a * na + p.delta_b * nb
        if s == "r":
            h[i, i] += p.delta_r - p.u_a * na + p.u_b * nb
            # g a^+ b^+ |na, nb, r> -> |na+1, nb+1, g>
            if na < n_max and nb < n_max:
                j = dims.index(na + 1, nb + 1, "g")
                h[j, i] += p.g * math.sqrt((na + 1) * (nb + 1))
            h[dims.index(na, nb, "g"), i] += p.omega
        else:
            if na < n_max and nb < n_max:
                j = dims.index(na + 1, nb + 1, "g")
                h[j, i] += p.eta * np.exp(-1j * p.theta) * math.sqrt((na + 1) * (nb + 1))
    off = h - np.diag(np.diag(h))
    return np.diag(np.diag(h)) + off + off.conj().T


def test_paper_defaults():
    p, d = paper_defaults()
    assert (p.g, p.omega, d.gamma, d.gamma_d) == (2.0, 0.1, 0.01, 0.01)
    assert d.kappa_a == d.kappa_b == 1.0
    assert p.u_b == pytest.approx(1.0) and p.u_0 == pytest.approx(3.0)
    assert p.u_a * p.u_b == pytest.approx(p.g**2, abs=1e-12)
    assert p.delta_b == p.delta_a and p.delta_r == 2 * p.delta_a
    assert paper_defaults(u_a=2.0)[0].u_0 == 0.0


def test_hamiltonian_matrix_elements(dims5):
    p = paper_defaults()[0].replace(eta=0.3, theta=0.7)
    h = build_hamiltonian(p, dims5).matrix
    i = dims5.index
    assert h[i(1, 1, "g"), i(0, 0, "r")] == pytest.approx(p.g)
    assert h[i(1, 1, "g"), i(0, 0, "g")] == pytest.approx(0.3 * np.exp(-0.7j))


def test_hamiltonian_diagonal_without_couplings(dims5):
    p = paper_defaults()[0].replace(g=0.0, omega=0.0, eta=0.0)
    h = build_hamiltonian(p, dims5).matrix
    assert np.count_nonzero(h - np.diag(np.diag(h))) == 0


@pytest.mark.parametrize("eta,theta", [(0.0, 0.0), (0.0275, -2.86), (0.5, 1.1)])
def test_hamiltonian_matches_hand_assembly(eta, theta):
    p = paper_defaults()[0].replace(eta=eta, theta=theta)
    h = build_hamiltonian(p, HilbertDims(2, 2)).matrix
    assert np.max(np.abs(h - hand_assembled(p, 2))) < 1e-14


params = st.builds(
    EffectiveParams,
    delta_a=st.floats(-5, 5),
    delta_b=st.floats(-5, 5),
    delta_r=st.floats(-5, 5),
    u_a=st.floats(-10, 10),
    u_b=st.floats(-10, 10),
    g=st.floats(-5, 5),
    omega=st.floats(-1, 1),
    eta=st.floats(0, 1),
    theta=st.floats(-math.pi, math.pi),
)


@settings(max_examples=30, deadline=None)
@given(params)
def test_hamiltonian_hermitian_and_pair_symmetric(p):
    dims = HilbertDims(3, 3)
    h = build_hamiltonian(p, dims).matrix
    assert np.max(np.abs(h - h.conj().T)) < 1e-12
    ops = mode_operators(dims)
    diff = (ops.n_a - ops.n_b).matrix
    assert np.max(np.abs(h @ diff - diff @ h)) < 1e-12


def test_effective_mapping():
    m = MicroscopicParams(g_a=1, g_b=1, g_b_prime=0.5, omega_1=0.3, omega_2=0.2, omega_3=0.0,
                          delta_1=-1, delta_2=1, delta_3=50)
    p = effective_from_microscopic(m)
    assert p.g == 1 and p.u_a == 1 and p.u_b == 1
    assert p.eta == 0
    assert p.omega == pytest.approx(0.06)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(-1e3, -1) | st.floats(1, 1e3))
def test_mapping_stark_product(ga, gb, d1):
    m = MicroscopicParams(ga, gb, 1.0, 1.0, 1.0, 1.0, d1, -d1, 100.0, delta_small_a=0.3)
    p = effective_from_microscopic(m)
    assert p.u_a * p.u_b == pytest.approx(p.g**2, rel=1e-12)
    assert p.delta_a == pytest.approx(0.3 + p.u_a)
    if ga == gb:
        assert p.u_a == p.u_b


def test_mapping_rejects_resonance():
    with pytest.raises(SingularParameterError):
        effective_from_microscopic(MicroscopicParams(1, 1, 1, 1, 1, 1, 0.0, 1, 1))
    with pytest.raises(SingularParameterError):
        effective_from_microscopic(MicroscopicParams(1, 1, 1, 1, 1, 1, 1.0, 1, 0.0))


def test_validate_regime():
    deep = MicroscopicParams(1, 1, 1, 1, 1, 1, delta_1=100, delta_2=-100, delta_3=100)
    assert validate_regime(deep) == []
    shallow = MicroscopicParams(1, 1, 1, 0.1, 0.1, 0.1, delta_1=2, delta_2=-100, delta_3=100)
    warnings = validate_regime(shallow)
    assert warnings and all("delta_1" in w for w in warnings)
    same = MicroscopicParams(1, 1, 1, 1, 1, 1, delta_1=100, delta_2=100, delta_3=100)
    assert any("rotating-wave" in w for w in validate_regime(same))


@pytest.mark.parametrize("u0", [-5.0, 0.0, 3.0, 17.0])
def test_vacuum_rabi_splitting(u0):
    p = EffectiveParams(g=2.0, u_a=u0)
    assert dressed_splittings(p, 1) == (2.0, -2.0)


def test_second_manifold_splitting():
    assert dressed_splittings(EffectiveParams(g=2.0), 2) == pytest.approx((4.0, -4.0))
    p, _ = paper_defaults()
    level = energy_spectrum(p, 2)
    assert level.split_plus == pytest.approx((-3 + math.sqrt(73)) / 2, abs=1e-12)
    assert level.split_plus == pytest.approx(2.7720, abs=1e-4)
    assert level.e_plus >= level.e_minus
    with pytest.raises(ValueError):
        energy_spectrum(p, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_spectrum_matches_block_diagonalization(n):
    p = paper_defaults(u_a=6.0, delta_a=0.37)[0]
    dims = HilbertDims(4, 4)
    h = build_hamiltonian(p.replace(omega=0.0, eta=0.0), dims).matrix
    idx = [dims.index(n - 1, n - 1, "r"), dims.index(n, n, "g")]
    evals = np.linalg.eigvalsh(h[np.ix_(idx, idx)])
    level = energy_spectrum(p, n)
    assert evals == pytest.approx([level.e_minus, level.e_plus], abs=1e-10)


def test_interference_optimum_examples():
    p = EffectiveParams(delta_a=1.0, u_a=1.0, g=2.0, omega=0.1)
    theta, eta = interference_optimum(p, DissipationParams(0.0, 0.0, 0.0))
    assert theta == 0 and eta == pytest.approx(0.2 / 3.0)

    d = DissipationParams(1.0, 1.0, 0.01)
    theta, eta = interference_optimum(EffectiveParams(delta_a=0.75, u_a=3.0, g=2.0, omega=0.1), d)
    assert theta == pytest.approx(-math.pi / 2)
    assert eta == pytest.approx(0.2 / 2.01)

    p, d = paper_defaults()
    theta, eta = interference_optimum(p, d)
    assert theta == pytest.approx(-(math.pi - math.atan(2.01 / 7)), abs=1e-12)
    assert theta == pytest.approx(-(math.pi - 0.27962), abs=1e-5)
    assert eta == pytest.approx(0.2 / math.sqrt(49 + 2.01**2), abs=1e-15)
    assert eta == pytest.approx(0.02746, abs=1e-5)


def test_interference_optimum_lossless_pole():
    p = EffectiveParams(delta_a=0.75, u_a=3.0, g=2.0, omega=0.1)
    with pytest.raises(SingularParameterError):
        interference_optimum(p, DissipationParams(0.0, 0.0, 0.0))


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.floats(-10, 10), st.floats(0.1, 5), st.floats(0.01, 1), st.floats(0.1, 10))
def test_interference_optimum_scaling(delta_a, u_a, g, omega, lam):
    d = DissipationParams(1.0, 1.0, 0.01)
    p = EffectiveParams(delta_a=delta_a, u_a=u_a, g=g, omega=omega)
    theta, eta = interference_optimum(p, d)
    theta2, eta2 = interference_optimum(p.replace(g=lam * g, omega=lam * omega), d)
    assert theta2 == theta
    assert eta2 == pytest.approx(lam**2 * eta, rel=1e-12)
    assert -math.pi < theta <= 0 and eta > 0
