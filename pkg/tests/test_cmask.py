import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmask import cmask
from qmask.qcore import bell_projection, bell_states, maximally_mixed, partial_trace, density_of, trace_distance

S = 1 / np.sqrt(2)
PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS = bell_states()


def test_encode_bit_values():
    assert np.allclose(cmask.encode_bit(0), S * np.array([1, 0, 0, 1]))
    assert np.allclose(cmask.encode_bit(1), S * np.array([1, 0, 0, -1]))
    with pytest.raises(ValueError):
        cmask.encode_bit(2)


@pytest.mark.parametrize("bit", [0, 1])
@pytest.mark.parametrize("keep", ["A", "B"])
def test_encoded_marginals_are_maximally_mixed(bit, keep):
    rho = partial_trace(density_of(cmask.encode_bit(bit)), keep)
    assert np.max(np.abs(rho - maximally_mixed(2))) <= 1e-12


@pytest.mark.parametrize("keep", ["A", "B"])
def test_marginals_independent_of_bit(keep):
    r0 = partial_trace(density_of(cmask.encode_bit(0)), keep)
    r1 = partial_trace(density_of(cmask.encode_bit(1)), keep)
    assert trace_distance(r0, r1) <= 1e-12


def test_mask_string_examples():
    assert len(cmask.mask_string("")) == 0
    r = cmask.mask_string("01")
    assert np.allclose(r[0], PHI_PLUS) and np.allclose(r[1], PHI_MINUS)
    assert all(np.allclose(p, PHI_MINUS) for p in cmask.mask_string("111"))
    with pytest.raises(ValueError, match="position 2"):
        cmask.mask_string("01x")


def test_decode_bit_examples():
    assert cmask.decode_bit(PHI_PLUS) == 0
    assert cmask.decode_bit(PHI_MINUS) == 1
    with pytest.raises(cmask.AmbiguousState) as info:
        cmask.decode_bit([1, 0, 0, 0], tol=1e-6)
    assert np.allclose(info.value.probabilities, [0.5, 0.5, 0, 0])


@pytest.mark.parametrize("b", [0, 1])
def test_decode_inverts_encode(b):
    assert cmask.decode_bit(cmask.encode_bit(b)) == b


def test_unmask_round_trip_examples():
    assert cmask.unmask_string(cmask.mask_string("01")) == "01"
    rng = np.random.default_rng(7)
    bits = "".join(map(str, rng.integers(0, 2, 64)))
    assert cmask.unmask_string(cmask.mask_string(bits)) == bits


def test_unmask_reports_tampered_position():
    r = cmask.mask_string("0110").replace(2, np.array([1, 0, 0, 0], dtype=complex))
    with pytest.raises(cmask.AmbiguousState) as info:
        cmask.unmask_string(r)
    assert info.value.position == 2
    assert "position 2" in str(info.value)


@settings(max_examples=100)
@given(st.text(alphabet="01", max_size=256))
def test_round_trip_property(bits):
    assert cmask.unmask_string(cmask.mask_string(bits), 1e-9) == bits


@settings(max_examples=50)
@given(st.text(alphabet="01", min_size=1, max_size=64))
def test_honest_pairs_stay_in_phi_span(bits):
    for pair in cmask.mask_string(bits):
        probs = bell_projection(pair)
        assert probs[2] + probs[3] <= 1e-12
    assert cmask.is_honest(cmask.mask_string(bits))


def test_marginal_audit_examples():
    assert cmask.marginal_audit(cmask.mask_string("0110")) <= 1e-12
    # Oracle: |00> has marginal |0><0|; eigenvalues of |0><0| - I/2 are +-1/2.
    expected = 0.5 * np.abs(np.linalg.eigvalsh(np.diag([1.0, 0.0]) - np.eye(2) / 2)).sum()
    assert cmask.marginal_audit([np.array([1, 0, 0, 0], dtype=complex)]) == pytest.approx(expected, abs=1e-15)
    assert cmask.marginal_audit(cmask.mask_string("")) == 0.0


@settings(max_examples=50)
@given(st.text(alphabet="01", max_size=128))
def test_marginal_audit_honest(bits):
    assert cmask.marginal_audit(cmask.mask_string(bits)) <= 1e-12


def test_register_json_round_trip():
    r = cmask.mask_string("1001")
    back = cmask.MaskedRegister.from_json(r.to_json())
    assert cmask.unmask_string(back) == "1001"


def test_register_rejects_bad_pairs():
    with pytest.raises(ValueError, match="dimension"):
        cmask.MaskedRegister((np.array([1, 0], dtype=complex),))
    with pytest.raises(ValueError, match="normalized"):
        cmask.MaskedRegister((np.array([1, 0, 0, 1], dtype=complex),))


def test_leakage_detects_psi_components():
    assert cmask.leakage(PSI_PLUS) == pytest.approx(1.0)
    assert not cmask.is_honest(cmask.MaskedRegister((PHI_PLUS, PSI_MINUS)))
