import numpy as np
import pytest

from magicswitch import (
    ChoiState,
    DensityOperator,
    KrausChannel,
    apply_channel,
    channel_from_choi,
    choi_of_channel,
    compose_channels,
    depolarizing_channel,
    extend_with_reference,
    identity_channel,
    measure_control,
    noisy_th_channel,
    qutrit_k2_variant_report,
    qutrit_noisy_th_channel,
    unitary_channel,
)
from magicswitch.channels import ChannelCompletenessError, StateValidationError
from magicswitch.gates import HADAMARD, T_GATE, basis_state, plus_state
from magicswitch.linalg import DimensionMismatchError, operators_close, tensor

from conftest import random_density_matrix, random_kraus_channel


class TestDensityOperator:
    def test_pure_and_mixed(self):
        rho = DensityOperator.pure(plus_state(2))
        assert rho.normalized and abs(rho.trace - 1) < 1e-12
        mix = DensityOperator.maximally_mixed(3)
        assert operators_close(mix.matrix, np.eye(3) / 3)

    def test_rejects_non_hermitian(self):
        with pytest.raises(StateValidationError):
            DensityOperator(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            DensityOperator(np.diag([1.5, -0.5]).astype(complex))

    def test_unnormalized_flagged(self):
        rho = DensityOperator(0.25 * np.eye(2), normalized=False)
        renorm, factor = rho.renormalized()
        assert abs(factor - 0.5) < 1e-12
        assert renorm.normalized

    def test_zero_state_allowed_unnormalized(self):
        zero = DensityOperator(np.zeros((2, 2)), normalized=False)
        with pytest.raises(StateValidationError):
            zero.renormalized()

    def test_matrix_is_readonly(self):
        rho = DensityOperator.maximally_mixed(2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 5.0


class TestKrausChannel:
    def test_completeness_validation(self):
        ch = noisy_th_channel(0.3)
        assert ch.is_complete()
        bad = KrausChannel((0.5 * np.eye(2),))
        assert not bad.is_complete()
        with pytest.raises(ChannelCompletenessError):
            bad.validate()

    def test_shape_consistency(self):
        with pytest.raises(DimensionMismatchError):
            KrausChannel((np.eye(2), np.eye(3)))


class TestApplyChannel:
    def test_identity(self, rng):
        rho = DensityOperator(random_density_matrix(3, rng))
        out = apply_channel(identity_channel(3), rho)
        assert out.isclose(rho)

    def test_full_depolarizing_sends_to_mixed(self):
        rho = DensityOperator.pure(basis_state(2, 0))
        out = apply_channel(depolarizing_channel(2, 1.0), rho)
        assert operators_close(out.matrix, np.eye(2) / 2, tol=1e-12)

    def test_noiseless_th_is_unitary(self):
        # At zero reset weight, the only Kraus operator left is T H.
        rho = DensityOperator.pure(plus_state(2))
        out = apply_channel(noisy_th_channel(0.0), rho)
        th = T_GATE @ HADAMARD
        expected = th @ rho.matrix @ th.conj().T
        assert operators_close(out.matrix, expected, tol=1e-12)

    def test_trace_preserved_on_random_channels(self, rng):
        for d in (2, 3):
            ch = random_kraus_channel(d, 3, rng)
            for _ in range(5):
                rho = DensityOperator(random_density_matrix(d, rng))
                out = apply_channel(ch, rho)
                assert abs(out.trace - rho.trace) < 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply_channel(identity_channel(3), DensityOperator.maximally_mixed(2))


class TestChoi:
    def test_identity_choi_is_maximally_entangled(self):
        choi = choi_of_channel(identity_channel(2))
        bell = (basis_state(4, 0) + basis_state(4, 3)) / np.sqrt(2)
        assert operators_close(choi.matrix, np.outer(bell, bell.conj()), tol=1e-12)

    def test_full_depolarizing_choi_is_flat(self):
        choi = choi_of_channel(depolarizing_channel(2, 1.0))
        assert operators_close(choi.matrix, np.eye(4) / 4, tol=1e-12)

    def test_t_gate_choi_rank_one(self):
        # Independent evaluation of the defining sum, element by element.
        expected = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                ket_ij = np.zeros((2, 2), dtype=complex)
                ket_ij[i, j] = 1.0
                expected += tensor(ket_ij, T_GATE @ ket_ij @ T_GATE.conj().T)
        expected /= 2
        choi = choi_of_channel(unitary_channel(T_GATE))
        assert operators_close(choi.matrix, expected, tol=1e-12)
        assert abs(choi.matrix[0, 3] - np.exp(-1j * np.pi / 4) / 2) < 1e-12
        eigs = np.linalg.eigvalsh(choi.matrix)
        assert (eigs > 1e-9).sum() == 1

    def test_choi_rejects_incomplete(self):
        with pytest.raises(ChannelCompletenessError):
            choi_of_channel(KrausChannel((0.3 * T_GATE,)))

    def test_reconstruction_roundtrip(self, rng):
        for d in (2, 3):
            ch = random_kraus_channel(d, 2, rng)
            rebuilt = channel_from_choi(choi_of_channel(ch))
            for _ in range(5):
                rho = DensityOperator(random_density_matrix(d, rng))
                a = apply_channel(ch, rho)
                b = apply_channel(rebuilt, rho)
                assert np.abs(a.matrix - b.matrix).max() < 1e-8

    def test_choistate_validates_marginal(self):
        with pytest.raises(StateValidationError):
            ChoiState(np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex), d_in=2, d_out=2)


class TestMeasureControl:
    def test_plus_control_passthrough(self, rng):
        rho = random_density_matrix(3, rng)
        plus = np.outer(plus_state(2), plus_state(2).conj())
        joint = DensityOperator(tensor(plus, rho))
        branch, prob = measure_control(joint, "plus")
        assert abs(prob - 1.0) < 1e-10
        assert np.abs(branch.matrix - rho).max() < 1e-10

    def test_orthogonal_outcome_vanishes(self, rng):
        rho = random_density_matrix(2, rng)
        minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
        joint = DensityOperator(tensor(np.outer(minus, minus.conj()), rho))
        branch, prob = measure_control(joint, "plus")
        assert prob < 1e-12
        assert np.abs(branch.matrix).max() < 1e-12

    def test_probabilities_sum_to_trace(self, rng):
        mat = random_density_matrix(6, rng)
        joint = DensityOperator(mat)
        _, p_plus = measure_control(joint, "plus")
        _, p_minus = measure_control(joint, "minus")
        assert abs(p_plus + p_minus - 1.0) < 1e-10

    def test_control_in_second_position(self, rng):
        rho = random_density_matrix(2, rng)
        plus = np.outer(plus_state(2), plus_state(2).conj())
        joint = DensityOperator(tensor(rho, plus))
        branch, prob = measure_control(joint, "plus", control_position=1)
        assert abs(prob - 1.0) < 1e-10
        assert np.abs(branch.matrix - rho).max() < 1e-10

    def test_errors(self):
        joint = DensityOperator.maximally_mixed(4)
        with pytest.raises(DimensionMismatchError):
            measure_control(joint, "plus", control_position=2)
        with pytest.raises(ValueError):
            measure_control(joint, "sideways")
        with pytest.raises(DimensionMismatchError):
            measure_control(DensityOperator.maximally_mixed(3), "plus")


class TestChannelZoo:
    def test_depolarizing_action_over_full_range(self, rng):
        for d in (2, 3):
            p_max = d * d / (d * d - 1)
            for p in (0.0, 0.4, 1.0, p_max):
                ch = depolarizing_channel(d, p)
                ch.validate()
                rho = random_density_matrix(d, rng)
                out = apply_channel(ch, DensityOperator(rho))
                expected = p * np.eye(d) / d + (1 - p) * rho
                assert np.abs(out.matrix - expected).max() < 1e-12

    def test_depolarizing_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            depolarizing_channel(2, 1.5)

    def test_noisy_th_complete_for_all_p(self):
        for p in np.linspace(0, 1, 11):
            assert noisy_th_channel(p).completeness_residual() < 1e-12

    def test_qutrit_variants(self):
        report = qutrit_k2_variant_report(0.4)
        assert report["selected"] == "aligned"
        assert report["aligned"] < 1e-12
        assert report["cross"] > 1e-3
        qutrit_noisy_th_channel(0.4).validate()
        with pytest.raises(ChannelCompletenessError):
            qutrit_noisy_th_channel(0.4, k2_variant="cross").validate()

    def test_compose_and_extend(self, rng):
        seq = compose_channels(unitary_channel(HADAMARD), unitary_channel(T_GATE))
        rho = DensityOperator(random_density_matrix(2, rng))
        ht = HADAMARD @ T_GATE
        assert operators_close(
            apply_channel(seq, rho).matrix, ht @ rho.matrix @ ht.conj().T, tol=1e-12
        )
        ext = extend_with_reference(unitary_channel(T_GATE), 2)
        assert ext.d_in == 4
        ext.validate()

    def test_two_depolarizing_passes_compose_strengths(self, rng):
        # D_q after D_p acts like a single pass with strength p + q - p q.
        p, q = 0.3, 0.45
        seq = compose_channels(depolarizing_channel(2, q), depolarizing_channel(2, p))
        rho = random_density_matrix(2, rng)
        out = apply_channel(seq, DensityOperator(rho))
        eff = p + q - p * q
        expected = eff * np.eye(2) / 2 + (1 - eff) * rho
        assert np.abs(out.matrix - expected).max() < 1e-12
