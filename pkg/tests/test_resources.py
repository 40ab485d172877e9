import numpy as np
import pytest

from qirc import channels, resources, states
from qirc.generators import (CoherenceGenerator, default_generator,
                             diagonal_generator, sigma_z_generator)
from qirc.resources import (OptimizerSettings, ProfileConfig, coord_q1,
                            coord_q2, coord_q3, fq_max,
                            fully_entangled_fraction,
                            induced_transfer_channel, profile,
                            quantum_fisher_information, resource_norm,
                            teleportation_fidelity)
from qirc.states import DensityMatrix, Seed

from conftest import fmax_two_qubit_oracle, random_density, random_hermitian


def bell_overlap(rho: DensityMatrix) -> float:
    v = states.max_entangled_ket(rho.dims[0])
    return float((v.conj() @ rho.matrix @ v).real)


class TestFullyEntangledFraction:
    def test_bell_is_one(self):
        f, u = fully_entangled_fraction(states.bell_pair())
        assert np.isclose(f, 1.0, atol=1e-12)
        assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-10)

    def test_maximally_mixed_constant_objective(self):
        f, _ = fully_entangled_fraction(states.maximally_mixed(4, dims=(2, 2)))
        assert np.isclose(f, 0.25, atol=1e-12)

    @pytest.mark.parametrize("p", [0.0, 0.25, 1 / 3, 0.5, 0.8, 1.0])
    def test_werner_closed_form(self, p):
        # oracle: the Bell overlap p + (1-p)/4 is already optimal at U = I
        f, _ = fully_entangled_fraction(states.werner(p))
        assert np.isclose(f, (3 * p + 1) / 4, atol=1e-9)

    def test_matches_exact_two_qubit_oracle(self):
        worst = 0.0
        for i in range(60):
            if i % 2:
                rho = states.haar_pure((2, 2), Seed(31, i))
            else:
                rho = states.ginibre_mixed(4, 1 + i % 4, Seed(31, i)).reshaped((2, 2))
            f, _ = fully_entangled_fraction(rho)
            worst = max(worst, abs(f - fmax_two_qubit_oracle(rho.matrix)))
        assert worst <= 1e-9

    def test_never_below_identity_overlap_or_floor(self):
        for i in range(30):
            rho = states.ginibre_mixed(4, 1 + i % 4, Seed(32, i)).reshaped((2, 2))
            f, _ = fully_entangled_fraction(rho)
            assert f >= max(bell_overlap(rho), 1 / 4) - 1e-12

    def test_returned_unitary_reproduces_value(self):
        rho = states.haar_pure((2, 2), Seed(33, 0))
        f, u = fully_entangled_fraction(rho)
        v = states.max_entangled_ket(2)
        big = np.kron(u, np.eye(2))
        assert np.isclose((v.conj() @ big @ rho.matrix @ big.conj().T @ v).real, f,
                          atol=1e-12)

    def test_powell_agrees_with_power(self):
        rho = states.ginibre_mixed(4, 2, Seed(33, 1)).reshaped((2, 2))
        f_fast, _ = fully_entangled_fraction(rho)
        f_slow, _ = fully_entangled_fraction(
            rho, OptimizerSettings(starts=4, method="powell", max_iter=200))
        assert abs(f_fast - f_slow) <= 1e-6

    def test_exhaustive_random_search_never_beats_it(self):
        # brute force over many unoptimized unitaries stays below the result
        rho = states.ginibre_mixed(4, 3, Seed(33, 2)).reshaped((2, 2))
        f, _ = fully_entangled_fraction(rho)
        v = states.max_entangled_ket(2)
        best = 0.0
        for i in range(2000):
            u = np.kron(states.haar_unitary(2, Seed(34, i)), np.eye(2))
            best = max(best, (v.conj() @ u @ rho.matrix @ u.conj().T @ v).real)
        assert best <= f + 1e-9

    def test_rejects_unequal_dims(self):
        rho = states.maximally_mixed(6, dims=(2, 3))
        with pytest.raises(ValueError):
            fully_entangled_fraction(rho)

    def test_d3_upper_bound_and_floor(self):
        rho = states.ginibre_mixed(9, 4, Seed(35, 0)).reshaped((3, 3))
        f, _ = fully_entangled_fraction(rho)
        top = float(np.linalg.eigvalsh(rho.matrix).max())
        assert 1 / 9 - 1e-12 <= f <= top + 1e-9


class TestTeleportationFidelity:
    def test_perfect_resource(self):
        assert np.isclose(teleportation_fidelity(1.0, 2), 1.0)

    def test_floor_resource(self):
        assert np.isclose(teleportation_fidelity(0.25, 2), 0.5)

    @pytest.mark.parametrize("p", np.linspace(0, 1, 7))
    def test_werner_chain(self, p):
        f = (3 * p + 1) / 4
        assert np.isclose(teleportation_fidelity(f, 2), (p + 1) / 2)

    def test_rejects_small_d(self):
        with pytest.raises(ValueError):
            teleportation_fidelity(0.5, 1)


class TestCoordQ1:
    def test_bell(self):
        q1, raw = coord_q1(states.bell_pair())
        assert np.isclose(q1, 1.0, atol=1e-9)
        assert np.isclose(raw, 1.0, atol=1e-9)

    def test_werner_threshold(self):
        q1, raw = coord_q1(states.werner(1 / 3))
        assert abs(raw) <= 1e-9
        assert q1 <= 1e-9

    def test_products_have_no_advantage(self):
        for i in range(10):
            a = states.ginibre_mixed(2, 1 + i % 2, Seed(36, 2 * i))
            b = states.ginibre_mixed(2, 1 + (i + 1) % 2, Seed(36, 2 * i + 1))
            q1, raw = coord_q1(states.compose_product(a, b))
            assert q1 == 0.0
            assert raw <= 1e-9

    def test_local_unitary_invariance(self):
        for i in range(8):
            rho = states.ginibre_mixed(4, 2, Seed(37, i)).reshaped((2, 2))
            u_a = states.haar_unitary(2, Seed(38, 2 * i))
            u_b = states.haar_unitary(2, Seed(38, 2 * i + 1))
            big = np.kron(u_a, u_b)
            rotated = DensityMatrix(big @ rho.matrix @ big.conj().T, (2, 2))
            q1, _ = coord_q1(rho)
            q1_rot, _ = coord_q1(rotated)
            assert abs(q1 - q1_rot) <= 1e-6


class TestInducedTransferChannel:
    def test_bell_gives_identity_channel(self):
        ch = induced_transfer_channel(states.bell_pair())
        c = channels.choi(ch).state
        assert np.abs(c.matrix - states.bell_pair().matrix).max() <= 1e-9

    def test_product_gives_replacement(self):
        sigma = DensityMatrix(np.diag([0.7, 0.3]).astype(complex), (2,))
        rho = states.compose_product(states.maximally_mixed(2), sigma)
        ch = induced_transfer_channel(rho.reshaped((2, 2)))
        c = channels.choi(ch).state
        assert np.abs(c.matrix - np.kron(np.eye(2) / 2, sigma.matrix)).max() <= 1e-9

    def test_classical_gives_dephase_and_copy(self):
        rho_ac = states.classical_correlated(2).marginal([0, 2])
        ch = induced_transfer_channel(rho_ac)
        c = channels.choi(ch).state
        assert np.abs(c.matrix - np.diag([0.5, 0, 0, 0.5])).max() <= 1e-9

    def test_cptp_for_rank_deficient_marginal(self):
        # pure product input leaves rho_A rank one; completion must keep CPTP
        rho = states.compose_product(states.basis_state(2, 0),
                                     states.plus_state())
        ch = induced_transfer_channel(rho.reshaped((2, 2)))
        total = sum(k.conj().T @ k for k in ch.kraus)
        assert np.linalg.norm(total - np.eye(2)) <= 1e-10

    def test_cptp_for_random_states(self):
        for i in range(10):
            rho = states.ginibre_mixed(4, 1 + i % 4, Seed(39, i)).reshaped((2, 2))
            ch = induced_transfer_channel(rho)
            total = sum(k.conj().T @ k for k in ch.kraus)
            assert np.linalg.norm(total - np.eye(2)) <= 1e-10


class TestCoordQ2:
    def test_bell_transfer(self):
        q2, raw = coord_q2(states.bell_pair())
        assert np.isclose(q2, 1.0, atol=1e-9)

    def test_product_transfer_is_zero(self):
        rho = states.compose_product(states.maximally_mixed(2),
                                     states.maximally_mixed(2)).reshaped((2, 2))
        q2, raw = coord_q2(rho)
        assert q2 == 0.0
        assert raw < 0

    def test_classical_uhlmann_marginal(self):
        rho_ac = states.classical_correlated(2).marginal([0, 2])
        q2, raw = coord_q2(rho_ac, mode="uhlmann-marginal")
        assert np.isclose(q2, 1.0, atol=1e-9)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            coord_q2(states.bell_pair(), mode="nope")


class TestQuantumFisherInformation:
    def test_maximally_mixed_is_exactly_zero(self):
        g = sigma_z_generator()
        assert quantum_fisher_information(states.maximally_mixed(2), g) == 0.0

    def test_plus_state(self):
        g = sigma_z_generator()
        assert np.isclose(quantum_fisher_information(states.plus_state(), g), 4.0,
                          atol=1e-12)

    def test_generator_eigenstate(self):
        g = sigma_z_generator()
        assert quantum_fisher_information(states.basis_state(2, 0), g) <= 1e-12

    @pytest.mark.parametrize("d", [2, 4, 8])
    def test_pure_state_is_four_variance(self, rng, d):
        g = CoherenceGenerator(random_hermitian(rng, d))
        for i in range(20):
            rho = states.haar_pure((d,), Seed(41, 20 * d + i))
            fq = quantum_fisher_information(rho, g)
            assert abs(fq - 4 * resources.variance(rho, g)) <= 1e-9

    def test_bounded_by_four_variance(self, rng):
        g = CoherenceGenerator(random_hermitian(rng, 3))
        for i in range(50):
            rho = states.ginibre_mixed(3, 1 + i % 3, Seed(42, i))
            fq = quantum_fisher_information(rho, g)
            assert fq <= 4 * resources.variance(rho, g) + 1e-9

    def test_invariant_under_commuting_unitary(self):
        g = sigma_z_generator()
        for i in range(10):
            rho = states.ginibre_mixed(2, 2, Seed(43, i))
            theta = 0.3 + i
            u = np.diag([np.exp(-1j * theta), np.exp(1j * theta)])
            rotated = DensityMatrix(u @ rho.matrix @ u.conj().T, (2,))
            assert abs(quantum_fisher_information(rho, g)
                       - quantum_fisher_information(rotated, g)) <= 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            quantum_fisher_information(states.maximally_mixed(3), sigma_z_generator())


class TestFqMax:
    def test_sigma_z(self):
        assert np.isclose(fq_max(sigma_z_generator()), 4.0)

    def test_two_qubit_collective(self):
        h = np.kron(states.SIGMA_Z, np.eye(2)) + np.kron(np.eye(2), states.SIGMA_Z)
        assert np.isclose(fq_max(CoherenceGenerator(h)), 16.0)

    def test_extreme_superposition_attains_it(self, rng):
        g = CoherenceGenerator(random_hermitian(rng, 4))
        v = g.eigen.vectors
        psi = (v[:, 0] + v[:, -1]) / np.sqrt(2)
        rho = states.ket_projector(psi, (4,))
        assert abs(quantum_fisher_information(rho, g) - fq_max(g)) <= 1e-9

    def test_random_pure_states_never_exceed(self, rng):
        g = CoherenceGenerator(random_hermitian(rng, 3))
        top = fq_max(g)
        for i in range(300):
            rho = states.haar_pure((3,), Seed(44, i))
            assert quantum_fisher_information(rho, g) <= top + 1e-9

    def test_degenerate_generator_rejected(self):
        with pytest.raises(ValueError):
            CoherenceGenerator(np.eye(2, dtype=complex))


class TestCoordQ3:
    def test_plus_state_maximal(self):
        assert np.isclose(coord_q3(states.plus_state(), sigma_z_generator()), 1.0)

    def test_maximally_mixed_zero(self):
        assert coord_q3(states.maximally_mixed(2), sigma_z_generator()) == 0.0

    def test_basis_state_zero(self):
        assert coord_q3(states.basis_state(2, 0), sigma_z_generator()) <= 1e-12


class TestProfile:
    def test_teleportation_corner(self):
        p = profile(states.bell_spectator())
        assert np.allclose(p.coords(), (1, 0, 0), atol=1e-9)
        assert np.isclose(p.norm, 1.0, atol=1e-9)

    def test_coherence_corner(self):
        p = profile(states.coherent_spectator())
        assert np.allclose(p.coords(), (0, 0, 1), atol=1e-9)

    def test_transfer_corner(self):
        p = profile(states.bell_ac())
        assert np.allclose(p.coords(), (0, 1, 0), atol=1e-9)

    def test_ghz_is_origin(self):
        p = profile(states.ghz())
        assert np.allclose(p.coords(), (0, 0, 0), atol=1e-9)

    def test_norm_is_squared_length(self):
        for i in range(5):
            p = profile(states.haar_pure((2, 2, 2), Seed(45, i)))
            assert p.norm == p.q1**2 + p.q2**2 + p.q3**2
            assert all(0.0 <= q <= 1.0 for q in p.coords())

    def test_breakdown_consistency(self):
        p = profile(states.haar_pure((2, 2, 2), Seed(45, 9)))
        b = p.breakdown
        assert np.isclose(b.f_tele, (b.d * b.f_max + 1) / (b.d + 1))
        assert b.f_q <= b.f_q_max + 1e-9

    def test_dims_validation(self):
        with pytest.raises(ValueError):
            profile(states.bell_pair())  # bipartite
        with pytest.raises(ValueError):
            profile(states.maximally_mixed(12, dims=(2, 3, 2)))

    def test_generator_dimension_checked(self):
        with pytest.raises(ValueError):
            profile(states.ghz(), ProfileConfig(generator=default_generator(3)))

    def test_uhlmann_mode_recorded(self):
        p = profile(states.classical_correlated(2),
                    ProfileConfig(q2_mode="uhlmann-marginal"))
        assert p.q2_mode == "uhlmann-marginal"
        assert np.isclose(p.q2, 1.0)

    def test_trivial_c_pins_q2(self):
        rho = states.compose_product(states.bell_pair(), states.maximally_mixed(1))
        assert rho.dims == (2, 2, 1)
        p = profile(rho)
        assert np.allclose(p.coords(), (1, 0, 0), atol=1e-9)

    def test_trivial_b_pins_q1(self):
        p = profile(states.classical_correlated(2))
        assert p.q1 == 0.0
        assert p.breakdown.q1_raw < 0

    def test_resource_norm_examples(self):
        p = profile(states.bell_spectator())
        assert np.isclose(resource_norm(p), 1.0, atol=1e-9)
        q = profile(states.ghz())
        assert np.isclose(resource_norm(q), 0.0, atol=1e-12)


class TestEntropies:
    def test_bell_marginal_entropy(self):
        s = resources.von_neumann_entropy(states.bell_pair().marginal([0]))
        assert np.isclose(s, np.log(2))

    def test_pure_state_entropy_zero(self):
        assert resources.von_neumann_entropy(states.ghz()) <= 1e-12

    def test_bell_mutual_information(self):
        assert np.isclose(resources.mutual_information(states.bell_pair()),
                          2 * np.log(2))

    def test_coherence_of_plus_state_closed_form(self):
        c = resources.coherence_rel_ent(states.plus_state(), sigma_z_generator())
        assert np.isclose(c, np.log(2), atol=1e-12)

    def test_coherence_matches_minimization_oracle(self):
        # independently minimize D(rho || diag(q, 1-q)) over q
        rho = states.plus_state()
        qs = np.linspace(1e-6, 1 - 1e-6, 20001)
        diag = np.real(np.diag(rho.matrix))
        divergence = -(diag[0] * np.log(qs) + diag[1] * np.log(1 - qs))
        oracle = float(divergence.min()) - resources.von_neumann_entropy(rho)
        c = resources.coherence_rel_ent(rho, sigma_z_generator())
        assert abs(c - oracle) <= 1e-8

    def test_relative_entropy_support_sentinel(self):
        rho = states.plus_state()
        sigma = states.basis_state(2, 0)
        assert resources.relative_entropy(rho, sigma) == float("inf")

    def test_relative_entropy_basics(self, rng):
        a = DensityMatrix(random_density(rng, 3), (3,))
        b = DensityMatrix(random_density(rng, 3), (3,))
        assert resources.relative_entropy(a, a) <= 1e-9
        assert resources.relative_entropy(a, b) >= 0.0

    def test_measurement_entropy(self):
        g = sigma_z_generator()
        assert np.isclose(resources.measurement_entropy(states.plus_state(), g),
                          np.log(2))
        assert resources.measurement_entropy(states.basis_state(2, 0), g) <= 1e-12

    def test_entropy_bounds(self, rng):
        for i in range(10):
            rho = states.ginibre_mixed(4, 1 + i % 4, Seed(46, i))
            s = resources.von_neumann_entropy(rho)
            assert -1e-10 <= s <= np.log(4) + 1e-10

    def test_mutual_information_nonnegative(self):
        for i in range(10):
            rho = states.haar_pure((2, 2), Seed(47, i))
            assert resources.mutual_information(rho) >= -1e-10

    def test_entropy_report(self):
        rep = resources.entropy_report(states.bell_spectator())
        assert np.isclose(rep.s, np.log(2))
        assert np.isclose(rep.i_ab, 2 * np.log(2))
        assert rep.i_ac <= 1e-9
        assert rep.c_coh <= 1e-9
        assert np.isclose(rep.h_meas, np.log(2))
