import math

import numpy as np
import pytest

from qci.algorithms import (
    HoppingHamiltonian,
    classical_probabilities,
    grover_iteration_count,
    logistic_digitizer,
    lookup_chain,
    identity_map,
    multiplicative_order,
    period_register_sizes,
    qft,
    run_grover,
    run_linear_sim,
    run_nonlinear_counterexample,
    run_period_finding,
    shipped_maps,
)
from qci.codecs import fig1_records, synthetic_directory
from qci.errors import (
    ArgumentError,
    NonlinearBoundaryError,
    NotFoundError,
    SizeError,
    ValidationError,
    WorthinessError,
)
from qci.qtm import BoundarySpec
from qci.statevector import StateVector


def brute_force_order(a, M):
    return next(r for r in range(1, M + 1) if pow(a, r, M) == 1)


class TestGrover:
    def test_fig1_query(self):
        result = run_grover(2, fig1_records(), "415-492-0206", seed=0)
        assert result.correct
        assert result.payload["record"] == ("415-492-0206", 3)
        assert result.payload["marked_probability"] == pytest.approx(1.0, abs=1e-12)
        assert result.ledger.definition_steps == 4
        assert result.ledger.quantum_oracle_queries == 1

    def test_absent_query(self):
        with pytest.raises(NotFoundError):
            run_grover(2, fig1_records(), "415-000-0000")

    def test_size_bounds(self):
        with pytest.raises(SizeError):
            run_grover(1, fig1_records()[:2], "415-389-1133")

    @pytest.mark.parametrize("n", range(2, 11))
    def test_interface_cost_dominates_baseline(self, n):
        for seed in range(20):
            records = synthetic_directory(n, seed)
            query = records[(seed * 7919) % len(records)][0]
            result = run_grover(n, records, query, seed)
            led = result.ledger
            assert result.correct
            assert led.interface_steps >= led.baseline_steps
            assert led.quantum_oracle_queries == grover_iteration_count(2**n)

    def test_sample_measurement_mode(self):
        records = synthetic_directory(6, 3)
        result = run_grover(6, records, records[10][0], seed=42, measurement="sample")
        assert result.payload["marked_probability"] > 0.99
        assert result.payload["measured"] == result.payload["marked"]

    def test_indexed_definition_cost(self):
        records = synthetic_directory(5, 0)
        result = run_grover(5, records, records[-1][0], indexed=True)
        assert result.correct
        assert result.ledger.definition_steps == 64
        assert result.ledger.parameter_steps == result.ledger.interpretation_steps == 1


class TestQFT:
    @pytest.mark.parametrize("t", [1, 2, 3, 5])
    def test_matches_dft(self, t):
        rng = np.random.default_rng(t)
        v = rng.standard_normal(2**t) + 1j * rng.standard_normal(2**t)
        v /= np.linalg.norm(v)
        out = qft(StateVector(t, v), range(t))
        # ifft carries the +2*pi*i sign convention
        np.testing.assert_allclose(out.amplitudes, np.fft.ifft(v, norm="ortho"), atol=1e-12)
        back = qft(out, range(t), inverse=True)
        np.testing.assert_allclose(back.amplitudes, v, atol=1e-12)

    def test_subregister(self):
        rng = np.random.default_rng(0)
        v = rng.standard_normal(32) + 0j
        v /= np.linalg.norm(v)
        out = qft(StateVector(5, v), range(3))
        # low 3 bits are the fast index in C order: shape (4, 8)
        expected = np.fft.ifft(v.reshape(4, 8), axis=1, norm="ortho").reshape(-1)
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-12)


class TestPeriodFinding:
    @pytest.mark.parametrize("a,M", [(7, 15), (2, 3), (2, 5), (2, 21), (4, 15), (5, 21), (3, 7)])
    def test_recovers_order(self, a, M):
        result = run_period_finding(a, M, seed=1)
        assert result.correct
        assert result.payload["period"] == brute_force_order(a, M)
        assert pow(a, result.payload["period"], M) == 1

    def test_known_orders(self):
        assert brute_force_order(7, 15) == 4
        assert brute_force_order(2, 3) == 2
        assert multiplicative_order(7, 15) == 4

    def test_not_coprime(self):
        with pytest.raises(ArgumentError):
            run_period_finding(6, 15)

    def test_modulus_too_large(self):
        with pytest.raises(ArgumentError):
            run_period_finding(2, 23)

    def test_costs(self):
        led = run_period_finding(7, 15, seed=3).ledger
        assert led.definition_steps == 1
        assert led.parameter_steps == 3
        assert led.baseline_steps == 0

    @pytest.mark.parametrize("M,expected", [(3, (4, 2)), (5, (6, 3)), (15, (8, 4)), (21, (9, 5))])
    def test_register_sizes(self, M, expected):
        control, work = period_register_sizes(M)
        assert (control, work) == expected
        assert control + work <= 14 and 2**control >= M * M

    def test_flag_false_when_attempts_exhausted(self):
        result = run_period_finding(7, 15, seed=0, max_attempts=0)
        assert not result.correct and result.payload["period"] is None

    def test_success_rate(self):
        ok = sum(run_period_finding(7, 15, seed=s).correct for s in range(100))
        assert ok >= 99


def two_site_site2_probability(t):
    # exp(-i X t) = cos t I - i sin t X applied to site 1
    return math.sin(t) ** 2


class TestLinearSim:
    def test_two_site_swap(self):
        h = HoppingHamiltonian(np.array([[0.0, 1.0], [1.0, 0.0]]))
        result = run_linear_sim(h, [1, 0], math.pi / 2, ["s1", "s2"])
        probs = dict(result.payload["probabilities"])
        assert probs["s2"] == pytest.approx(1.0, abs=1e-12)
        assert result.correct

    @pytest.mark.parametrize("t", [0.1, 0.5, 1.3, 2.9])
    def test_two_site_closed_form(self, t):
        result = run_linear_sim(HoppingHamiltonian.chain(2), [1, 0], t)
        assert result.payload["probabilities"][1][1] == pytest.approx(two_site_site2_probability(t), abs=1e-12)

    @pytest.mark.parametrize("topology", ["chain", "ring"])
    def test_zero_time_is_identity(self, topology):
        rng = np.random.default_rng(4)
        c = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        c /= np.linalg.norm(c)
        result = run_linear_sim(getattr(HoppingHamiltonian, topology)(5), c, 0.0)
        np.testing.assert_allclose([p for _, p in result.payload["probabilities"]], np.abs(c) ** 2, atol=1e-12)

    @pytest.mark.parametrize("t", [0.3, 1.0, 7.5])
    def test_ring_normalized(self, t):
        result = run_linear_sim(HoppingHamiltonian.ring(4), [0, 1, 0, 0], t)
        assert abs(sum(p for _, p in result.payload["probabilities"]) - 1) <= 1e-10

    def test_interface_cost_2n(self):
        for n in (2, 4, 8):
            c = np.zeros(n)
            c[0] = 1
            assert run_linear_sim(HoppingHamiltonian.chain(n), c, 1.0).ledger.interface_steps == 2 * n

    def test_unnormalized(self):
        with pytest.raises(ValidationError):
            run_linear_sim(HoppingHamiltonian.chain(2), [1, 1], 1.0)

    def test_non_symmetric(self):
        with pytest.raises(ValidationError):
            HoppingHamiltonian(np.array([[0, 1], [0, 0]]))

    def test_ring_has_closing_edge(self):
        h = HoppingHamiltonian.ring(4).matrix
        assert h[0, 3] == h[3, 0] == 1

    def test_classical_model_against_expm_free_formula(self):
        # two-site chain, classical route alone
        np.testing.assert_allclose(
            classical_probabilities(HoppingHamiltonian.chain(2), [1, 0], 0.4),
            [math.cos(0.4) ** 2, math.sin(0.4) ** 2],
            atol=1e-14,
        )

    def test_linear_boundary_admitted_and_priced(self):
        spec = BoundarySpec.linear([1, 2, 3])
        result = run_linear_sim(HoppingHamiltonian.chain(3), [1, 0, 0], 0.5, boundary=spec)
        assert result.correct
        assert result.ledger.parameter_steps == 3

    def test_nonlinear_boundary_rejected(self):
        with pytest.raises(NonlinearBoundaryError):
            run_linear_sim(
                HoppingHamiltonian.chain(3), [1, 0, 0], 0.5, boundary=BoundarySpec.squaring([1, 2, 3])
            )

    def test_global_boundary_refused_as_unworthy(self):
        n = 4
        spec = BoundarySpec.over_global_states(np.arange(2**n, dtype=float))
        with pytest.raises(WorthinessError):
            run_linear_sim(HoppingHamiltonian.chain(n), [1, 0, 0, 0], 0.5, boundary=spec)


class TestNonlinearCounterexample:
    DOMAIN = ["a", "b", "c", "d"]

    def test_identity(self):
        result = run_nonlinear_counterexample(self.DOMAIN, identity_map(), "b")
        assert result.correct and result.payload["standalone_steps"] == 1

    def test_lookup_chain(self):
        result = run_nonlinear_counterexample(self.DOMAIN, lookup_chain(self.DOMAIN), "d")
        assert result.correct and result.payload["standalone_steps"] == 3

    def test_logistic(self):
        result = run_nonlinear_counterexample(self.DOMAIN, logistic_digitizer(self.DOMAIN, 20), "a")
        assert result.correct and result.payload["standalone_steps"] == 20

    def test_every_shipped_map_on_every_label(self):
        for name, algorithm in shipped_maps(self.DOMAIN).items():
            for label in self.DOMAIN:
                result = run_nonlinear_counterexample(self.DOMAIN, algorithm, label, name=name)
                assert result.correct, (name, label)
                assert result.payload["interpretation_steps"] - 4 == result.payload["standalone_steps"]

    def test_label_outside_domain(self):
        with pytest.raises(NotFoundError):
            run_nonlinear_counterexample(self.DOMAIN, identity_map(), "z")
