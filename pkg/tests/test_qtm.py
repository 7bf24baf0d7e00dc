import pytest
from hypothesis import given
from hypothesis import strategies as st

from qci.errors import NotFoundError, ValidationError
from qci.ledger import CostLedger
from qci.qtm import (
    ApiCall,
    BoundarySpec,
    ProgramSpec,
    check_boundary_linearity,
    registered_arity,
    registered_calls,
    specify_api_call,
    specify_qtm_program,
)


class TestProgramRegister:
    @pytest.mark.parametrize("m,cost", [(3, 8), (0, 1), (10, 1024)])
    def test_cost(self, m, cost):
        ledger = CostLedger()
        assert specify_qtm_program(ProgramSpec(m, [0] * cost), ledger) == cost
        assert ledger.parameter_steps == cost

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            specify_qtm_program(ProgramSpec(3, [0] * 7))


class TestApiCalls:
    def test_grover_iontrap(self):
        ledger = CostLedger()
        assert specify_api_call(ApiCall("grover", ("alpha", "beta"), mode="iontrap"), ledger) == 3
        assert ledger.parameter_steps == 3

    def test_grover_query_mode(self):
        assert specify_api_call(ApiCall("grover", ("415-492-0206",))) == 2

    def test_order_finding(self):
        assert specify_api_call(ApiCall("shor-order-finding", (7, 15))) == 3
        assert specify_api_call(ApiCall("period-finding", (7, 15))) == 3

    def test_wrong_arity(self):
        with pytest.raises(ValidationError):
            specify_api_call(ApiCall("grover", (1, 2, 3, 4, 5), mode="iontrap"))

    def test_unregistered(self):
        with pytest.raises(NotFoundError):
            specify_api_call(ApiCall("bogosort", ()))

    def test_unknown_mode(self):
        with pytest.raises(NotFoundError):
            registered_arity("grover", "photonic")

    def test_every_registered_call_costs_arity_plus_one(self):
        for name, mode, arity in registered_calls():
            assert specify_api_call(ApiCall(name, [None] * arity, mode)) == arity + 1

    @pytest.mark.parametrize("m", range(0, 11))
    def test_api_cheaper_than_program(self, m):
        program = specify_qtm_program(ProgramSpec(m, [0] * 2**m))
        for name, mode, arity in registered_calls():
            if arity < 2**m - 1:
                assert specify_api_call(ApiCall(name, [0] * arity, mode)) < program


class TestBoundaryLinearity:
    def test_literal_linear(self):
        assert check_boundary_linearity(BoundarySpec.linear([1, 2j, -3]), 64, seed=0)

    def test_squaring(self):
        assert not check_boundary_linearity(BoundarySpec.squaring([1, 2j, -3]), 64, seed=0)

    def test_squaring_fails_at_u_equals_v(self):
        import numpy as np

        spec = BoundarySpec.squaring([1.0, 1.0])
        u = np.array([1.0, 0.5])
        # alpha = beta = 1, u = v: additivity would need rule(2u) == 2 rule(u)
        assert abs(spec(u + u) - (spec(u) + spec(u))) > 1e-9

    def test_zero(self):
        assert check_boundary_linearity(BoundarySpec.zero(4), 64, seed=5)

    def test_custom_affine_rule_is_nonlinear(self):
        spec = BoundarySpec((1, 1), rule=lambda c: complex(c.sum() + 1))
        assert not check_boundary_linearity(spec)

    def test_trials_must_be_positive(self):
        with pytest.raises(ValidationError):
            check_boundary_linearity(BoundarySpec.zero(2), 0)

    @given(st.integers(0, 2**63 - 1), st.integers(1, 80))
    def test_deterministic(self, seed, trials):
        for spec in (BoundarySpec.linear([1, 2]), BoundarySpec.squaring([1, 2])):
            assert check_boundary_linearity(spec, trials, seed) == check_boundary_linearity(spec, trials, seed)

    def test_global_spec_parameter_count(self):
        spec = BoundarySpec.over_global_states(list(range(16)))
        assert spec.n == 4 and spec.parameter_count == 16
