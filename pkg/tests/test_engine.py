import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daisysim.engine import (ModelError, SimulationError, aux, build_model, const,
                             exogenous, flow, get_value, init_state, inject,
                             refresh, set_stock, step, stock)


def linear_decay_model(rate=0.3, init=100.0, dt=1.0):
    return build_model([
        stock("level", init, outflows=("drain",)),
        flow("drain", lambda v: rate * v["level"], ("level",)),
    ], dt=dt)


class TestBuildModel:
    def test_minimal_legal_model(self):
        model = build_model([
            stock("s", 0.0, inflows=("f",)),
            flow("f", lambda v: 2.0),
        ], dt=1.0)
        assert set(model.variables) == {"s", "f"}

    def test_two_cycle_without_stock_rejected(self):
        with pytest.raises(ModelError, match="cycle"):
            build_model([
                aux("a", lambda v: v["b"], ("b",)),
                aux("b", lambda v: v["a"], ("a",)),
            ], dt=1.0)

    def test_cycle_error_names_the_cycle(self):
        with pytest.raises(ModelError, match="a.*b|b.*a"):
            build_model([
                aux("a", lambda v: v["b"], ("b",)),
                aux("b", lambda v: v["a"], ("a",)),
            ], dt=1.0)

    def test_feedback_through_stock_is_legal(self):
        model = linear_decay_model()
        assert model.eval_order == ("drain",)

    def test_dangling_reference_named(self):
        with pytest.raises(ModelError, match="ghost"):
            build_model([aux("a", lambda v: v["ghost"], ("ghost",))], dt=1.0)

    def test_duplicate_id_rejected(self):
        with pytest.raises(ModelError, match="duplicate"):
            build_model([const("c", 1.0), const("c", 2.0)], dt=1.0)

    def test_empty_model_rejected(self):
        with pytest.raises(ModelError):
            build_model([], dt=1.0)

    def test_nonpositive_dt_rejected(self):
        with pytest.raises(ModelError, match="dt"):
            linear_decay_model(dt=0.0)

    def test_time_is_reserved(self):
        with pytest.raises(ModelError, match="reserved"):
            build_model([const("time", 0.0)], dt=1.0)

    def test_stock_with_expression_rejected(self):
        bad = stock("s", 1.0)
        bad = type(bad)(name="s", kind="stock", init=1.0, expression=lambda v: 1.0)
        with pytest.raises(ModelError):
            build_model([bad], dt=1.0)

    def test_inflow_must_be_a_flow(self):
        with pytest.raises(ModelError, match="not a flow"):
            build_model([
                const("c", 1.0),
                stock("s", 0.0, inflows=("c",)),
            ], dt=1.0)


class TestInitState:
    def test_initial_flow_evaluation(self):
        model = linear_decay_model()
        state = init_state(model)
        assert get_value(state, "level") == 100.0
        assert get_value(state, "drain") == 30.0  # hand evaluation: 0.3 * 100

    def test_constant_visible(self):
        model = build_model([const("c", 0.3)], dt=1.0)
        assert get_value(init_state(model), "c") == 0.3

    def test_uninjected_exogenous_read_fails(self):
        model = build_model([
            exogenous("d"),
            aux("a", lambda v: v["d"], ("d",)),
        ], dt=1.0)
        with pytest.raises(SimulationError, match="'d'.*inject"):
            init_state(model)

    def test_injections_argument(self):
        model = build_model([
            exogenous("d"),
            aux("a", lambda v: 2.0 * v["d"], ("d",)),
        ], dt=1.0)
        state = init_state(model, injections={"d": 0.625})
        assert get_value(state, "a") == 1.25

    def test_unread_exogenous_may_stay_uninjected(self):
        model = build_model([exogenous("d"), const("c", 1.0)], dt=1.0)
        init_state(model)  # no expression reads d at t=0


class TestInject:
    def make(self):
        model = build_model([
            exogenous("d"),
            stock("s", 1.0, inflows=("f",)),
            flow("f", lambda v: v["d"] * v["s"], ("d", "s")),
        ], dt=1.0)
        return model, init_state(model, injections={"d": 0.0})

    def test_inject_then_read(self):
        model, state = self.make()
        inject(state, "d", 0.625)
        assert get_value(state, "d") == 0.625

    def test_last_write_wins(self):
        model, state = self.make()
        inject(state, "d", 0.5)
        inject(state, "d", 0.7)
        assert get_value(state, "d") == 0.7

    def test_inject_on_stock_rejected(self):
        model, state = self.make()
        with pytest.raises(SimulationError, match="stock"):
            inject(state, "s", 1.0)

    def test_inject_unknown_rejected(self):
        model, state = self.make()
        with pytest.raises(SimulationError, match="unknown"):
            inject(state, "nope", 1.0)

    def test_sticky_across_steps(self):
        model, state = self.make()
        inject(state, "d", 0.1)
        state = step(model, state)
        state = step(model, state)
        assert get_value(state, "d") == 0.1

    def test_visible_to_next_step_flows(self):
        model, state = self.make()
        inject(state, "d", 0.5)
        new = step(model, state)
        assert new.last_flows["f"] == 0.5  # 0.5 * 1.0 from the pre-step state


class TestStep:
    def test_constant_rate_accumulation(self):
        model = build_model([
            stock("s", 0.0, inflows=("f",)),
            flow("f", lambda v: 2.0),
        ], dt=1.0)
        state = init_state(model)
        for _ in range(3):
            state = step(model, state)
        assert get_value(state, "s") == 6.0

    def test_hand_euler_decay_step(self):
        model = linear_decay_model()
        state = step(model, init_state(model))
        assert get_value(state, "level") == 70.0

    def test_area_change_hand_value(self):
        # 0.1 * (0.5 * 1 - 0.3) = +0.02 per step
        model = build_model([
            stock("area", 0.1, inflows=("growth",), outflows=("decay",)),
            flow("growth", lambda v: v["area"] * 0.5 * 1.0, ("area",)),
            flow("decay", lambda v: v["area"] * 0.3, ("area",)),
        ], dt=1.0)
        state = step(model, init_state(model))
        assert get_value(state, "area") == pytest.approx(0.12, abs=1e-15)

    def test_time_advances_by_dt(self):
        model = linear_decay_model(dt=0.5)
        state = step(model, init_state(model))
        assert state.time == 0.5
        assert get_value(state, "time") == 0.5

    def test_non_finite_abort_names_variable(self):
        model = build_model([
            stock("s", 1.0, inflows=("f",)),
            flow("f", lambda v: v["s"] * 1e308, ("s",)),
            aux("boom", lambda v: v["f"] * 1e308, ("f",)),
        ], dt=1.0)
        with pytest.raises(SimulationError, match="boom"):
            init_state(model)

    def test_linear_decay_oracle(self):
        # closed form: level(n) = 100 * 0.7^n
        model = linear_decay_model()
        state = init_state(model)
        for n in range(1, 21):
            state = step(model, state)
            assert get_value(state, "level") == pytest.approx(100.0 * 0.7 ** n, rel=1e-12)

    def test_euler_exactness_per_step(self):
        model = build_model([
            stock("s", 5.0, inflows=("fin",), outflows=("fout",)),
            flow("fin", lambda v: 1.7 + 0.1 * v["s"], ("s",)),
            flow("fout", lambda v: 0.4 * v["s"], ("s",)),
        ], dt=0.25)
        state = init_state(model)
        for _ in range(50):
            before = get_value(state, "s")
            state = step(model, state)
            delta = state.last_flows["fin"] - state.last_flows["fout"]
            assert get_value(state, "s") == before + 0.25 * delta


class TestGetValue:
    def test_unknown_id_rejected(self):
        model = linear_decay_model()
        with pytest.raises(SimulationError, match="unknown"):
            get_value(init_state(model), "nope")

    def test_time_readable(self):
        model = linear_decay_model()
        assert get_value(init_state(model), "time") == 0.0


class TestStateAdjustment:
    def test_set_stock_and_refresh(self):
        model = linear_decay_model()
        state = step(model, init_state(model))
        set_stock(state, "level", 50.0)
        refresh(state)
        assert get_value(state, "drain") == 15.0

    def test_set_stock_rejects_non_stock(self):
        model = linear_decay_model()
        state = init_state(model)
        with pytest.raises(SimulationError, match="not stock"):
            set_stock(state, "drain", 1.0)


class TestDeterminism:
    def run_trajectory(self, defs, dt, injections):
        model = build_model(defs, dt)
        state = init_state(model, injections={"d": 1.0})
        out = []
        for k, v in enumerate(injections):
            inject(state, "d", v)
            state = step(model, state)
            out.append((state.time, dict(state.values)))
        return out

    def defs(self):
        return [
            exogenous("d"),
            stock("s", 10.0, inflows=("fin",), outflows=("fout",)),
            flow("fin", lambda v: v["d"] * v["a"], ("d", "a")),
            flow("fout", lambda v: 0.3 * v["s"], ("s",)),
            aux("a", lambda v: v["s"] / (1.0 + v["time"]), ("s", "time")),
        ]

    def test_bit_identical_repeat_runs(self):
        injections = [0.1 * k for k in range(20)]
        a = self.run_trajectory(self.defs(), 1.0, injections)
        b = self.run_trajectory(self.defs(), 1.0, injections)
        assert a == b

    def test_definition_order_irrelevant(self):
        injections = [0.37, 0.21, 0.9, 0.0, 1.4]
        a = self.run_trajectory(self.defs(), 1.0, injections)
        b = self.run_trajectory(list(reversed(self.defs())), 1.0, injections)
        assert a == b


@given(
    init=st.floats(min_value=0.0, max_value=1e6, allow_nan=False),
    rate=st.floats(min_value=0.0, max_value=0.9),
    steps=st.integers(min_value=1, max_value=30),
)
@settings(max_examples=60, deadline=None)
def test_euler_matches_closed_form_decay(init, rate, steps):
    model = linear_decay_model(rate=rate, init=init)
    state = init_state(model)
    for _ in range(steps):
        state = step(model, state)
    expected = init * (1.0 - rate) ** steps
    assert math.isclose(get_value(state, "level"), expected, rel_tol=1e-9, abs_tol=1e-12)
