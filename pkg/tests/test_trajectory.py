import random

import pytest

from collatzverify.trajectory import (
    BudgetExceededError,
    default_budget,
    exact_stopping_time,
    hyperstep_verify,
    step_policy,
    t_step,
)


class TestTStep:
    @pytest.mark.parametrize("n,expected", [(1, 2), (2, 1), (27, 41), (4, 2)])
    def test_values(self, n, expected):
        assert t_step(n) == expected

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            t_step(0)


class TestExactStoppingTime:
    @pytest.mark.parametrize("n,expected", [(1, 0), (2, 1), (3, 5), (27, 70)])
    def test_values(self, n, expected):
        assert exact_stopping_time(n) == expected

    def test_budget_error(self):
        with pytest.raises(BudgetExceededError) as err:
            exact_stopping_time(27, budget=10)
        assert err.value.condensed_steps == 10
        assert err.value.iterate > 1


class TestStepPolicy:
    @pytest.mark.parametrize("n,expected", [(1, 1), (2, 1), (3, 1), (8, 1), (16, 2)])
    def test_small(self, n, expected):
        assert step_policy(n) == expected

    def test_range_2_19(self):
        for n in (1 << 19, (1 << 19) + 12345, (1 << 20) - 1):
            assert step_policy(n) == 9

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            step_policy(0)


class TestHyperstepVerify:
    def test_one_is_trivial(self):
        rec = hyperstep_verify(1)
        assert rec.reached_one and rec.condensed_steps == 0 and rec.hypersteps == 0

    def test_three(self):
        # below 2^2 every block has size 1, so no terminal overshoot
        assert hyperstep_verify(3).condensed_steps == exact_stopping_time(3) == 5

    def test_27_overshoot_bounded(self):
        rec = hyperstep_verify(27)
        exact = exact_stopping_time(27)
        assert 0 <= rec.condensed_steps - exact <= (27).bit_length() // 2 + 2

    def test_oracle_agreement_random(self):
        rng = random.Random(123)
        for _ in range(1000):
            n = rng.randrange(1, 1 << 40)
            rec = hyperstep_verify(n)
            exact = exact_stopping_time(n)
            slack = (n.bit_length() - 1) // 2 + 2
            assert rec.reached_one
            assert 0 <= rec.condensed_steps - exact <= slack

    def test_small_range_terminates(self):
        for n in range(1, 100_001):
            assert hyperstep_verify(n).reached_one

    def test_deterministic(self):
        a = hyperstep_verify(987654321987654321)
        b = hyperstep_verify(987654321987654321)
        assert (a.condensed_steps, a.hypersteps, a.start_digits) == (
            b.condensed_steps,
            b.hypersteps,
            b.start_digits,
        )

    def test_block_soundness_via_replay(self):
        # each hyperstep must equal s-fold application of the single step
        from collatzverify.affine import affine_eval, poly_fast

        rng = random.Random(77)
        for _ in range(50):
            m = rng.randrange(1, 1 << 60)
            while m != 1:
                s = step_policy(m)
                after = affine_eval(poly_fast(m, s), m, check=False)
                x = m
                for _ in range(s):
                    x = t_step(x)
                assert x == after
                m = after

    def test_budget_error_carries_iterate(self):
        with pytest.raises(BudgetExceededError) as err:
            hyperstep_verify(2**64 + 1, budget=3)
        assert err.value.iterate >= 1
        assert err.value.condensed_steps <= 3

    def test_progress_callback_per_hyperstep(self):
        ticks = []
        rec = hyperstep_verify(27, progress=lambda h, c, b: ticks.append((h, c, b)))
        assert len(ticks) == rec.hypersteps
        assert ticks[-1][1] == rec.condensed_steps

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            hyperstep_verify(0)

    def test_default_budget_generous(self):
        n = 10**50
        assert default_budget(n) > 10 * exact_stopping_time(n)
