import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collatzverify.affine import (
    IDENTITY,
    AffineStep,
    BaseTable,
    affine_compose,
    affine_eval,
    base_table_init,
    poly_direct,
    poly_fast,
)
from collatzverify.trajectory import t_step

# printed reference maps for two and five condensed iterations
C2 = {
    0: AffineStep(1, 0, 2),
    1: AffineStep(3, 1, 2),
    2: AffineStep(3, 2, 2),
    3: AffineStep(9, 5, 2),
}
C5 = {
    3: AffineStep(9, 5, 5),
    7: AffineStep(81, 73, 5),
    11: AffineStep(27, 23, 5),
    15: AffineStep(81, 65, 5),
    19: AffineStep(27, 31, 5),
    23: AffineStep(27, 19, 5),
    27: AffineStep(81, 85, 5),
    31: AffineStep(243, 211, 5),
}


def iterate_t(x, k):
    for _ in range(k):
        x = t_step(x)
    return x


class TestEval:
    def test_reference_vector(self):
        assert affine_eval(AffineStep(9, 5, 2), 3) == 8

    def test_identity(self):
        assert affine_eval(IDENTITY, 123456789) == 123456789

    def test_five_step_block(self):
        # oracle: five single steps from 31
        assert affine_eval(AffineStep(243, 211, 5), 31) == iterate_t(31, 5) == 242

    def test_wrong_residue_class_rejected(self):
        with pytest.raises(ValueError):
            affine_eval(AffineStep(9, 5, 2), 4, check=True)

    def test_check_disabled_truncates(self):
        # documented release behaviour: no divisibility check, plain shift
        assert affine_eval(AffineStep(9, 5, 2), 4, check=False) == (9 * 4 + 5) >> 2


class TestCompose:
    def test_reference_vector(self):
        assert affine_compose(AffineStep(3, 1, 1), AffineStep(1, 0, 1)) == AffineStep(3, 2, 2)

    def test_identities(self):
        p = AffineStep(81, 73, 5)
        assert affine_compose(IDENTITY, p) == p
        assert affine_compose(p, IDENTITY) == p

    @given(
        st.tuples(st.integers(0, 3**6), st.integers(0, 2**20), st.integers(0, 12)),
        st.tuples(st.integers(0, 3**6), st.integers(0, 2**20), st.integers(0, 12)),
        st.tuples(st.integers(0, 3**6), st.integers(0, 2**20), st.integers(0, 12)),
    )
    def test_associative(self, t1, t2, t3):
        p, q, r = AffineStep(*t1), AffineStep(*t2), AffineStep(*t3)
        assert affine_compose(affine_compose(p, q), r) == affine_compose(
            p, affine_compose(q, r)
        )


class TestPolyDirect:
    @pytest.mark.parametrize("r,expected", list(C2.items()))
    def test_two_step_table(self, r, expected):
        assert poly_direct(r, 2) == expected

    @pytest.mark.parametrize("r,expected", list(C5.items()))
    def test_five_step_table(self, r, expected):
        assert poly_direct(r, 5) == expected

    def test_all_even_class(self):
        assert poly_direct(0, 6) == AffineStep(1, 0, 6)

    def test_structure_invariant(self):
        # a = 3^o with o <= c, and 0 <= b < a * 2^c
        for k in range(11):
            for r in range(1 << k):
                a, b, c = poly_direct(r, k)
                o = 0
                while a % 3 == 0:
                    a //= 3
                    o += 1
                assert a == 1 and o <= c == k
                assert 0 <= b < poly_direct(r, k).a << c

    def test_exactness_and_divisibility(self):
        rng = random.Random(11)
        for k in range(13):
            for r in range(1 << k):
                p = poly_direct(r, k)
                x = r + (rng.randrange(1, 1 << 20) << k)
                assert (p.a * x + p.b) % (1 << k) == 0
                assert affine_eval(p, x) == iterate_t(x, k)


class TestCompositionLaw:
    def test_small_exhaustive(self):
        for k in range(1, 6):
            for l in range(1, 6):
                for r in range(1 << (k + l)):
                    p_low = poly_direct(r % (1 << l), l)
                    image = affine_eval(p_low, r) % (1 << k)
                    assert poly_direct(r, k + l) == affine_compose(
                        poly_direct(image, k), p_low
                    )


class TestBaseTable:
    def test_depth_two_contents(self):
        table = base_table_init(2)
        assert table.levels[2] == [C2[0], C2[1], C2[2], C2[3]]

    def test_depth_one_contents(self):
        table = base_table_init(1)
        assert table.levels[1] == [AffineStep(1, 0, 1), AffineStep(3, 1, 1)]

    def test_depth_eight_matches_direct(self):
        table = base_table_init(8)
        assert len(table) == 510
        for k in range(9):
            for r in range(1 << k):
                assert table.levels[k][r] == poly_direct(r, k)

    @pytest.mark.parametrize("depth", [0, -1, 17])
    def test_depth_out_of_range(self, depth):
        with pytest.raises(ValueError):
            base_table_init(depth)


class TestPolyFast:
    def test_reference_vectors(self):
        assert poly_fast(3, 2) == AffineStep(9, 5, 2)
        assert poly_fast(27, 5) == AffineStep(81, 85, 5)

    def test_matches_direct_exhaustively(self):
        for k in range(13):
            for r in range(1 << k):
                assert poly_fast(r, k) == poly_direct(r, k)

    def test_matches_direct_random_large(self):
        rng = random.Random(5)
        for _ in range(60):
            k = rng.randrange(1, 4001)
            r = rng.randrange(0, 1 << (k + 40))
            assert poly_fast(r, k) == poly_direct(r % (1 << k), k)

    def test_unreduced_residue_accepted(self):
        assert poly_fast(3 + (1 << 2) * 7, 2) == poly_fast(3, 2)

    def test_shallow_table_still_correct(self):
        table = BaseTable(3)
        rng = random.Random(9)
        for _ in range(50):
            k = rng.randrange(0, 64)
            r = rng.randrange(0, 1 << 70)
            assert poly_fast(r, k, table) == poly_direct(r % (1 << k), k)
