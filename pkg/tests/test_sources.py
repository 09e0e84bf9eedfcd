import pytest
from hypothesis import given
from hypothesis import strategies as st

from ciprng.sources import (
    DEFAULT_BBS_MODULUS,
    BlumBlumShub,
    BooleanState,
    EntropyError,
    ScriptedSource,
    XorShift64,
    blum_factors,
    ci_step,
    xor_ci_step,
)

from conftest import TRACE_S, TRACE_X0
from oracles import bbs_brute_force, quadratic_residues, xorshift_hand_trace

# frozen from oracles.xorshift_hand_trace(1)
XORSHIFT_SEED1_TRACE = [8193, 8257, 1082269761]
# frozen from oracles.bbs_brute_force(2, 77, 5)
BBS_2_77 = [4, 16, 25, 9, 4]


def test_xorshift_known_answer():
    assert xorshift_hand_trace(1) == XORSHIFT_SEED1_TRACE
    assert XorShift64(1)() == 1082269761


@given(st.integers(1, (1 << 64) - 1))
def test_xorshift_matches_hand_trace(seed):
    assert XorShift64(seed)() == xorshift_hand_trace(seed)[-1]


def test_xorshift_rejects_zero_and_bad_triples():
    with pytest.raises(ValueError):
        XorShift64(0)
    with pytest.raises(ValueError):
        XorShift64(1, (0, 7, 17))
    with pytest.raises(ValueError):
        XorShift64(1, (13, 64, 17))


def test_xorshift_deterministic():
    a, b = XorShift64(0xDEADBEEF), XorShift64(0xDEADBEEF)
    assert [a() for _ in range(100)] == [b() for _ in range(100)]


def test_xorshift_never_hits_zero():
    g = XorShift64(1)
    for _ in range(1_000_000):
        assert g() != 0


def test_bbs_known_answer():
    assert bbs_brute_force(2, 77, 5) == BBS_2_77
    g = BlumBlumShub(2, 77)
    states = [g.step() for _ in range(5)]
    assert states == BBS_2_77


@pytest.mark.parametrize("b, new_b, out", [(2, 4, 4), (9, 4, 4)])
def test_bbs_next_lsbs(b, new_b, out):
    g = BlumBlumShub(b, 77, k=4)
    assert g.next() == out
    assert g.b == new_b


@pytest.mark.parametrize("b", [0, 1, 77, 78])
def test_bbs_rejects_fixed_points_and_out_of_range(b):
    with pytest.raises(ValueError):
        BlumBlumShub(b, 77)


@pytest.mark.parametrize("m", [15, 21 * 3, 5 * 13, 77 * 7, 2 * 77])
def test_bbs_rejects_non_blum(m):
    with pytest.raises(ValueError):
        BlumBlumShub(2, m)


def test_bbs_rejects_square_roots_of_one():
    # 20**2 = 400 = 3*133 + 1
    with pytest.raises(ValueError):
        BlumBlumShub(20, 133)
    assert BlumBlumShub.from_seed(20, 133).b == 22  # 21 shares the factor 7


def test_bbs_rejects_shared_factor():
    with pytest.raises(ValueError):
        BlumBlumShub(7, 77)


def test_default_modulus_is_32_bit_blum():
    p, q = blum_factors(DEFAULT_BBS_MODULUS)
    assert p % 4 == 3 and q % 4 == 3
    assert DEFAULT_BBS_MODULUS < 1 << 32


def test_bbs_from_seed_increments_until_coprime():
    assert BlumBlumShub.from_seed(7, 77).b == 8
    assert BlumBlumShub.from_seed(77, 77).b == 2
    assert BlumBlumShub.from_seed(1, 77).b == 2


@given(st.integers(0, 10_000))
def test_bbs_state_is_quadratic_residue(seed):
    m = 7 * 19  # both 3 mod 4
    residues = quadratic_residues(m)
    g = BlumBlumShub.from_seed(seed, m)
    for _ in range(10):
        b = g.step()
        assert 1 < b < m
        assert b in residues


def test_scripted_source_exhausts():
    s = ScriptedSource([1, 2])
    assert (s(), s()) == (1, 2)
    with pytest.raises(EntropyError):
        s()


@pytest.mark.parametrize(
    "x, s, expected", [("10100", 2, "11100"), ("11100", 4, "11110")]
)
def test_ci_step_trace(x, s, expected):
    assert str(ci_step(BooleanState.from_string(x), s)) == expected


def test_ci_step_rejects_out_of_range():
    x = BooleanState.from_string("10100")
    for s in (0, 6):
        with pytest.raises(ValueError):
            ci_step(x, s)


bool_states = st.lists(st.booleans(), min_size=1, max_size=64).map(lambda b: BooleanState(tuple(b)))


@given(bool_states, st.data())
def test_ci_step_involution_and_weight(x, data):
    s = data.draw(st.integers(1, x.n))
    y = ci_step(x, s)
    assert ci_step(y, s) == x
    assert abs(y.weight() - x.weight()) == 1
    assert sum(a != b for a, b in zip(x.bits, y.bits)) == 1


def test_trace_checkpoints():
    x = BooleanState.from_string(TRACE_X0)
    seen = {}
    for n, s in enumerate(TRACE_S, 1):
        x = ci_step(x, s)
        seen[n] = str(x)
    assert seen[4] == "11110"
    assert seen[9] == "11111"
    assert seen[13] == "10011"


def test_boolean_state_bit_order():
    x = BooleanState.from_string("10011")
    assert x.to_int() == 0b10011
    assert BooleanState.from_int(0b10011, 5) == x


@pytest.mark.parametrize("x, s, out", [(0b1010, 0b0110, 0b1100), (0b1010, 0, 0b1010), (0b1010, 0b1010, 0)])
def test_xor_ci_step(x, s, out):
    assert xor_ci_step(x, s) == out
