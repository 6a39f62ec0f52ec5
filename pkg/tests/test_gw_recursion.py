import math
from fractions import Fraction

import pytest

from sftkit.errors import DivergenceError, RangeError, SoundnessError
from sftkit.gw_recursion import (
    HJProblem,
    bootstrap,
    close_up,
    cn_problem,
    degree_check,
    extract_nd,
    hj_residual,
    hj_solve,
    kontsevich_oracle,
    run_stage,
)
from sftkit.models import base_table, cp1_potential, point_potential, prequantization_h1
from sftkit.superpoly import TruncationPolicy, exp_truncated, truncate


@pytest.fixture(scope="module")
def stages():
    return bootstrap(2, [6, 11], [None, 4])


def exp_series(x, order):
    T = x.table
    out = T.zero()
    for j in range(order + 1):
        out = out + (x ** j).scale(Fraction(1, math.factorial(j)))
    return out


def test_stage1_closed_form():
    st = run_stage(point_potential(), 1, 6)
    T = st.f_cn.table
    t0, t2, p = T.gens("t0", "t2", "p1_0")
    assert st.f_cn == (t0 * t0 * t2).scale(Fraction(1, 2)) + exp_series(t2, 6) * p


def test_stage1_close_up():
    st = run_stage(point_potential(), 1, 6)
    T = st.f_cpn.table
    t0, t2, z = T.gens("t0", "t2", "z")
    assert st.f_cpn == (t0 * t0 * t2).scale(Fraction(1, 2)) + exp_series(t2, 6) * z
    assert cp1_potential(6).body == st.f_cpn.with_table(cp1_potential(6).body.table)


def test_stage2_head(stages):
    f = truncate(stages[1].f_cn, TruncationPolicy(max_t_power={"t4": 4}))
    T = f.table
    t0, t4, p10, p12, p20, p22 = T.gens("t0", "t4", "p1_0", "p1_2", "p2_0", "p2_2")
    head = (t4 * ((t0 * t0).scale(Fraction(1, 2)) + p12)
            + (t4 ** 2 * p10).scale(Fraction(1, 2))
            + (t4 ** 3 * (p22 + (p12 * p12).scale(Fraction(1, 2)))).scale(Fraction(1, 6))
            + (t4 ** 4 * (p20.scale(2) + p12 * p10)).scale(Fraction(1, 24)))
    assert f == head


def test_nd_against_oracle(stages):
    nd = extract_nd(stages[1].f_cpn, 4, check_t2=True)
    assert nd.entries == kontsevich_oracle(4).entries
    assert nd.entries == {1: 1, 2: 1, 3: 12, 4: 620}


def test_oracle_values():
    assert kontsevich_oracle(6).entries == {1: 1, 2: 1, 3: 12, 4: 620, 5: 87304, 6: 26312976}
    with pytest.raises(RangeError):
        kontsevich_oracle(0)


def test_extract_nd_empty_and_bad():
    T = base_table(2)
    assert extract_nd(T.zero(), 0).entries == {}
    with pytest.raises(SoundnessError):
        extract_nd(T.zero(), 1)


def test_residuals_and_degrees(stages):
    for st in stages:
        assert hj_residual(st.problem, st.f_cn).is_zero()
        assert degree_check(st.f_cn, st.n) is None
        assert degree_check(st.f_cpn, st.n) is None


def test_stage3_runs_clean():
    stages = bootstrap(3, [1, 1, 3])
    st = stages[2]
    assert hj_residual(st.problem, st.f_cn).is_zero()
    assert degree_check(st.f_cn, 3) is None
    assert degree_check(st.f_cpn, 3) is None
    # the leading t6 term is the classical cup product
    assert st.f_cn.coefficient([("t0", 2), ("t6", 1)]) == Fraction(1, 2)
    assert st.f_cn.coefficient([("t6", 1), ("p1_4", 1)]) == 1


def test_zero_h1_keeps_initial():
    prob = cn_problem(point_potential(), 1, 4)
    T = prob.h1.table
    zero = HJProblem(T.zero(), prob.pairing, "t2", T.var("p1_0"), 4)
    assert hj_solve(zero) == T.var("p1_0")


def test_unknown_evolution_variable():
    prob = cn_problem(point_potential(), 1, 2)
    with pytest.raises(RangeError):
        hj_solve(HJProblem(prob.h1, prob.pairing, "t8", prob.initial, 2))


def test_stage_needs_matching_base():
    with pytest.raises(RangeError):
        cn_problem(point_potential(), 2, 4)


def test_short_base_diverges():
    with pytest.raises(DivergenceError):
        run_stage(cp1_potential(2), 2, 11, 4)


def test_close_up_matches_exponential():
    # p_{1,0} -> z e^{t2}, p_{1,2} -> z e^{t2}; everything else to zero
    st = run_stage(point_potential(), 1, 3)
    T = st.f_cn.table
    f = T.var("p1_0").scale(3)
    out = close_up(f, 2, 4)
    U = out.table
    assert out == (U.var("z") * exp_truncated(U.var("t2"), TruncationPolicy(max_t_power={"t2": 4}))).scale(3)
    with pytest.raises(RangeError):
        close_up(f, 2)


def test_prequantization_of_stage1_closes(stages):
    from sftkit.sft_algebras import poisson_bracket
    h = prequantization_h1(stages[0].as_base, 1, 2, 3)
    assert truncate(poisson_bracket(h.body, h.body, h.pairing), TruncationPolicy(max_weight=3)).is_zero()
