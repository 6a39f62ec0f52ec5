from fractions import Fraction

import pytest

from sftkit.errors import ConfigurationError, FiltrationError, GradingError, RangeError, SoundnessError
from sftkit.homology import DGASpec, betti, build_slice, find_boundary_witness, is_cycle
from sftkit.models import sphere3_dga
from sftkit.superpoly import Kind, VariableSpec, VariableTable


def free_counts(dga, W, hi):
    """Monomial counts per degree of the free algebra on the generators, by direct enumeration."""
    T = dga.table
    counts = {}

    def rec(i, w, deg, odd_used):
        if i == len(gens):
            if deg <= hi:
                counts[deg] = counts.get(deg, 0) + 1
            return
        g = gens[i]
        s = T[g]
        e = 0
        while w + s.kappa * e <= W and deg + s.degree * e <= hi and (not s.odd or e <= 1):
            rec(i + 1, w + s.kappa * e, deg + s.degree * e, odd_used)
            e += 1

    gens = dga.all_generators()
    rec(0, 0, Fraction(0), False)
    return counts


def test_sphere3_full_slice_squares_to_zero():
    dga = sphere3_dga(6)
    sl = build_slice(dga, 6, (-1, 26))
    for deg, M in sl.matrices.items():
        N = sl.matrices.get(deg - 1)
        if N is not None and M.shape[1] and N.shape[0] and M.shape[0]:
            assert (N * M).is_zero_matrix
    assert sum(len(v) for v in sl.basis.values()) > 50


def test_sphere3_named_cycles():
    dga = sphere3_dga(4)
    T = dga.table
    sl = build_slice(dga, 4, (0, 8))
    q10, q12 = T.gens("q1_0", "q1_2")
    g1 = q12 - (q10 * q10).scale(Fraction(1, 2))
    assert is_cycle(sl, g1)
    assert not is_cycle(sl, q10)
    assert not is_cycle(sl, q12)
    assert dga.d(q10) == T.var("tau")


def test_boundary_witness():
    dga = sphere3_dga(3)
    T = dga.table
    sl = build_slice(dga, 3, (0, 8))
    c = T.var("tau") * T.var("q1_0")
    w = find_boundary_witness(sl, c)
    assert w is not None and dga.d(w) == c
    assert find_boundary_witness(sl, T.zero()) == T.zero()
    g1 = T.var("q1_2") - (T.var("q1_0") ** 2).scale(Fraction(1, 2))
    assert find_boundary_witness(sl, g1) is None
    assert find_boundary_witness(sl, T.var("q1_0")) is None


def test_off_slice_support():
    dga = sphere3_dga(3)
    sl = build_slice(dga, 3, (0, 4))
    with pytest.raises(RangeError):
        is_cycle(sl, dga.table.var("q2_2"))


def test_tau_zero_quotient_is_free():
    dga = sphere3_dga(6).specialize({"tau": 0})
    assert all(v.is_zero() for v in dga.boundary.values())
    sl = build_slice(dga, 6, (0, 12))
    counts = free_counts(dga, 6, 12)
    b = betti(sl)
    for deg in range(0, 13):
        assert b[Fraction(deg)] == counts.get(Fraction(deg), 0)
    for M in sl.matrices.values():
        assert M.is_zero_matrix


@pytest.mark.parametrize("W", [3, 4, 5])
def test_betti_stable_in_weight(W):
    # a monomial of degree D has weight <= D / 2, so degrees below 2W are complete at cap W
    lo = betti(build_slice(sphere3_dga(W), W, (0, 2 * W - 1)))
    hi = betti(build_slice(sphere3_dga(W + 1), W + 1, (0, 2 * W - 1)))
    assert lo == hi


def test_corrupted_differential_reports_witness():
    dga = sphere3_dga(3)
    T = dga.table
    dga.boundary["q1_2"] = T.var("q1_0")
    with pytest.raises(SoundnessError) as err:
        build_slice(dga, 3, (0, 8))
    assert err.value.witness is not None


def pair_dga(src_deg=1, dst_deg=0, src_kappa=1, dst_kappa=1):
    T = VariableTable([VariableSpec("x", Kind.Q, odd=bool(src_deg % 2), degree=src_deg, kappa=src_kappa),
                       VariableSpec("y", Kind.Q, odd=bool(dst_deg % 2), degree=dst_deg, kappa=dst_kappa)])
    return DGASpec(T, ["x", "y"], {"x": T.var("y"), "y": T.zero()}, linear=True)


def test_acyclic_pair():
    sl = build_slice(pair_dga(), 2, (0, 1))
    assert betti(sl) == {Fraction(0): 0, Fraction(1): 0}


def test_weight_increase_is_rejected():
    with pytest.raises(FiltrationError):
        build_slice(pair_dga(dst_kappa=2), 3, (0, 1))


def test_inhomogeneous_boundary_is_rejected():
    T = VariableTable([VariableSpec("x", Kind.Q, odd=True, degree=3), VariableSpec("y", Kind.Q, degree=0)])
    dga = DGASpec(T, ["x", "y"], {"x": T.var("y"), "y": T.zero()}, linear=True)
    with pytest.raises(GradingError):
        dga.validate()
    with pytest.raises(GradingError):
        build_slice(dga, 2, (0, 3))


def test_linear_slice_needs_degree_zero_z():
    T = VariableTable([VariableSpec("x", Kind.Q, odd=True, degree=1), VariableSpec("y", Kind.Q, degree=0),
                       VariableSpec("z", Kind.Z, degree=-2)])
    dga = DGASpec(T, ["x", "y"], {"x": T.var("y"), "y": T.zero()}, linear=True)
    with pytest.raises(ConfigurationError):
        build_slice(dga, 2, (0, 1))


def test_even_weightless_generator_is_rejected():
    T = VariableTable([VariableSpec("t", Kind.T, degree=0)])
    with pytest.raises(ConfigurationError):
        build_slice(DGASpec(T, ["t"], {"t": T.zero()}), 2, (0, 0))
