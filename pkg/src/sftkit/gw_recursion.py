"""Hamilton-Jacobi bootstrap from C^n to CP^n, and an independent plane-curve oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence

from .errors import DivergenceError, RangeError, SoundnessError
from .models import BaseGWPotential, base_table, bott_table, point_potential, prequantization_h1
from .sft_algebras import Pairing
from .superpoly import (
    Kind,
    SuperElement,
    TruncationPolicy,
    VariableSpec,
    VariableTable,
    coefficient_of,
    degree_violation,
    exp_truncated,
    left_partial,
    substitute,
)


@dataclass
class HJProblem:
    """df/dt = h1 restricted to L_f: q = c * df/dp for each pairing entry (p, q, c)."""

    h1: SuperElement
    pairing: Pairing
    evolution_var: str
    initial: SuperElement
    order: int
    max_weight: Optional[int] = None
    max_kappa: Optional[int] = None


def weight_bound(n: int, j: int) -> int:
    """Largest orbit weight that a degree-homogeneous term of C^n at evolution order j can carry."""
    return max(0, ((2 * n - 2) * j + 6 - 2 * n) // 4)


def hj_solve(problem: HJProblem) -> SuperElement:
    """Integrate order by order: the t^{j+1} coefficient is read off h1|_{L_f} at order j."""
    t = problem.evolution_var
    h1 = problem.h1
    table = h1.table.union(problem.initial.table)
    if t not in table:
        raise RangeError(f"evolution variable {t!r} is not declared")
    f = problem.initial.with_table(table)
    W = problem.max_weight
    if W is not None and problem.max_kappa is not None and W > problem.max_kappa:
        missing = [p for p, _, _ in problem.pairing.entries if table[p].kappa == problem.max_kappa]
        raise DivergenceError(f"weight {W} needs orbit multiplicity {problem.max_kappa + 1}; "
                              f"variables beyond {missing[:1]} are not declared")
    for j in range(problem.order):
        pol = TruncationPolicy(max_weight=W, max_t_power={t: j})
        assign = {}
        for p, q, c in problem.pairing.entries:
            if q in h1.table:
                assign[q] = left_partial(f, p).scale(c) if p in table else table.zero()
        restricted = substitute(h1, assign, pol)
        coeff = coefficient_of(restricted, t, j)
        if coeff.is_zero():
            continue
        f = f + (coeff * table.monomial([(t, j + 1)])).scale(Fraction(1, j + 1))
    return f


def hj_residual(problem: HJProblem, f: SuperElement) -> SuperElement:
    """df/dt - h1|_{L_f}, truncated below the last computed order."""
    t = problem.evolution_var
    pol = TruncationPolicy(max_weight=problem.max_weight, max_t_power={t: problem.order - 1})
    assign = {}
    for p, q, c in problem.pairing.entries:
        if q in problem.h1.table:
            assign[q] = left_partial(f, p).scale(c)
    restricted = substitute(problem.h1, assign, pol)
    lhs = substitute(left_partial(f, t), {}, pol)
    return lhs - restricted


def stage_table(n: int, W: int) -> VariableTable:
    """Variables of C^n: t0, t_{2n}, and p/q orbit variables with multiplicity <= W."""
    T = bott_table(n - 1, 1, W, keep_t=(0,), tau=False)
    return T.extend([VariableSpec(f"t{2 * n}", Kind.T, degree=2 * n - 2, base_index=2 * n)])


def stage_h1(base: BaseGWPotential, n: int, W: int) -> SuperElement:
    """h^1 of the boundary sphere S^{2n-1}, truncated to p-weight W (and q-weight W)."""
    pol = TruncationPolicy(max_p_weight=W, max_q_weight=W)
    h = prequantization_h1(base, 1, 2 * n - 2, W, keep_t=(0,), tau=False, policy=pol)
    return h.body


def cn_problem(base: BaseGWPotential, n: int, order: int, max_weight: Optional[int] = None) -> HJProblem:
    if base.m != n - 1:
        raise RangeError(f"stage {n} needs the potential of CP^{n - 1}")
    W = stage_weight(n, order, max_weight)
    T = stage_table(n, W)
    h1 = stage_h1(base, n, W).with_table(T)
    initial = T.var("p1_0") if n == 1 else T.zero()
    pairing = Pairing.from_conjugates(T)
    return HJProblem(h1, pairing, f"t{2 * n}", initial, order, W, W)


def close_up(f_cn: SuperElement, n: int, t_power: Optional[int] = None,
             z_degree: Optional[int] = None) -> SuperElement:
    """Substitute p_{1,2i} = z * sum over sum s_j (j-1) = i of prod t_{2j}^{s_j}/s_j!, other p = 0."""
    T = f_cn.table
    extra = [VariableSpec("z", Kind.Z, degree=-2 * (n + 1))]
    for j in range(1, n):
        extra.append(VariableSpec(f"t{2 * j}", Kind.T, degree=2 * j - 2, base_index=2 * j))
    T = T.union(VariableTable(extra))
    caps = {f"t{2 * j}": t_power for j in range(1, n)} if t_power is not None else {}
    pol = TruncationPolicy(max_t_power=caps, max_z_degree=z_degree)
    if n > 1 and t_power is None:
        raise RangeError("close_up needs a t-power cap when n > 1")
    e2 = exp_truncated(T.var("t2"), pol) if n > 1 else T.one()
    z = T.var("z")
    assign = {}
    for p in T.names(Kind.P):
        spec = T[p]
        if spec.kappa != 1:
            assign[p] = T.zero()
            continue
        i = spec.base_index // 2
        poly = T.zero()
        for s in product(*(range(i + 1) for _ in range(2, n))):
            if sum(sj * (j - 1) for sj, j in zip(s, range(2, n))) != i:
                continue
            term = T.one()
            for sj, j in zip(s, range(2, n)):
                term = term * T.monomial([(f"t{2 * j}", sj)], Fraction(1, math.factorial(sj)))
            poly = poly + term
        assign[p] = z * e2 * poly
    out = substitute(f_cn.with_table(T), assign, pol)
    return SuperElement(base_table(n).union(_used(out)), out.terms)


def _used(f: SuperElement) -> VariableTable:
    return VariableTable(f.table[v] for v in f.variables())


@dataclass
class NdTable:
    entries: Dict[int, int] = field(default_factory=dict)


def extract_nd(f_cp2: SuperElement, d_max: int, check_t2: bool = False) -> NdTable:
    """N_d = (3d-1)! * [z^d t2^0 t4^{3d-1}] f."""
    out = NdTable()
    for d in range(1, d_max + 1):
        c = f_cp2.coefficient([("z", d), ("t4", 3 * d - 1)])
        val = c * math.factorial(3 * d - 1)
        if val.denominator != 1:
            raise SoundnessError(f"non-integral N_{d} = {val}", witness=d)
        if check_t2:
            c2 = f_cp2.coefficient([("t2", 1), ("z", d), ("t4", 3 * d - 1)])
            if c2 != d * c:
                raise SoundnessError(f"t2-dependence of the degree {d} term is not e^(d t2)", witness=d)
        out.entries[d] = int(val)
    if out.entries.get(1, 1) != 1:
        raise SoundnessError("N_1 must be 1", witness=1)
    return out


def kontsevich_oracle(d_max: int) -> NdTable:
    """Classical recursion for rational plane curves through 3d-1 points."""
    if d_max < 1:
        raise RangeError("d_max must be >= 1")
    N = {1: 1}
    for d in range(2, d_max + 1):
        total = 0
        for d1 in range(1, d):
            d2 = d - d1
            total += N[d1] * N[d2] * (d1 * d1 * d2 * d2 * math.comb(3 * d - 4, 3 * d1 - 2)
                                      - d1 ** 3 * d2 * math.comb(3 * d - 4, 3 * d1 - 1))
        N[d] = total
    return NdTable(N)


@dataclass
class Stage:
    n: int
    f_cn: SuperElement
    f_cpn: SuperElement
    h1: SuperElement
    problem: HJProblem
    t_power: int = 0

    @property
    def as_base(self) -> BaseGWPotential:
        """The CP^n output packaged as the base of the next stage, with its truncation recorded."""
        caps = {f"t{2 * self.n}": self.problem.order}
        caps.update({f"t{2 * j}": self.t_power for j in range(1, self.n)})
        return BaseGWPotential(self.n, self.f_cpn, "bootstrap-stage", caps)


def run_stage(base: BaseGWPotential, n: int, order: int, max_weight: Optional[int] = None,
              t_power: Optional[int] = None) -> Stage:
    problem = cn_problem(base, n, order, max_weight)
    f = hj_solve(problem)
    tp = t_power if t_power is not None else order
    f_cp = close_up(f, n, tp, z_degree=problem.max_weight)
    return Stage(n, f, f_cp, problem.h1, problem, tp)


def stage_weight(n: int, order: int, max_weight: Optional[int] = None) -> int:
    W = weight_bound(n, order)
    if max_weight is not None:
        W = min(W, max_weight)
    return max(W, 1)


def bootstrap(n_max: int, orders: Sequence[int], max_weights: Optional[Sequence[Optional[int]]] = None) -> List[Stage]:
    """Chain the stages: the CP^{n-1} output of one stage is the base of the next.

    Earlier stages are run deep enough for the later ones: stage n at weight W
    needs its base up to t-power 2W (2W + 1 in the differentiated variable) and
    z-degree W.
    """
    if not 1 <= n_max <= 3:
        raise RangeError("n_max must be 1, 2 or 3")
    if len(orders) < n_max:
        raise RangeError("one order per stage is required")
    orders = list(orders[:n_max])
    max_weights = list(max_weights or [None] * n_max)
    t_powers: List[Optional[int]] = [None] * n_max
    for n in range(n_max, 1, -1):
        W = stage_weight(n, orders[n - 1], max_weights[n - 1])
        orders[n - 2] = max(orders[n - 2], 2 * W + 1)
        t_powers[n - 2] = 2 * W
        if max_weights[n - 2] is not None:
            max_weights[n - 2] = max(max_weights[n - 2], W)
    base = point_potential()
    stages = []
    for n in range(1, n_max + 1):
        st = run_stage(base, n, orders[n - 1], max_weights[n - 1], t_powers[n - 1])
        stages.append(st)
        base = st.as_base
    return stages


def degree_check(f: SuperElement, n: int):
    """First monomial of f whose degree is not 2(n-3), or None."""
    return degree_violation(f, 2 * (n - 3))
