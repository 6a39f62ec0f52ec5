"""Closed-form Hamiltonians, DGAs and satellites, plus linear Floer machinery.

Variable naming used throughout:

* ``t{i}``      base cohomology parameters, ``i`` the degree of the class
* ``tau``       odd parameter of the pushed-forward point class
* ``p{k}_{i}``, ``q{k}_{i}``  orbit variables of multiplicity ``k`` and base class ``i``
* ``z``         degree variable of the base; ``zeta`` the winding marker replacing it
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ConfigurationError, DivergenceError, RangeError, ValidationError
from .homology import DGASpec
from .sft_algebras import Hamiltonian, Level, Pairing, classical_differential
from .superpoly import (
    Kind,
    SuperElement,
    TruncationPolicy,
    VariableSpec,
    VariableTable,
    exp_truncated,
    left_partial,
    set_zero,
    substitute,
    winding_project,
)

log = logging.getLogger(__name__)

MARKER = "zeta"


# circle

def circle_table(K: int, variations: bool = False) -> VariableTable:
    specs = [
        VariableSpec("t0", Kind.T, degree=-2, base_index=0),
        VariableSpec("t1", Kind.T, odd=True, degree=-1, base_index=1),
        VariableSpec("hbar", Kind.HBAR, degree=-4),
    ]
    for k in range(1, K + 1):
        specs.append(VariableSpec(f"p{k}", Kind.P, degree=-2, kappa=k, winding=k, conjugate=f"q{k}", orbit=f"c{k}"))
        specs.append(VariableSpec(f"q{k}", Kind.Q, degree=-2, kappa=k, winding=-k, conjugate=f"p{k}", orbit=f"c{k}"))
    if variations:
        specs.append(VariableSpec("dt0", Kind.T, degree=-2, base_index=2))
        specs.append(VariableSpec("dt1", Kind.T, odd=True, degree=-1, base_index=3))
        specs.append(VariableSpec("eps", Kind.T, degree=0, base_index=4))
        for k in range(1, K + 1):
            specs.append(VariableSpec(f"dp{k}", Kind.P, degree=-2, kappa=k, winding=k, orbit=f"d{k}"))
            specs.append(VariableSpec(f"dq{k}", Kind.Q, degree=-2, kappa=k, winding=-k, orbit=f"d{k}"))
    return VariableTable(specs)


def _circle_core(T: VariableTable, K: int) -> SuperElement:
    t0, t1 = T.gens("t0", "t1")
    inner = (t0 * t0).scale(Fraction(1, 2))
    for k in range(1, K + 1):
        inner = inner + T.var(f"q{k}") * T.var(f"p{k}")
    return t1 * inner


def circle_hamiltonian(K: int) -> Hamiltonian:
    """Quantum Hamiltonian of the circle: hbar^-1 (t1 t0^2/2 + t1 sum p_k q_k) - t1/24."""
    if K < 1:
        raise RangeError("multiplicity cap K must be >= 1")
    T = circle_table(K)
    body = T.monomial([("hbar", -1)]) * _circle_core(T, K) - T.var("t1").scale(Fraction(1, 24))
    return Hamiltonian(body, 1, Pairing.from_conjugates(T), Level.QUANTUM)


def circle_rational(K: int) -> Hamiltonian:
    """The rational part h = t1 (t0^2/2 + sum p_k q_k)."""
    if K < 1:
        raise RangeError("multiplicity cap K must be >= 1")
    T = circle_table(K)
    return Hamiltonian(_circle_core(T, K), 1, Pairing.from_conjugates(T), Level.RATIONAL)


# Bott / prequantization bookkeeping

def bott_table(m: int, l: int, W: int, keep_t: Sequence[int] = (0,), tau: bool = True,
               marker: bool = False, c1: Optional[int] = None) -> VariableTable:
    """Variables for the circle bundle of degree ``l`` over CP^m with multiplicities up to ``W``.

    Degrees follow the Bott rule with c = c1/l, where c1 = m + 1 is the first Chern
    number of the line class.
    """
    if l < 1:
        raise RangeError("l must be >= 1")
    c = Fraction(m + 1 if c1 is None else c1, l)
    n = m + 1
    top = 2 * m
    specs = [VariableSpec("hbar", Kind.HBAR, degree=2 * (n - 3))]
    for i in keep_t:
        specs.append(VariableSpec(f"t{i}", Kind.T, degree=i - 2, base_index=i))
    if tau:
        specs.append(VariableSpec("tau", Kind.TAU, odd=True, degree=top - 1, base_index=top))
    if marker:
        specs.append(VariableSpec(MARKER, Kind.Z, winding=-l))
    for k in range(1, W + 1):
        for i in range(0, top + 1, 2):
            specs.append(VariableSpec(f"p{k}_{i}", Kind.P, degree=i - 2 - 2 * c * k, kappa=k, winding=k,
                                      base_index=i, conjugate=f"q{k}_{top - i}", orbit=f"k{k}"))
            specs.append(VariableSpec(f"q{k}_{i}", Kind.Q, degree=i - 2 + 2 * c * k, kappa=k, winding=-k,
                                      base_index=i, conjugate=f"p{k}_{top - i}", orbit=f"k{k}"))
    return VariableTable(specs)


def base_table(m: int, t_names: Optional[Sequence[int]] = None) -> VariableTable:
    """Variables t0..t_{2m} and z of the Gromov-Witten potential of CP^m."""
    idx = list(range(0, 2 * m + 1, 2)) if t_names is None else list(t_names)
    specs = [VariableSpec(f"t{i}", Kind.T, degree=i - 2, base_index=i) for i in idx]
    if m >= 1:
        specs.append(VariableSpec("z", Kind.Z, degree=-2 * (m + 1)))
    return VariableTable(specs)


@dataclass
class BaseGWPotential:
    """Genus-zero potential of CP^m; ``t_power`` records per-variable truncation (absent = exact)."""

    m: int
    body: SuperElement
    source: str = "builtin"
    t_power: Dict[str, int] = field(default_factory=dict)

    @property
    def n_minus_1(self) -> int:
        return self.m


def point_potential() -> BaseGWPotential:
    T = base_table(0)
    t0 = T.var("t0")
    return BaseGWPotential(0, (t0 * t0 * t0).scale(Fraction(1, 6)), "builtin")


def cp1_potential(t_power: int) -> BaseGWPotential:
    """t0^2 t2/2 + e^{t2} z, truncated at t2^t_power."""
    T = base_table(1)
    t0, t2, z = T.gens("t0", "t2", "z")
    e = exp_truncated(t2, TruncationPolicy(max_t_power={"t2": t_power}))
    return BaseGWPotential(1, (t0 * t0 * t2).scale(Fraction(1, 2)) + e * z, "builtin", {"t2": t_power})


def _u(T: VariableTable, i: int, W: int) -> SuperElement:
    out = T.zero()
    for k in range(1, W + 1):
        out = out + T.var(f"p{k}_{i}") + T.var(f"q{k}_{i}")
    return out


def prequantization_h1(base: BaseGWPotential, l: int, theta_index: int, W: int,
                       keep_t: Sequence[int] = (0,), tau: bool = True,
                       policy: Optional[TruncationPolicy] = None) -> Hamiltonian:
    """Rational Hamiltonian of the prequantization bundle from the base potential.

    The derivative of the base potential in ``t_{theta_index}`` is pulled back with
    t_i -> t_i + u_i (kept t's) or t_i -> u_i, z -> marker of winding -l, and
    projected to winding zero.  With ``tau`` the result is multiplied by tau.
    """
    if l < 1 or W < 1:
        raise RangeError("l and W must be >= 1")
    m = base.m
    target = bott_table(m, l, W, keep_t, tau, marker=True)
    fhat = left_partial(base.body, f"t{theta_index}")
    # names shared with the target (t0) take the target's declaration
    T = target.union(VariableTable(s for s in fhat.table if s.name not in target))
    assign = {}
    for i in range(0, 2 * m + 1, 2):
        name = f"t{i}"
        if name not in fhat.table:
            continue
        u = _u(T, i, W)
        assign[name] = T.var(name) + u if i in keep_t else u
    if "z" in fhat.table:
        assign["z"] = T.var(MARKER)
    policy = policy or TruncationPolicy(max_weight=W)
    if policy.max_weight is not None:
        needed = policy.max_weight
    elif policy.max_p_weight is not None and policy.max_q_weight is not None:
        needed = policy.max_p_weight + policy.max_q_weight
    else:
        raise ConfigurationError("prequantization needs a weight cap")
    # every u factor carries weight >= 1, so t-powers up to the weight cap can survive
    for name, cap in base.t_power.items():
        want = needed + (1 if name == f"t{theta_index}" else 0)
        if name in assign and cap < want:
            raise DivergenceError(f"base potential is truncated at {name}^{cap}; weight {needed} needs {name}^{want}")
    pulled = substitute(fhat.with_table(T), assign, policy)
    h = substitute(winding_project(pulled, 0), {MARKER: T.one()})
    h = SuperElement(target, h.terms)
    if tau:
        h = target.var("tau") * h
    return Hamiltonian(h, m + 1, Pairing.from_conjugates(target), Level.RATIONAL)


def _multi_indices(items: Sequence[Tuple[str, int, int]], weight_cap: int, target: int):
    """Exponent vectors over (name, weight, winding) with total weight <= cap and winding == target."""
    out = []

    def rec(i, w, wind, acc):
        if i == len(items):
            if wind == target:
                out.append(tuple(acc))
            return
        name, wt, wd = items[i]
        e = 0
        while w + wt * e <= weight_cap:
            rec(i + 1, w + wt * e, wind + wd * e, acc + ([(name, e)] if e else []))
            e += 1

    rec(0, 0, 0, [])
    return out


def lens_hamiltonian(l: int, W: int) -> Hamiltonian:
    """tau (t0^2/2 + sum q_{k,0} p_{k,0} + winding-zero part of e^{u_2} * marker), by direct enumeration."""
    if l < 1 or W < 1:
        raise RangeError("l and W must be >= 1")
    T = bott_table(1, l, W)
    t0 = T.var("t0")
    inner = (t0 * t0).scale(Fraction(1, 2))
    for k in range(1, W + 1):
        if 2 * k <= W:
            inner = inner + T.var(f"q{k}_0") * T.var(f"p{k}_0")
    items = [(f"p{k}_2", k, k) for k in range(1, W + 1)] + [(f"q{k}_2", k, -k) for k in range(1, W + 1)]
    for exps in _multi_indices(items, W, l):
        coeff = Fraction(1)
        for _, e in exps:
            coeff /= math.factorial(e)
        inner = inner + T.monomial(list(exps), coeff)
    return Hamiltonian(T.var("tau") * inner, 2, Pairing.from_conjugates(T), Level.RATIONAL)


def sphere3_hamiltonian(W: int) -> Hamiltonian:
    return lens_hamiltonian(1, W)


def hk_polynomials(K: int) -> List[SuperElement]:
    """h_1..h_K: coefficients of p_{k,2} in the winding-zero part of e^{u_2} * marker."""
    if K < 1:
        raise RangeError("K must be >= 1")
    T = bott_table(1, 1, K, keep_t=(), tau=False, marker=True)
    pol = TruncationPolicy(max_weight=2 * K - 1, max_p_weight=K)
    series = exp_truncated(_u(T, 2, K), pol) * T.var(MARKER)
    flat = substitute(winding_project(series, 0), {MARKER: T.one()})
    ps = [n for n in T.names(Kind.P)]
    return [set_zero(left_partial(flat, f"p{k}_2"), ps) for k in range(1, K + 1)]


def sphere3_dga(W: int) -> DGASpec:
    """Generators q_{k,0}, q_{k,2} (k <= W) with dq_{k,2} = k tau q_{k,0}, dq_{k,0} = k tau h_k."""
    if W < 1:
        raise RangeError("W must be >= 1")
    T = bott_table(1, 1, W, keep_t=(), tau=True)
    tau = T.var("tau")
    hs = hk_polynomials(W)
    gens, boundary = [], {}
    for k in range(1, W + 1):
        gens += [f"q{k}_0", f"q{k}_2"]
        boundary[f"q{k}_2"] = (tau * T.var(f"q{k}_0")).scale(k)
        boundary[f"q{k}_0"] = (tau * hs[k - 1].with_table(T)).scale(k)
    dga = DGASpec(T, gens, boundary, ["tau"])
    dga.validate()
    return dga


def dga_from_hamiltonian(h: Hamiltonian, odd_params: Sequence[str] = ()) -> DGASpec:
    """The commutative DGA (q-variables, d q = {h, q}|_{p=0}) of a rational Hamiltonian."""
    diff = classical_differential(h)
    T = h.body.table
    gens = [n for n in T.names(Kind.Q)]
    boundary = {q: diff.get(q, T.zero()) for q in gens}
    return DGASpec(T, gens, boundary, list(odd_params))


# satellites of the circle

def _variation_assignment(T: VariableTable, K: int):
    eps = T.var("eps")
    assign = {"t0": T.var("t0") + eps * T.var("dt0"), "t1": T.var("t1") + eps * T.var("dt1")}
    for k in range(1, K + 1):
        assign[f"p{k}"] = T.var(f"p{k}") + eps * T.var(f"dp{k}")
        assign[f"q{k}"] = T.var(f"q{k}") + eps * T.var(f"dq{k}")
    return assign


def variation(h: SuperElement, order: int, K: int) -> SuperElement:
    """delta^order h / order!, read off as the eps^order coefficient of h(x + eps dx)."""
    T = circle_table(K, variations=True)
    shifted = substitute(h.with_table(T), _variation_assignment(T, K))
    out = {}
    for mono, c in shifted.terms.items():
        e = dict(mono).get("eps", 0)
        if e == order:
            out[tuple(x for x in mono if x[0] != "eps")] = c
    return SuperElement(T, out)


def circle_satellite(g: int, n: int, K: int) -> SuperElement:
    """h^{g,n+1} = dt1/n! * winding-zero part of (u_xx)^g (du)^n, as a polynomial in the variations.

    For g = 0 and n in {0, 1} the extension delta^{n+1} h / (n+1)! is returned.
    """
    if g < 0 or n < 0:
        raise RangeError("g and n must be nonnegative")
    if K < 1:
        raise RangeError("K must be >= 1")
    if g == 0 and n in (0, 1):
        return variation(circle_rational(K).body, n + 1, K)
    if 2 * g - 2 + n < 0:
        raise RangeError(f"unstable pair (g, n) = ({g}, {n})")
    T = circle_table(K, variations=True)
    uxx = T.zero()
    du = T.var("dt0")
    for k in range(1, K + 1):
        uxx = uxx - (T.var(f"p{k}") + T.var(f"q{k}")).scale(k * k)
        du = du + T.var(f"dp{k}") + T.var(f"dq{k}")
    prod = T.one()
    for _ in range(g):
        prod = winding_bounded(prod * uxx, K * (g + n))
    for _ in range(n):
        prod = winding_bounded(prod * du, K * (g + n))
    return (T.var("dt1") * winding_project(prod, 0)).scale(Fraction(1, math.factorial(n)))


def winding_bounded(f: SuperElement, bound: int) -> SuperElement:
    t = f.table
    return SuperElement(t, {m: c for m, c in f.terms.items() if abs(t.winding(m)) <= bound})


def satellite_component(form: SuperElement, slots: Sequence[str]) -> Fraction:
    """Component of a multilinear form: iterated left derivatives, the last slot applied first."""
    out = form
    for v in reversed(slots):
        out = left_partial(out, v)
    return out.constant_term()


def poisson_tensor_circle(K: int) -> Dict[Tuple[str, str], Fraction]:
    pi = {}
    for k in range(1, K + 1):
        pi[(f"dp{k}", f"dq{k}")] = Fraction(k)
        pi[(f"dq{k}", f"dp{k}")] = Fraction(-k)
    return pi


def cyclic_coupling(h03: SuperElement, alpha: str, beta: str, gamma: str, delta: str, K: int) -> Fraction:
    """The three-term coupling of h^{0,3} with itself through the Poisson tensor."""
    T = h03.table
    par = {v: T[v].parity for v in (alpha, beta, gamma, delta)}
    pi = poisson_tensor_circle(K)

    def couple(a, b, c, d):
        s = Fraction(0)
        for (mu, nu), val in pi.items():
            x = satellite_component(h03, (a, b, mu))
            if x:
                s += x * val * satellite_component(h03, (nu, c, d))
        return s

    s1 = -1 if ((par[alpha] + par[beta]) * par[gamma]) % 2 else 1
    s2 = -1 if (par[alpha] * (par[beta] + par[gamma])) % 2 else 1
    return couple(alpha, beta, gamma, delta) + s1 * couple(gamma, alpha, beta, delta) \
        + s2 * couple(beta, gamma, alpha, delta)


# linear Floer machinery

@dataclass(frozen=True)
class FloerOrbit:
    label: str
    kappa: int
    cz: int
    tag: Optional[str] = None


@dataclass
class FloerComplexSpec:
    orbits: List[FloerOrbit]
    cylinder_counts: List[Tuple[str, str, Tuple[int, ...], int]] = field(default_factory=list)
    n: int = 2
    c1: Tuple[int, ...] = ()

    def orbit(self, label: str) -> FloerOrbit:
        for o in self.orbits:
            if o.label == label:
                return o
        raise ValidationError(f"unknown orbit {label!r}")


def _pair_c1(c1, d) -> int:
    d = tuple(d)
    if len(d) > len(c1) and any(d[len(c1):]):
        raise ValidationError("degree vector longer than the c1 data")
    return sum(a * b for a, b in zip(c1, d))


def _floer_table(spec: FloerComplexSpec, prefix: str, base: Optional[VariableTable] = None) -> VariableTable:
    specs = []
    for o in spec.orbits:
        deg = o.cz + spec.n - 3
        specs.append(VariableSpec(f"{prefix}{o.label}", Kind.Q, odd=bool(deg % 2), degree=deg,
                                  kappa=o.kappa, orbit=o.label))
    for i, c in enumerate(spec.c1):
        specs.append(VariableSpec(f"z{i}", Kind.Z, degree=-2 * c))
    T = VariableTable(specs)
    return T if base is None else base.union(T)


def _z_monomial(T: VariableTable, d) -> list:
    return [(f"z{i}", e) for i, e in enumerate(d) if e]


def floer_complex(spec: FloerComplexSpec, prefix: str = "q_") -> DGASpec:
    """Linear complex dq = sum n / kappa' z^d q' over the supplied cylinder counts."""
    T = _floer_table(spec, prefix)
    boundary = {f"{prefix}{o.label}": T.zero() for o in spec.orbits}
    for src, dst, d, count in spec.cylinder_counts:
        a, b = spec.orbit(src), spec.orbit(dst)
        if b.cz != a.cz + 2 * _pair_c1(spec.c1, d) - 1:
            raise ValidationError(f"count {src}->{dst} violates the index constraint")
        term = T.monomial(_z_monomial(T, d) + [(f"{prefix}{dst}", 1)], Fraction(count, b.kappa))
        boundary[f"{prefix}{src}"] = boundary[f"{prefix}{src}"] + term
    return DGASpec(T, [f"{prefix}{o.label}" for o in spec.orbits], boundary, linear=True)


def floer_chain_map(spec_plus: FloerComplexSpec, spec_minus: FloerComplexSpec,
                    counts: Sequence[Tuple[str, str, Tuple[int, ...], int]]):
    """Phi(q+) = sum n / kappa' z^d q-, and the residual Phi d+ - d- Phi on generators."""
    plus = floer_complex(spec_plus, "qplus_")
    minus = floer_complex(spec_minus, "qminus_")
    T = plus.table.union(minus.table)
    phi = {f"qplus_{o.label}": T.zero() for o in spec_plus.orbits}
    for src, dst, d, count in counts:
        a, b = spec_plus.orbit(src), spec_minus.orbit(dst)
        if b.cz != a.cz + 2 * _pair_c1(spec_plus.c1 or spec_minus.c1, d):
            raise ValidationError(f"chain map count {src}->{dst} violates the index constraint")
        phi[f"qplus_{src}"] = phi[f"qplus_{src}"] + T.monomial(_z_monomial(T, d) + [(f"qminus_{dst}", 1)],
                                                               Fraction(count, b.kappa))
    residual = {}
    for g in plus.generators:
        lhs = substitute(plus.boundary[g].with_table(T), phi)
        rhs = minus.d(phi[g].with_table(T))
        residual[g] = lhs - rhs
    return phi, residual


def ellipsoid_spec(n: int, i_max: int) -> FloerComplexSpec:
    """One orbit with CZ = n + 2i - 1 for each i = 1..i_max and no cylinders."""
    if n < 1 or i_max < 1:
        raise RangeError("n and i_max must be >= 1")
    return FloerComplexSpec([FloerOrbit(f"e{i}", 1, n + 2 * i - 1) for i in range(1, i_max + 1)], [], n)


# closed-form reference generators

def _brieskorn_validate(p: int, n: int):
    if p < 1 or p % 8 != 1:
        raise ValidationError("p must be a positive integer congruent to 1 mod 8")
    if n < 3 or n % 2 == 0:
        raise ValidationError("n must be an odd integer >= 3")


def _brieskorn_g(N: int, p: int, n: int) -> int:
    return 2 * ((2 * N) // p) + 2 * (N + 1) * (n - 2)


def brieskorn_two_case(p: int, n: int, k: int) -> List[int]:
    """All N >= 1 with 2N+1 not divisible by p that realise k in the doubled case (binary search)."""
    _brieskorn_validate(p, n)
    lo, hi = 1, max(1, k)
    while lo < hi:
        mid = (lo + hi) // 2
        if _brieskorn_g(mid, p, n) < k:
            lo = mid + 1
        else:
            hi = mid
    hits = []
    N = lo
    while _brieskorn_g(N, p, n) == k:
        if (2 * N + 1) % p:
            hits.append(N)
        N += 1
    return hits


def brieskorn_ck(p: int, n: int, k: int) -> int:
    """Dimension c_k of the contact homology of the Brieskorn sphere, by case analysis."""
    _brieskorn_validate(p, n)
    hits = brieskorn_two_case(p, n, k) if k >= 1 else []
    if k % 2 or k < 2 * n - 4:
        if hits:
            log.info("brieskorn collision: k=%d is in the zero clause and also realised by N=%s", k, hits)
        return 0
    if hits:
        if len(hits) > 1:
            log.info("brieskorn collision: k=%d realised by several N=%s", k, hits)
        return 2
    return 1


def yau_generators(n: int, homology_dims: Sequence[Tuple[str, int]], i_max: int) -> List[Tuple[str, int]]:
    """Degree table deg q_{i,j} = 2(n+i-2) - dim c_j for the subcritical generators."""
    for label, dim in homology_dims:
        if dim >= n:
            raise ValidationError(f"generator {label!r} has dimension {dim} >= n = {n}")
    out = []
    for i in range(1, i_max + 1):
        for label, dim in homology_dims:
            out.append((f"q_{i},{label}", 2 * (n + i - 2) - dim))
    return out
