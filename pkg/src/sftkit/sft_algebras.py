"""Poisson, Weyl and classical differential structures, and the cobordism calculus.

Conventions
-----------
A :class:`Pairing` lists triples ``(p, q, c)``: the Poisson/Weyl structure has
``{p, q} = c`` and ``[p, q] = c * hbar``, where ``c`` is the orbit multiplicity
times the relevant entry of the inverse intersection matrix.

The bracket uses a right derivative in the ``p`` slot and a left derivative in the
``q`` slot::

    {f, g} = sum c * ( (f <d/dp) (d/dq> g) - (-1)^{|f||g|} (g <d/dp) (d/dq> f) )

This is the form whose hbar-leading term agrees with the Weyl commutator for
odd as well as even orbit variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from .errors import ConfigurationError, DivergenceError, LevelError, StructuralError
from .superpoly import (
    Kind,
    SuperElement,
    TruncationPolicy,
    VariableTable,
    as_scalar,
    exp_truncated,
    left_partial,
    log_truncated,
    mul,
    mul_monomials,
    right_partial,
    set_zero,
    substitute,
    truncate,
)


@dataclass(frozen=True)
class Pairing:
    entries: Tuple[Tuple[str, str, Fraction], ...]
    hbar: str = "hbar"

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((p, q, as_scalar(c)) for p, q, c in self.entries))

    def by_p(self, p: str):
        return [(q, c) for pp, q, c in self.entries if pp == p]

    def by_q(self, q: str):
        return [(p, c) for p, qq, c in self.entries if qq == q]

    @property
    def p_names(self):
        return {p for p, _, _ in self.entries}

    @property
    def q_names(self):
        return {q for _, q, _ in self.entries}

    def restrict(self, p_names=None, q_names=None) -> "Pairing":
        keep = [(p, q, c) for p, q, c in self.entries
                if (p_names is None or p in p_names) and (q_names is None or q in q_names)]
        return Pairing(tuple(keep), self.hbar)

    def __add__(self, other: "Pairing") -> "Pairing":
        return Pairing(self.entries + other.entries, self.hbar)

    @classmethod
    def from_conjugates(cls, table: VariableTable, hbar: str = "hbar") -> "Pairing":
        """Pair each p with its declared conjugate q, with coefficient equal to the multiplicity."""
        out = []
        for spec in table:
            if spec.kind == Kind.P and spec.conjugate is not None:
                out.append((spec.name, spec.conjugate, Fraction(spec.kappa)))
        return cls(tuple(out), hbar)

    @classmethod
    def from_eta(cls, table: VariableTable, eta_inverse, hbar: str = "hbar") -> "Pairing":
        """Pair p_{orbit,i} with q_{orbit,j} with coefficient kappa * eta^{ij}."""
        qs = {}
        for spec in table:
            if spec.kind == Kind.Q:
                qs[(spec.orbit, spec.base_index)] = spec
        out = []
        for spec in table:
            if spec.kind != Kind.P:
                continue
            i = spec.base_index or 0
            row = eta_inverse[i]
            for j, val in enumerate(row):
                val = as_scalar(val)
                if val and (spec.orbit, j) in qs:
                    out.append((spec.name, qs[(spec.orbit, j)].name, spec.kappa * val))
        return cls(tuple(out), hbar)


class Level(Enum):
    QUANTUM = "quantum"
    RATIONAL = "rational"
    CLASSICAL = "classical"


@dataclass
class Hamiltonian:
    body: SuperElement
    dimension_n: int
    pairing: Pairing
    level: Level = Level.RATIONAL

    @property
    def table(self):
        return self.body.table

    def expected_degree(self) -> Fraction:
        """Degree of every monomial: -1 for H, and -1 + deg(hbar) for the rational h."""
        if self.level == Level.QUANTUM:
            return Fraction(-1)
        return Fraction(-1 + 2 * (self.dimension_n - 3))


@dataclass
class Potential:
    body: SuperElement
    minus: Pairing = field(default_factory=lambda: Pairing(()))
    plus: Pairing = field(default_factory=lambda: Pairing(()))


def _body(x) -> SuperElement:
    return x.body if isinstance(x, (Hamiltonian, Potential)) else x


def _has_kind(f: SuperElement, kind: Kind) -> bool:
    t = f.table
    return any(t[n].kind == kind for m in f.terms for n, _ in m)


# Poisson structure

def _bracket_homogeneous(f, g, pairing, pf, pg):
    sign = -1 if (pf and pg) else 1
    out = f.table.zero().with_table(g.table)
    for p, q, c in pairing.entries:
        a = right_partial(f, p) if p in f.table else None
        b = left_partial(g, q) if q in g.table else None
        if a is not None and b is not None and not a.is_zero() and not b.is_zero():
            out = out + mul(a, b).scale(c)
        a2 = right_partial(g, p) if p in g.table else None
        b2 = left_partial(f, q) if q in f.table else None
        if a2 is not None and b2 is not None and not a2.is_zero() and not b2.is_zero():
            out = out - mul(a2, b2).scale(c * sign)
    return out


def poisson_bracket(f, g, pairing: Pairing) -> SuperElement:
    f, g = _body(f), _body(g)
    if _has_kind(f, Kind.HBAR) or _has_kind(g, Kind.HBAR):
        raise LevelError("Poisson bracket is defined on the hbar-free slice")
    out = f.table.union(g.table).zero()
    for fp, fpar in zip(f.split_parity(), (0, 1)):
        if fp.is_zero():
            continue
        for gp, gpar in zip(g.split_parity(), (0, 1)):
            if gp.is_zero():
                continue
            out = out + _bracket_homogeneous(fp, gp, pairing, fpar, gpar)
    return out


def d_h(h, g, pairing: Optional[Pairing] = None) -> SuperElement:
    """The differential d^h(g) = {h, g} on the Poisson algebra."""
    if isinstance(h, Hamiltonian):
        pairing = pairing or h.pairing
    return poisson_bracket(_body(h), g, pairing)


def classical_differential(h, pairing: Optional[Pairing] = None) -> Dict[str, SuperElement]:
    """The differential on generators: dq = sum_p c * (h <d/dp)|_{p=0}."""
    if isinstance(h, Hamiltonian):
        pairing = pairing or h.pairing
    body = _body(h)
    ps = pairing.p_names
    out: Dict[str, SuperElement] = {}
    for p, q, c in pairing.entries:
        term = set_zero(right_partial(body, p), ps).scale(c) if p in body.table else body.table.zero()
        out[q] = out[q] + term if q in out else term
    return out


def zero_section_differential(h, f: SuperElement, pairing: Optional[Pairing] = None) -> SuperElement:
    """The full differential on the commutative algebra: {h, f} restricted to p = 0."""
    if isinstance(h, Hamiltonian):
        pairing = pairing or h.pairing
    return set_zero(poisson_bracket(_body(h), f, pairing), pairing.p_names)


# Weyl algebra

class _WeylContext:
    """Memoized left action of single p variables on normal-ordered monomials."""

    def __init__(self, table: VariableTable, pairing: Pairing, policy: Optional[TruncationPolicy]):
        self.table = table
        self.pairing = pairing
        self.policy = policy
        self.hbar = pairing.hbar
        self.cache: Dict[Tuple[str, tuple], Dict[tuple, Fraction]] = {}
        self.pairs = {}
        for p, q, c in pairing.entries:
            self.pairs.setdefault(p, []).append((q, c))

    def apply_p(self, p: str, mono) -> Dict[tuple, Fraction]:
        key = (p, mono)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        table = self.table
        odd = table._odd
        out: Dict[tuple, Fraction] = {}
        # commuting part: p moves into the p-block, picking up the Koszul sign
        s, m = mul_monomials(table, ((p, 1),), mono)
        if s:
            out[m] = out.get(m, 0) + s
        # contraction part: c * hbar * d/dq (left derivative of the whole monomial)
        for q, c in self.pairs.get(p, ()):
            pre = 0
            for idx, (n, e) in enumerate(mono):
                if n == q:
                    sgn = -1 if (odd[q] and pre) else 1
                    rest = mono[:idx] + (((n, e - 1),) if e - 1 else ()) + mono[idx + 1:]
                    s2, m2 = mul_monomials(table, ((self.hbar, 1),), rest)
                    if s2:
                        out[m2] = out.get(m2, 0) + sgn * s2 * e * c
                    break
                if odd[n]:
                    pre ^= e & 1
        if self.policy is not None:
            out = {m: v for m, v in out.items() if v and self.policy.admits(table, m)}
        else:
            out = {m: v for m, v in out.items() if v}
        self.cache[key] = out
        return out

    def p_act(self, p: str, x: Dict[tuple, Fraction]) -> Dict[tuple, Fraction]:
        out: Dict[tuple, Fraction] = {}
        for mono, c in x.items():
            for m, v in self.apply_p(p, mono).items():
                w = out.get(m, 0) + c * v
                if w:
                    out[m] = w
                else:
                    del out[m]
        return out

    def product(self, f: SuperElement, g: SuperElement) -> SuperElement:
        table = self.table
        out: Dict[tuple, Fraction] = {}
        admits = self.policy.admits if self.policy is not None else None
        for ma, ca in f.terms.items():
            split = len(ma)
            while split > 0 and table[ma[split - 1][0]].kind == Kind.P:
                split -= 1
            prefix, ps = ma[:split], ma[split:]
            x = dict(g.terms)
            for p, e in reversed(ps):
                for _ in range(e):
                    x = self.p_act(p, x)
                    if not x:
                        break
            for mb, cb in x.items():
                s, m = mul_monomials(table, prefix, mb)
                if not s:
                    continue
                if admits is not None and not admits(table, m):
                    continue
                v = out.get(m, 0) + s * ca * cb
                if v:
                    out[m] = v
                else:
                    del out[m]
        return SuperElement(table, out)


def _weyl_table(f, g, pairing):
    table = f.table.union(g.table)
    if pairing.hbar not in table:
        raise StructuralError(f"Weyl product needs the hbar variable {pairing.hbar!r} in the table")
    return table


def weyl_mul(F, G, pairing: Pairing, policy: Optional[TruncationPolicy] = None) -> SuperElement:
    """Normal-ordered Weyl product with [p, q] = c * hbar for each pairing entry."""
    F, G = _body(F), _body(G)
    table = _weyl_table(F, G, pairing)
    ctx = _WeylContext(table, pairing, policy)
    return ctx.product(F.with_table(table), G.with_table(table))


def weyl_commutator(F, G, pairing: Pairing, policy: Optional[TruncationPolicy] = None) -> SuperElement:
    """[F, G] = F o G - (-1)^{|F||G|} G o F, computed on parity-homogeneous pieces."""
    F, G = _body(F), _body(G)
    table = _weyl_table(F, G, pairing)
    ctx = _WeylContext(table, pairing, policy)
    out = table.zero()
    for fp, fpar in zip(F.with_table(table).split_parity(), (0, 1)):
        if fp.is_zero():
            continue
        for gp, gpar in zip(G.with_table(table).split_parity(), (0, 1)):
            if gp.is_zero():
                continue
            sign = -1 if (fpar and gpar) else 1
            out = out + ctx.product(fp, gp) - ctx.product(gp, fp).scale(sign)
    return out


def D_H(H, f, pairing: Optional[Pairing] = None, policy: Optional[TruncationPolicy] = None) -> SuperElement:
    """The differential D^H(f) = [H, f] on the Weyl algebra."""
    if isinstance(H, Hamiltonian):
        pairing = pairing or H.pairing
    return weyl_commutator(_body(H), f, pairing, policy)


def hbar_coefficient(f: SuperElement, hbar: str, k: int) -> SuperElement:
    out = {}
    for mono, c in f.terms.items():
        e = dict(mono).get(hbar, 0)
        if e == k:
            out[tuple(x for x in mono if x[0] != hbar)] = c
    return SuperElement(f.table, out)


# cobordism calculus

def _check_interface(F, G, interface: Pairing):
    for p, q, _ in interface.entries:
        if q in F.table and any(n == q for m in F.terms for n, _ in m):
            raise StructuralError(f"left operand contains interface variable {q!r}")
        if p in G.table and any(n == p for m in G.terms for n, _ in m):
            raise StructuralError(f"right operand contains interface variable {p!r}")
    known = F.table.union(G.table)
    for p, q, _ in interface.entries:
        if p not in known or q not in known:
            raise StructuralError(f"interface pair ({p!r}, {q!r}) is not declared")


def star(F, G, interface: Pairing, degree_shift: Optional[Mapping[str, int]] = None,
         z: Optional[str] = None, policy: Optional[TruncationPolicy] = None) -> SuperElement:
    """Glue F (in q-, p) to G (in q, p+): each interface p of F acts on G as c*hbar*z^d*d/dq, then q := 0."""
    F, G = _body(F), _body(G)
    _check_interface(F, G, interface)
    degree_shift = degree_shift or {}
    table = F.table.union(G.table)
    if interface.hbar not in table:
        raise StructuralError("star needs hbar in the table")
    acts = {}
    for p, q, c in interface.entries:
        d = degree_shift.get(p, 0)
        factor = table.var(interface.hbar).scale(c)
        if d:
            if z is None:
                raise ConfigurationError("degree shift given without a z variable")
            factor = factor * table.monomial([(z, d)])
        acts.setdefault(p, []).append((q, factor))
    G = G.with_table(table)
    ps = interface.p_names
    qs = interface.q_names
    out = table.zero()
    for mono, c in F.terms.items():
        split = len(mono)
        while split > 0 and mono[split - 1][0] in ps:
            split -= 1
        prefix, word = mono[:split], mono[split:]
        if any(n in ps for n, _ in prefix):
            raise StructuralError("interface p variables must be the last factors of each monomial")
        x = G
        for p, e in reversed(word):
            for _ in range(e):
                y = table.zero()
                for q, factor in acts[p]:
                    y = y + mul(factor, left_partial(x, q), policy)
                x = y
        x = set_zero(x, qs)
        out = out + mul(SuperElement(table, {prefix: c}), x, policy)
    return truncate(out, policy) if policy is not None else out


def diamond(F, G, interface: Pairing, degree_shift=None, z=None,
            policy: TruncationPolicy = TruncationPolicy()) -> SuperElement:
    """The unique D with exp(D) = exp(F) * exp(G) under the policy."""
    F, G = _body(F), _body(G)
    inner = policy.with_caps(hbar_window=None)
    eF = exp_truncated(F, inner)
    eG = exp_truncated(G, inner)
    glued = star(eF, eG, interface, degree_shift, z, inner)
    return truncate(log_truncated(glued, inner), policy)


def _z_factor(table, z, d):
    if not d:
        return table.one()
    if z is None:
        raise ConfigurationError("degree shift given without a z variable")
    return table.monomial([(z, d)])


def sharp(f_minus, f_plus, interface: Pairing, degree_shift=None, z=None,
          policy: TruncationPolicy = TruncationPolicy()) -> SuperElement:
    """Rational gluing: solve the interface constraints by fixed point, then substitute."""
    fm, fp = _body(f_minus), _body(f_plus)
    degree_shift = degree_shift or {}
    table = fm.table.union(fp.table)
    fm, fp = fm.with_table(table), fp.with_table(table)
    entries = interface.entries
    if not entries:
        return truncate(fm + fp, policy)
    q_val = {q: table.zero() for _, q, _ in entries}
    p_val = {p: table.zero() for p, _, _ in entries}
    dq = {}
    dp = {}
    for p, q, c in entries:
        zf = _z_factor(table, z, degree_shift.get(p, 0))
        dq[q] = mul(zf, left_partial(fm, p)).scale(c)
        dp[p] = mul(zf, left_partial(fp, q)).scale(c)
    for _ in range(policy.max_rounds):
        new_q = {q: substitute(dq[q], p_val, policy) for q in dq}
        new_p = {p: substitute(dp[p], q_val, policy) for p in dp}
        if new_q == q_val and new_p == p_val:
            break
        q_val, p_val = new_q, new_p
    else:
        raise DivergenceError("interface constraints did not reach a fixed point")
    total = fm + fp
    for p, q, c in entries:
        zf = _z_factor(table, z, -degree_shift.get(p, 0))
        total = total - mul(zf, mul(table.var(q), table.var(p))).scale(1 / c)
    assign = dict(q_val)
    assign.update(p_val)
    return substitute(total, assign, policy)


def lagrangian_restrict(g, f, minus: Pairing = Pairing(()), plus: Pairing = Pairing(()),
                        policy: Optional[TruncationPolicy] = None) -> SuperElement:
    """Restrict g to L_f: p- = c * df/dq-, q+ = c * df/dp+."""
    g, fb = _body(g), _body(f)
    table = g.table.union(fb.table)
    fb = fb.with_table(table)
    assign = {}
    for p, q, c in minus.entries:
        assign[p] = left_partial(fb, q).scale(c) if q in table else table.zero()
    for p, q, c in plus.entries:
        assign[q] = left_partial(fb, p).scale(c) if p in table else table.zero()
    return substitute(g.with_table(table), assign, policy)


def dw_check(H_minus, H_plus, F, minus: Pairing, plus: Pairing,
             policy: TruncationPolicy = TruncationPolicy()) -> SuperElement:
    """Residual of the cobordism equation: (H- o e^F)|_{p-=0} - (e^F o H+)|_{q+=0}."""
    Hm, Hp, Fb = _body(H_minus), _body(H_plus), _body(F)
    inner = policy.with_caps(hbar_window=None)
    eF = exp_truncated(Fb, inner)
    left = weyl_mul(Hm, eF, minus, inner) if not Hm.is_zero() else eF.table.zero()
    right = weyl_mul(eF, Hp, plus, inner) if not Hp.is_zero() else eF.table.zero()
    left = set_zero(left, minus.p_names)
    right = set_zero(right, plus.q_names)
    return truncate(left - right, policy)


def psi_from_potential(f, plus: Pairing) -> Dict[str, SuperElement]:
    """Psi(q+) = c * (df/dp+)|_{p+=0}: the p+-linear coefficients of the potential."""
    fb = _body(f)
    ps = plus.p_names
    out: Dict[str, SuperElement] = {}
    for p, q, c in plus.entries:
        term = set_zero(left_partial(fb, p), ps).scale(c) if p in fb.table else fb.table.zero()
        out[q] = out[q] + term if q in out else term
    return out


def apply_homomorphism(images: Mapping[str, SuperElement], g: SuperElement,
                       policy: Optional[TruncationPolicy] = None) -> SuperElement:
    """Extend a map on generators multiplicatively."""
    return substitute(g, images, policy)


def novikov_check(f, action: Mapping[str, object], omega_degree: Mapping[str, object]) -> bool:
    """True iff every monomial z^d p^Gamma has sum d_i omega_i > -sum action(p).

    Monomials with d = 0 and no p factors (the coefficient ring itself) are exempt.
    """
    fb = _body(f)
    t = fb.table
    for mono in fb.terms:
        lhs = Fraction(0)
        rhs = Fraction(0)
        if not any(t[n].kind in (Kind.Z, Kind.P) for n, _ in mono):
            continue
        for n, e in mono:
            kind = t[n].kind
            if kind == Kind.Z:
                if n not in omega_degree:
                    raise ConfigurationError(f"missing omega-degree for {n!r}")
                lhs += as_scalar(omega_degree[n]) * e
            elif kind == Kind.P:
                if n not in action:
                    raise ConfigurationError(f"missing action for {n!r}")
                rhs -= as_scalar(action[n]) * e
        if not lhs > rhs:
            return False
    return True


def derivation_extend(images: Mapping[str, SuperElement], f: SuperElement, parity: int = 1) -> SuperElement:
    """Extend a map on generators to a derivation of the given parity (Leibniz rule)."""
    table = f.table
    odd = table._odd
    out = table.zero()
    for mono, c in f.terms.items():
        pre = 0
        for idx, (n, e) in enumerate(mono):
            img = images.get(n)
            if img is not None and not img.is_zero():
                sign = -1 if (parity and pre) else 1
                left = SuperElement(table, {mono[:idx]: Fraction(1)})
                rest = ((n, e - 1),) if e - 1 else ()
                right = SuperElement(table, {rest + mono[idx + 1:]: Fraction(1)})
                # d(v^e) = e v^{e-1} dv for even v; odd v has e = 1
                out = out + mul(mul(left, img), right).scale(sign * e * c)
            if odd[n]:
                pre ^= e & 1
    return out


def quantum_to_rational(H: SuperElement, hbar: str = "hbar") -> SuperElement:
    """The rational Hamiltonian h: the hbar^-1 coefficient of H."""
    return hbar_coefficient(H, hbar, -1)
