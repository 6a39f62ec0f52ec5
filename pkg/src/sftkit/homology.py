"""Exact homology of graded differential algebras on weight-truncated slices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import ConfigurationError, FiltrationError, GradingError, RangeError, SoundnessError
from .sft_algebras import derivation_extend
from .superpoly import Kind, Monomial, SuperElement, VariableTable, as_scalar, substitute


@dataclass
class DGASpec:
    """Free graded-commutative algebra on ``generators`` with a differential given on generators.

    ``odd_params`` are adjoined as odd generators with zero differential.  A
    ``linear`` spec describes a complex spanned by the generators themselves;
    z-type coefficient variables are then specialised to 1, which requires them
    to have degree 0.
    """

    table: VariableTable
    generators: List[str]
    boundary: Dict[str, SuperElement]
    odd_params: List[str] = field(default_factory=list)
    differential_parity: int = 1
    linear: bool = False

    def all_generators(self) -> List[str]:
        return list(self.generators) + [t for t in self.odd_params if t not in self.generators]

    def d(self, f: SuperElement) -> SuperElement:
        return derivation_extend(self.boundary, f.with_table(self.table), self.differential_parity)

    def validate(self) -> None:
        for g, img in self.boundary.items():
            want = self.table[g].degree - 1
            for mono in img.terms:
                if self.table.degree(mono) != want:
                    raise GradingError(f"boundary of {g!r} is not homogeneous of degree {want}")

    def specialize(self, values: Mapping[str, object]) -> "DGASpec":
        """Quotient by setting coefficient parameters to constants (e.g. tau := 0)."""
        assign = {k: self.table.const(v) for k, v in values.items()}
        boundary = {g: substitute(img, assign) for g, img in self.boundary.items() if g not in values}
        return DGASpec(self.table, [g for g in self.generators if g not in values], boundary,
                       [t for t in self.odd_params if t not in values], self.differential_parity, self.linear)


def _strip(dga: DGASpec, mono: Monomial) -> Monomial:
    return tuple((n, e) for n, e in mono if dga.table[n].kind != Kind.Z)


@dataclass
class ChainComplexSlice:
    dga: DGASpec
    weight_cap: int
    degrees: Tuple[Fraction, Fraction]
    basis: Dict[Fraction, List[Monomial]]
    index: Dict[Monomial, int]
    matrices: Dict[Fraction, DomainMatrix]

    def degree_list(self):
        return sorted(self.basis)


def _enumerate(dga: DGASpec, W: int, lo: Fraction, hi: Fraction) -> List[Monomial]:
    table = dga.table
    gens = dga.all_generators()
    if dga.linear:
        return [((g, 1),) for g in gens if lo <= table[g].degree <= hi]
    for g in gens:
        s = table[g]
        if not s.odd and table.weight(((g, 1),)) == 0:
            raise ConfigurationError(f"even generator {g!r} has weight 0; the slice would be infinite")
    out: List[Monomial] = []

    def rec(i, weight, acc):
        if i == len(gens):
            out.append(tuple(acc))
            return
        g = gens[i]
        s = table[g]
        w = table.weight(((g, 1),))
        rec(i + 1, weight, acc)
        e = 1
        while weight + w * e <= W and (not s.odd or e == 1):
            rec(i + 1, weight + w * e, acc + [(g, e)])
            e += 1

    rec(0, 0, [])
    result = []
    for factors in out:
        mono = table.monomial(factors)
        for m in mono.terms:
            if lo <= table.degree(m) <= hi:
                result.append(m)
    return sorted(set(result), key=lambda m: tuple((table._key[n], e) for n, e in m))


def _linearize(dga: DGASpec, f: SuperElement) -> Dict[Monomial, Fraction]:
    out: Dict[Monomial, Fraction] = {}
    for mono, c in f.terms.items():
        m = _strip(dga, mono) if dga.linear else mono
        out[m] = out.get(m, 0) + c
    return {m: c for m, c in out.items() if c}


def build_slice(dga: DGASpec, W: int, degrees: Tuple[object, object]) -> ChainComplexSlice:
    """Monomial basis of weight <= W in degrees lo-1..hi+1 and the exact boundary matrices."""
    lo, hi = as_scalar(degrees[0]), as_scalar(degrees[1])
    table = dga.table
    if dga.linear:
        for spec in table:
            if spec.kind == Kind.Z and spec.degree != 0:
                raise ConfigurationError("linear slices specialise z := 1, which needs deg z = 0")
    monos = _enumerate(dga, W, lo - 1, hi + 1)
    basis: Dict[Fraction, List[Monomial]] = {}
    for m in monos:
        basis.setdefault(table.degree(m), []).append(m)
    index: Dict[Monomial, int] = {}
    for deg, ms in basis.items():
        for i, m in enumerate(ms):
            index[m] = i
    images: Dict[Monomial, Dict[Monomial, Fraction]] = {}
    # d^2 over the whole basis first, so that a failure there is reported with its
    # witness even when the corrupted differential also breaks the grading
    for m in monos:
        dm = dga.d(SuperElement(table, {m: Fraction(1)}))
        if _linearize(dga, dga.d(dm)):
            raise SoundnessError(f"d^2 != 0 on {m}", witness=m)
        images[m] = _linearize(dga, dm)
    for m, lin in images.items():
        w0 = table.weight(m)
        for t in lin:
            if table.weight(t) > w0:
                raise FiltrationError(f"boundary of {m} raises weight")
            if table.degree(t) != table.degree(m) - 1:
                raise GradingError(f"boundary of {m} is not of degree {table.degree(m) - 1}")
    matrices: Dict[Fraction, DomainMatrix] = {}
    for deg in sorted(basis):
        if deg - 1 < lo - 1:
            continue
        cols = basis[deg]
        rows = basis.get(deg - 1, [])
        data = [[QQ(0)] * len(cols) for _ in rows]
        for j, m in enumerate(cols):
            for t, c in images[m].items():
                if t not in index or table.degree(t) != deg - 1:
                    raise FiltrationError(f"boundary of {m} leaves the slice")
                data[index[t]][j] = QQ(c.numerator, c.denominator)
        matrices[deg] = DomainMatrix(data, (len(rows), len(cols)), QQ)
    return ChainComplexSlice(dga, W, (lo, hi), basis, index, matrices)


def _rank(slice_: ChainComplexSlice, deg) -> int:
    M = slice_.matrices.get(deg)
    if M is None or M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    return M.rank()


def betti(slice_: ChainComplexSlice) -> Dict[Fraction, int]:
    """dim ker - rank of the incoming boundary, per degree in the requested interval."""
    lo, hi = slice_.degrees
    degs = {d for d in slice_.basis if lo <= d <= hi}
    if lo.denominator == 1 and hi.denominator == 1:
        degs |= {Fraction(k) for k in range(int(lo), int(hi) + 1)}
    out = {}
    for deg in sorted(degs):
        dim = len(slice_.basis.get(deg, []))
        out[deg] = dim - _rank(slice_, deg) - _rank(slice_, deg + 1)
    return out


def _vector(slice_: ChainComplexSlice, c: SuperElement):
    table = slice_.dga.table
    lin = _linearize(slice_.dga, c)
    degs = {table.degree(m) for m in lin}
    if len(degs) > 1:
        raise GradingError("chain is not homogeneous")
    deg = degs.pop()
    lo, hi = slice_.degrees
    if not (lo <= deg <= hi):
        raise RangeError(f"degree {deg} is outside the slice interval")
    for m in lin:
        if m not in slice_.index or m not in slice_.basis.get(deg, []):
            raise RangeError(f"monomial {m} is not in the slice basis")
    return deg, lin


def is_cycle(slice_: ChainComplexSlice, c: SuperElement) -> bool:
    if c.is_zero():
        return True
    _vector(slice_, c)
    return not _linearize(slice_.dga, slice_.dga.d(c))


def find_boundary_witness(slice_: ChainComplexSlice, c: SuperElement) -> Optional[SuperElement]:
    """An element b of the slice with d(b) = c, or None if c is not a boundary there."""
    table = slice_.dga.table
    if c.is_zero():
        return table.zero()
    deg, lin = _vector(slice_, c)
    if not is_cycle(slice_, c):
        return None
    rows = slice_.basis.get(deg, [])
    cols = slice_.basis.get(deg + 1, [])
    if not cols:
        return None
    M = slice_.matrices[deg + 1].to_list()
    aug = []
    for i, m in enumerate(rows):
        v = lin.get(m, Fraction(0))
        aug.append(list(M[i]) + [QQ(v.numerator, v.denominator)])
    R, pivots = DomainMatrix(aug, (len(rows), len(cols) + 1), QQ).rref()
    if len(cols) in pivots:
        return None
    Rl = R.to_list()
    out = {}
    for r, pc in enumerate(pivots):
        val = Rl[r][len(cols)]
        if val:
            out[cols[pc]] = Fraction(int(val.numerator), int(val.denominator))
    return SuperElement(table, out)
