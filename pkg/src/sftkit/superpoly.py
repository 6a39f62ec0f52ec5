"""Graded super-commutative polynomials and truncated series over the rationals.

Every algebraic object in sftkit is a :class:`SuperElement`: a sparse map from
canonical monomials to exact :class:`fractions.Fraction` coefficients, bound to a
:class:`VariableTable` that records parity, degree, multiplicity and winding of
each variable.  Monomials are tuples of ``(name, exponent)`` pairs sorted in the
table's canonical order, so structural equality is plain tuple equality.

The canonical order places ``p`` variables last.  A canonical monomial is then
literally the q-left/p-right normal ordered word used by the Weyl product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import IntEnum
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import DivergenceError, GradingError, StructuralError

Monomial = Tuple[Tuple[str, int], ...]
ONE: Monomial = ()


class Kind(IntEnum):
    """Variable kinds, in canonical order."""

    T = 0
    TAU = 1
    Z = 2
    HBAR = 3
    Q = 4
    P = 5


def as_scalar(value) -> Fraction:
    """Coerce ``value`` to an exact rational; floats and complex numbers are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"non-rational scalar {value!r} ({type(value).__name__}); only exact rationals are supported")


@dataclass(frozen=True)
class VariableSpec:
    name: str
    kind: Kind
    odd: bool = False
    degree: Fraction = Fraction(0)
    kappa: int = 1
    winding: int = 0
    base_index: Optional[int] = None
    conjugate: Optional[str] = None
    orbit: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "degree", as_scalar(self.degree))
        if not isinstance(self.kappa, int) or self.kappa < 1:
            raise StructuralError(f"{self.name}: multiplicity must be a positive integer")
        if self.kind in (Kind.HBAR, Kind.Z) and self.odd:
            raise GradingError(f"{self.name}: hbar and z variables are even")

    @property
    def parity(self) -> int:
        return 1 if self.odd else 0

    def sort_key(self):
        base = -1 if self.base_index is None else self.base_index
        return (int(self.kind), base, self.kappa, self.name)


class VariableTable:
    """Immutable registry of variables.  Tables with compatible entries can be merged."""

    def __init__(self, specs: Iterable[VariableSpec] = ()):
        self._specs: Dict[str, VariableSpec] = {}
        for spec in specs:
            old = self._specs.get(spec.name)
            if old is not None and old != spec:
                raise StructuralError(f"conflicting declarations for variable {spec.name!r}")
            self._specs[spec.name] = spec
        for spec in self._specs.values():
            if spec.conjugate is not None and spec.conjugate in self._specs:
                back = self._specs[spec.conjugate].conjugate
                if back is not None and back != spec.name:
                    raise StructuralError(f"conjugate pairing of {spec.name!r} is not symmetric")
        self._key = {n: s.sort_key() for n, s in self._specs.items()}
        self._odd = {n: s.odd for n, s in self._specs.items()}
        self._mul_cache: Dict[Tuple[Monomial, Monomial], Tuple[int, Monomial]] = {}
        self._union_cache: Dict[int, Tuple["VariableTable", "VariableTable"]] = {}

    # lookups
    def __contains__(self, name) -> bool:
        return name in self._specs

    def __getitem__(self, name) -> VariableSpec:
        try:
            return self._specs[name]
        except KeyError:
            raise StructuralError(f"unknown variable {name!r}") from None

    def __iter__(self):
        return iter(self._specs.values())

    def __len__(self):
        return len(self._specs)

    def names(self, kind: Optional[Kind] = None):
        return [n for n, s in self._specs.items() if kind is None or s.kind == kind]

    def extend(self, specs: Iterable[VariableSpec]) -> "VariableTable":
        return VariableTable(list(self._specs.values()) + list(specs))

    def union(self, other: "VariableTable") -> "VariableTable":
        if other is self:
            return self
        hit = self._union_cache.get(id(other))
        if hit is not None and hit[0] is other:
            return hit[1]
        if all(self._specs.get(n) == s for n, s in other._specs.items()):
            merged = self
        elif all(other._specs.get(n) == s for n, s in self._specs.items()):
            merged = other
        else:
            merged = VariableTable(list(self._specs.values()) + list(other._specs.values()))
        self._union_cache[id(other)] = (other, merged)
        return merged

    # element constructors
    def var(self, name: str) -> "SuperElement":
        self[name]
        return SuperElement(self, {((name, 1),): Fraction(1)})

    def gens(self, *names):
        return tuple(self.var(n) for n in names)

    def const(self, value) -> "SuperElement":
        c = as_scalar(value)
        return SuperElement(self, {ONE: c} if c else {})

    def zero(self) -> "SuperElement":
        return SuperElement(self, {})

    def one(self) -> "SuperElement":
        return self.const(1)

    def monomial(self, factors, coeff=1) -> "SuperElement":
        sign, mono = normalize(self, factors)
        c = as_scalar(coeff) * sign
        return SuperElement(self, {mono: c} if c else {})

    # monomial statistics
    def degree(self, mono: Monomial) -> Fraction:
        return sum((self._specs[n].degree * e for n, e in mono), Fraction(0))

    def parity(self, mono: Monomial) -> int:
        return sum(e for n, e in mono if self._odd[n]) % 2

    def winding(self, mono: Monomial) -> int:
        return sum(self._specs[n].winding * e for n, e in mono)

    def weight(self, mono: Monomial) -> int:
        return sum(self._specs[n].kappa * e for n, e in mono if self._specs[n].kind in (Kind.P, Kind.Q))


def normalize(table: VariableTable, factors) -> Tuple[int, Monomial]:
    """Sort an arbitrary word of ``(name, exponent)`` factors into canonical order.

    Returns ``(sign, monomial)``; ``sign`` is 0 when an odd variable would be squared.
    """
    word = []
    for name, exp in factors:
        spec = table[name]
        if exp < 0 and spec.kind not in (Kind.HBAR, Kind.Z):
            raise StructuralError(f"negative exponent on {name!r}")
        if exp == 0:
            continue
        if spec.odd and exp > 1:
            return 0, ONE
        word.append((table._key[name], name, exp))
    sign = 1
    odd_keys = [k for k, n, e in word if table._odd[n]]
    inv = 0
    for i in range(len(odd_keys)):
        for j in range(i + 1, len(odd_keys)):
            if odd_keys[i] > odd_keys[j]:
                inv += 1
    if inv % 2:
        sign = -1
    word.sort(key=lambda w: w[0])
    out = []
    for key, name, exp in word:
        if out and out[-1][0] == name:
            if table._odd[name]:
                return 0, ONE
            out[-1] = (name, out[-1][1] + exp)
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append((name, exp))
    return sign, tuple(out)


def mul_monomials(table: VariableTable, a: Monomial, b: Monomial) -> Tuple[int, Monomial]:
    """Product of two canonical monomials with its Koszul sign (0 if it vanishes)."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    cache = table._mul_cache
    hit = cache.get((a, b))
    if hit is not None:
        return hit
    key, odd = table._key, table._odd
    odd_left = sum(1 for n, _ in a if odd[n])
    sign = 1
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    result = None
    while i < la and j < lb:
        na, ea = a[i]
        nb, eb = b[j]
        ka, kb = key[na], key[nb]
        if ka < kb:
            out.append(a[i])
            if odd[na]:
                odd_left -= 1
            i += 1
        elif kb < ka:
            out.append(b[j])
            if odd[nb] and odd_left % 2:
                sign = -sign
            j += 1
        else:
            if odd[na]:
                result = (0, ONE)
                break
            e = ea + eb
            if e:
                out.append((na, e))
            i += 1
            j += 1
    if result is None:
        out.extend(a[i:])
        out.extend(b[j:])
        result = (sign, tuple(out))
    cache[(a, b)] = result
    return result


class SuperElement:
    """Finite sum of canonical monomials with rational coefficients."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VariableTable, terms: Optional[Mapping[Monomial, Fraction]] = None):
        self.table = table
        self.terms: Dict[Monomial, Fraction] = {m: c for m, c in (terms or {}).items() if c}

    # construction helpers
    def _new(self, table, terms):
        out = SuperElement.__new__(SuperElement)
        out.table = table
        out.terms = terms
        return out

    def _coerce(self, other):
        if isinstance(other, SuperElement):
            return other
        return self.table.const(other)

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        table = self.table.union(other.table)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return self._new(table, terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, value) -> "SuperElement":
        c = as_scalar(value)
        if not c:
            return self._new(self.table, {})
        return self._new(self.table, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, SuperElement):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        return self.scale(1 / as_scalar(other))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = self.table.one()
        for _ in range(k):
            out = mul(out, self)
        return out

    def __eq__(self, other):
        if isinstance(other, SuperElement):
            return self.terms == other.terms
        try:
            return self.terms == self.table.const(other).terms
        except TypeError:
            return NotImplemented

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda mc: self._sort_key(mc[0])))

    def _sort_key(self, mono):
        return tuple((self.table._key[n], e) for n, e in mono)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def coefficient(self, factors) -> Fraction:
        sign, mono = normalize(self.table, factors)
        return sign * self.terms.get(mono, Fraction(0))

    def variables(self):
        return sorted({n for m in self.terms for n, _ in m}, key=lambda n: self.table._key[n])

    def parities(self):
        return {self.table.parity(m) for m in self.terms}

    def parity(self) -> int:
        """Parity of a homogeneous element (0 for zero); mixed parity raises GradingError."""
        ps = self.parities()
        if len(ps) > 1:
            raise GradingError("element has mixed parity")
        return ps.pop() if ps else 0

    def split_parity(self) -> Tuple["SuperElement", "SuperElement"]:
        even, odd = {}, {}
        for m, c in self.terms.items():
            (odd if self.table.parity(m) else even)[m] = c
        return self._new(self.table, even), self._new(self.table, odd)

    def with_table(self, table: VariableTable) -> "SuperElement":
        return self._new(self.table.union(table), dict(self.terms))

    def __repr__(self):
        return f"SuperElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self:
            body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def mul(f: SuperElement, g: SuperElement, policy: Optional["TruncationPolicy"] = None) -> SuperElement:
    """Super-commutative product, optionally truncated monomial by monomial."""
    table = f.table.union(g.table)
    out: Dict[Monomial, Fraction] = {}
    admits = policy.admits if policy is not None else None
    for ma, ca in f.terms.items():
        for mb, cb in g.terms.items():
            sign, m = mul_monomials(table, ma, mb)
            if not sign:
                continue
            if admits is not None and not admits(table, m):
                continue
            v = out.get(m, 0) + sign * ca * cb
            if v:
                out[m] = v
            else:
                del out[m]
    return SuperElement(table, out)


def left_partial(f: SuperElement, v: str) -> SuperElement:
    """Left derivative: the variable is moved to the front before it is removed."""
    table = f.table
    odd_v = table[v].odd
    out: Dict[Monomial, Fraction] = {}
    for mono, c in f.terms.items():
        prefix_parity = 0
        for idx, (n, e) in enumerate(mono):
            if n == v:
                sign = -1 if (odd_v and prefix_parity) else 1
                rest = mono[:idx] + (((n, e - 1),) if e - 1 else ()) + mono[idx + 1:]
                out[rest] = out.get(rest, 0) + sign * e * c
                break
            if table._odd[n]:
                prefix_parity ^= e & 1
    return SuperElement(table, out)


def right_partial(f: SuperElement, v: str) -> SuperElement:
    """Right derivative: the variable is moved to the back before it is removed."""
    table = f.table
    odd_v = table[v].odd
    out: Dict[Monomial, Fraction] = {}
    for mono, c in f.terms.items():
        for idx, (n, e) in enumerate(mono):
            if n == v:
                suffix = sum(ee for nn, ee in mono[idx + 1:] if table._odd[nn]) & 1
                sign = -1 if (odd_v and suffix) else 1
                rest = mono[:idx] + (((n, e - 1),) if e - 1 else ()) + mono[idx + 1:]
                out[rest] = out.get(rest, 0) + sign * e * c
                break
    return SuperElement(table, out)


def coefficient_of(f: SuperElement, v: str, k: int) -> SuperElement:
    """Coefficient of ``v**k`` for an even variable ``v`` (no sign issues arise)."""
    if f.table[v].odd:
        raise GradingError(f"coefficient extraction needs an even variable, {v!r} is odd")
    out = {}
    for mono, c in f.terms.items():
        e = dict(mono).get(v, 0)
        if e == k:
            rest = tuple(x for x in mono if x[0] != v)
            out[rest] = c
    return SuperElement(f.table, out)


def winding_project(f: SuperElement, w: int = 0) -> SuperElement:
    """Keep exactly the monomials of total winding ``w``."""
    table = f.table
    return SuperElement(table, {m: c for m, c in f.terms.items() if table.winding(m) == w})


def set_zero(f: SuperElement, names) -> SuperElement:
    names = set(names)
    return SuperElement(f.table, {m: c for m, c in f.terms.items() if not any(n in names for n, _ in m)})


def degree_violation(f: SuperElement, expected) -> Optional[Monomial]:
    """First monomial (canonical order) whose degree differs from ``expected``, else None."""
    expected = as_scalar(expected)
    for mono, _ in f:
        if f.table.degree(mono) != expected:
            return mono
    return None


@dataclass(frozen=True)
class TruncationPolicy:
    """Caps defining a finite slice of the formal algebras.

    ``max_weight`` bounds the total multiplicity of p and q factors; the optional
    ``max_p_weight``/``max_q_weight`` bound them separately.  ``max_t_power`` caps
    individual variables (any name may be listed).  ``hbar_window`` is an inclusive
    interval of allowed hbar exponents; it is not multiplicatively closed and is
    applied only by :func:`truncate`, never inside products.
    """

    max_weight: Optional[int] = None
    max_t_power: Mapping[str, int] = field(default_factory=dict)
    max_z_degree: Optional[int] = None
    hbar_window: Optional[Tuple[int, int]] = None
    max_p_weight: Optional[int] = None
    max_q_weight: Optional[int] = None
    max_rounds: int = 200

    def __hash__(self):
        return hash((self.max_weight, tuple(sorted(self.max_t_power.items())), self.max_z_degree,
                     self.hbar_window, self.max_p_weight, self.max_q_weight, self.max_rounds))

    def with_caps(self, **changes) -> "TruncationPolicy":
        return replace(self, **changes)

    def with_powers(self, **caps) -> "TruncationPolicy":
        merged = dict(self.max_t_power)
        merged.update(caps)
        return replace(self, max_t_power=merged)

    def admits(self, table: VariableTable, mono: Monomial) -> bool:
        """Multiplicatively closed part of the policy (hbar window excluded)."""
        wp = wq = z = 0
        caps = self.max_t_power
        specs = table._specs
        for n, e in mono:
            s = specs[n]
            k = s.kind
            if k == Kind.P:
                wp += s.kappa * e
            elif k == Kind.Q:
                wq += s.kappa * e
            elif k == Kind.Z:
                z += e
            cap = caps.get(n)
            if cap is not None and e > cap:
                return False
        if self.max_weight is not None and wp + wq > self.max_weight:
            return False
        if self.max_p_weight is not None and wp > self.max_p_weight:
            return False
        if self.max_q_weight is not None and wq > self.max_q_weight:
            return False
        if self.max_z_degree is not None and z > self.max_z_degree:
            return False
        return True

    def in_window(self, table: VariableTable, mono: Monomial) -> bool:
        if self.hbar_window is None:
            return True
        lo, hi = self.hbar_window
        h = sum(e for n, e in mono if table._specs[n].kind == Kind.HBAR)
        return lo <= h <= hi


NO_TRUNCATION = TruncationPolicy()


def truncate(f: SuperElement, policy: Optional[TruncationPolicy]) -> SuperElement:
    if policy is None:
        return f
    t = f.table
    return SuperElement(t, {m: c for m, c in f.terms.items() if policy.admits(t, m) and policy.in_window(t, m)})


def substitute(f: SuperElement, assignment: Mapping[str, SuperElement],
               policy: Optional[TruncationPolicy] = None) -> SuperElement:
    """Simultaneous substitution ``v -> assignment[v]`` followed by truncation."""
    table = f.table
    images = {}
    for name, img in assignment.items():
        if not isinstance(img, SuperElement):
            img = table.const(img)
        want = table[name].parity if name in table else None
        if want is not None and not img.is_zero():
            if img.parities() != {want}:
                raise GradingError(f"substitution for {name!r} does not have parity {want}")
        table = table.union(img.table)
        images[name] = img
    inner = policy.admits if policy is not None else None
    powers: Dict[Tuple[str, int], SuperElement] = {}

    def power(name, e):
        key = (name, e)
        if key not in powers:
            if e < 0:
                raise StructuralError(f"cannot substitute into a negative power of {name!r}")
            if e == 1:
                powers[key] = images[name]
            else:
                powers[key] = mul(power(name, e - 1), images[name], policy)
        return powers[key]

    out = SuperElement(table, {})
    acc_terms: Dict[Monomial, Fraction] = {}
    for mono, c in f.terms.items():
        if not any(n in images for n, _ in mono):
            if inner is None or inner(table, mono):
                acc_terms[mono] = acc_terms.get(mono, 0) + c
            continue
        acc = SuperElement(table, {ONE: c})
        for n, e in mono:
            if n in images:
                factor = power(n, e)
            else:
                factor = SuperElement(table, {((n, e),): Fraction(1)})
            acc = mul(acc, factor, policy)
            if acc.is_zero():
                break
        for m, v in acc.terms.items():
            acc_terms[m] = acc_terms.get(m, 0) + v
    out = SuperElement(table, acc_terms)
    return truncate(out, policy)


def _series(x: SuperElement, coeffs, policy: TruncationPolicy, what: str, start: int) -> SuperElement:
    """sum_k coeffs(k) x^k, the k = 0 term being ``start``."""
    inner = replace(policy, hbar_window=None)
    table = x.table
    total = table.const(start)
    term = table.one()
    k = 0
    while True:
        k += 1
        if k > policy.max_rounds:
            raise DivergenceError(f"{what} did not terminate within {policy.max_rounds} rounds")
        term = mul(term, x, inner)
        if term.is_zero():
            break
        total = total + term.scale(coeffs(k))
    return truncate(total, policy)


def exp_truncated(f: SuperElement, policy: TruncationPolicy = NO_TRUNCATION) -> SuperElement:
    """Truncated exponential.  A nonzero constant term is refused: e^c is not rational."""
    if f.constant_term():
        raise DivergenceError("exponential of an element with nonzero constant term")
    return _series(f, lambda k: Fraction(1, math.factorial(k)), policy, "exponential", 1)


def log_truncated(g: SuperElement, policy: TruncationPolicy = NO_TRUNCATION) -> SuperElement:
    """Truncated logarithm of an element with constant term 1."""
    if g.constant_term() != 1:
        raise DivergenceError("logarithm needs constant term 1")
    x = g - 1
    return _series(x, lambda k: Fraction((-1) ** (k + 1), k), policy, "logarithm", 0)
