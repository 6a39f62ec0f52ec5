"""Small builders shared by several test modules."""

from dataclasses import replace

from sftkit.superpoly import Kind, SuperElement, VariableTable


def renamed(f: SuperElement, mapping, table: VariableTable = None) -> SuperElement:
    """Rename variables of f (conjugate links follow the mapping)."""
    specs = []
    for s in f.table:
        conj = mapping.get(s.conjugate, s.conjugate) if s.conjugate else None
        specs.append(replace(s, name=mapping.get(s.name, s.name), conjugate=conj))
    T = VariableTable(specs) if table is None else table
    out = T.zero()
    for mono, c in f.terms.items():
        out = out + T.monomial([(mapping.get(n, n), e) for n, e in mono], c)
    return out


def two_copies(T: VariableTable, minus: str = "m", plus: str = "+"):
    """Name maps sending each orbit variable v to v<minus> and v<plus>."""
    orbit = [s.name for s in T if s.kind in (Kind.P, Kind.Q)]
    return {v: v + minus for v in orbit}, {v: v + plus for v in orbit}
