"""Command-line front end.

Every command prints a JSON report (keys sorted, rationals as "num/den"), or a
plain-text rendering of it with ``--format text``.
Exit codes: 0 success, 2 bad input, 3 a mathematical identity failed.
Set SFTKIT_OUTPUT_DIR to also write the report (and CSV tables) to files.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import grading, gw_recursion, homology, models
from .errors import FiltrationError, SFTError, SoundnessError, ValidationError
from .homology import DGASpec
from .sft_algebras import (
    Hamiltonian,
    Level,
    Pairing,
    derivation_extend,
    poisson_bracket,
    quantum_to_rational,
    weyl_commutator,
)
from .superpoly import Kind, SuperElement, TruncationPolicy, VariableSpec, VariableTable, degree_violation, truncate

OUTPUT_ENV = "SFTKIT_OUTPUT_DIR"

EXIT_OK, EXIT_INPUT, EXIT_RESIDUAL = 0, 2, 3


class ResidualFailure(Exception):
    def __init__(self, report):
        super().__init__("residual failure")
        self.report = report


# serialization

def to_jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, SuperElement):
        return str(x)
    return x


def dumps(report) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2)


def render_text(report, indent: str = "") -> str:
    """Plain-text rendering: one ``key: value`` line per scalar, nested blocks indented."""
    data = to_jsonable(report)
    lines = []

    def walk(x, pad, key):
        head = f"{pad}{key}:" if key is not None else None
        if isinstance(x, dict):
            if head:
                lines.append(head)
            for k in sorted(x):
                walk(x[k], pad + ("  " if head else ""), k)
        elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
            if head:
                lines.append(head)
            for v in x:
                if isinstance(v, dict):
                    lines.append(pad + "  - " + ", ".join(f"{k}={_flat(v[k])}" for k in sorted(v)))
                else:
                    lines.append(pad + "  - " + _flat(v))
        else:
            lines.append(f"{head} {_flat(x)}" if head else pad + _flat(x))

    walk(data, indent, None)
    return "\n".join(lines)


def _flat(x) -> str:
    if isinstance(x, list):
        return "[" + ", ".join(_flat(v) for v in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}={_flat(x[k])}" for k in sorted(x)) + "}"
    if isinstance(x, bool):
        return "true" if x else "false"
    return "null" if x is None else str(x)


def terms_table(f: SuperElement) -> List[dict]:
    out = []
    for mono, c in f:
        out.append({"coeff": c, "factors": [{"var": n, "exp": e} for n, e in mono]})
    return out


def _monomial_str(table: VariableTable, mono) -> str:
    return str(SuperElement(table, {mono: Fraction(1)}))


# model files

def _parse_terms(table: VariableTable, terms) -> SuperElement:
    out = table.zero()
    for t in terms:
        try:
            coeff = Fraction(int(t["coeff_num"]), int(t.get("coeff_den", 1)))
            factors = [(f["var"], int(f["exp"])) for f in t.get("factors", [])]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"malformed term {t!r}") from exc
        for v, _ in factors:
            if v not in table:
                raise ValidationError(f"term uses undeclared variable {v!r}")
        out = out + table.monomial(factors, coeff)
    return out


_PARAM_KINDS = {"t": Kind.T, "tau": Kind.TAU, "z": Kind.Z}


class ModelFile:
    """A custom model read from JSON; see the README for the schema."""

    def __init__(self, doc: dict):
        if not isinstance(doc, dict):
            raise ValidationError("model file must hold a JSON object")
        self.doc = doc
        self.name = doc.get("model", "custom")
        try:
            self.n = int(doc["dimension_n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError("dimension_n is required") from exc
        trunc = doc.get("truncation", {})
        self.weight = trunc.get("weight")
        self.policy = TruncationPolicy(max_weight=self.weight,
                                       max_t_power=dict(trunc.get("t_powers", {})) or None,
                                       max_z_degree=trunc.get("z_degree"))
        self.table = self._build_table()
        self.pairing = self._build_pairing()
        self.hamiltonian = None
        if "hamiltonian" in doc:
            body = _parse_terms(self.table, doc["hamiltonian"])
            level = Level.QUANTUM if "hbar" in body.variables() else Level.RATIONAL
            self.hamiltonian = Hamiltonian(body, self.n, self.pairing, level)
        self.differential = None
        if "differential" in doc:
            diff = doc["differential"]
            if not isinstance(diff, dict):
                raise ValidationError("differential must map generator names to term lists")
            self.differential = {}
            for g, terms in diff.items():
                if g not in self.table:
                    raise ValidationError(f"differential of undeclared generator {g!r}")
                self.differential[g] = _parse_terms(self.table, terms)
        self.floer = self._build_floer() if "floer_counts" in doc else None
        if "base_potential" in doc:
            if self.hamiltonian is not None:
                raise ValidationError("give either a hamiltonian or a base_potential, not both")
            self.hamiltonian = self._from_base(doc["base_potential"])
            self.table = self.hamiltonian.table
        self.cycles = [(c["name"], _parse_terms(self.table, c["terms"])) for c in doc.get("cycles", [])]
        self._check_grading()

    def _build_floer(self) -> models.FloerComplexSpec:
        orbits = [models.FloerOrbit(str(o["label"]), int(o["kappa"]), int(o["cz"])) for o in self.doc.get("orbits", [])]
        counts = []
        for c in self.doc["floer_counts"]:
            try:
                counts.append((str(c["src"]), str(c["dst"]), tuple(int(x) for x in c.get("d", [])), int(c["count"])))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"malformed floer count {c!r}") from exc
        spec = models.FloerComplexSpec(orbits, counts, self.n, tuple(int(x) for x in self.doc.get("c1", [])))
        for src, dst, _, _ in counts:
            spec.orbit(src), spec.orbit(dst)
        return spec

    def _from_base(self, terms) -> Hamiltonian:
        """Prequantization Hamiltonian of a circle bundle over CP^m from its base potential."""
        names = {f["var"] for t in terms for f in t.get("factors", [])}
        idx = [int(v[1:]) for v in names if v.startswith("t") and v[1:].isdigit()]
        m = self.n - 1
        if m < 0 or any(i % 2 or i > 2 * m for i in idx):
            raise ValidationError(f"base potential variables must be t0..t{2 * max(m, 0)} and z")
        base = models.BaseGWPotential(m, _parse_terms(models.base_table(m), terms), "user")
        if self.weight is None:
            raise ValidationError("a base potential needs truncation.weight")
        return models.prequantization_h1(base, int(self.doc.get("l", 1)), 2 * m, int(self.weight))

    def _build_table(self) -> VariableTable:
        specs = [VariableSpec("hbar", Kind.HBAR, degree=2 * (self.n - 3))]
        self.labels = []
        for o in self.doc.get("orbits", []):
            try:
                label, kappa, cz = str(o["label"]), int(o["kappa"]), int(o["cz"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"malformed orbit {o!r}") from exc
            if kappa < 1:
                raise ValidationError(f"orbit {label!r} needs a positive multiplicity")
            dp, dq = grading.degrees_pq(cz, self.n)
            wind = int(o.get("winding", 0))
            bi = o.get("base_index")
            self.labels.append(label)
            specs.append(VariableSpec(f"p_{label}", Kind.P, odd=bool(dp % 2), degree=dp, kappa=kappa,
                                      winding=wind, base_index=bi, conjugate=f"q_{label}", orbit=label))
            specs.append(VariableSpec(f"q_{label}", Kind.Q, odd=bool(dq % 2), degree=dq, kappa=kappa,
                                      winding=-wind, base_index=bi, conjugate=f"p_{label}", orbit=label))
        for prm in self.doc.get("parameters", []):
            kind = _PARAM_KINDS.get(prm.get("kind", "t"))
            if kind is None:
                raise ValidationError(f"unknown parameter kind in {prm!r}")
            deg = Fraction(prm.get("degree", 0))
            specs.append(VariableSpec(prm["name"], kind, odd=bool(prm.get("odd", deg.denominator == 1 and deg % 2)),
                                      degree=deg))
        try:
            return VariableTable(specs)
        except SFTError as exc:
            raise ValidationError(str(exc)) from exc

    def _build_pairing(self) -> Pairing:
        mat = self.doc.get("pairing")
        if mat is None:
            return Pairing.from_conjugates(self.table)
        k = len(self.labels)
        if len(mat) != k or any(len(row) != k for row in mat):
            raise ValidationError(f"pairing must be a {k}x{k} matrix over the orbits")
        entries = []
        for i, row in enumerate(mat):
            for j, c in enumerate(row):
                c = Fraction(c)
                if c:
                    entries.append((f"p_{self.labels[i]}", f"q_{self.labels[j]}", c))
        return Pairing(tuple(entries))

    def _check_grading(self):
        if self.hamiltonian is not None:
            bad = degree_violation(self.hamiltonian.body, self.hamiltonian.expected_degree())
            if bad is not None:
                raise ValidationError(f"hamiltonian term {_monomial_str(self.table, bad)} has the wrong degree")
        for g, img in (self.differential or {}).items():
            bad = degree_violation(img, self.table[g].degree - 1)
            if bad is not None:
                raise ValidationError(f"boundary of {g} has a term {_monomial_str(self.table, bad)} of wrong degree")
            if img.parity() != (self.table[g].parity + 1) % 2 and not img.is_zero():
                raise ValidationError(f"boundary of {g} has the wrong parity")

    def dga(self) -> DGASpec:
        if self.floer is not None:
            return models.floer_complex(self.floer)
        if self.differential is not None:
            gens = list(self.differential)
            odd = [n for n in self.table.names(Kind.TAU)]
            return DGASpec(self.table, gens, dict(self.differential), odd, linear=bool(self.doc.get("linear")))
        if self.hamiltonian is None:
            raise ValidationError("model has neither a hamiltonian nor a differential")
        h = self.hamiltonian
        if h.level == Level.QUANTUM:
            h = Hamiltonian(quantum_to_rational(h.body), h.dimension_n, h.pairing, Level.RATIONAL)
        return models.dga_from_hamiltonian(h, self.table.names(Kind.TAU))


def load_model_file(path: str) -> ModelFile:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read model file {path}: {exc}") from exc
    return ModelFile(doc)


def _builtin(name: str, weight: int):
    """(hamiltonian or None, dga or None) for a builtin model name."""
    if name == "circle":
        return models.circle_hamiltonian(weight), None
    if name == "sphere3":
        return models.sphere3_hamiltonian(weight), models.sphere3_dga(weight)
    if name.startswith("lens:"):
        l = _int_suffix(name)
        h = models.lens_hamiltonian(l, weight)
        return h, models.dga_from_hamiltonian(h, ["tau"])
    if name.startswith("ellipsoid:"):
        return None, models.floer_complex(models.ellipsoid_spec(_int_suffix(name), weight))
    raise ValidationError(f"unknown model {name!r}")


def _int_suffix(name: str) -> int:
    try:
        return int(name.split(":", 1)[1])
    except ValueError as exc:
        raise ValidationError(f"bad model name {name!r}") from exc


def _resolve(model: str, weight: Optional[int]):
    if model.endswith(".json") or os.path.sep in model:
        mf = load_model_file(model)
        return mf, mf.hamiltonian, None, (weight if weight is not None else mf.weight)
    if weight is None:
        raise ValidationError("--weight is required for builtin models")
    h, dga = _builtin(model, weight)
    return None, h, dga, weight


# commands

def _d_squared(dga: DGASpec) -> Optional[str]:
    for g in dga.all_generators():
        img = dga.boundary.get(g)
        if img is None:
            continue
        dd = derivation_extend(dga.boundary, img.with_table(dga.table), dga.differential_parity)
        if not dd.is_zero():
            return f"d^2({g}) = {dd}"
    return None


def cmd_verify(args) -> dict:
    mf, h, dga, W = _resolve(args.model, args.weight)
    if mf is not None:
        dga = mf.dga() if (mf.differential is not None or mf.hamiltonian is not None or mf.floer is not None) else None
    policy = TruncationPolicy(max_weight=W)
    report = {"model": args.model, "weight": W}
    failed = False
    if h is None:
        report["hh_residual"] = "n/a"
        report["degree_check"] = "n/a"
    else:
        body = h.body
        if h.level == Level.QUANTUM:
            res = weyl_commutator(body, body, h.pairing, policy)
        else:
            res = truncate(poisson_bracket(body, body, h.pairing), policy)
        if res.is_zero():
            report["hh_residual"] = "zero"
        else:
            mono, c = next(iter(res))
            report["hh_residual"] = {"witness": _monomial_str(res.table, mono), "coeff": c, "terms": len(res)}
            failed = True
        bad = degree_violation(body, h.expected_degree())
        report["degree_check"] = "pass" if bad is None else {"violating": _monomial_str(body.table, bad)}
        failed |= bad is not None
        if dga is None and h.level == Level.RATIONAL:
            dga = models.dga_from_hamiltonian(h, h.table.names(Kind.TAU))
        elif dga is None:
            rat = Hamiltonian(quantum_to_rational(body), h.dimension_n, h.pairing, Level.RATIONAL)
            dga = models.dga_from_hamiltonian(rat, h.table.names(Kind.TAU))
    if dga is None:
        report["d_squared"] = "n/a"
    else:
        wit = _d_squared(dga)
        report["d_squared"] = "pass" if wit is None else {"witness": wit}
        failed |= wit is not None
    if failed:
        raise ResidualFailure(report)
    return report


def _parse_degrees(text: str):
    try:
        a, b = text.split("..")
        return Fraction(a), Fraction(b)
    except ValueError as exc:
        raise ValidationError(f"degrees must look like a..b, got {text!r}") from exc


def cmd_homology(args) -> dict:
    mf, h, dga, W = _resolve(args.model, args.weight)
    if mf is not None:
        dga = mf.dga()
    elif dga is None:
        raise ValidationError(f"model {args.model!r} has no differential algebra")
    if args.tau_zero:
        if "tau" not in dga.table:
            raise ValidationError("model has no tau parameter")
        dga = dga.specialize({"tau": 0})
    if W is None:
        raise ValidationError("a weight cap is required")
    lo, hi = _parse_degrees(args.degrees)
    try:
        sl = homology.build_slice(dga, W, (lo, hi))
    except SoundnessError as exc:
        raise ResidualFailure({"model": args.model, "d_squared": {"witness": str(exc.witness)}}) from exc
    report = {"model": args.model, "weight": W, "degrees": [lo, hi],
              "betti": [{"degree": d, "betti": b, "chains": len(sl.basis.get(d, []))}
                        for d, b in homology.betti(sl).items()]}
    if mf is not None and mf.cycles:
        checks = {}
        for name, c in mf.cycles:
            cyc = homology.is_cycle(sl, c)
            wit = homology.find_boundary_witness(sl, c) if cyc else None
            checks[name] = {"is_cycle": cyc, "boundary_of": None if wit is None else str(wit)}
        report["cycles"] = checks
    return report


def cmd_gw(args) -> dict:
    if args.n not in (1, 2, 3):
        raise ValidationError("--n must be 1, 2 or 3")
    if args.order < 1:
        raise ValidationError("--order must be positive")
    orders = [1] * (args.n - 1) + [args.order]
    weights = [None] * (args.n - 1) + [args.max_weight]
    stages = gw_recursion.bootstrap(args.n, orders, weights)
    st = stages[-1]
    report = {"n": args.n, "order": args.order, "weight": st.problem.max_weight,
              "f_cn": str(st.f_cn), "f_cpn": str(st.f_cpn),
              "residual": "zero" if gw_recursion.hj_residual(st.problem, st.f_cn).is_zero() else "nonzero"}
    failed = report["residual"] != "zero"
    if args.n == 2:
        d_max = min((args.order + 1) // 3, st.problem.max_weight)
        nd = gw_recursion.extract_nd(st.f_cpn, d_max, check_t2=True).entries if d_max else {}
        rows = [{"d": d, "N_d": v} for d, v in sorted(nd.items())]
        if args.oracle and nd:
            ora = gw_recursion.kontsevich_oracle(d_max).entries
            for r in rows:
                r["oracle"] = ora[r["d"]]
                r["agree"] = r["N_d"] == r["oracle"]
                failed |= not r["agree"]
        report["nd_table"] = rows
    if failed:
        raise ResidualFailure(report)
    return report


def cmd_grading(args) -> dict:
    sub = args.grading_cmd
    if sub == "dim":
        if args.morse:
            val = grading.moduli_dim_morse(args.cz_plus, args.g, args.r, args.c1, args.n)
        else:
            val = grading.moduli_dim(args.cz_plus, args.cz_minus, args.g, args.r, args.c1, args.n)
        return {"dim": val}
    if sub == "pq":
        p, q = grading.degrees_pq(args.cz, args.n)
        return {"deg_p": p, "deg_q": q}
    if sub == "bott":
        p, q, t, tau = grading.bott_degrees(args.k, args.delta_deg, Fraction(args.c1), args.l)
        return {"deg_p": p, "deg_q": q, "deg_t": t, "deg_tau": tau}
    if sub == "fractional":
        return {"degree": grading.fractional_degree(args.cz, args.two_m, args.l)}
    if sub == "parity":
        out = {"cz_parity": grading.parity_from_return_map(args.n, args.det_sign)}
        if args.multiple is not None:
            data = grading.OrbitGradingData(cz=0, multiplicity=1, return_map_neg_eigen_mult=args.neg_eigen_mult,
                                            n=args.n)
            out["bad"] = grading.is_bad_even_multiple(data, args.multiple)
        return out
    if sub == "brieskorn":
        return {"p": args.p, "n": args.n,
                "c_k": [{"k": k, "c_k": models.brieskorn_ck(args.p, args.n, k)} for k in range(0, args.k_max + 1)]}
    if sub == "yau":
        dims = []
        for item in args.dims.split(","):
            label, _, dim = item.partition(":")
            try:
                dims.append((label, int(dim)))
            except ValueError as exc:
                raise ValidationError(f"bad --dims entry {item!r}") from exc
        gens = models.yau_generators(args.n, dims, args.i_max)
        return {"generators": [{"label": g, "degree": d} for g, d in gens]}
    raise ValidationError(f"unknown grading command {sub!r}")


def cmd_satellite(args) -> dict:
    form = models.circle_satellite(args.g, args.n, args.K)
    report = {"g": args.g, "n": args.n, "K": args.K, "terms": terms_table(form)}
    if args.coupling_samples:
        if (args.g, args.n) != (0, 2):
            raise ValidationError("the coupling identity concerns the three-point satellite (--g 0 --n 2)")
        rng = random.Random(args.seed)
        slots = ["dt0", "dt1"] + [f"d{x}{k}" for k in range(1, args.K + 1) for x in "pq"]
        rows = []
        for _ in range(args.coupling_samples):
            idx = [rng.choice(slots) for _ in range(4)]
            rows.append({"slots": idx, "sum": models.cyclic_coupling(form, *idx, args.K)})
        report["coupling"] = rows
        if any(r["sum"] != 0 for r in rows):
            raise ResidualFailure(report)
    return report


# plumbing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sftkit", description="Exact SFT algebra computations.")
    ap.add_argument("--format", choices=("json", "text"), default="json", help="stdout format")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="master equation, degree and d^2 checks")
    v.add_argument("--model", required=True, help="circle, sphere3, lens:<l>, ellipsoid:<n> or a JSON file")
    v.add_argument("--weight", type=int)
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("homology", help="Betti numbers of a weight-truncated slice")
    h.add_argument("--model", required=True)
    h.add_argument("--weight", type=int)
    h.add_argument("--degrees", required=True, help="interval a..b")
    h.add_argument("--tau-zero", action="store_true", help="pass to the quotient tau = 0")
    h.set_defaults(func=cmd_homology)

    g = sub.add_parser("gw", help="bootstrap the CP^n potential")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--order", type=int, required=True, help="highest power of t_{2n} kept")
    g.add_argument("--max-weight", type=int)
    g.add_argument("--oracle", action="store_true", help="compare N_d with the classical recursion")
    g.set_defaults(func=cmd_gw)

    gr = sub.add_parser("grading", help="index and degree formulas")
    gsub = gr.add_subparsers(dest="grading_cmd", required=True)
    d = gsub.add_parser("dim")
    d.add_argument("--cz-plus", type=_int_list, default=[])
    d.add_argument("--cz-minus", type=_int_list, default=[])
    d.add_argument("--g", type=int, default=0)
    d.add_argument("--r", type=int, default=0)
    d.add_argument("--c1", type=int, default=0)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--morse", action="store_true", help="read --cz-plus as Morse indices")
    pq = gsub.add_parser("pq")
    pq.add_argument("--cz", type=int, required=True)
    pq.add_argument("--n", type=int, required=True)
    b = gsub.add_parser("bott")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--l", type=int, default=1)
    b.add_argument("--c1", required=True)
    b.add_argument("--delta-deg", type=int, default=0)
    f = gsub.add_parser("fractional")
    f.add_argument("--cz", type=int, required=True)
    f.add_argument("--two-m", type=int, default=0)
    f.add_argument("--l", type=int, default=1)
    p = gsub.add_parser("parity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--det-sign", type=int, required=True)
    p.add_argument("--neg-eigen-mult", type=int, default=0)
    p.add_argument("--multiple", type=int)
    bk = gsub.add_parser("brieskorn")
    bk.add_argument("--p", type=int, required=True)
    bk.add_argument("--n", type=int, required=True)
    bk.add_argument("--k-max", type=int, required=True)
    y = gsub.add_parser("yau")
    y.add_argument("--n", type=int, required=True)
    y.add_argument("--dims", required=True, help="label:dim,label:dim,...")
    y.add_argument("--i-max", type=int, default=3)
    gr.set_defaults(func=cmd_grading)

    s = sub.add_parser("satellite", help="coefficients of a circle satellite form")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--K", type=int, default=4)
    s.add_argument("--coupling-samples", type=int, default=0, help="check the cyclic coupling on random slots")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_satellite)
    return ap


def _int_list(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _write_outputs(command: str, report: dict) -> None:
    out_dir = os.environ.get(OUTPUT_ENV)
    if not out_dir:
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / f"{command}.json").write_text(dumps(report) + "\n")
    if "nd_table" in report:
        with open(path / "nd_table.csv", "w", newline="") as fh:
            fields = ["d", "N_d", "oracle", "agree"] if report["nd_table"] and "oracle" in report["nd_table"][0] \
                else ["d", "N_d"]
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(report["nd_table"])


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
        code = EXIT_OK
    except ResidualFailure as exc:
        report, code = exc.report, EXIT_RESIDUAL
    except (SoundnessError, FiltrationError) as exc:
        report = {"error": type(exc).__name__, "message": str(exc)}
        code = EXIT_RESIDUAL
    except SFTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write_outputs(args.command, report)
    print(render_text(report) if args.format == "text" else dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
