"""JSON schemas for coefficient algebras, DGLA instances, and morphisms.

Instance documents look like

    {"coeff": {...CoeffDGA...} | "Q",
     "algebra": {"name": ..., "basis": [{"name","degree"}...],
                 "d": [[gen, {gen: coeff}]...],
                 "bracket": [[[g1, g2], {gen: coeff}]...]},
     "omega": {gen: coeff},
     "morphism": {"target": {...algebra...},
                  "taylor": [[j, [[[gen...], {gen: coeff}]...]]...]}}

where a coeff is either a "num/den" string (a rational multiple of 1) or a
{C-basis-name: "num/den"} object.  Exact rationals only.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coalg import GradedBasisModule, TaylorSeq
from .linf import LinfAlgebra, LinfMorphism, MCElement
from .scalars import CoeffDGA, DgaElem, frac, frac_str, rational_field


def coeff_to_json(c: DgaElem):
    if set(c.coeffs) <= {c.alg.unit_index}:
        return frac_str(c.rational_part())
    return {c.alg.basis[i]: frac_str(q) for i, q in sorted(c.coeffs.items())}


def coeff_from_json(C: CoeffDGA, doc) -> DgaElem:
    if isinstance(doc, str):
        return C.scalar(frac(doc))
    return C.elem({name: frac(q) for name, q in doc.items()})


def vect_to_json(module, v):
    return {module.gen_name(i): coeff_to_json(c) for i, c in sorted(v.items())}


def vect_from_json(module, doc):
    return {module.index[name]: coeff_from_json(module.coeff, val)
            for name, val in doc.items()}


def algebra_to_json(alg: LinfAlgebra) -> dict:
    module = alg.module
    d_table, bracket = alg.dgla_tables()
    return {
        "name": module.name,
        "basis": [{"name": n, "degree": d} for n, d in module.gens],
        "d": [[module.gen_name(i), vect_to_json(module, v)]
              for i, v in sorted(d_table.items()) if v],
        "bracket": [[[module.gen_name(i), module.gen_name(j)], vect_to_json(module, v)]
                    for (i, j), v in sorted(bracket.items()) if v and i <= j],
    }


def algebra_from_json(doc, C: CoeffDGA, W=6, check=True) -> LinfAlgebra:
    module = GradedBasisModule(doc.get("name", "g"),
                               [(b["name"], b["degree"]) for b in doc["basis"]], C)
    d_table = {entry[0]: vect_from_json(module, entry[1]) for entry in doc.get("d", [])}
    bracket = {(pair[0], pair[1]): vect_from_json(module, val)
               for pair, val in doc.get("bracket", [])}
    bracket = {(module.index[i] if isinstance(i, str) else i,
                module.index[j] if isinstance(j, str) else j): v
               for (i, j), v in bracket.items()}
    return LinfAlgebra.from_dgla(module, d_table, bracket, W, check=check)


def taylor_to_json(T: TaylorSeq) -> list:
    src = T.source
    out = []
    for j, tab in sorted(T.maps.items()):
        entries = [[[src.gen_name(i) for i in w], vect_to_json(T.target, v)]
                   for w, v in sorted(tab.items())]
        out.append([j, entries])
    return out


def taylor_from_json(doc, source_shifted, target_shifted, intent) -> TaylorSeq:
    maps = {}
    for j, entries in doc:
        tab = {}
        for word_names, val in entries:
            w = tuple(source_shifted.index[nm] for nm in word_names)
            tab[w] = vect_from_json(target_shifted, val)
        maps[int(j)] = tab
    return TaylorSeq(source_shifted, target_shifted, maps, intent)


def instance_to_json(algebra: LinfAlgebra, omega=None, morphism: LinfMorphism = None,
                     target: LinfAlgebra = None) -> dict:
    C = algebra.module.coeff
    doc = {"coeff": "Q" if C.is_rational_field else C.to_json_dict(),
           "algebra": algebra_to_json(algebra)}
    if omega is not None:
        v = omega.vect if isinstance(omega, MCElement) else omega
        doc["omega"] = vect_to_json(algebra.module, v)
    if morphism is not None:
        doc["morphism"] = {"target": algebra_to_json(morphism.target),
                           "taylor": taylor_to_json(morphism.taylor)}
    elif target is not None:
        doc["target"] = algebra_to_json(target)
    return doc


def instance_from_json(doc, W=6, check=True):
    """Returns (algebra, omega vect or None, morphism or None)."""
    cdoc = doc.get("coeff", "Q")
    C = rational_field() if cdoc == "Q" else CoeffDGA.from_json_dict(cdoc)
    algebra = algebra_from_json(doc["algebra"], C, W=W, check=check)
    omega = None
    if "omega" in doc:
        omega = vect_from_json(algebra.module, doc["omega"])
    morphism = None
    if "morphism" in doc:
        target = algebra_from_json(doc["morphism"]["target"], C, W=W, check=check)
        T = taylor_from_json(doc["morphism"]["taylor"], algebra.shifted,
                             target.shifted, "morphism")
        morphism = LinfMorphism(algebra, target, T, check=check)
    return algebra, omega, morphism


def dumps(obj, pretty=False) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
