"""Tiny helpers for uniform check reports.

Every verification in this package returns a dict with "name", "status"
("pass"/"fail"), an optional "witness" (first offending value, stringified so
reports serialize exactly), and optional detail fields.
"""

from ._coeff import rat_str


def check(name, ok, witness=None, **detail):
    rep = {"name": name, "status": "pass" if ok else "fail"}
    if witness is not None:
        rep["witness"] = witness
    if detail:
        rep["detail"] = detail
    return rep


def slot_witness(slot, exps, lhs, rhs):
    return {
        "slot": list(slot),
        "monomial": list(exps),
        "lhs": rat_str(lhs),
        "rhs": rat_str(rhs),
    }


def poly_witness(exps, lhs, rhs):
    return {"monomial": list(exps), "lhs": rat_str(lhs), "rhs": rat_str(rhs)}


def all_pass(reports):
    return all(r["status"] == "pass" for r in reports)
