"""JSON bundles for codes, triples and MF collections.

A bundle is ``{"format_version": 1, "kind", "payload", "provenance",
"certificates"}``.  Output is canonical (sorted keys, compact separators,
trailing newline) so save -> load -> save is byte-identical.  Loading
re-runs every structural validation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

import numpy as np

from codekit import __version__
from codekit.classical import LinearCode
from codekit.css import CssCode
from codekit.errors import CodekitError, InvalidCodeError
from codekit.gf import ExtensionField, Field, FieldSpec, TowerSpec
from codekit.multfriendly import MFCollection
from codekit.transversal import TransversalTriple

FORMAT_VERSION = 1
KINDS = ("LinearCode", "CssCode", "TransversalTriple", "MFCollection", "PipelineOutput")


class BundleError(CodekitError):
    """A bundle file is malformed or fails revalidation."""


@dataclass
class CodeBundle:
    kind: str
    payload: Any
    provenance: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)


def _plain(x):
    """Convert numpy scalars/arrays and tuples into JSON-native values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _matrix(rows, cols: int | None = None) -> np.ndarray:
    a = np.asarray(rows, dtype=np.int64)
    if a.size == 0 and cols is not None:
        return a.reshape(0, cols)
    if a.ndim != 2:
        raise BundleError("expected a matrix")
    return a


# ---------------------------------------------------------------------------
# fields


def field_to_dict(F: Field) -> dict:
    if isinstance(F, FieldSpec):
        return {"p": F.p, "r": F.r, "modulus": list(F.modulus)}
    if isinstance(F, ExtensionField):
        return {"base": field_to_dict(F.base), "gamma": list(F.gamma)}
    raise BundleError(f"cannot serialize field {F!r}")


def field_from_dict(d: dict) -> Field:
    if "base" in d:
        return ExtensionField(field_from_dict(d["base"]), tuple(d["gamma"]))
    return FieldSpec(int(d["p"]), int(d["r"]), tuple(d["modulus"]))


def tower_to_dict(t: TowerSpec) -> dict:
    return {"base": field_to_dict(t.base), "gamma": list(t.gamma)}


def tower_from_dict(d: dict) -> TowerSpec:
    return TowerSpec(field_from_dict(d["base"]), tuple(d["gamma"]))


# ---------------------------------------------------------------------------
# objects


def linear_to_dict(c: LinearCode) -> dict:
    return {
        "field": field_to_dict(c.field),
        "gen": c.gen,
        "encoder": c.encoder,
        "eval_points": None if c.eval_points is None else list(c.eval_points),
        "info": c.info,
    }


def linear_from_dict(d: dict) -> LinearCode:
    F = field_from_dict(d["field"])
    n = len(d["eval_points"]) if d.get("eval_points") else None
    gen = _matrix(d["gen"], n)
    enc = None if d.get("encoder") is None else _matrix(d["encoder"], gen.shape[1])
    pts = None if d.get("eval_points") is None else tuple(int(x) for x in d["eval_points"])
    c = LinearCode(F, gen, enc, pts, dict(d.get("info", {})))
    _check_range(F, gen, enc)
    c.validate()
    return c


def css_to_dict(c: CssCode) -> dict:
    return {
        "field": field_to_dict(c.field),
        "n": c.n,
        "x_stab": c.x_stab,
        "encz": c.encz,
        "encx": c.encx,
        "pairing": c.pairing,
        "info": c.info,
    }


def css_from_dict(d: dict) -> CssCode:
    F = field_from_dict(d["field"])
    n = int(d["n"])
    x_stab = _matrix(d["x_stab"], n)
    encz = _matrix(d["encz"], n)
    encx = None if d.get("encx") is None else _matrix(d["encx"], n)
    pairing = None if d.get("pairing") is None else _matrix(d["pairing"], encz.shape[0])
    if x_stab.shape[1] != n or encz.shape[1] != n:
        raise BundleError("matrix widths differ from the recorded length")
    _check_range(F, x_stab, encz, encx)
    c = CssCode(F, x_stab, encz, encx, pairing, dict(d.get("info", {})))
    c.validate()
    return c


def triple_to_dict(t: TransversalTriple) -> dict:
    codes = [css_to_dict(t.codes[0])] if t.same_code else [css_to_dict(c) for c in t.codes]
    return {"codes": codes, "b": t.b, "same_code": t.same_code, "info": t.info}


def triple_from_dict(d: dict) -> TransversalTriple:
    codes = [css_from_dict(c) for c in d["codes"]]
    if d["same_code"]:
        if len(codes) != 1:
            raise BundleError("same_code triples store one code")
        codes = codes * 3
    elif len(codes) != 3:
        raise BundleError("a triple stores three codes")
    b = np.asarray(d["b"], dtype=np.int64)
    F = codes[0].field
    _check_range(F, b)
    t = TransversalTriple(tuple(codes), b, bool(d["same_code"]), dict(d.get("info", {})))
    t.validate()
    if not t.same_code and codes[0] == codes[1] == codes[2]:
        raise BundleError("identical codes must be stored with same_code set")
    return t


def mf_to_dict(mf: MFCollection) -> dict:
    conv = linear_to_dict if mf.kind == "classical" else css_to_dict
    # identical members are stored once and referenced by index
    unique: list = []
    index = []
    for c in mf.members:
        for i, u in enumerate(unique):
            if u is c or u == c:
                index.append(i)
                break
        else:
            unique.append(c)
            index.append(len(unique) - 1)
    return {
        "m": mf.m,
        "kind": mf.kind,
        "tower": tower_to_dict(mf.tower),
        "members": [conv(c) for c in unique],
        "member_index": index,
        "dec": mf.dec,
        "info": mf.info,
    }


def mf_from_dict(d: dict) -> MFCollection:
    kind = d["kind"]
    if kind not in ("classical", "quantum"):
        raise BundleError(f"unknown MF kind {kind!r}")
    conv = linear_from_dict if kind == "classical" else css_from_dict
    unique = [conv(c) for c in d["members"]]
    try:
        members = tuple(unique[int(i)] for i in d["member_index"])
    except IndexError as exc:
        raise BundleError("member index out of range") from exc
    tower = tower_from_dict(d["tower"])
    dec = _matrix(d["dec"], tower.k)
    mf = MFCollection(int(d["m"]), tower, members, dec, kind, dict(d.get("info", {})))
    mf.validate()
    return mf


def _check_range(F: Field, *arrays) -> None:
    for a in arrays:
        if a is not None and a.size and (a.min() < 0 or a.max() >= F.order):
            raise InvalidCodeError(f"entries outside {F}")


_TO = {
    "LinearCode": linear_to_dict,
    "CssCode": css_to_dict,
    "TransversalTriple": triple_to_dict,
    "PipelineOutput": triple_to_dict,
    "MFCollection": mf_to_dict,
}
_FROM = {
    "LinearCode": linear_from_dict,
    "CssCode": css_from_dict,
    "TransversalTriple": triple_from_dict,
    "PipelineOutput": triple_from_dict,
    "MFCollection": mf_from_dict,
}


def kind_of(obj) -> str:
    if isinstance(obj, LinearCode):
        return "LinearCode"
    if isinstance(obj, CssCode):
        return "CssCode"
    if isinstance(obj, TransversalTriple):
        return "PipelineOutput" if "schedule" in obj.info else "TransversalTriple"
    if isinstance(obj, MFCollection):
        return "MFCollection"
    raise BundleError(f"no bundle kind for {type(obj).__name__}")


def make_bundle(obj, provenance: dict | None = None, certificates=None) -> CodeBundle:
    prov = {"tool": "codekit", "version": __version__}
    prov.update(provenance or {})
    return CodeBundle(kind_of(obj), obj, prov, list(certificates or []))


def dumps(bundle: CodeBundle) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": bundle.kind,
        "payload": _TO[bundle.kind](bundle.payload),
        "provenance": bundle.provenance,
        "certificates": bundle.certificates,
    }
    return json.dumps(_plain(doc), sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def loads(text: str) -> CodeBundle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise BundleError("bundle must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise BundleError(f"unsupported format_version {doc.get('format_version')!r}")
    kind = doc.get("kind")
    if kind not in _FROM:
        raise BundleError(f"unknown bundle kind {kind!r}")
    try:
        payload = _FROM[kind](doc["payload"])
    except BundleError:
        raise
    except (KeyError, TypeError, ValueError, CodekitError) as exc:
        raise BundleError(f"{kind} payload rejected: {exc}") from exc
    return CodeBundle(kind, payload, dict(doc.get("provenance", {})), list(doc.get("certificates", [])))


def save(path: Union[str, Path], bundle_or_obj) -> None:
    bundle = bundle_or_obj if isinstance(bundle_or_obj, CodeBundle) else make_bundle(bundle_or_obj)
    Path(path).write_text(dumps(bundle), encoding="utf-8")


def load(path: Union[str, Path]) -> CodeBundle:
    return loads(Path(path).read_text(encoding="utf-8"))
