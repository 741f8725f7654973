"""JSON input formats for channels and coding schemes.

Channel documents take one of three shapes::

    {"law": [[[...]]]}                      # P(y1, y2 | x), shape (|X|, |Y1|, |Y2|)
    {"w1": [[...]], "w2": [[...]]}          # conditionally independent outputs
    {"family": "bsbc", "p1": 0.2, "p2": 0.1}

Families: ``bsbc`` (p1, p2), ``bscbec`` (p, e), ``blackwell``. Optional
``x_size``/``y1_size``/``y2_size`` fields are checked against the tensor.

Scheme documents carry either the full Marton-type description::

    {"q_pmf": [...], "aux_pmf": [[[[...]]]], "symbol_map": [[[[...]]]],
     "test1": {"form": "y", "table": ...}, "test2": ..., "update": ...}

or a two-auxiliary description ``{"twoaux": [[...]], "test1": ..., "test2": ...}``
with P(u, x) or P(u, v, x). Either way, errors name the offending JSON path.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .examples import blackwell_channel, bsbc_channel, bscbec_channel
from .info import BroadcastChannel, DomainError, SchemeSpec, StructuralError, TestChannel, TwoAuxSpec
from .regions import superposition_scheme


class InputError(ValueError):
    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


def _array(doc: Mapping, key: str, path: str, ndim: tuple[int, ...], integer: bool = False) -> np.ndarray:
    if key not in doc:
        raise InputError(f"{path}.{key}", "missing")
    try:
        arr = np.asarray(doc[key], dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{path}.{key}", "expected a rectangular numeric array") from None
    if arr.ndim not in ndim:
        raise InputError(f"{path}.{key}", f"expected {' or '.join(map(str, ndim))} dimensions, got {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{path}.{key}", "entries must be finite")
    if integer:
        if not np.all(arr == np.round(arr)):
            raise InputError(f"{path}.{key}", "entries must be integers")
        return arr.astype(int)
    return arr


def _number(doc: Mapping, key: str, path: str) -> float:
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{path}.{key}", "expected a number")
    return float(v)


def _load(source: str | Path | Mapping) -> Any:
    if isinstance(source, Mapping):
        return source
    try:
        return json.loads(Path(source).read_text())
    except OSError as exc:
        raise InputError(str(source), f"cannot read file ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise InputError(str(source), f"invalid JSON at line {exc.lineno}: {exc.msg}") from None


def channel_from_json(doc: Mapping, path: str = "$") -> BroadcastChannel:
    if not isinstance(doc, Mapping):
        raise InputError(path, "expected an object")
    try:
        if "family" in doc:
            fam = doc["family"]
            if fam == "bsbc":
                ch = bsbc_channel(_number(doc, "p1", path), _number(doc, "p2", path))
            elif fam == "bscbec":
                ch = bscbec_channel(_number(doc, "p", path), _number(doc, "e", path))
            elif fam == "blackwell":
                ch = blackwell_channel()
            else:
                raise InputError(f"{path}.family", f"unknown family {fam!r}")
        elif "law" in doc:
            ch = BroadcastChannel(_array(doc, "law", path, (3,)))
        elif "w1" in doc or "w2" in doc:
            w1 = _array(doc, "w1", path, (2,))
            w2 = _array(doc, "w2", path, (2,))
            if w1.shape[0] != w2.shape[0]:
                raise InputError(f"{path}.w2", "row count differs from w1")
            ch = BroadcastChannel.from_marginals(w1, w2)
        else:
            raise InputError(path, "expected one of 'law', 'w1'/'w2', 'family'")
    except (StructuralError, DomainError) as exc:
        raise InputError(path, str(exc)) from None
    for key, size in (("x_size", ch.x_size), ("y1_size", ch.y1_size), ("y2_size", ch.y2_size)):
        if key in doc and doc[key] != size:
            raise InputError(f"{path}.{key}", f"declared {doc[key]} but the law has {size}")
    return ch


def _test_channel(doc: Any, path: str) -> TestChannel | None:
    if doc is None:
        return None
    if not isinstance(doc, Mapping):
        raise InputError(path, "expected an object or null")
    form = doc.get("form", "y")
    if form not in ("y", "y_u0"):
        raise InputError(f"{path}.form", f"unknown form {form!r}")
    table = _array(doc, "table", path, (3 if form == "y" else 4,))
    try:
        return TestChannel(table, form)
    except StructuralError as exc:
        raise InputError(f"{path}.table", str(exc)) from None


def twoaux_from_json(doc: Mapping, path: str = "$") -> TwoAuxSpec:
    if not isinstance(doc, Mapping):
        raise InputError(path, "expected an object")
    try:
        return TwoAuxSpec(_array(doc, "twoaux", path, (2, 3)))
    except StructuralError as exc:
        raise InputError(f"{path}.twoaux", str(exc)) from None


def scheme_from_json(doc: Mapping, path: str = "$") -> SchemeSpec:
    """Full scheme; a two-auxiliary document becomes U0 = U, U1 const, U2 = X."""
    if not isinstance(doc, Mapping):
        raise InputError(path, "expected an object")
    test1 = _test_channel(doc.get("test1"), f"{path}.test1")
    test2 = _test_channel(doc.get("test2"), f"{path}.test2")
    if "twoaux" in doc:
        base = superposition_scheme(twoaux_from_json(doc, path))
        q, aux, fmap = base.q_pmf, base.aux_pmf, base.symbol_map
    else:
        q = _array(doc, "q_pmf", path, (1,))
        aux = _array(doc, "aux_pmf", path, (4,))
        fmap = _array(doc, "symbol_map", path, (4,), integer=True)
    update = _array(doc, "update", path, (6,)) if doc.get("update") is not None else None
    try:
        return SchemeSpec(q, aux, fmap, test1, test2, update)
    except StructuralError as exc:
        raise InputError(path, str(exc)) from None


def load_channel(source: str | Path | Mapping) -> BroadcastChannel:
    return channel_from_json(_load(source))


def load_scheme(source: str | Path | Mapping) -> SchemeSpec:
    return scheme_from_json(_load(source))


def load_twoaux(source: str | Path | Mapping) -> tuple[TwoAuxSpec, TestChannel | None, TestChannel | None]:
    doc = _load(source)
    ta = twoaux_from_json(doc)
    return ta, _test_channel(doc.get("test1"), "$.test1"), _test_channel(doc.get("test2"), "$.test2")


def _plain(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Mapping):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dump_json(obj: Any, path: str | Path) -> None:
    """Write sorted, unrounded JSON (repr floats) so reruns are byte-identical."""
    Path(path).write_text(json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n")
