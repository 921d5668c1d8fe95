"""Plain-text formats for algebras and cocycles.

Algebra file::

    # comment
    p 5
    dim 3
    label sl(2)
    basis E12 E21 h1
    b 0 1 2 1        [x_0, x_1] has coefficient 1 on x_2 (i < j)
    pm 2 2 1         x_2^[p] has coefficient 1 on x_2

Cocycle file (one or more records, each starting at its ``p`` line)::

    p 5
    dim 5
    kind pair        phi: only c2 lines; pair: c2 and om lines
    c2 0 2 1
    om 1 1

Indices are 0-based, coefficients lie in 1..p-1, omitted entries are zero.
Writers emit a canonical form: b-lines sorted by (i, j, k), pm-lines by (i, k).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .algebra import AlgebraDescription
from .cohomology import TwoCochain
from .gfp import FieldSpec
from .restricted import FrobeniusCochain, RestrictedTwoCochain

__all__ = [
    "FormatError",
    "CocycleRecord",
    "parse_algebra",
    "write_algebra",
    "read_algebra",
    "save_algebra",
    "parse_cocycles",
    "parse_cocycle",
    "write_cocycles",
    "cocycle_record",
]


class FormatError(ValueError):
    def __init__(self, lineno: int | None, message: str):
        self.lineno = lineno
        self.reason = message
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _ints(n: int, parts: list[str], count: int, what: str) -> list[int]:
    if len(parts) != count:
        raise FormatError(n, f"{what} expects {count} integers, got {len(parts)}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise FormatError(n, f"{what}: non-integer field in {' '.join(parts)!r}") from None


class _Header:
    def __init__(self):
        self.p: int | None = None
        self.dim: int | None = None

    def take(self, n: int, key: str, rest: list[str]) -> bool:
        if key not in ("p", "dim"):
            return False
        if getattr(self, key) is not None:
            raise FormatError(n, f"duplicate '{key}' header")
        (v,) = _ints(n, rest, 1, key)
        if key == "p":
            try:
                FieldSpec(v)
            except ValueError as e:
                raise FormatError(n, str(e)) from None
        elif v < 0:
            raise FormatError(n, "dim must be non-negative")
        setattr(self, key, v)
        return True

    def need(self, n: int):
        if self.p is None or self.dim is None:
            raise FormatError(n, "body line before 'p' and 'dim' headers")

    def index(self, n: int, *idx: int):
        for i in idx:
            if not 0 <= i < self.dim:
                raise FormatError(n, f"index {i} out of range 0..{self.dim - 1}")

    def coeff(self, n: int, c: int):
        if not 1 <= c <= self.p - 1:
            raise FormatError(n, f"coefficient {c} outside 1..{self.p - 1}")


def parse_algebra(text: str) -> AlgebraDescription:
    """Parse an algebra file; errors carry the offending line number."""
    h = _Header()
    label = None
    basis = None
    brackets: dict[tuple[int, int, int], int] = {}
    pmap: dict[tuple[int, int], int] = {}
    last = 0
    for n, line in _lines(text):
        last = n
        key, *rest = line.split()
        if h.take(n, key, rest):
            continue
        if key == "label":
            if label is not None:
                raise FormatError(n, "duplicate 'label' header")
            label = line[len("label") :].strip()
            continue
        if key == "basis":
            if basis is not None:
                raise FormatError(n, "duplicate 'basis' header")
            basis = rest
            continue
        if key == "b":
            h.need(n)
            i, j, k, c = _ints(n, rest, 4, "b-line")
            if i >= j:
                raise FormatError(n, f"b-line requires i < j, got i={i}, j={j}")
            h.index(n, i, j, k)
            h.coeff(n, c)
            if (i, j, k) in brackets:
                raise FormatError(n, f"duplicate entry b {i} {j} {k}")
            brackets[(i, j, k)] = c
            continue
        if key == "pm":
            h.need(n)
            i, k, c = _ints(n, rest, 3, "pm-line")
            h.index(n, i, k)
            h.coeff(n, c)
            if (i, k) in pmap:
                raise FormatError(n, f"duplicate entry pm {i} {k}")
            pmap[(i, k)] = c
            continue
        raise FormatError(n, f"unknown directive {key!r}")
    h.need(last + 1)
    if basis is not None and len(basis) != h.dim:
        raise FormatError(None, f"basis lists {len(basis)} names for dim {h.dim}")
    try:
        return AlgebraDescription(
            h.p,
            h.dim,
            brackets=[(i, j, k, c) for (i, j, k), c in brackets.items()],
            pmap=[(i, k, c) for (i, k), c in pmap.items()],
            labels=basis,
            name=label,
        )
    except ValueError as e:
        raise FormatError(None, str(e)) from None


def write_algebra(alg: AlgebraDescription, comments: Iterable[str] = ()) -> str:
    for s in [alg.name or "", *(alg.labels or ())]:
        if "#" in s or "\n" in s:
            raise ValueError(f"label {s!r} cannot be written: '#' and newlines are reserved")
    out = [f"# {c}" if c else "#" for c in comments]
    out += [f"p {alg.p}", f"dim {alg.dim}"]
    if alg.name:
        out.append(f"label {alg.name}")
    if alg.labels:
        out.append("basis " + " ".join(alg.labels))
    b = alg.brackets
    if len(b):
        b = b[np.lexsort((b[:, 2], b[:, 1], b[:, 0]))]
    out += [f"b {i} {j} {k} {c}" for i, j, k, c in b.tolist()]
    pm = alg.pmap_entries
    if len(pm):
        pm = pm[np.lexsort((pm[:, 1], pm[:, 0]))]
    out += [f"pm {i} {k} {c}" for i, k, c in pm.tolist()]
    return "\n".join(out) + "\n"


def read_algebra(path: str | Path) -> AlgebraDescription:
    return parse_algebra(Path(path).read_text())


def save_algebra(alg: AlgebraDescription, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(write_algebra(alg, comments))


@dataclass(eq=False)
class CocycleRecord:
    """One record of a cocycle file; ``omega`` is None for kind ``phi``."""

    p: int
    dim: int
    kind: str
    phi: TwoCochain
    omega: np.ndarray | None = None

    def restricted(self, alg: AlgebraDescription) -> RestrictedTwoCochain:
        """Attach to ``alg``; omega is extended from its basis values by the *-property."""
        if (alg.p, alg.dim) != (self.p, self.dim):
            raise FormatError(None, f"cocycle for p={self.p}, dim {self.dim} does not match algebra (p={alg.p}, dim {alg.dim})")
        base = np.zeros(self.dim, dtype=np.int64) if self.omega is None else self.omega
        return RestrictedTwoCochain(self.phi, FrobeniusCochain(alg, base, self.phi))

    def __eq__(self, other):
        if not isinstance(other, CocycleRecord):
            return NotImplemented
        om = lambda r: None if r.omega is None else r.omega.tolist()  # noqa: E731
        return (self.p, self.dim, self.kind, om(self)) == (other.p, other.dim, other.kind, om(other)) and self.phi == other.phi


def cocycle_record(x: TwoCochain | RestrictedTwoCochain) -> CocycleRecord:
    if isinstance(x, RestrictedTwoCochain):
        return CocycleRecord(x.phi.p, x.phi.dim, "pair", x.phi, x.omega.base_values.copy())
    return CocycleRecord(x.p, x.dim, "phi", x)


def _finish(n: int, h: _Header, kind, c2, om) -> CocycleRecord:
    h.need(n)
    if kind is None:
        raise FormatError(n, "missing 'kind' header")
    phi = TwoCochain.from_pairs(h.dim, h.p, c2)
    omega = None
    if kind == "pair":
        omega = np.zeros(h.dim, dtype=np.int64)
        for i, c in om.items():
            omega[i] = c
    return CocycleRecord(h.p, h.dim, kind, phi, omega)


def parse_cocycles(text: str) -> list[CocycleRecord]:
    """All records of a cocycle file, in order."""
    records = []
    h, kind, c2, om, start = None, None, {}, {}, None
    for n, line in _lines(text):
        key, *rest = line.split()
        if key == "p":
            if h is not None:
                records.append(_finish(n, h, kind, c2, om))
            h, kind, c2, om, start = _Header(), None, {}, {}, n
            h.take(n, key, rest)
            continue
        if h is None:
            raise FormatError(n, "record must start with a 'p' header")
        if h.take(n, key, rest):
            continue
        if key == "kind":
            if kind is not None:
                raise FormatError(n, "duplicate 'kind' header")
            if rest not in (["phi"], ["pair"]):
                raise FormatError(n, "kind must be 'phi' or 'pair'")
            kind = rest[0]
            continue
        if key == "c2":
            h.need(n)
            i, j, c = _ints(n, rest, 3, "c2-line")
            if i >= j:
                raise FormatError(n, f"c2-line requires i < j, got i={i}, j={j}")
            h.index(n, i, j)
            h.coeff(n, c)
            if (i, j) in c2:
                raise FormatError(n, f"duplicate entry c2 {i} {j}")
            c2[(i, j)] = c
            continue
        if key == "om":
            h.need(n)
            if kind != "pair":
                raise FormatError(n, "om-lines require 'kind pair' declared before them")
            i, c = _ints(n, rest, 2, "om-line")
            h.index(n, i)
            h.coeff(n, c)
            if i in om:
                raise FormatError(n, f"duplicate entry om {i}")
            om[i] = c
            continue
        raise FormatError(n, f"unknown directive {key!r}")
    if h is None:
        raise FormatError(None, "no cocycle records")
    records.append(_finish(start, h, kind, c2, om))
    return records


def parse_cocycle(text: str) -> CocycleRecord:
    recs = parse_cocycles(text)
    if len(recs) != 1:
        raise FormatError(None, f"expected one cocycle record, found {len(recs)}")
    return recs[0]


def write_cocycles(items: Iterable[TwoCochain | RestrictedTwoCochain | CocycleRecord], comments: Iterable[str] = ()) -> str:
    blocks = []
    for x in items:
        r = x if isinstance(x, CocycleRecord) else cocycle_record(x)
        lines = [f"p {r.p}", f"dim {r.dim}", f"kind {r.kind}"]
        lines += [f"c2 {i} {j} {c}" for i, j, c in r.phi.items()]
        if r.omega is not None:
            lines += [f"om {i} {int(r.omega[i])}" for i in np.flatnonzero(r.omega)]
        blocks.append("\n".join(lines) + "\n")
    head = "".join(f"# {c}\n" for c in comments)
    return head + "\n".join(blocks)
