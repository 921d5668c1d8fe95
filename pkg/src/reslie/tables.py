"""Closed-form dimensions of H^2 and H^2_* for restricted simple Lie algebras."""

from __future__ import annotations

from dataclasses import dataclass

from .constructors import expected_dim

__all__ = ["Instance", "FormulaRow", "reference_values", "report_instances", "formula_rows", "display_name"]

_SHORT = {"witt": "W", "special": "S", "hamiltonian": "H", "contact": "K"}


def display_name(family: str, n: int) -> str:
    if family in _SHORT:
        return f"{_SHORT[family]}({n})"
    return f"{family}({n})" if family == "psl" else f"sl_{n}"


def reference_values(family: str, n: int, p: int) -> tuple[int, int, int]:
    """(dim g, dim H^2, dim H^2_*) from the closed forms; dim H^2_* = dim g + dim H^2 throughout."""
    d = expected_dim(family, n, p)
    if family in ("sl", "psl"):
        h2 = 0
    elif family == "witt":
        h2 = 1 if n == 1 else 0
    elif family == "special":
        h2 = n * (n - 1) // 2
    elif family == "hamiltonian":
        h2 = n + 2 if (n + 4) % p == 0 else n + 1
    elif family == "contact":
        h2 = n + 1 if (n + 3) % p == 0 else 0
    else:
        raise ValueError(f"unknown family {family!r}")
    return d, h2, d + h2


@dataclass(frozen=True)
class Instance:
    family: str
    n: int

    @property
    def name(self) -> str:
        return display_name(self.family, self.n)


def report_instances(p: int) -> list[Instance]:
    """The implemented instances a report covers, in display order."""
    out = [Instance("sl", m) for m in (2, 3, 4) if m % p]
    out += [Instance("psl", p), Instance("witt", 1), Instance("witt", 2), Instance("witt", 3)]
    out += [Instance("special", 3), Instance("special", 4)]
    out += [Instance("hamiltonian", 2), Instance("hamiltonian", 4)]
    out += [Instance("contact", 3), Instance("contact", 5)]
    return out


@dataclass(frozen=True)
class FormulaRow:
    name: str
    dim: str
    h2: str
    h2star: str
    note: str = ""


def _first(start: int, step: int, cond) -> int:
    n = start
    while not cond(n):
        n += step
    return n


def formula_rows(p: int) -> list[FormulaRow]:
    """Rows outside the implemented families, or too large to compute, stated by formula."""
    rows = [
        FormulaRow("B_l (l>=2)", "2l^2+l", "0", "2l^2+l"),
        FormulaRow("C_l (l>=3)", "2l^2+l", "0", "2l^2+l"),
        FormulaRow("D_l (l>=4)", "2l^2-l", "0", "2l^2-l"),
        FormulaRow("G_2", "14", "0", "14"),
        FormulaRow("F_4", "52", "0", "52"),
        FormulaRow("E_6", "78", "0", "78"),
        FormulaRow("E_7", "133", "0", "133"),
        FormulaRow("E_8", "248", "0", "248"),
    ]
    if p == 5:
        rows.append(FormulaRow("M", "125", "0", "125", "Melikian, p = 5 only"))
    n = _first(2, 2, lambda k: (k + 4) % p == 0)
    d, h2, hs = reference_values("hamiltonian", n, p)
    rows.append(FormulaRow(f"H({n})", str(d), str(h2), str(hs), "n+4 = 0 mod p"))
    n = _first(3, 2, lambda k: (k + 3) % p == 0)
    d, h2, hs = reference_values("contact", n, p)
    rows.append(FormulaRow(f"K({n})", str(d), str(h2), str(hs), "n+3 = 0 mod p"))
    return rows
