"""Certificate maps: explicit maps R^n -> R^m whose image is a claimed set."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import sympy as sp

T_SYM = sp.Symbol("t")
X_SYMS = (sp.Symbol("x1"), sp.Symbol("x2"))


def source_symbols(dim: int) -> tuple[sp.Symbol, ...]:
    if dim == 1:
        return (T_SYM,)
    if dim == 2:
        return X_SYMS
    raise ValueError("certificates have source dimension 1 or 2")


def expr_to_text(e: sp.Expr) -> str:
    return sp.sstr(e, order="lex").replace("**", "^")


@dataclass
class CertificateMap:
    """A map from R^source_dim onto the set described by ``claim``.

    ``components`` are sympy rational expressions in :func:`source_symbols`.
    ``kind`` is ``"polynomial"`` or ``"regular"``; ``witnesses`` names the
    invariant (``"p"`` or ``"r"``) and the value it certifies.
    """

    source_dim: int
    components: tuple
    kind: str
    claim: Any = None
    witnesses: tuple[str, int] | None = None
    construction: str = ""
    notes: list[str] = field(default_factory=list)
    _numeric: Any = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.components = tuple(sp.sympify(c) for c in self.components)
        syms = set(source_symbols(self.source_dim))
        for c in self.components:
            if not c.free_symbols <= syms:
                raise ValueError(f"unexpected symbols in certificate component {c}")
        if self.kind not in ("polynomial", "regular"):
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        if self.kind == "polynomial":
            for c in self.components:
                _, den = sp.fraction(sp.cancel(c))
                if den.free_symbols:
                    raise ValueError("polynomial certificate with nonconstant denominator")

    @property
    def symbols(self) -> tuple[sp.Symbol, ...]:
        return source_symbols(self.source_dim)

    def texts(self) -> list[str]:
        return [expr_to_text(c) for c in self.components]

    def numeric(self):
        """Vectorized float evaluator ``F(*arrays) -> list of arrays``."""
        if self._numeric is None:
            self._numeric = sp.lambdify(self.symbols, list(self.components), modules="numpy")
        return self._numeric

    def expanded(self) -> list[tuple[sp.Poly, sp.Poly]]:
        """Each component as (numerator, denominator) polynomials over QQ."""
        out = []
        for c in self.components:
            num, den = sp.fraction(sp.cancel(sp.together(c)))
            out.append((sp.Poly(num, *self.symbols, domain="QQ"),
                        sp.Poly(den, *self.symbols, domain="QQ")))
        return out

    @classmethod
    def from_expanded(cls, parts, source_dim: int, kind: str, **kw) -> "CertificateMap":
        comps = [p.as_expr() / q.as_expr() for p, q in parts]
        return cls(source_dim, tuple(comps), kind, **kw)

    def to_json(self) -> dict:
        out = {
            "source_dim": self.source_dim,
            "kind": self.kind,
            "variables": [str(s) for s in self.symbols],
            "components": self.texts(),
            "construction": self.construction,
        }
        if self.witnesses:
            out["witnesses"] = {"invariant": self.witnesses[0], "value": str(self.witnesses[1])}
        if self.notes:
            out["notes"] = list(self.notes)
        return out
