"""Named example programs with their expected typing, usage and extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend import parse_term
from ..syntax import Term


@dataclass(frozen=True)
class Example:
    """A term in a named context.

    ``ctx`` lists ``(name, type)`` pairs outermost first; the types are in
    the concrete syntax and may refer to earlier names.  ``usage`` is the
    expected inferred context, also outermost first.
    """

    name: str
    modality: str
    term: str
    type: str
    ctx: tuple[tuple[str, str], ...] = ()
    usage: tuple[str, ...] | None = None
    value: int | None = None
    nr: str = "good"
    notes: str = ""
    tags: frozenset[str] = field(default_factory=frozenset)

    @property
    def names(self) -> list[str]:
        """Binder names, outermost first."""
        return [n for n, _ in self.ctx]

    @property
    def index_names(self) -> list[str]:
        """Binder names in de Bruijn index order (innermost first)."""
        return list(reversed(self.names))

    def parsed_ctx(self) -> tuple[Term, ...]:
        out: list[Term] = []
        seen: list[str] = []
        for n, ty in self.ctx:
            out.append(parse_term(ty, self.modality, seen))
            seen.append(n)
        return tuple(out)

    def parsed(self) -> tuple[Term, Term]:
        return (parse_term(self.term, self.modality, self.names),
                parse_term(self.type, self.modality, self.names))

    def usage_index_order(self) -> tuple[str, ...] | None:
        return None if self.usage is None else tuple(reversed(self.usage))


ID_TYPE_ERASURE = "Pi[0,0] (A : U) -> Pi[w,0] (x : A) -> A"
ID_ERASURE = f"(\\[0] A. \\[w] x. x : {ID_TYPE_ERASURE})"
PLUS_TYPE = "Pi[1,0] (k : Nat) -> Pi[1,0] (n : Nat) -> Nat"
PLUS_BODY = "natrec[0,0,1] (m. Nat) k (m r. suc r) n"


def _plus(modality: str, grade: str, nr: str = "good") -> Example:
    return Example(
        name=f"plus-{modality}{'-bad-nr' if nr == 'bad' else ''}",
        modality=modality,
        term=PLUS_BODY,
        type="Nat",
        ctx=(("k", "Nat"), ("n", "Nat")),
        usage=(grade, grade),
        nr=nr,
        tags=frozenset({"plus"}),
    )


EXAMPLES: tuple[Example, ...] = (
    Example("id", "erasure", "\\[0] A. \\[w] x. x", ID_TYPE_ERASURE, usage=(), tags=frozenset({"id"})),
    Example("id-generic", "erasure", f"{ID_ERASURE} @[0] B @[w] b", "B",
            ctx=(("B", "U"), ("b", "B")), usage=("0", "w"), tags=frozenset({"id"})),
    Example("id-zero", "erasure", f"{ID_ERASURE} @[0] Nat @[w] zero", "Nat", usage=(), value=0,
            tags=frozenset({"id", "run"})),
    _plus("linear", "1"),
    _plus("linear", "w", nr="bad"),
    _plus("erasure", "w"),
    Example("plus23", "linear",
            f"(\\[1] k. \\[1] n. {PLUS_BODY} : {PLUS_TYPE}) @[1] 2 @[1] 3", "Nat", usage=(), value=5,
            tags=frozenset({"run"})),
    Example("unitrec-weak", "linear", "unitrec[1,0] (x. Nat) star@ 3", "Nat", usage=(), value=3,
            tags=frozenset({"run", "unit"})),
    Example("unitrec-erased", "erasure", "unitrec[0,0] (x. Nat) u 2", "Nat",
            ctx=(("u", "Unit@"),), usage=("0",), value=None, tags=frozenset({"unit"})),
    Example("strong-unit-eta", "erasure",
            "(\\[w] f. f @[w] star& : Pi[w,0] (f : Pi[w,0] (u : Unit&) -> Nat) -> Nat) @[w] (\\[w] u. 4)",
            "Nat", usage=(), value=4, tags=frozenset({"run", "unit"})),
    Example("swap-fst", "affine",
            "fst[1] (snd[1] (((1 ,&[1] 2) ,&[1] (3 ,&[1] 4)) : "
            "Sig&[1,0] (p : Sig&[1,0] (a : Nat) ** Nat) ** Sig&[1,0] (a : Nat) ** Nat))",
            "Nat", usage=(), value=3, tags=frozenset({"run"})),
    Example("prodrec-sum", "linear",
            "prodrec[1,1,0] (z. Nat) ((2 ,@[1] 1) : Sig@[1,0] (a : Nat) ** Nat) "
            "(a b. natrec[0,0,1] (m. Nat) a (m r. suc r) b)",
            "Nat", usage=(), value=3, tags=frozenset({"run"})),
    Example("counterexample", "erasure", "prodrec[0,1,0] (z. Nat) x (a b. zero)", "Nat",
            ctx=(("x", "Sig@[1,0] (a : Nat) ** Nat"),), usage=("0",),
            notes="erased match on an open scrutinee: the source is stuck, the extraction computes 0",
            tags=frozenset({"counterexample"})),
)


def example(name: str) -> Example:
    for e in EXAMPLES:
        if e.name == name:
            return e
    raise KeyError(name)
