"""
Plain-text presentation format::

    gens: a b c
    rels: [a,b], a^2 b^-1, [a,c] = b

Whitespace-insensitive. ``[x,y]`` expands to ``x^-1 y^-1 x y``; ``lhs = rhs``
becomes the relator ``lhs rhs^-1``; ``1`` is the identity word; ``#`` starts
a comment.
"""
from pathlib import Path
from typing import List, Tuple, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from core.errors import PresentationSyntaxError, UnknownGenerator
from core.groups import Presentation, Word

GRAMMAR = r"""
    presentation: gens ";"? rels ";"?
    gens: "gens" ":" IDENT*
    rels: "rels" ":" [relation ("," relation)*]

    relation: word ("=" word)?
    word: factor*
    factor: atom ("^" SIGNED_INT)?
    ?atom: IDENT                    -> generator
         | "[" word "," word "]"    -> bracket
         | "(" word ")"
         | ONE                      -> one

    ONE: "1"
    IDENT: /[A-Za-z_][A-Za-z0-9_']*/
    COMMENT: /#[^\n]*/

    %import common.SIGNED_INT
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

Symbolic = List[Tuple[str, int]]


def _invert(w: Symbolic) -> Symbolic:
    return [(name, -e) for name, e in reversed(w)]


@v_args(inline=True)
class _ToSymbolic(Transformer):
    """Builds words over generator names; ids are assigned once gens are known."""

    def generator(self, token):
        return [(str(token), 1)]

    def one(self, _token):
        return []

    def bracket(self, x, y):
        return _invert(x) + _invert(y) + x + y

    def factor(self, atom, exponent=None):
        k = int(exponent) if exponent is not None else 1
        base = atom if k >= 0 else _invert(atom)
        return base * abs(k)

    def word(self, *factors):
        out: Symbolic = []
        for f in factors:
            out.extend(f)
        return out

    def relation(self, lhs, rhs=None):
        return lhs + _invert(rhs) if rhs is not None else lhs

    def gens(self, *names):
        return [str(n) for n in names]

    def rels(self, *relations):
        return [r for r in relations if r is not None]

    def presentation(self, gens, rels):
        return gens, rels


_parser = Lark(GRAMMAR, start=["presentation", "word"], parser="lalr")


def _resolve(names: Tuple[str, ...], w: Symbolic) -> Word:
    letters = []
    for name, e in w:
        if name not in names:
            raise UnknownGenerator(f"generator {name!r} is not declared")
        letters.append((names.index(name), e))
    return Word(tuple(letters))


def _parse(text: str, start: str):
    try:
        tree = _parser.parse(text, start=start)
        return _ToSymbolic().transform(tree)
    except UnexpectedInput as e:
        raise PresentationSyntaxError(
            f"line {e.line}:{e.column}: cannot parse presentation near {e.get_context(text).strip()!r}"
        ) from None
    except VisitError as e:
        raise e.orig_exc from None


def parse_presentation(text: str) -> Presentation:
    gens, rels = _parse(text, "presentation")
    names = tuple(gens)
    return Presentation(names, tuple(_resolve(names, r) for r in rels))


def load_presentation(path: Union[str, Path]) -> Presentation:
    with open(path, "r", encoding="utf-8") as f:
        return parse_presentation(f.read())


def parse_word(text: str, p: Presentation) -> Word:
    """Parses a single word over the generators of p."""
    return _resolve(p.generators, _parse(text, "word"))


def render_presentation(p: Presentation) -> str:
    rels = ", ".join(p.render_word(r) for r in p.relators)
    return f"gens: {' '.join(p.generators)}\nrels: {rels}\n"
