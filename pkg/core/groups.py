"""
Finitely presented groups.

Words are run-length sequences of ``(generator_id, exponent)`` pairs over
interned integer ids; a :class:`Presentation` keeps the display names.
The commutator convention used everywhere is ``[x, y] = x^-1 y^-1 x y``.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from core.errors import BadParameter, InconsistentIdentification, UnknownGenerator

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]

# Signed single letters, used by the Tietze engine.
_Unit = Tuple[int, int]


@dataclass(frozen=True)
class Word:
    """A group word as exponent runs. Not necessarily reduced; see free_reduce."""
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple((int(g), int(e)) for g, e in self.letters)
        for g, e in letters:
            if g < 0:
                raise BadParameter(f"generator ids are non-negative, got {g}")
            if e == 0:
                raise BadParameter("word exponents must be nonzero")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def gen(cls, generator: int, exponent: int = 1) -> "Word":
        return cls(((generator, exponent),)) if exponent else cls()

    @classmethod
    def identity(cls) -> "Word":
        return cls()

    def __mul__(self, other: "Word") -> "Word":
        return free_reduce(Word(self.letters + other.letters))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        if k == 0:
            return Word()
        base = self if k > 0 else self.inverse()
        return free_reduce(Word(base.letters * abs(k)))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def is_identity(self) -> bool:
        return not free_reduce(self).letters

    def generators(self) -> frozenset:
        return frozenset(g for g, _ in self.letters)

    def exponent_sums(self, rank: int) -> List[int]:
        row = [0] * rank
        for g, e in self.letters:
            row[g] += e
        return row

    def units(self) -> List[_Unit]:
        """Expands the runs into signed single letters."""
        out: List[_Unit] = []
        for g, e in self.letters:
            out.extend([(g, 1 if e > 0 else -1)] * abs(e))
        return out

    @classmethod
    def from_units(cls, units: Iterable[_Unit]) -> "Word":
        return free_reduce(cls(tuple(units)))


def free_reduce(w: Word) -> Word:
    """Canonical freely reduced form: merges runs, cancels inverse pairs."""
    stack: List[Letter] = []
    for g, e in w.letters:
        if stack and stack[-1][0] == g:
            merged = stack.pop()[1] + e
            if merged:
                stack.append((g, merged))
        else:
            stack.append((g, e))
    return Word(tuple(stack))


def cyclic_reduce(w: Word) -> Word:
    """Freely reduces, then conjugates away matching first and last runs."""
    letters = list(free_reduce(w).letters)
    while len(letters) >= 2 and letters[0][0] == letters[-1][0]:
        g = letters[0][0]
        merged = letters[0][1] + letters[-1][1]
        core = letters[1:-1]
        letters = core + [(g, merged)] if merged else core
        letters = list(free_reduce(Word(tuple(letters))).letters)
    return Word(tuple(letters))


def commutator(x: Word, y: Word) -> Word:
    return x.inverse() * y.inverse() * x * y


@dataclass(frozen=True)
class Presentation:
    """Generator display names plus freely reduced relators over their ids."""
    generators: Tuple[str, ...] = ()
    relators: Tuple[Word, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise BadParameter(f"duplicate generator names in {gens}")
        rels = tuple(free_reduce(r) for r in self.relators)
        for r in rels:
            bad = [g for g in r.generators() if g >= len(gens)]
            if bad:
                raise UnknownGenerator(f"relator uses undeclared generator id(s) {sorted(bad)}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise UnknownGenerator(f"generator {name!r} is not declared") from None

    def gen(self, name: str, exponent: int = 1) -> Word:
        return Word.gen(self.index(name), exponent)

    def check_word(self, w: Word) -> None:
        bad = [g for g in w.generators() if g >= self.rank]
        if bad:
            raise UnknownGenerator(f"word uses undeclared generator id(s) {sorted(bad)}")

    def with_relators(self, *extra: Word) -> "Presentation":
        for w in extra:
            self.check_word(w)
        return Presentation(self.generators, self.relators + tuple(extra))

    def render_word(self, w: Word) -> str:
        if not w.letters:
            return "1"
        parts = []
        for g, e in w.letters:
            name = self.generators[g]
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)

    def __str__(self) -> str:
        rels = ", ".join(self.render_word(r) for r in self.relators)
        return f"gens: {' '.join(self.generators)}\nrels: {rels}"


# === ABELIANIZATION ===

@dataclass(frozen=True)
class SmithForm:
    """Certificate ``U * A * V = D`` for an integer matrix A."""
    matrix: Tuple[Tuple[int, ...], ...]
    diagonal: Tuple[Tuple[int, ...], ...]
    left: Tuple[Tuple[int, ...], ...]
    right: Tuple[Tuple[int, ...], ...]

    @property
    def invariants(self) -> List[int]:
        size = min(len(self.diagonal), len(self.diagonal[0]) if self.diagonal else 0)
        return [self.diagonal[i][i] for i in range(size)]

    def verify(self) -> bool:
        """Exact check of the product, unimodularity and the divisibility chain."""
        rows = len(self.matrix)
        cols = len(self.right)
        if rows == 0 or cols == 0:
            return True
        A = sympy.Matrix(self.matrix)
        U = sympy.Matrix(self.left)
        V = sympy.Matrix(self.right)
        D = sympy.Matrix(self.diagonal)
        if U * A * V != D:
            return False
        if abs(U.det()) != 1 or abs(V.det()) != 1:
            return False
        for i in range(rows):
            for j in range(cols):
                if i != j and D[i, j] != 0:
                    return False
        diag = [d for d in self.invariants]
        if any(d < 0 for d in diag):
            return False
        nonzero = [d for d in diag if d]
        if diag[len(nonzero):] != [0] * (len(diag) - len(nonzero)):
            return False
        return all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


def _identity(n: int) -> List[List[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithForm:
    """
    Smith normal form over the integers with unimodular certificates.

    Pivots are chosen by minimal absolute value to limit entry growth.
    """
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(target, source, k):
        A[target] = [a + k * b for a, b in zip(A[target], A[source])]
        U[target] = [a + k * b for a, b in zip(U[target], U[source])]

    def add_col(target, source, k):
        for M in (A, V):
            for row in M:
                row[target] += k * row[source]

    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            stray = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if stray is None:
                break
            add_row(t, stray, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-u for u in U[t]]
        t += 1

    freeze = lambda M: tuple(tuple(row) for row in M)
    return SmithForm(
        matrix=freeze([list(map(int, row)) for row in matrix]),
        diagonal=freeze(A),
        left=freeze(U),
        right=freeze(V),
    )


@dataclass(frozen=True)
class AbelianGroupDescription:
    """ℤ^free_rank ⊕ ⊕ ℤ/torsion[i], torsion in divisibility order."""
    free_rank: int = 0
    torsion: Tuple[int, ...] = ()
    certificate: Optional[SmithForm] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise BadParameter("free rank must be non-negative")
        if any(t < 2 for t in self.torsion):
            raise BadParameter(f"torsion coefficients must be >= 2, got {self.torsion}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise BadParameter(f"torsion {self.torsion} is not a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def elementary_divisors(self) -> List[int]:
        """Prime-power decomposition of the torsion part."""
        divisors = []
        for t in self.torsion:
            divisors.extend(p ** k for p, k in sympy.factorint(t).items())
        return sorted(divisors)

    def __str__(self) -> str:
        if self.is_trivial:
            return "trivial"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts)


def exponent_matrix(p: Presentation) -> List[List[int]]:
    return [r.exponent_sums(p.rank) for r in p.relators]


def abelianize(p: Presentation) -> AbelianGroupDescription:
    """H1 of the presented group from the Smith form of the exponent-sum matrix."""
    rows = exponent_matrix(p)
    if not rows or p.rank == 0:
        return AbelianGroupDescription(free_rank=p.rank)
    snf = smith_normal_form(rows)
    diag = snf.invariants
    rank = sum(1 for d in diag if d)
    torsion = tuple(d for d in diag if d > 1)
    return AbelianGroupDescription(free_rank=p.rank - rank, torsion=torsion, certificate=snf)


# === LUTTINGER RELATORS ===

def luttinger_quotient(p: Presentation, mu: Word, gamma_push: Word, m: int) -> Presentation:
    """Adjoins the relator mu * gamma_push^m; existing data is untouched."""
    p.check_word(mu)
    p.check_word(gamma_push)
    relator = free_reduce(mu * gamma_push ** m)
    logger.debug("luttinger relator %s", p.render_word(relator))
    return Presentation(p.generators, p.relators + (relator,))


# === FUNDAMENTAL GROUP DATA ===

class FactKind(Enum):
    SURJECTIVE_FROM_SURFACE = "SurjectiveFromSurface"
    GENERATORS_DIE = "GeneratorsDieInComplement"
    MERIDIAN_DIES = "MeridianDies"


@dataclass(frozen=True)
class Pi1Fact:
    """A cited fact about the complement of a surface (or the whole manifold if surface is None)."""
    kind: FactKind
    citation: str
    surface: Optional[str] = None

    def __post_init__(self):
        if not self.citation or not self.citation.strip():
            raise BadParameter("declared facts require a citation")


@dataclass(frozen=True)
class ExplicitPresentation:
    presentation: Presentation


@dataclass(frozen=True)
class DeclaredFacts:
    facts: Tuple[Pi1Fact, ...] = ()
    undetermined: bool = False

    def has(self, kind: FactKind) -> bool:
        return any(f.kind is kind for f in self.facts)


Pi1Datum = Union[ExplicitPresentation, DeclaredFacts]

TRIVIAL_GROUP = ExplicitPresentation(Presentation())


@lru_cache(maxsize=256)
def is_certified_trivial(p: Presentation, budget: int = 20_000) -> bool:
    """True only when Tietze moves reduce p to zero generators."""
    if p.rank == 0:
        return True
    simplified, _ = tietze_simplify(p, budget)
    return simplified.rank == 0


def _cyclic_key(units: List[_Unit]) -> Tuple[_Unit, ...]:
    if not units:
        return ()
    inverse = [(g, -s) for g, s in reversed(units)]
    candidates = []
    for seq in (units, inverse):
        for i in range(len(seq)):
            candidates.append(tuple(seq[i:] + seq[:i]))
    return min(candidates)


def is_trivial_word(p: Presentation, w: Word, budget: int = 20_000) -> bool:
    """Conservative triviality test: never answers True without a certificate."""
    p.check_word(w)
    reduced = cyclic_reduce(w)
    if not reduced.letters or p.rank == 0:
        return True
    key = _cyclic_key(reduced.units())
    if any(_cyclic_key(cyclic_reduce(r).units()) == key for r in p.relators):
        return True
    return is_certified_trivial(p, budget)


def _merge(pA: Presentation, pB: Presentation) -> Tuple[List[str], int]:
    names = list(pA.generators)
    for name in pB.generators:
        fresh = name
        while fresh in names:
            fresh += "'"
        names.append(fresh)
    return names, pA.rank


def _shift(w: Word, offset: int) -> Word:
    return Word(tuple((g + offset, e) for g, e in w.letters))


def _surjective(datum: Pi1Datum) -> bool:
    if isinstance(datum, DeclaredFacts):
        return datum.has(FactKind.SURJECTIVE_FROM_SURFACE)
    return is_certified_trivial(datum.presentation)


def _kills_generators(datum: Pi1Datum, loops: Sequence[Word]) -> bool:
    if isinstance(datum, DeclaredFacts):
        return datum.has(FactKind.GENERATORS_DIE)
    p = datum.presentation
    if is_certified_trivial(p):
        return True
    return bool(loops) and all(is_trivial_word(p, w) for w in loops)


def _kills_meridian(datum: Pi1Datum, meridian: Optional[Word]) -> bool:
    if isinstance(datum, DeclaredFacts):
        return datum.has(FactKind.MERIDIAN_DIES)
    p = datum.presentation
    if is_certified_trivial(p):
        return True
    return meridian is not None and is_trivial_word(p, meridian)


def van_kampen_sum(
    pA: Pi1Datum,
    pB: Pi1Datum,
    loops_a: Sequence[Word] = (),
    loops_b: Sequence[Word] = (),
    kill_meridians: bool = False,
    meridians: Optional[Tuple[Word, Word]] = None,
) -> Pi1Datum:
    """
    Amalgamates two complement groups over the identified surface loops.

    Args:
        pA, pB: complement data of the two sides.
        loops_a, loops_b: parallel lists of surface loops, identified pairwise.
        kill_meridians: adjoin the meridian words as relators (explicit sides only).
        meridians: meridian words on side A and side B.

    Returns:
        Pi1Datum: the merged presentation when both sides are explicit, the
        trivial presentation when the declared-fact rule applies, and an
        undetermined DeclaredFacts otherwise.
    """
    if len(loops_a) != len(loops_b):
        raise InconsistentIdentification(
            f"{len(loops_a)} loops on side A but {len(loops_b)} on side B"
        )
    meridian_a, meridian_b = meridians if meridians else (None, None)

    if isinstance(pA, ExplicitPresentation) and isinstance(pB, ExplicitPresentation):
        a, b = pA.presentation, pB.presentation
        for w in loops_a:
            a.check_word(w)
        for w in loops_b:
            b.check_word(w)
        names, offset = _merge(a, b)
        relators = list(a.relators) + [_shift(r, offset) for r in b.relators]
        relators += [wa * _shift(wb, offset).inverse() for wa, wb in zip(loops_a, loops_b)]
        if kill_meridians and meridians:
            relators += [meridian_a, _shift(meridian_b, offset)]
        merged = Presentation(tuple(names), tuple(relators))
        logger.debug("van Kampen merge: %d generators, %d relators", merged.rank, len(merged.relators))
        return ExplicitPresentation(merged)

    orientations = ((pA, pB, loops_b, meridian_a, meridian_b), (pB, pA, loops_a, meridian_b, meridian_a))
    for onto, other, other_loops, mer_onto, mer_other in orientations:
        if (
            _surjective(onto)
            and _kills_generators(other, other_loops)
            and (_kills_meridian(onto, mer_onto) or _kills_meridian(other, mer_other))
        ):
            logger.debug("van Kampen deduction: complement facts force the trivial group")
            return TRIVIAL_GROUP
    logger.debug("van Kampen deduction: facts insufficient, result undetermined")
    return DeclaredFacts(undetermined=True)


# === PRESENTATIONS FROM SURGERY LISTS ===

class _Builder:
    """Collects relations of the form lhs = rhs over named generators."""

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self.relators: List[Word] = []

    def __getitem__(self, name: str) -> Word:
        return Word.gen(self.names.index(name))

    def relate(self, lhs: Word, rhs: Optional[Word] = None) -> None:
        rhs = rhs if rhs is not None else Word()
        self.relators.append(lhs * rhs.inverse())

    def build(self) -> Presentation:
        return Presentation(self.names, tuple(self.relators))


def make_Y_n_presentation(n: int) -> Presentation:
    """Relations of the Luttinger-surgered product of genus 2 and genus n surfaces."""
    if n < 2:
        raise BadParameter(f"Y_n needs n >= 2, got {n}")
    names = ["a1", "a2", "b1", "b2"] + [f"c{j}" for j in range(1, n + 1)] + [f"d{j}" for j in range(1, n + 1)]
    B = _Builder(names)
    a1, a2, b1, b2 = B["a1"], B["a2"], B["b1"], B["b2"]
    c = {j: B[f"c{j}"] for j in range(1, n + 1)}
    d = {j: B[f"d{j}"] for j in range(1, n + 1)}
    inv = lambda w: w.inverse()

    B.relate(commutator(inv(b1), inv(d[1])), a1)
    B.relate(commutator(inv(a1), d[1]), b1)
    B.relate(commutator(inv(b2), inv(d[2])), a2)
    B.relate(commutator(inv(a2), d[2]), b2)
    B.relate(commutator(inv(d[1]), inv(b2)), c[1])
    B.relate(commutator(inv(c[1]), b2), d[1])
    B.relate(commutator(inv(d[2]), inv(b1)), c[2])
    B.relate(commutator(inv(c[2]), b1), d[2])

    for x, y in ((a1, c[1]), (a1, c[2]), (a1, d[2]), (b1, c[1]),
                 (a2, c[1]), (a2, c[2]), (a2, d[1]), (b2, c[2])):
        B.relate(commutator(x, y))

    B.relate(commutator(a1, b1) * commutator(a2, b2))
    product = Word()
    for j in range(1, n + 1):
        product = product * commutator(c[j], d[j])
    B.relate(product)

    for j in range(3, n + 1):
        B.relate(commutator(inv(a1), inv(d[j])), c[j])
        B.relate(commutator(inv(a2), inv(c[j])), d[j])
    for j in range(3, n + 1):
        B.relate(commutator(b1, c[j]))
        B.relate(commutator(b2, d[j]))
    return B.build()


def make_Y_n_pq_presentation(n: int, p: int, q: int, m: int) -> Presentation:
    """Relations of the 2n torus surgeries on the product of a genus n surface and a torus."""
    if n < 2:
        raise BadParameter(f"n must be >= 2, got {n}")
    if p < 1 or q < 1:
        raise BadParameter(f"p and q must be >= 1, got p={p}, q={q}")
    names = [f"a{i}" for i in range(1, n + 1)] + [f"b{i}" for i in range(1, n + 1)] + ["c", "d"]
    B = _Builder(names)
    a = {i: B[f"a{i}"] for i in range(1, n + 1)}
    b = {i: B[f"b{i}"] for i in range(1, n + 1)}
    c, d = B["c"], B["d"]

    for i in range(1, n):
        B.relate(commutator(b[i].inverse(), d.inverse()), a[i])
        B.relate(commutator(a[i].inverse(), d), b[i])
    B.relate(commutator(d.inverse(), b[n].inverse()), c ** p)
    B.relate(commutator(c.inverse(), b[n]) ** (-m), d ** q)

    for i in range(1, n):
        B.relate(commutator(a[i], c))
        B.relate(commutator(b[i], c))
    B.relate(commutator(a[n], c))
    B.relate(commutator(a[n], d))

    surface = Word()
    for i in range(1, n + 1):
        surface = surface * commutator(a[i], b[i])
    B.relate(surface)
    B.relate(commutator(c, d))
    return B.build()


def product_presentation(g: int, h: int) -> Presentation:
    """π1 of Σ_g × Σ_h: two surface groups that commute with each other."""
    if g < 0 or h < 0:
        raise BadParameter("genera must be non-negative")
    left = [(f"a{i}", f"b{i}") for i in range(1, g + 1)]
    right = [(f"c{j}", f"d{j}") for j in range(1, h + 1)]
    names = [x for pair in left for x in pair] + [y for pair in right for y in pair]
    B = _Builder(names)
    for pairs in (left, right):
        if pairs:
            surface = Word()
            for x, y in pairs:
                surface = surface * commutator(B[x], B[y])
            B.relate(surface)
    for x in (n for pair in left for n in pair):
        for y in (n for pair in right for n in pair):
            B.relate(commutator(B[x], B[y]))
    return B.build()


# === TIETZE SIMPLIFICATION ===

@dataclass(frozen=True)
class TietzeStep:
    move: str
    detail: str
    presentation: Presentation


class _BudgetExhausted(Exception):
    pass


def _reduce_units(units: List[_Unit]) -> List[_Unit]:
    stack: List[_Unit] = []
    for g, s in units:
        if stack and stack[-1] == (g, -s):
            stack.pop()
        else:
            stack.append((g, s))
    return stack


def _cyclic_units(units: List[_Unit]) -> List[_Unit]:
    seq = _reduce_units(units)
    lo, hi = 0, len(seq)
    while hi - lo >= 2 and seq[lo] == (seq[hi - 1][0], -seq[hi - 1][1]):
        lo += 1
        hi -= 1
    return seq[lo:hi]


def _inverse_units(units: List[_Unit]) -> List[_Unit]:
    return [(g, -s) for g, s in reversed(units)]


class _TietzeRun:
    """Mutable working copy; every accepted move is logged as a TietzeStep."""

    def __init__(self, p: Presentation, budget: int, max_length: int):
        self.names: List[str] = list(p.generators)
        self.rels: List[List[_Unit]] = [r.units() for r in p.relators]
        self.budget = budget
        self.spent = 0
        self.max_length = max_length
        self.steps: List[TietzeStep] = []

    def tick(self, cost: int = 1) -> None:
        self.spent += cost
        if self.spent > self.budget:
            raise _BudgetExhausted()

    def snapshot(self) -> Presentation:
        return Presentation(tuple(self.names), tuple(Word.from_units(r) for r in self.rels))

    def record(self, move: str, detail: str) -> None:
        self.steps.append(TietzeStep(move, detail, self.snapshot()))
        logger.debug("tietze %s: %s", move, detail)

    def render(self, units: List[_Unit]) -> str:
        return Presentation(tuple(self.names)).render_word(Word.from_units(units))

    # --- Moves ---
    def reduce(self) -> bool:
        seen = set()
        kept: List[List[_Unit]] = []
        for r in self.rels:
            self.tick(len(r) + 1)
            c = _cyclic_units(r)
            if not c:
                continue
            key = _cyclic_key(c)
            if key in seen:
                continue
            seen.add(key)
            kept.append(c)
        if kept != self.rels:
            dropped = len(self.rels) - len(kept)
            self.rels = kept
            self.record("reduce", f"cyclically reduced relators, dropped {dropped}")
            return True
        return False

    def eliminate(self) -> bool:
        candidates = []
        for ri, r in enumerate(self.rels):
            self.tick(len(r) + 1)
            counts: Dict[int, int] = {}
            for g, _ in r:
                counts[g] = counts.get(g, 0) + 1
            for g, k in counts.items():
                if k == 1:
                    candidates.append((len(r), ri, g))
        current = sum(len(r) for r in self.rels)
        for length, ri, g in sorted(candidates):
            r = self.rels[ri]
            pos = next(i for i, (h, _) in enumerate(r) if h == g)
            rotated = r[pos:] + r[:pos]
            sign, rest = rotated[0][1], rotated[1:]
            value = _inverse_units(rest) if sign == 1 else rest
            inverse_value = _inverse_units(value)
            new_rels = []
            for j, s in enumerate(self.rels):
                if j == ri:
                    continue
                self.tick(len(s) + 1)
                expanded: List[_Unit] = []
                for h, e in s:
                    if h == g:
                        expanded.extend(value if e == 1 else inverse_value)
                    else:
                        expanded.append((h, e))
                new_rels.append(_cyclic_units(expanded))
            total = sum(len(s) for s in new_rels)
            if total > self.max_length and total > current:
                continue
            name = self.names[g]
            detail = f"{name} = {self.render(value)} from relator {self.render(r)}"
            self.rels = [[(h - (h > g), e) for h, e in s] for s in new_rels]
            del self.names[g]
            self.record("eliminate", detail)
            return True
        return False

    def substitute(self) -> bool:
        order = sorted(range(len(self.rels)), key=lambda i: (len(self.rels[i]), i))
        for i in order:
            r = self.rels[i]
            L = len(r)
            if L == 0:
                continue
            rotations = []
            for seq in (r, _inverse_units(r)):
                rotations.extend(seq[k:] + seq[:k] for k in range(L))
            for ell in range(L, L // 2, -1):
                for rot in rotations:
                    u, v = rot[:ell], rot[ell:]
                    for j, s in enumerate(self.rels):
                        if j == i or len(s) < ell:
                            continue
                        doubled = s + s[: ell - 1]
                        for start in range(len(s)):
                            self.tick()
                            if doubled[start:start + ell] == u:
                                srot = s[start:] + s[:start]
                                new = _cyclic_units(_inverse_units(v) + srot[ell:])
                                before = self.render(s)
                                self.rels[j] = new
                                self.record(
                                    "substitute",
                                    f"replaced {self.render(u)} by {self.render(_inverse_units(v))} "
                                    f"in {before}",
                                )
                                return True
        return False


def tietze_simplify(
    p: Presentation, budget: int, max_length: Optional[int] = None
) -> Tuple[Presentation, Tuple[TietzeStep, ...]]:
    """
    Deterministic Tietze simplification within a node budget.

    The move order is fixed: reduce relators, eliminate a generator isolated
    by the shortest relator, substitute the longest matching half-relator.
    Budget exhaustion returns the best presentation reached so far.
    """
    if budget < 1:
        raise BadParameter(f"budget must be positive, got {budget}")
    limit = max_length if max_length is not None else 4 * p.total_length + 64
    run = _TietzeRun(p, budget, limit)
    try:
        while True:
            run.reduce()
            if run.eliminate():
                continue
            if run.substitute():
                continue
            break
    except _BudgetExhausted:
        logger.warning("Tietze budget of %d nodes exhausted after %d moves", budget, len(run.steps))
    result = run.steps[-1].presentation if run.steps else p
    return result, tuple(run.steps)
