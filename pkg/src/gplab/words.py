"""Right-angled Coxeter group combinatorics: reduction, canonical normal forms,
weak order, joins and meets, and ball enumeration.

A group element is represented by its canonical normal form: the
lexicographically least reduced word under the graph's vertex order.  All
internal routines work on plain letter tuples; `NormalForm` is the thin
public wrapper.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ResourceLimitError
from .graphs import SimplicialGraph, VertexId

Letters = tuple[VertexId, ...]

BALL_DEPTH_CAP = 12
BALL_SIZE_CAP = 10**6


@dataclass(frozen=True)
class Word:
    """An unreduced word over the vertex alphabet."""

    letters: Letters

    @staticmethod
    def of(letters: Iterable[VertexId]) -> "Word":
        return Word(tuple(letters))


class NormalForm:
    """Canonical reduced word; equality is sequence comparison over one host."""

    __slots__ = ("letters", "group")

    def __init__(self, letters: Letters, group: "CoxeterGroup"):
        self.letters = letters
        self.group = group

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NormalForm)
            and self.letters == other.letters
            and self.group.graph == other.group.graph
        )

    def __hash__(self) -> int:
        return hash((self.letters, self.group.graph))

    def __repr__(self) -> str:
        return f"NormalForm{self.letters!r}"

    def is_identity(self) -> bool:
        return not self.letters


def _check_same_host(u: NormalForm, v: NormalForm):
    if u.group.graph != v.group.graph:
        raise ValueError("normal forms live over different host graphs")


class CoxeterGroup:
    """Word engine for the right-angled Coxeter group of a simplicial graph."""

    def __init__(self, graph: SimplicialGraph):
        self.graph = graph
        self._vset = set(graph.vertices)
        self._adj = {v: graph.neighbors(v) for v in graph.vertices}
        self._down_cache: dict[Letters, frozenset[Letters]] = {(): frozenset({()})}
        self._spheres: list[list[Letters]] = [[()]]

    # -- tuple-level core -------------------------------------------------

    def _rmul_gen(self, w: list[VertexId], s: VertexId):
        """Right-multiply a reduced word by a generator, in place."""
        adj = self._adj[s]
        for k in range(len(w) - 1, -1, -1):
            if w[k] == s:
                del w[k]
                return
            if w[k] not in adj:
                break
        w.append(s)

    def reduce_tuple(self, letters: Sequence[VertexId]) -> Letters:
        acc: list[VertexId] = []
        for s in letters:
            if s not in self._vset:
                raise ValueError(f"unknown vertex letter {s}")
            self._rmul_gen(acc, s)
        return self.canonical_tuple(tuple(acc))

    def canonical_tuple(self, reduced: Letters) -> Letters:
        return self.sort_with_perm(reduced)[0]

    def sort_with_perm(self, reduced: Letters) -> tuple[Letters, tuple[int, ...]]:
        """Canonical (lex-least) rearrangement of a reduced word.

        Returns (canonical letters, perm) where perm[k] is the source
        position of the k-th canonical letter.  The permutation preserves the
        relative order of equal letters, so it is the unique one relating the
        two reduced words.
        """
        remaining = list(range(len(reduced)))
        out_letters: list[VertexId] = []
        out_perm: list[int] = []
        while remaining:
            best_pos = -1
            best_letter = None
            seen: list[VertexId] = []
            for pos in remaining:
                letter = reduced[pos]
                if all(p in self._adj[letter] for p in seen):
                    if best_letter is None or letter < best_letter:
                        best_letter = letter
                        best_pos = pos
                seen.append(letter)
            out_letters.append(reduced[best_pos])
            out_perm.append(best_pos)
            remaining.remove(best_pos)
        return tuple(out_letters), tuple(out_perm)

    def first_letters_tuple(self, w: Letters) -> tuple[VertexId, ...]:
        out = []
        for i, letter in enumerate(w):
            if all(w[j] in self._adj[letter] for j in range(i)):
                out.append(letter)
        return tuple(sorted(set(out)))

    def last_letters_tuple(self, w: Letters) -> tuple[VertexId, ...]:
        return self.first_letters_tuple(tuple(reversed(w)))

    def left_quotient_tuple(self, s: VertexId, w: Letters) -> Letters:
        """Remove the front-liftable occurrence of s; requires s <= w."""
        for i, letter in enumerate(w):
            if letter == s and all(w[j] in self._adj[s] for j in range(i)):
                return self.canonical_tuple(w[:i] + w[i + 1:])
        raise ValueError(f"{s} is not a first letter of {w}")

    def mul_tuple(self, u: Letters, v: Letters) -> Letters:
        return self.reduce_tuple(u + v)

    def inv_tuple(self, w: Letters) -> Letters:
        return self.canonical_tuple(tuple(reversed(w)))

    def leq_tuple(self, v: Letters, w: Letters) -> bool:
        """v <= w in the right weak order: w starts in v."""
        if len(v) > len(w):
            return False
        return len(self.reduce_tuple(tuple(reversed(v)) + w)) == len(w) - len(v)

    def commutes_tuple(self, w: Letters, v: VertexId) -> bool:
        return self.mul_tuple(w, (v,)) == self.mul_tuple((v,), w)

    def down_set(self, w: Letters) -> frozenset[Letters]:
        """All u with u <= w, computed by descending along final letters."""
        cached = self._down_cache.get(w)
        if cached is not None:
            return cached
        acc: set[Letters] = {w}
        for s in self.last_letters_tuple(w):
            acc |= self.down_set(self.mul_tuple(w, (s,)))
        result = frozenset(acc)
        self._down_cache[w] = result
        return result

    # -- join and meet ----------------------------------------------------

    def meet_tuple(self, v: Letters, w: Letters) -> Letters:
        """Greatest common lower bound; peels shared first letters greedily."""
        prefix: list[VertexId] = []
        while True:
            common = set(self.first_letters_tuple(v)) & set(self.first_letters_tuple(w))
            if not common:
                return self.canonical_tuple(tuple(prefix))
            s = min(common)
            prefix.append(s)
            v = self.left_quotient_tuple(s, v)
            w = self.left_quotient_tuple(s, w)

    def join_tuple(self, v: Letters, w: Letters) -> Optional[Letters]:
        """Least common upper bound, or None when no common upper bound exists.

        Peeling recursion: shared first letters are factored out; otherwise a
        first letter t of w must commute with all of v (else no bound), and
        the problem shifts to (v, t\\w) under the constraint that the partial
        join does not reabsorb t.
        """
        if not v:
            return w
        if not w:
            return v
        fv = self.first_letters_tuple(v)
        fw = self.first_letters_tuple(w)
        union = sorted(set(fv) | set(fw))
        for a, b in itertools.combinations(union, 2):
            if b not in self._adj[a]:
                return None
        common = set(fv) & set(fw)
        if common:
            s = min(common)
            rest = self.join_tuple(self.left_quotient_tuple(s, v), self.left_quotient_tuple(s, w))
            if rest is None or s in self.first_letters_tuple(rest):
                return None
            return self.mul_tuple((s,), rest)
        t = min(fw)
        if not self.commutes_tuple(v, t):
            return None
        rest = self.join_tuple(v, self.left_quotient_tuple(t, w))
        if rest is None or t in self.first_letters_tuple(rest):
            return None
        return self.mul_tuple((t,), rest)

    def join_via_ball(self, v: Letters, w: Letters) -> Optional[Letters]:
        """Brute-force join oracle over the ball of radius |v|+|w|.

        Searches one extra shell as a guard: a common upper bound appearing
        only there would falsify the radius hypothesis and raises instead of
        silently returning the wrong minimum.
        """
        radius = len(v) + len(w)
        candidates = [
            u
            for u in self.ball_tuples(radius + 1)
            if v in self.down_set(u) and w in self.down_set(u)
        ]
        if not candidates:
            return None
        best = min(candidates, key=lambda u: (len(u), u))
        if len(best) > radius:
            raise ResourceLimitError(
                f"common upper bound of {v} and {w} found only outside radius {radius}"
            )
        for u in candidates:
            if best not in self.down_set(u):
                raise ResourceLimitError(
                    f"upper bounds of {v} and {w} have no unique minimum inside the ball"
                )
        return best

    # -- enumeration --------------------------------------------------------

    def ball_tuples(self, n: int) -> list[Letters]:
        if n < 0:
            raise ValueError("ball radius must be nonnegative")
        if n > BALL_DEPTH_CAP:
            raise ResourceLimitError(f"ball depth capped at {BALL_DEPTH_CAP}, got {n}")
        while len(self._spheres) <= n:
            prev = self._spheres[-1]
            k = len(self._spheres)
            nxt: set[Letters] = set()
            for w in prev:
                for s in self.graph.vertices:
                    u = self.mul_tuple(w, (s,))
                    if len(u) == k:
                        nxt.add(u)
            self._spheres.append(sorted(nxt))
            if sum(len(s) for s in self._spheres) > BALL_SIZE_CAP:
                raise ResourceLimitError(f"ball size exceeds {BALL_SIZE_CAP} elements")
        out: list[Letters] = []
        for sphere in self._spheres[: n + 1]:
            out.extend(sphere)
        return out

    def sphere_sizes(self, n: int) -> list[int]:
        self.ball_tuples(n)
        return [len(s) for s in self._spheres[: n + 1]]

    # -- public wrapper API -------------------------------------------------

    @property
    def identity(self) -> NormalForm:
        return NormalForm((), self)

    def word(self, letters: Iterable[VertexId]) -> Word:
        return Word.of(letters)

    def reduce(self, w: Word | Sequence[VertexId]) -> NormalForm:
        letters = w.letters if isinstance(w, Word) else tuple(w)
        return NormalForm(self.reduce_tuple(letters), self)

    def element(self, letters: Iterable[VertexId]) -> NormalForm:
        return self.reduce(Word.of(letters))

    def multiply(self, u: NormalForm, v: NormalForm) -> NormalForm:
        _check_same_host(u, v)
        return NormalForm(self.mul_tuple(u.letters, v.letters), self)

    def inverse(self, w: NormalForm) -> NormalForm:
        return NormalForm(self.inv_tuple(w.letters), self)

    def starts_with(self, v: NormalForm, w: NormalForm) -> bool:
        _check_same_host(v, w)
        return self.leq_tuple(v.letters, w.letters)

    def ends_with(self, v: NormalForm, w: NormalForm) -> bool:
        """v <=_L w: w has a reduced expression ending in v."""
        _check_same_host(v, w)
        return self.leq_tuple(self.inv_tuple(v.letters), self.inv_tuple(w.letters))

    def first_letters(self, w: NormalForm) -> frozenset[VertexId]:
        return frozenset(self.first_letters_tuple(w.letters))

    def last_letters(self, w: NormalForm) -> frozenset[VertexId]:
        return frozenset(self.last_letters_tuple(w.letters))

    def join(self, v: NormalForm, w: NormalForm) -> Optional[NormalForm]:
        _check_same_host(v, w)
        j = self.join_tuple(v.letters, w.letters)
        return None if j is None else NormalForm(j, self)

    def meet(self, v: NormalForm, w: NormalForm) -> NormalForm:
        _check_same_host(v, w)
        return NormalForm(self.meet_tuple(v.letters, w.letters), self)

    def commutes_with(self, w: NormalForm, v: VertexId) -> bool:
        return self.commutes_tuple(w.letters, v)

    def ball(self, n: int) -> list[NormalForm]:
        return [NormalForm(t, self) for t in self.ball_tuples(n)]


_group_cache: dict[SimplicialGraph, CoxeterGroup] = {}


def coxeter_group(graph: SimplicialGraph) -> CoxeterGroup:
    """Group engine for a graph; cached so normal forms share one host."""
    group = _group_cache.get(graph)
    if group is None:
        group = CoxeterGroup(graph)
        _group_cache[graph] = group
    return group
