"""The truncated graph-product Fock space and its concrete operators.

Every operator here is the compression P_N T P_N of its infinite counterpart
to the basis of word length <= N.  A guard level accompanies each matrix:
the largest k such that the matrix agrees with the untruncated operator on
vectors supported in word length <= k.  Identity checks only ever quantify
over the guarded subspace.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import _mat
from .algebras import Element, GnsRep
from .errors import ResourceLimitError
from .graphs import SimplicialGraph, VertexId
from .words import Letters, NormalForm, coxeter_group

DEFAULT_DIM_CAP = 20000
GAUGE_GRID_CAP = 200000


@dataclass(frozen=True)
class FockIndex:
    """A basis vector: a normal-form word plus one basis slot per letter.

    Slot k indexes the orthonormal basis of the k-th letter's reduced GNS
    space, hence is >= 1 (slot 0 is the cyclic vector, excluded).  The empty
    word with no slots denotes the vacuum.
    """

    word: Letters
    slots: tuple[int, ...]

    def __post_init__(self):
        if len(self.word) != len(self.slots):
            raise ValueError("one slot per letter required")


class TruncatedFock:
    """Orthonormal basis of the graph-product Hilbert space up to depth N."""

    def __init__(
        self,
        graph: SimplicialGraph,
        reps: Mapping[VertexId, GnsRep],
        n: int,
        dim_cap: int = DEFAULT_DIM_CAP,
    ):
        if n < 0:
            raise ValueError("truncation depth must be nonnegative")
        missing = set(graph.vertices) - set(reps)
        if missing:
            raise ValueError(f"missing representations for vertices {sorted(missing)}")
        self.graph = graph
        self.group = coxeter_group(graph)
        self.reps = dict(reps)
        self.n = n

        basis: list[FockIndex] = []
        offsets: dict[Letters, int] = {}
        for w in self.group.ball_tuples(n):
            sdims = [self.reps[v].dim - 1 for v in w]
            if any(d == 0 for d in sdims):
                continue
            offsets[w] = len(basis)
            for slots in itertools.product(*(range(1, d + 1) for d in sdims)):
                basis.append(FockIndex(w, slots))
            if len(basis) > dim_cap:
                raise ResourceLimitError(
                    f"Fock dimension exceeds cap {dim_cap} at depth {n}"
                )
        self.basis = basis
        self.dim = len(basis)
        self._offsets = offsets
        self._index = {(fi.word, fi.slots): i for i, fi in enumerate(basis)}
        self.lengths = np.array([len(fi.word) for fi in basis], dtype=int)
        words = sorted(offsets)
        self._word_pos = {w: k for k, w in enumerate(words)}
        self.word_ids = np.array([self._word_pos[fi.word] for fi in basis], dtype=int)
        self._plans: dict = {}
        self._subspaces: dict[SimplicialGraph, "TruncatedFock"] = {}
        self._cols_upto: dict[int, np.ndarray] = {}

    def index_of(self, word: Letters, slots: tuple[int, ...]) -> Optional[int]:
        return self._index.get((word, slots))

    def cols_upto(self, k: int) -> np.ndarray:
        got = self._cols_upto.get(k)
        if got is None:
            got = np.where(self.lengths <= k)[0]
            self._cols_upto[k] = got
        return got

    def word_of(self, i: int) -> Letters:
        return self.basis[i].word

    def words(self) -> list[Letters]:
        return sorted(self._offsets)

    def subspace(self, sub: SimplicialGraph) -> "TruncatedFock":
        got = self._subspaces.get(sub)
        if got is None:
            got = TruncatedFock(sub, {v: self.reps[v] for v in sub.vertices}, self.n)
            self._subspaces[sub] = got
        return got


class OperatorMatrix:
    """A compressed operator with its guard level and directional movement
    bounds.

    `up` and `down` bound how far the operator can raise or lower word
    length; matrices stay banded accordingly even beyond the guard, which is
    what makes the adjoint and product guard rules below sound.  Composition
    only spends guard on upward movement: lowering first never leaves the
    truncation.
    """

    __slots__ = ("space", "mat", "guard", "up", "down")

    def __init__(self, space: TruncatedFock, mat, guard: int, up: int, down: int):
        self.space = space
        self.mat = mat
        self.guard = guard
        self.up = up
        self.down = down

    @property
    def reach(self) -> int:
        return self.up + self.down

    def _same_space(self, other: "OperatorMatrix"):
        if self.space is not other.space:
            raise ValueError("operators live on different truncated spaces")

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_space(other)
        guard = min(other.guard, self.guard - other.up)
        return OperatorMatrix(
            self.space,
            _mat.mul(self.mat, other.mat),
            guard,
            self.up + other.up,
            self.down + other.down,
        )

    def _combine(self, other: "OperatorMatrix", mat) -> "OperatorMatrix":
        return OperatorMatrix(
            self.space,
            mat,
            min(self.guard, other.guard),
            max(self.up, other.up),
            max(self.down, other.down),
        )

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_space(other)
        return self._combine(other, _mat.add(self.mat, other.mat))

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_space(other)
        return self._combine(other, _mat.sub(self.mat, other.mat))

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        return OperatorMatrix(self.space, _mat.scale(self.mat, scalar), self.guard, self.up, self.down)

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorMatrix":
        return self * (-1.0)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(
            self.space, _mat.adjoint(self.mat), self.guard - self.down, self.down, self.up
        )

    def norm(self) -> float:
        return _mat.norm2(self.mat)

    def toarray(self) -> np.ndarray:
        return _mat.to_dense(self.mat)

    def entry(self, i: int, j: int) -> complex:
        return _mat.entry(self.mat, i, j)


def identity_op(space: TruncatedFock) -> OperatorMatrix:
    return OperatorMatrix(space, _mat.eye(space.dim), space.n, 0, 0)


def zero_op(space: TruncatedFock) -> OperatorMatrix:
    return OperatorMatrix(space, _mat.zeros(space.dim), space.n, 0, 0)


def guarded_deviation(a: OperatorMatrix, b: OperatorMatrix) -> float:
    """Operator-norm distance restricted to columns inside the common guard."""
    a._same_space(b)
    g = min(a.guard, b.guard)
    if g < 0:
        raise ValueError("empty guard; operators carry no exact columns")
    idx = a.space.cols_upto(g)
    diff = _mat.sub(a.mat, b.mat)
    return _mat.norm2(_mat.col_select(diff, idx))


def guarded_norm(a: OperatorMatrix) -> float:
    idx = a.space.cols_upto(max(a.guard, 0))
    return _mat.norm2(_mat.col_select(a.mat, idx))


def offdiagonal_mass(a: OperatorMatrix) -> float:
    """Largest entry coupling two different word components."""
    rows, cols, data = _mat.coo_parts(a.mat)
    if len(data) == 0:
        return 0.0
    wid = a.space.word_ids
    mask = wid[rows] != wid[cols]
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(data[mask])))


# -- lambda and rho ---------------------------------------------------------


def _liftable_front(group, word: Letters, v: VertexId) -> int:
    for i, letter in enumerate(word):
        if letter == v and all(word[j] in group._adj[v] for j in range(i)):
            return i
    raise ValueError(f"{v} is not a first letter of {word}")


def _liftable_back(group, word: Letters, v: VertexId) -> int:
    n = len(word)
    for i in range(n - 1, -1, -1):
        if word[i] == v and all(word[j] in group._adj[v] for j in range(i + 1, n)):
            return i
    raise ValueError(f"{v} is not a last letter of {word}")


def _plan_side(space: TruncatedFock, v: VertexId, left: bool):
    """Per-column action plan of lambda_v (left) or rho_v (right).

    Case 'A' (letter absent on the acting side): creation targets per slot
    value, or None beyond the truncation boundary.  Case 'B': the acted slot
    position, in-place retargets per slot value, and the dropped-letter
    target.
    """
    key = ("lambda" if left else "rho", v)
    got = space._plans.get(key)
    if got is not None:
        return got
    group = space.group
    dv = space.reps[v].dim
    plan = []
    for j, fi in enumerate(space.basis):
        w, slots = fi.word, fi.slots
        letters_side = group.first_letters_tuple(w) if left else group.last_letters_tuple(w)
        if v in letters_side:
            r = _liftable_front(group, w, v) if left else _liftable_back(group, w, v)
            s = slots[r]
            retarget = [
                space.index_of(w, slots[:r] + (t,) + slots[r + 1:]) for t in range(1, dv)
            ]
            minus = w[:r] + w[r + 1:]
            canon, perm = group.sort_with_perm(minus)
            mslots = slots[:r] + slots[r + 1:]
            drop = space.index_of(canon, tuple(mslots[p] for p in perm))
            plan.append(("B", s, retarget, drop))
        else:
            if len(w) + 1 <= space.n and dv > 1:
                ext = ((v,) + w) if left else (w + (v,))
                canon, perm = group.sort_with_perm(ext)
                targets = []
                for t in range(1, dv):
                    src = ((t,) + slots) if left else (slots + (t,))
                    targets.append(space.index_of(canon, tuple(src[p] for p in perm)))
                plan.append(("A", j, targets))
            else:
                plan.append(("A", j, None))
    space._plans[key] = plan
    return plan


def _side_op(space: TruncatedFock, v: VertexId, x: Element, left: bool) -> OperatorMatrix:
    rep = space.reps.get(v)
    if rep is None:
        raise ValueError(f"unknown vertex {v}")
    if x.algebra != rep.algebra:
        raise ValueError("element does not belong to the vertex algebra")
    m = rep.matrix(x)
    dv = rep.dim
    plan = _plan_side(space, v, left)
    rows: list[int] = []
    cols: list[int] = []
    data: list[complex] = []
    for j, entry in enumerate(plan):
        if entry[0] == "A":
            _, _, targets = entry
            c0 = m[0, 0]
            if c0 != 0.0:
                rows.append(j)
                cols.append(j)
                data.append(c0)
            if targets is not None:
                for t in range(1, dv):
                    val = m[t, 0]
                    if val != 0.0:
                        rows.append(targets[t - 1])
                        cols.append(j)
                        data.append(val)
        else:
            _, s, retarget, drop = entry
            for t in range(1, dv):
                val = m[t, s]
                if val != 0.0:
                    rows.append(retarget[t - 1])
                    cols.append(j)
                    data.append(val)
            val = m[0, s]
            if val != 0.0:
                rows.append(drop)
                cols.append(j)
                data.append(val)
    mat = _mat.from_coo(rows, cols, data, space.dim)
    return OperatorMatrix(space, mat, space.n - 1, 1, 1)


def lambda_op(space: TruncatedFock, v: VertexId, x: Element) -> OperatorMatrix:
    """Compression of the left regular embedding of x at vertex v."""
    return _side_op(space, v, x, left=True)


def rho_op(space: TruncatedFock, v: VertexId, x: Element) -> OperatorMatrix:
    """Compression of the right-handed embedding of x at vertex v."""
    return _side_op(space, v, x, left=False)


def reduced_operator(
    space: TruncatedFock, letters: Sequence[VertexId], elements: Sequence[Element]
) -> OperatorMatrix:
    """Product lambda_{v1}(a1) ... lambda_{vn}(an) for centered a_i along a
    reduced word."""
    if len(letters) != len(elements):
        raise ValueError("one element per letter")
    out = identity_op(space)
    for v, a in zip(letters, elements):
        out = out @ lambda_op(space, v, a)
    return out


# -- projections and gauge ----------------------------------------------------


def _as_letters(space: TruncatedFock, w) -> Letters:
    if isinstance(w, NormalForm):
        if w.group.graph != space.graph:
            raise ValueError("normal form over a different graph")
        return w.letters
    return space.group.canonical_tuple(space.group.reduce_tuple(tuple(w)))


def q_projection(space: TruncatedFock, w) -> OperatorMatrix:
    """Projection onto the components indexed by words starting with w.

    The empty word's projection omits the vacuum line: it is 1 minus the
    vacuum projection, matching the sum over nontrivial group elements.
    """
    letters = _as_letters(space, w)
    if len(letters) > space.n:
        raise ValueError(f"|w| = {len(letters)} exceeds truncation depth {space.n}")
    group = space.group
    dvals = np.zeros(space.dim, dtype=complex)
    for word, off in space._offsets.items():
        # The vacuum is excluded even from Q_e: the underlying direct sum runs
        # over nontrivial group elements only.
        keep = word != () and group.leq_tuple(letters, word)
        if keep:
            count = 1
            for vv in word:
                count *= space.reps[vv].dim - 1
            dvals[off: off + count] = 1.0
    return OperatorMatrix(space, _mat.diag(dvals), space.n, 0, 0)


def word_projection(space: TruncatedFock, w) -> OperatorMatrix:
    """Projection p_w onto the single word component (the vacuum for w = e)."""
    letters = _as_letters(space, w)
    dvals = np.zeros(space.dim, dtype=complex)
    off = space._offsets.get(letters)
    if off is not None:
        count = 1
        for vv in letters:
            count *= space.reps[vv].dim - 1
        dvals[off: off + count] = 1.0
    return OperatorMatrix(space, _mat.diag(dvals), space.n, 0, 0)


def level_projection(space: TruncatedFock, k: int) -> OperatorMatrix:
    """P_k: projection onto word lengths <= k."""
    dvals = (space.lengths <= k).astype(complex)
    return OperatorMatrix(space, _mat.diag(dvals), space.n, 0, 0)


def vacuum_projection(space: TruncatedFock) -> OperatorMatrix:
    return word_projection(space, ())


def creation(space: TruncatedFock, v: VertexId, a: Element) -> OperatorMatrix:
    qv = q_projection(space, (v,))
    out = qv @ lambda_op(space, v, a) @ (identity_op(space) - qv)
    out.down = 0  # raises word length by exactly one
    return out


def diagonal(space: TruncatedFock, v: VertexId, a: Element) -> OperatorMatrix:
    qv = q_projection(space, (v,))
    out = qv @ lambda_op(space, v, a) @ qv
    # preserves every word component; the sandwiched compression is exact on
    # the whole ball since nothing can overflow it
    out.up = out.down = 0
    out.guard = space.n
    return out


def annihilation(space: TruncatedFock, v: VertexId, a: Element) -> OperatorMatrix:
    qv = q_projection(space, (v,))
    out = (identity_op(space) - qv) @ lambda_op(space, v, a) @ qv
    # lowers word length by exactly one; the overflow part of the embedding
    # is annihilated by the projections, so compression is exact everywhere
    out.up = 0
    out.guard = space.n
    return out


def gauge_unitary(space: TruncatedFock, z: Mapping[VertexId, complex]) -> OperatorMatrix:
    for v in space.graph.vertices:
        if abs(abs(z[v]) - 1.0) > 1e-12:
            raise ValueError(f"gauge parameter at vertex {v} is not unimodular")
    dvals = np.ones(space.dim, dtype=complex)
    for i, fi in enumerate(space.basis):
        val = 1.0 + 0j
        for letter in fi.word:
            val *= z[letter]
        dvals[i] = val
    return OperatorMatrix(space, _mat.diag(dvals), space.n, 0, 0)


def expectation_diag(x: OperatorMatrix) -> OperatorMatrix:
    """Block-diagonal compression onto the word components (sum p_w x p_w)."""
    space = x.space
    rows, cols, data = _mat.coo_parts(x.mat)
    wid = space.word_ids
    if len(data):
        mask = wid[rows] == wid[cols]
        rows, cols, data = rows[mask], cols[mask], data[mask]
    return OperatorMatrix(space, _mat.from_coo(rows, cols, data, space.dim), x.guard, 0, 0)


def gauge_average(x: OperatorMatrix, m: int) -> OperatorMatrix:
    """Average of U_z x U_z* over the m-th-roots-of-unity grid on the torus.

    For m > 2N the average equals expectation_diag(x) exactly, because the
    grading frequencies are bounded by the word length.
    """
    if m < 1:
        raise ValueError("grid order must be >= 1")
    space = x.space
    nv = len(space.graph.vertices)
    if m**nv > GAUGE_GRID_CAP:
        raise ResourceLimitError(f"gauge grid of size {m**nv} exceeds cap {GAUGE_GRID_CAP}")
    counts = np.zeros((space.dim, nv), dtype=np.int64)
    vpos = {v: k for k, v in enumerate(space.graph.vertices)}
    for i, fi in enumerate(space.basis):
        for letter in fi.word:
            counts[i, vpos[letter]] += 1
    rows, cols, data = _mat.coo_parts(x.mat)
    acc = np.zeros(len(data), dtype=complex)
    for assignment in itertools.product(range(m), repeat=nv):
        freq = counts @ np.asarray(assignment)
        d = np.exp(2j * np.pi * freq / m)
        acc += data * d[rows] * np.conj(d[cols])
    acc /= float(m**nv)
    return OperatorMatrix(space, _mat.from_coo(rows, cols, acc, space.dim), x.guard, x.up, x.down)


# -- subgraph expectation ------------------------------------------------------


def _check_induced(graph: SimplicialGraph, sub: SimplicialGraph):
    if not set(sub.vertices) <= set(graph.vertices):
        raise ValueError("subgraph vertices must come from the host graph")
    if graph.induced(sub.vertices) != sub:
        raise ValueError("subgraph is not induced")


def _head_tail_plan(space: TruncatedFock, sub: SimplicialGraph):
    """Factor each basis word as (head in the subgroup) * (minimal coset tail)."""
    key = ("headtail", sub)
    got = space._plans.get(key)
    if got is not None:
        return got
    group = space.group
    subset = set(sub.vertices)
    sub_space = space.subspace(sub)
    plan = []
    for fi in space.basis:
        rem = list(zip(fi.word, fi.slots))
        head: list[tuple[VertexId, int]] = []
        while True:
            word_now = tuple(p[0] for p in rem)
            first = [s for s in group.first_letters_tuple(word_now) if s in subset]
            if not first:
                break
            s = min(first)
            r = _liftable_front(group, word_now, s)
            head.append(rem.pop(r))
        hl = tuple(p[0] for p in head)
        hs = tuple(p[1] for p in head)
        canon, perm = group.sort_with_perm(hl)
        head_idx = sub_space.index_of(canon, tuple(hs[p] for p in perm))
        tail = (tuple(p[0] for p in rem), tuple(p[1] for p in rem))
        plan.append((head_idx, tail))
    space._plans[key] = plan
    return plan


def expectation_subgraph(space: TruncatedFock, sub: SimplicialGraph, x: OperatorMatrix) -> OperatorMatrix:
    """Conditional expectation onto the operators of an induced subgraph:
    compress by the subgraph Fock inclusion, then act on the head legs only."""
    if x.space is not space:
        raise ValueError("operator lives on a different space")
    _check_induced(space.graph, sub)
    sub_space = space.subspace(sub)
    group = space.group
    emb = np.array(
        [space.index_of(fi.word, fi.slots) for fi in sub_space.basis], dtype=int
    )
    dense_x = None
    if _mat.is_sparse(x.mat):
        y0 = x.mat[emb][:, emb].tocoo()
        y_rows, y_cols, y_data = y0.row, y0.col, y0.data
    else:
        dense_x = x.mat
        y = dense_x[np.ix_(emb, emb)]
        y_rows, y_cols = np.nonzero(y)
        y_data = y[y_rows, y_cols]

    plan = _head_tail_plan(space, sub)
    by_head: dict[int, list[tuple[int, tuple]]] = {}
    for j, (head_idx, tail) in enumerate(plan):
        by_head.setdefault(head_idx, []).append((j, tail))

    merge_cache: dict[tuple[int, tuple], Optional[int]] = {}

    def merge(i0: int, tail) -> Optional[int]:
        key = (i0, tail)
        got = merge_cache.get(key, "missing")
        if got != "missing":
            return got
        hfi = sub_space.basis[i0]
        letters = hfi.word + tail[0]
        slots = hfi.slots + tail[1]
        if len(letters) > space.n:
            target = None
        else:
            canon, perm = group.sort_with_perm(letters)
            target = space.index_of(canon, tuple(slots[p] for p in perm))
        merge_cache[key] = target
        return target

    rows: list[int] = []
    cols: list[int] = []
    data: list[complex] = []
    for r0, c0, val in zip(y_rows, y_cols, y_data):
        for j, tail in by_head.get(int(c0), ()):
            target = merge(int(r0), tail)
            if target is not None:
                rows.append(target)
                cols.append(j)
                data.append(val)
    guard = min(x.guard, space.n - x.up)
    return OperatorMatrix(space, _mat.from_coo(rows, cols, data, space.dim), guard, x.up, x.down)


# -- functionals ---------------------------------------------------------------


def vacuum_eval(x: OperatorMatrix) -> complex:
    """The vacuum state <Omega, x Omega>."""
    return x.entry(0, 0)


def export_coo(x: OperatorMatrix, path: str, tol: float = 0.0):
    """Write the matrix as coordinate-list text: `row col re im` per line,
    preceded by a `dim guard up down` header line."""
    rows, cols, data = _mat.coo_parts(x.mat)
    with open(path, "w") as fh:
        fh.write(f"# dim={x.space.dim} guard={x.guard} up={x.up} down={x.down}\n")
        for r, c, v in zip(rows, cols, data):
            if abs(v) > tol:
                fh.write(f"{int(r)} {int(c)} {float(v.real)!r} {float(v.imag)!r}\n")


def import_coo(space: TruncatedFock, path: str) -> OperatorMatrix:
    rows: list[int] = []
    cols: list[int] = []
    data: list[complex] = []
    guard, up, down = space.n, 0, 0
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                fields = dict(kv.split("=") for kv in line[1:].split())
                if int(fields.get("dim", space.dim)) != space.dim:
                    raise ValueError("dimension mismatch")
                guard = int(fields.get("guard", space.n))
                up = int(fields.get("up", 0))
                down = int(fields.get("down", 0))
                continue
            r, c, re, im = line.split()
            rows.append(int(r))
            cols.append(int(c))
            data.append(complex(float(re), float(im)))
    return OperatorMatrix(space, _mat.from_coo(rows, cols, data, space.dim), guard, up, down)


def tail_profile(x: OperatorMatrix) -> list[float]:
    """Norms of E(x* x) restricted to word lengths in (k, N] for k = 0..N-1."""
    space = x.space
    e = expectation_diag(x.adjoint() @ x)
    block_norms: dict[Letters, float] = {}
    for word, off in space._offsets.items():
        count = 1
        for vv in word:
            count *= space.reps[vv].dim - 1
        idx = np.arange(off, off + count)
        if _mat.is_sparse(e.mat):
            block = e.mat[idx][:, idx].toarray()
        else:
            block = e.mat[np.ix_(idx, idx)]
        block_norms[word] = float(np.linalg.norm(block, 2)) if block.size else 0.0
    profile = []
    for k in range(space.n):
        vals = [nm for w, nm in block_norms.items() if len(w) > k]
        profile.append(max(vals, default=0.0))
    return profile


# -- tensor split ---------------------------------------------------------------


@dataclass
class TensorSplitReport:
    max_deviation: float
    checks: list[tuple[str, float]]
    pair_count: int


def tensor_split_check(
    graph: SimplicialGraph,
    part1: Iterable[VertexId],
    part2: Iterable[VertexId],
    reps: Mapping[VertexId, GnsRep],
    n: int,
    elements: Optional[Mapping[VertexId, Sequence[Element]]] = None,
) -> TensorSplitReport:
    """Verify the join-decomposition unitary: the depth-n Fock basis is a
    permutation of pairs of factor bases with total length <= n, and the
    generators act in Kronecker form through it."""
    p1, p2 = tuple(part1), tuple(part2)
    if set(p1) | set(p2) != set(graph.vertices) or set(p1) & set(p2):
        raise ValueError("parts must partition the vertex set")
    for u in p1:
        for v in p2:
            if not graph.adjacent(u, v):
                raise ValueError(f"({u},{v}) missing: not a join decomposition")
    g1, g2 = graph.induced(p1), graph.induced(p2)
    space = TruncatedFock(graph, reps, n)
    f1 = space.subspace(g1)
    f2 = space.subspace(g2)
    group = space.group

    pair_of: list[tuple[int, int]] = []
    pair_index: dict[tuple[int, int], int] = {}
    s1, s2 = set(p1), set(p2)
    for j, fi in enumerate(space.basis):
        padded = list(zip(fi.word, fi.slots))
        seq1 = [(l, s) for l, s in padded if l in s1]
        seq2 = [(l, s) for l, s in padded if l in s2]

        def canon_index(seq, fsub):
            letters = tuple(p[0] for p in seq)
            slots = tuple(p[1] for p in seq)
            cl, perm = group.sort_with_perm(letters)
            return fsub.index_of(cl, tuple(slots[p] for p in perm))

        i1, i2 = canon_index(seq1, f1), canon_index(seq2, f2)
        pair_of.append((i1, i2))
        pair_index[(i1, i2)] = j
    expected_pairs = sum(
        1
        for i1 in range(f1.dim)
        for i2 in range(f2.dim)
        if f1.lengths[i1] + f2.lengths[i2] <= n
    )
    if len(pair_index) != space.dim or expected_pairs != space.dim:
        raise ValueError("basis does not biject onto restricted pairs")

    def kron_expected(a: OperatorMatrix, on_first: bool) -> OperatorMatrix:
        rows, cols, data = _mat.coo_parts(a.mat)
        out_r: list[int] = []
        out_c: list[int] = []
        out_d: list[complex] = []
        for r, c, val in zip(rows, cols, data):
            if on_first:
                for i2 in range(f2.dim):
                    src = pair_index.get((int(c), i2))
                    dst = pair_index.get((int(r), i2))
                    if src is not None and dst is not None:
                        out_r.append(dst)
                        out_c.append(src)
                        out_d.append(val)
            else:
                for i1 in range(f1.dim):
                    src = pair_index.get((i1, int(c)))
                    dst = pair_index.get((i1, int(r)))
                    if src is not None and dst is not None:
                        out_r.append(dst)
                        out_c.append(src)
                        out_d.append(val)
        return OperatorMatrix(space, _mat.from_coo(out_r, out_c, out_d, space.dim), a.guard, a.up, a.down)

    checks: list[tuple[str, float]] = []
    for v in graph.vertices:
        on_first = v in s1
        fsub = f1 if on_first else f2
        elems = list(elements[v]) if elements and v in elements else []
        if not elems:
            rep = reps[v]
            one = rep.algebra.one()
            elems = [one] + [b - one * (1.0 / rep.algebra.dim) for b in rep.algebra.basis()]
        for k, a in enumerate(elems):
            big = lambda_op(space, v, a)
            expected = kron_expected(lambda_op(fsub, v, a), on_first)
            checks.append((f"lambda[{v}][{k}]", guarded_deviation(big, expected)))
        bigq = q_projection(space, (v,))
        expq = kron_expected(q_projection(fsub, (v,)), on_first)
        checks.append((f"qproj[{v}]", guarded_deviation(bigq, expq)))
    worst = max(d for _, d in checks)
    return TensorSplitReport(worst, checks, space.dim)
