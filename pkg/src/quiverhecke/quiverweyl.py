"""Signed-permutation Weyl groups, residue sequences, orbits and quivers.

The hyperoctahedral group W(B_n) acts on n-tuples of nonzero scalars
("residue sequences") by inverting the first entry (generator 0) and by
swapping adjacent entries (generators 1..n-1); the symmetric group case
drops generator 0.  This module provides:

  * group elements as signed permutations, with a reduced-word dictionary
    whose words are lexicographically smallest (and prefix-closed),
  * enumeration of all reduced words and paths between them through
    commutation/braid moves (used for normal-form conversions),
  * orbits of residue sequences and the bijection with symmetric
    dimension vectors,
  * the arrow classes of the parameter quiver and the classes of a vertex
    relative to ±p^{±1},
  * the weight lattice with its reflection action.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from .scalars import FieldCtx, Params


# ---------------------------------------------------------------------------
# Weyl groups
# ---------------------------------------------------------------------------

class WeylGroup:
    """W(B_n) (kind 'B', generators 0..n-1) or S_n (kind 'A', 1..n-1).

    Elements are tuples of signed images: w maps the k-th basis vector to
    sign * basis(|w[k-1]|).  Kind 'A' elements never carry signs.
    """

    def __init__(self, kind: str, n: int):
        if kind not in ("A", "B"):
            raise ValueError("kind must be 'A' or 'B'")
        if n < 1:
            raise ValueError("n must be >= 1")
        self.kind = kind
        self.n = n
        self.gens = tuple(range(0, n) if kind == "B" else range(1, n))
        self.identity = tuple(range(1, n + 1))
        self._dict_word = {self.identity: ()}
        self._build_dictionary()
        self.elements = tuple(self._dict_word)

    def mul_gen(self, w: tuple, a: int) -> tuple:
        """w · r_a (apply r_a first, then w)."""
        img = list(w)
        if a == 0:
            img[0] = -img[0]
        else:
            img[a - 1], img[a] = img[a], img[a - 1]
        return tuple(img)

    def _build_dictionary(self):
        # Lexicographic BFS: elements are discovered in order of
        # (length, word), so the stored word is the lex-smallest reduced
        # word and every prefix of a stored word is itself stored.
        queue = deque([self.identity])
        while queue:
            w = queue.popleft()
            base = self._dict_word[w]
            for a in self.gens:
                u = self.mul_gen(w, a)
                if u not in self._dict_word:
                    self._dict_word[u] = base + (a,)
                    queue.append(u)

    def word(self, w: tuple) -> tuple:
        return self._dict_word[w]

    def length(self, w: tuple) -> int:
        return len(self._dict_word[w])

    def from_word(self, word) -> tuple:
        w = self.identity
        for a in word:
            w = self.mul_gen(w, a)
        return w

    def longest_length(self) -> int:
        return max(len(v) for v in self._dict_word.values())

    def all_reduced_words(self, w: tuple) -> tuple:
        return self._all_reduced(w)

    @lru_cache(maxsize=None)
    def _all_reduced(self, w: tuple) -> tuple:
        if w == self.identity:
            return ((),)
        out = []
        for a in self.gens:
            u = self.mul_gen(w, a)
            if self.length(u) < self.length(w):
                for word in self._all_reduced(u):
                    out.append(word + (a,))
        return tuple(out)

    # -- braid moves ----------------------------------------------------
    def _moves(self, word: tuple):
        """Yield (new_word, move) for single commutation/braid rewrites.

        move is None for a commutation, else (pos, old_seg, new_seg).
        """
        for s in range(len(word) - 1):
            a, b = word[s], word[s + 1]
            if abs(a - b) >= 2:
                yield word[:s] + (b, a) + word[s + 2:], None
        for s in range(len(word) - 2):
            a, b, c = word[s:s + 3]
            if a == c and abs(a - b) == 1 and min(a, b) >= 1:
                new = (b, a, b)
                yield word[:s] + new + word[s + 3:], (s, (a, b, c), new)
        for s in range(len(word) - 3):
            seg = word[s:s + 4]
            if seg in ((0, 1, 0, 1), (1, 0, 1, 0)):
                new = tuple(reversed(seg))
                yield word[:s] + new + word[s + 4:], (s, seg, new)

    @lru_cache(maxsize=None)
    def braid_path(self, word_from: tuple, word_to: tuple) -> tuple:
        """A sequence of words word_from -> ... -> word_to with the moves.

        Returns a tuple of (word, move) pairs describing each step taken
        from the previous word; both inputs must be reduced words of the
        same element (Matsumoto: such a path always exists).
        """
        if word_from == word_to:
            return ()
        prev = {word_from: None}
        queue = deque([word_from])
        while queue:
            cur = queue.popleft()
            for new, move in self._moves(cur):
                if new in prev:
                    continue
                prev[new] = (cur, move)
                if new == word_to:
                    path = []
                    node = new
                    while prev[node] is not None:
                        parent, mv = prev[node]
                        path.append((node, mv))
                        node = parent
                    return tuple(reversed(path))
                queue.append(new)
        raise ValueError("no braid path; inputs are not words of one element")

    # -- actions ---------------------------------------------------------
    def act_seq(self, w: tuple, seq: tuple, field: FieldCtx) -> tuple:
        """Action of w on a residue sequence."""
        out = [None] * self.n
        for k, img in enumerate(w):
            j = abs(img) - 1
            out[j] = seq[k] if img > 0 else field.inv(seq[k])
        return tuple(out)

    def gen_act_seq(self, a: int, seq: tuple, field: FieldCtx) -> tuple:
        if a == 0:
            return (field.inv(seq[0]),) + seq[1:]
        s = list(seq)
        s[a - 1], s[a] = s[a], s[a - 1]
        return tuple(s)

    def word_act_seq(self, word, seq: tuple, field: FieldCtx) -> tuple:
        for a in reversed(word):
            seq = self.gen_act_seq(a, seq, field)
        return seq


# ---------------------------------------------------------------------------
# Weight lattice
# ---------------------------------------------------------------------------

def alpha(a: int, n: int) -> tuple:
    """Simple root as a lattice vector: 2e_1 for a=0, e_{a+1}-e_a else."""
    v = [0] * n
    if a == 0:
        v[0] = 2
    else:
        v[a - 1] = -1
        v[a] = 1
    return tuple(v)


def gen_act_lattice(a: int, x: tuple) -> tuple:
    if a == 0:
        return (-x[0],) + x[1:]
    y = list(x)
    y[a - 1], y[a] = y[a], y[a - 1]
    return tuple(y)


def word_act_lattice(word, x: tuple) -> tuple:
    for a in reversed(word):
        x = gen_act_lattice(a, x)
    return x


# ---------------------------------------------------------------------------
# Orbits and dimension vectors
# ---------------------------------------------------------------------------

def enumerate_orbit(field: FieldCtx, seq, kind: str = "B") -> tuple:
    """The W-orbit of a residue sequence, sorted; entries canonicalized."""
    seq = tuple(field.of(x) for x in seq)
    n = len(seq)
    seen = {seq}
    queue = deque([seq])
    gens = range(0, n) if kind == "B" else range(1, n)
    while queue:
        cur = queue.popleft()
        for a in gens:
            if a == 0:
                new = (field.inv(cur[0]),) + cur[1:]
            else:
                new = cur[:a - 1] + (cur[a], cur[a - 1]) + cur[a + 1:]
            if new not in seen:
                seen.add(new)
                queue.append(new)
    return tuple(sorted(seen))


def orbit_rep(orbit: tuple) -> tuple:
    """Canonical representative: the lexicographically smallest member."""
    return orbit[0]


def dimension_vector(field: FieldCtx, seq) -> dict:
    """The symmetric dimension vector of the orbit through seq.

    d(i) counts the entries i_k with i_k in {i, i^{-1}}; it satisfies
    d(i) = d(i^{-1}) and has height n (entries with i² = 1 counted once,
    the others shared between i and i^{-1}).
    """
    seq = tuple(field.of(x) for x in seq)
    d: dict = {}
    for v in seq:
        vi = field.inv(v)
        d[v] = d.get(v, 0) + 1
        if vi != v:
            d[vi] = d.get(vi, 0) + 1
    return d


def dimvec_height(field: FieldCtx, d: dict):
    total = 0
    for v, m in d.items():
        if field.inv(v) == v:
            total += 2 * m
        else:
            total += m
    if total % 2:
        raise ValueError("dimension vector has non-integral height")
    return total // 2


def orbit_of_dimvec(field: FieldCtx, d: dict, kind: str = "B") -> tuple:
    """All sequences whose dimension vector equals d (the inverse map)."""
    n = dimvec_height(field, d)
    support = sorted(d)
    out = []

    def rec(prefix):
        if len(prefix) == n:
            if dimension_vector(field, tuple(prefix)) == d:
                out.append(tuple(prefix))
            return
        for v in support:
            rec(prefix + [v])

    rec([])
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Quiver data
# ---------------------------------------------------------------------------

def vertex_window(field: FieldCtx, params: Params, lambdas, radius: int) -> tuple:
    """The vertices λ_a^{±1} q^{2l} for |l| <= radius, sorted, deduplicated."""
    q2 = field.mul(params.q, params.q)
    verts = set()
    for lam in lambdas:
        lam = field.of(lam)
        for base in (lam, field.inv(lam)):
            v = field.mul(base, field.pow(q2, -radius))
            for _ in range(2 * radius + 1):
                verts.add(v)
                v = field.mul(v, q2)
    return tuple(sorted(verts))


def check_disjoint_lines(field: FieldCtx, params: Params, lambdas, cap: int = 64):
    """Verify I_{λ_a} ∩ I_{λ_b} = ∅ for a ≠ b; raise on violation."""
    from .scalars import _exp_bound  # λ_b ∈ I_{λ_a} iff λ_b/λ_a^{±1} ∈ q^{2Z}
    q2 = field.mul(params.q, params.q)
    lams = [field.of(x) for x in lambdas]
    for a in range(len(lams)):
        for b in range(a + 1, len(lams)):
            for base in (lams[a], field.inv(lams[a])):
                ratio = field.div(lams[b], base)
                bound = _exp_bound(field, q2, ratio, cap)
                if any(field.pow(q2, t) == ratio
                       for t in range(-bound - 1, bound + 2)):
                    raise ValueError(
                        "parameter lines of λ_%d and λ_%d intersect" % (a + 1, b + 1))


def quiver_window(field: FieldCtx, params: Params, lambdas, radius: int):
    """(vertices, arrows) with arrows i -> q²i inside the window."""
    verts = vertex_window(field, params, lambdas, radius)
    vset = set(verts)
    q2 = field.mul(params.q, params.q)
    arrows = tuple((v, field.mul(q2, v)) for v in verts
                   if field.mul(q2, v) in vset)
    return verts, arrows


def arrow_class(field: FieldCtx, params: Params, i, j) -> str:
    """Relative position of two distinct vertices: perp/to/from/both.

    'to' means j = q²i (an arrow from i to j), 'from' means j = q^{-2}i,
    'both' the coincidence q² = -1 and j = -i, 'perp' no arrow.  Raises
    when i = j (the classes are only defined for distinct vertices).
    """
    i, j = field.of(i), field.of(j)
    if i == j:
        raise ValueError("arrow_class requires i != j")
    q2 = field.mul(params.q, params.q)
    fwd = j == field.mul(q2, i)
    bwd = j == field.div(i, q2)
    if fwd and bwd:
        return "both"
    if fwd:
        return "to"
    if bwd:
        return "from"
    return "perp"


def p_class(field: FieldCtx, params: Params, i) -> str:
    """Position of a vertex relative to {±p, ±p^{-1}} and the involution.

    'fixed' when i = i^{-1}; otherwise pto/pfrom/pboth/pperp according to
    membership of i in {±p} and {±p^{-1}} (pboth forces p² = -1).
    """
    i = field.of(i)
    if field.inv(i) == i:
        return "fixed"
    pm_p = (i == params.p or i == field.neg(params.p))
    pinv = field.inv(params.p)
    pm_pinv = (i == pinv or i == field.neg(pinv))
    if pm_p and pm_pinv:
        return "pboth"
    if pm_p:
        return "pto"
    if pm_pinv:
        return "pfrom"
    return "pperp"
