"""Exact normal forms for cyclotomic quotients of affine Hecke algebras.

Elements are finite sums of terms X^x g_w with w in the finite reflection
group (type A on generators 1..n-1, type B on 0..n-1) and x a nonnegative
exponent vector capped per variable.  The caps come from per-variable
annihilator polynomials: the cyclotomic polynomial for X_1 and, for each
further variable, the eigenvalue-propagation recursion

    A_{k+1}(X) = prod_{mu root of A_k, mult s} (A_k(X)(X-q^2 mu)(X-q^{-2} mu))^s,

each A_k(X_k) lying in the two-sided ideal of the quotient.  Rewriting
X_k^{deg A_k} and X_k^{-1} through A_k therefore keeps every step an
identity of the quotient, and the span/ideal closure (same scheme as in
`engine`) yields the exact quotient algebra, its basis, and right
multiplication matrices.
"""

from __future__ import annotations

from .scalars import FieldCtx, Params
from .quiverweyl import WeylGroup, gen_act_lattice
from .polyengine import geom_ratio_terms, alpha_exp, qa_value
from .engine import elem_add_into, elem_scale, Echelon, DimensionCapExceeded


# ---------------------------------------------------------------------------
# univariate polynomials as coefficient lists (index = degree)
# ---------------------------------------------------------------------------

def poly_from_roots(field: FieldCtx, roots: dict) -> list:
    out = [field.one]
    for r, s in roots.items():
        for _ in range(s):
            nxt = [field.zero] * (len(out) + 1)
            for d, c in enumerate(out):
                nxt[d + 1] = field.add(nxt[d + 1], c)
                nxt[d] = field.sub(nxt[d], field.mul(c, r))
            out = nxt
    return out


def annihilator_roots(field: FieldCtx, params: Params, m: dict, n: int):
    """Root-multiplicity dicts of the per-variable annihilators A_1..A_n."""
    q2 = field.mul(params.q, params.q)
    q2i = field.inv(q2)
    cur = {field.of(i): int(s) for i, s in m.items() if s > 0}
    out = [cur]
    for _ in range(n - 1):
        deg = sum(cur.values())
        nxt = {r: deg * s for r, s in cur.items()}
        for mu, s in cur.items():
            for shift in (field.mul(q2, mu), field.mul(q2i, mu)):
                nxt[shift] = nxt.get(shift, 0) + s
        out.append(nxt)
        cur = nxt
    return out


class HeckeQuotient:
    """Normal-form arithmetic in a cyclotomic affine Hecke quotient."""

    def __init__(self, field: FieldCtx, params: Params, kind: str, n: int,
                 m: dict):
        self.field = field
        self.params = params
        self.kind = kind          # 'A' or 'B'
        self.n = n
        self.m = {field.of(i): int(s) for i, s in m.items() if s > 0}
        self.weyl = WeylGroup(kind, n)
        self.ann_roots = annihilator_roots(field, params, self.m, n)
        self.ann = [poly_from_roots(field, r) for r in self.ann_roots]
        self.caps = [len(a) - 1 for a in self.ann]
        if 0 in self.caps:
            raise ValueError("empty cyclotomic polynomial")
        # X_k^{cap_k} = sum_{j<cap} high[k][j] X^j, X_k^{-1} likewise
        f = field
        self.rule_high = []
        self.rule_neg = []
        for a in self.ann:
            lead = f.inv(a[-1])
            self.rule_high.append([f.neg(f.mul(c, lead)) for c in a[:-1]])
            c0 = f.inv(a[0])
            self.rule_neg.append([f.neg(f.mul(c, c0)) for c in a[1:]])
        self._push_cache: dict = {}

    def qa(self, a: int):
        return qa_value(self.params, a)

    # -- exponent reduction -------------------------------------------------
    def reduce_x(self, mono: dict) -> dict:
        """Reduce {exponent vector: scalar} into the capped box."""
        f = self.field
        out: dict = {}
        stack = list(mono.items())
        while stack:
            x, c = stack.pop()
            if f.is_zero(c):
                continue
            for k in range(self.n):
                if x[k] < 0:
                    rule, off = self.rule_neg[k], 1
                elif x[k] >= self.caps[k]:
                    rule, off = self.rule_high[k], -self.caps[k]
                else:
                    continue
                for j, rc in enumerate(rule):
                    if f.is_zero(rc):
                        continue
                    y = list(x)
                    y[k] += off + j
                    stack.append((tuple(y), f.mul(c, rc)))
                break
            else:
                s = f.add(out.get(x, f.zero), c)
                if f.is_zero(s):
                    out.pop(x, None)
                else:
                    out[x] = s
        return out

    # -- core products ------------------------------------------------------
    def push_word_x(self, w: tuple, vec: tuple) -> dict:
        """g_w X^vec as {(x, w'): scalar} with x still unreduced."""
        key = (w, vec)
        if key in self._push_cache:
            return self._push_cache[key]
        f = self.field
        if w == self.weyl.identity:
            res = {(vec, w): f.one}
        else:
            word = self.weyl.word(w)
            a = word[-1]
            w1 = self.weyl.from_word(word[:-1])
            res: dict = {}
            # g_a X^vec = X^{r_a vec} g_a + (q_a - q_a^{-1}) ratio terms
            for (x1, u), c in self.push_word_x(
                    w1, gen_act_lattice(a, vec)).items():
                for (w2, c2) in self.word_mul_gen(u, a):
                    key2 = (x1, w2)
                    s = f.add(res.get(key2, f.zero), f.mul(c, c2))
                    if f.is_zero(s):
                        res.pop(key2, None)
                    else:
                        res[key2] = s
            dq = f.sub(self.qa(a), f.inv(self.qa(a)))
            if not f.is_zero(dq):
                for z, sgn in geom_ratio_terms(vec, a, self.n):
                    cc = dq if sgn > 0 else f.neg(dq)
                    for (x1, u), c in self.push_word_x(w1, z).items():
                        key2 = (x1, u)
                        s = f.add(res.get(key2, f.zero), f.mul(c, cc))
                        if f.is_zero(s):
                            res.pop(key2, None)
                        else:
                            res[key2] = s
        self._push_cache[key] = res
        return res

    def word_mul_gen(self, w: tuple, a: int):
        """g_w g_a as [(w', scalar)] (exact: no corrections on braids)."""
        f = self.field
        u = self.weyl.mul_gen(w, a)
        if self.weyl.length(u) > self.weyl.length(w):
            return [(u, f.one)]
        dq = f.sub(self.qa(a), f.inv(self.qa(a)))
        return [(w, dq), (u, f.one)]

    # -- element interface ---------------------------------------------------
    def unit(self) -> dict:
        return {((0,) * self.n, self.weyl.identity): self.field.one}

    def rmul_gen(self, elem: dict, a: int) -> dict:
        f = self.field
        out: dict = {}
        for (x, w), c in elem.items():
            for (w2, c2) in self.word_mul_gen(w, a):
                elem_add_into(f, out, {(x, w2): f.mul(c, c2)})
        return out

    def rmul_x(self, elem: dict, vec: tuple) -> dict:
        f = self.field
        out: dict = {}
        for (x, w), c in elem.items():
            for (x1, w2), c2 in self.push_word_x(w, vec).items():
                tot = tuple(e1 + e2 for e1, e2 in zip(x, x1))
                for xr, cr in self.reduce_x({tot: f.mul(c, c2)}).items():
                    elem_add_into(f, out, {(xr, w2): cr})
        return out

    def rmul_token(self, elem: dict, token) -> dict:
        if token[0] == "g":
            return self.rmul_gen(elem, token[1])
        if token[0] == "x":
            return self.rmul_x(elem, token[1])
        raise ValueError("unknown token %r" % (token,))

    def rmul_expr(self, elem: dict, expr) -> dict:
        f = self.field
        total: dict = {}
        for scalar, tokens in expr:
            cur = elem
            for token in tokens:
                cur = self.rmul_token(cur, token)
                if not cur:
                    break
            elem_add_into(f, total, cur, f.of(scalar))
        return total

    def eval_expr(self, expr) -> dict:
        return self.rmul_expr(self.unit(), expr)

    # -- defining relators ----------------------------------------------------
    def relators(self):
        n = self.n
        f = self.field
        ex = []

        def ev(k, e=1):
            return tuple(e if t == k - 1 else 0 for t in range(n))

        for a in self.weyl.gens:
            dq = f.sub(self.qa(a), f.inv(self.qa(a)))
            ex.append(("quad", [(1, (("g", a), ("g", a))),
                                (f.neg(dq), (("g", a),)),
                                (-1, ())]))
        for a in self.weyl.gens:
            for b in self.weyl.gens:
                if b - a > 1:
                    ex.append(("comm", [(1, (("g", a), ("g", b))),
                                        (-1, (("g", b), ("g", a)))]))
        for a in self.weyl.gens:
            for b in self.weyl.gens:
                if b == a + 1 and a >= 1:
                    ex.append(("braid3", [
                        (1, (("g", a), ("g", b), ("g", a))),
                        (-1, (("g", b), ("g", a), ("g", b)))]))
        if self.kind == "B" and n >= 2:
            ex.append(("braid4", [
                (1, (("g", 0), ("g", 1), ("g", 0), ("g", 1))),
                (-1, (("g", 1), ("g", 0), ("g", 1), ("g", 0)))]))
        # crossing/variable exchange: g_a X^x g_a = X^{r_a x} for x with
        # r_a x = x - alpha_a (the Lusztig-type commutation for the rest
        # is exercised through push_word_x in every closure product)
        if self.kind == "B":
            ex.append(("exch0", [(1, (("g", 0), ("x", ev(1, -1)),
                                      ("g", 0))),
                                 (-1, (("x", ev(1)),))]))
        for a in self.weyl.gens:
            if a >= 1:
                ex.append(("exch", [(1, (("g", a), ("x", ev(a)),
                                         ("g", a))),
                                    (-1, (("x", ev(a + 1)),))]))
            for k in range(1, n + 1):
                for s in (1, -1):
                    x = ev(k, s)
                    rx = gen_act_lattice(a, x)
                    dq = f.sub(self.qa(a), f.inv(self.qa(a)))
                    expr = [(1, (("g", a), ("x", x))),
                            (-1, (("x", rx), ("g", a)))]
                    expr += [(f.neg(f.mul(dq, f.of(sgn))), (("x", z),))
                             for z, sgn in geom_ratio_terms(x, a, n)]
                    ex.append(("luszt", expr))
        # cyclotomic relator and the propagated annihilators
        for k in range(1, n + 1):
            expr = []
            for d, c in enumerate(self.ann[k - 1]):
                if not f.is_zero(c):
                    expr.append((c, (("x", ev(k, d)),)))
            ex.append(("cyclo" if k == 1 else "annih", expr))
        return ex

    # -- closure ---------------------------------------------------------------
    def closure(self, cap_dim: int = 20000):
        f = self.field
        tokens = [("g", a) for a in self.weyl.gens]
        tokens += [("x", tuple(1 if t == k else 0 for t in range(self.n)))
                   for k in range(self.n)]
        span = Echelon(f, key=_hecke_key)
        queue = []
        v = span.add(self.unit())
        if v is not None:
            queue.append(v)
        while queue:
            if span.rank > cap_dim:
                raise DimensionCapExceeded("span cap exceeded")
            vec = queue.pop()
            for t in tokens:
                nv = span.add(self.rmul_token(vec, t))
                if nv is not None:
                    queue.append(nv)
        ideal = Echelon(f, key=_hecke_key)
        iqueue = []
        rels = self.relators()
        for row in list(span.rows.values()):
            for _, expr in rels:
                nv = ideal.add(self.rmul_expr(row, expr))
                if nv is not None:
                    iqueue.append(nv)
        while iqueue:
            vec = iqueue.pop()
            for t in tokens:
                nv = ideal.add(self.rmul_token(vec, t))
                if nv is not None:
                    iqueue.append(nv)
        return HeckeClosure(self, span, ideal)


def _hecke_key(coord):
    x, w = coord
    return (len(w), w, x)


class HeckeClosure:
    def __init__(self, alg: HeckeQuotient, span: Echelon, ideal: Echelon):
        self.alg = alg
        self.span = span
        self.ideal = ideal
        self.dim = span.rank - ideal.rank
        self._basis = None
        self._matrices: dict = {}

    def basis(self):
        if self._basis is None:
            ech = Echelon(self.alg.field, key=_hecke_key)
            out = []
            for pivot in sorted(self.span.rows, key=_hecke_key):
                v = ech.add(self.ideal.normal_form(self.span.rows[pivot]))
                if v is not None:
                    out.append(v)
            self._basis = out
        return self._basis

    def coords(self, elem: dict):
        """Coordinates of an element in the quotient basis."""
        f = self.alg.field
        vec = self.ideal.normal_form(elem)
        basis = self.basis()
        piv = {min(b, key=_hecke_key): (j, b) for j, b in enumerate(basis)}
        out = [f.zero] * len(basis)
        vec = dict(vec)
        while vec:
            p = min(vec, key=_hecke_key)
            if p not in piv:
                raise ArithmeticError("element not in quotient span")
            j, b = piv[p]
            c = f.mul(vec[p], f.inv(b[p]))
            out[j] = f.add(out[j], c)
            elem_add_into(f, vec, b, f.neg(c))
        return out

    def rmul_matrix(self, token):
        """Right-multiplication matrix on the quotient basis (columns are
        images of basis vectors)."""
        if token in self._matrices:
            return self._matrices[token]
        cols = [self.coords(self.alg.rmul_token(b, token))
                for b in self.basis()]
        self._matrices[token] = cols
        return cols

    def elem_matrix(self, elem: dict):
        cols = [self.coords(rmul_elem_hecke(self.alg, b, elem))
                for b in self.basis()]
        return cols


def rmul_elem_hecke(alg: HeckeQuotient, elem: dict, other: dict) -> dict:
    f = alg.field
    total: dict = {}
    for (x, w), c in other.items():
        cur = elem
        if any(x):
            cur = alg.rmul_x(cur, x)
        for a in alg.weyl.word(w):
            cur = alg.rmul_gen(cur, a)
        elem_add_into(f, total, cur, c)
    return total


# ---------------------------------------------------------------------------
# matrix utilities over the exact field (dense lists of lists, columns)
# ---------------------------------------------------------------------------

def mat_mul(field, A, B):
    """Columns-of-columns product: (A·B)(v) = A(B(v))."""
    n = len(A)
    out = []
    for col in B:
        acc = [field.zero] * len(A[0]) if A else []
        for j, c in enumerate(col):
            if field.is_zero(c):
                continue
            for i, a in enumerate(A[j]):
                acc[i] = field.add(acc[i], field.mul(a, c))
        out.append(acc)
    return out


def mat_add(field, A, B, scalar=None):
    out = []
    for ca, cb in zip(A, B):
        col = []
        for a, b in zip(ca, cb):
            col.append(field.add(a, field.mul(b, scalar)
                                 if scalar is not None else b))
        out.append(col)
    return out


def mat_scale(field, A, s):
    return [[field.mul(a, s) for a in col] for col in A]


def mat_identity(field, n):
    return [[field.one if i == j else field.zero for i in range(n)]
            for j in range(n)]


def mat_zero(field, n):
    return [[field.zero] * n for _ in range(n)]


def mat_is_zero(field, A):
    return all(field.is_zero(a) for col in A for a in col)


def mat_eq(field, A, B):
    return all(field.eq(a, b) for ca, cb in zip(A, B)
               for a, b in zip(ca, cb))


def mat_rank(field, A):
    rows = [list(col) for col in A]  # rank is transpose-invariant
    rank = 0
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not field.is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(v, inv) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][c]):
                coef = rows[i][c]
                rows[i] = [field.sub(v, field.mul(coef, pv))
                           for v, pv in zip(rows[i], rows[r])]
        r += 1
        rank += 1
    return rank


def mat_poly_eval(field, coeffs, A):
    """Evaluate a univariate polynomial (list, index = degree) at a matrix."""
    n = len(A)
    out = mat_zero(field, n)
    P = mat_identity(field, n)
    for d, c in enumerate(coeffs):
        if d:
            P = mat_mul(field, P, A)
        if not field.is_zero(c):
            out = mat_add(field, out, P, c)
    return out


def min_poly_roots(field, A, candidates):
    """Multiplicity of each candidate root in the minimal polynomial of A,
    assuming the minimal polynomial splits over the candidate set."""
    n = len(A)
    out = {}
    for mu in candidates:
        shifted = mat_add(field, A, mat_identity(field, n), field.neg(mu))
        s = 0
        cur = mat_identity(field, n)
        while True:
            nxt = mat_mul(field, cur, shifted)
            if mat_rank(field, nxt) == mat_rank(field, cur):
                break
            cur = nxt
            s += 1
        # multiplicity = exponent needed to stabilize the rank
        if s:
            out[mu] = s
    # verify the product annihilates
    check = mat_identity(field, n)
    for mu, s in out.items():
        shifted = mat_add(field, A, mat_identity(field, n), field.neg(mu))
        for _ in range(s):
            check = mat_mul(field, check, shifted)
    if not mat_is_zero(field, check):
        raise ArithmeticError("minimal polynomial does not split over the "
                              "candidate eigenvalues")
    return out


def crt_idempotent_polys(field, roots: dict):
    """For M = prod (X-mu)^{s}, the polynomials E_mu with E_mu = 1 mod
    (X-mu)^{s_mu} and = 0 mod the others; returned as coefficient lists."""
    out = {}
    for mu, s in roots.items():
        # Q = M/(X-mu)^s ; invert Q as a series at mu up to order s
        Q = [field.one]
        for nu, t in roots.items():
            if nu == mu:
                continue
            for _ in range(t):
                nxt = [field.zero] * (len(Q) + 1)
                for d, c in enumerate(Q):
                    nxt[d + 1] = field.add(nxt[d + 1], c)
                    nxt[d] = field.sub(nxt[d], field.mul(c, nu))
                Q = nxt
        # Taylor coefficients of Q at mu: q_j = sum_d Q_d binom(d,j) mu^{d-j}
        taylor = []
        for j in range(s):
            acc = field.zero
            for d, c in enumerate(Q):
                if d < j:
                    continue
                b = _binom(d, j)
                term = field.mul(c, field.mul(field.of(b),
                                              field.pow(mu, d - j)))
                acc = field.add(acc, term)
            taylor.append(acc)
        inv = [field.inv(taylor[0])]
        for j in range(1, s):
            acc = field.zero
            for t in range(1, j + 1):
                acc = field.add(acc, field.mul(taylor[t], inv[j - t]))
            inv.append(field.neg(field.mul(acc, inv[0])))
        # R(X) = sum inv_j (X-mu)^j ; E = R*Q expanded
        R = [field.zero]
        shifted = [field.one]
        for j in range(s):
            while len(R) < len(shifted):
                R.append(field.zero)
            for d, c in enumerate(shifted):
                R[d] = field.add(R[d], field.mul(c, inv[j]))
            nxt = [field.zero] * (len(shifted) + 1)
            for d, c in enumerate(shifted):
                nxt[d + 1] = field.add(nxt[d + 1], c)
                nxt[d] = field.sub(nxt[d], field.mul(c, mu))
            shifted = nxt
        E = [field.zero] * (len(R) + len(Q) - 1)
        for d1, c1 in enumerate(R):
            if field.is_zero(c1):
                continue
            for d2, c2 in enumerate(Q):
                E[d1 + d2] = field.add(E[d1 + d2], field.mul(c1, c2))
        out[mu] = E
    return out


def _binom(nv: int, kv: int) -> int:
    from math import comb
    return comb(nv, kv)


# ---------------------------------------------------------------------------
# Spectral block decomposition
# ---------------------------------------------------------------------------

def eigenvalue_window(field, params, m: dict, n: int, kind: str):
    """All values lam^eps * q^(2N) with |N| <= n-1 (eps = -1 only for B)."""
    q2 = field.mul(params.q, params.q)
    q2inv = field.inv(q2)
    win = set()
    for lam in m:
        seeds = [field.of(lam)]
        if kind == "B":
            seeds.append(field.inv(field.of(lam)))
        for s in seeds:
            lo = hi = s
            win.add(s)
            for _ in range(n - 1):
                lo = field.mul(lo, q2inv)
                hi = field.mul(hi, q2)
                win.add(lo)
                win.add(hi)
    return win


def reduced_multiplicities(field, params, m: dict) -> dict:
    """Cap each multiplicity by its inverse partner plus the zero-node
    slack: m'(i) = min(m(i), m(i^{-1}) + c(i)) where c(i) counts the
    occurrences of i in the multiset {p, -p, p^{-1}, -p^{-1}} (the slack
    doubles when p^2 = -1 and the four values collapse in pairs).
    Self-inverse values are untouched; replacing m by m' does not change
    the quotient."""
    pset = [params.p, field.neg(params.p),
            field.inv(params.p), field.neg(field.inv(params.p))]
    mm = {field.of(k): v for k, v in m.items()}
    out = {}
    for lam, s in mm.items():
        inv = field.inv(lam)
        if inv == lam:
            new = s
        else:
            new = min(s, mm.get(inv, 0) + sum(1 for v in pset if v == lam))
        if new:
            out[lam] = new
    return out


class HeckeBlocks:
    """Simultaneous spectral decomposition of the right-multiplication
    operators of the coordinate variables on a finite quotient."""

    def __init__(self, closure: "HeckeClosure"):
        self.closure = closure
        self.alg = closure.alg
        f = self.alg.field
        n = self.alg.n
        self.xmats = []
        self.roots = []
        self.idems = []
        for k in range(n):
            vec = tuple(1 if j == k else 0 for j in range(n))
            M = closure.rmul_matrix(("x", vec))
            self.xmats.append(M)
            cands = sorted(self.alg.ann_roots[k])
            r = min_poly_roots(f, M, cands)
            self.roots.append(r)
            polys = crt_idempotent_polys(f, r)
            self.idems.append({mu: mat_poly_eval(f, p, M)
                               for mu, p in polys.items()})

    def residue_idempotents(self) -> dict:
        """Product idempotents keyed by eigenvalue tuple; zero ones dropped."""
        f = self.alg.field
        out = {}
        combos = [((), mat_identity(f, self.closure.dim))]
        for level in self.idems:
            nxt = []
            for itup, M in combos:
                for mu, E in level.items():
                    P = mat_mul(f, M, E)
                    if not mat_is_zero(f, P):
                        nxt.append((itup + (mu,), P))
            combos = nxt
        for itup, M in combos:
            out[itup] = M
        return out

    def residue_dims(self) -> dict:
        f = self.alg.field
        return {i: mat_rank(f, M)
                for i, M in self.residue_idempotents().items()}

    def orbit_idempotents(self) -> dict:
        """Sum the residue idempotents over each Weyl-group orbit."""
        from .quiverweyl import enumerate_orbit
        f = self.alg.field
        res = self.residue_idempotents()
        out = {}
        for itup, M in res.items():
            key = enumerate_orbit(f, itup, self.alg.kind)
            if key in out:
                out[key] = mat_add(f, out[key], M)
            else:
                out[key] = M
        return out

    def orbit_dims(self) -> dict:
        f = self.alg.field
        return {o: mat_rank(f, M) for o, M in self.orbit_idempotents().items()}

    def orbit_central(self) -> bool:
        """Each orbit sum must commute with every algebra generator."""
        f = self.alg.field
        lo = 0 if self.alg.kind == "B" else 1
        gens = [("g", a) for a in range(lo, self.alg.n)]
        gens += [("x", tuple(1 if j == k else 0 for j in range(self.alg.n)))
                 for k in range(self.alg.n)]
        mats = [self.closure.rmul_matrix(t) for t in gens]
        for E in self.orbit_idempotents().values():
            for G in mats:
                if not mat_eq(f, mat_mul(f, E, G), mat_mul(f, G, E)):
                    return False
        return True

    def roots_in_window(self) -> bool:
        win = eigenvalue_window(self.alg.field, self.alg.params, self.alg.m,
                                self.alg.n, self.alg.kind)
        return all(mu in win for r in self.roots for mu in r)


def mat_inv(field, A):
    """Inverse of a column-majored square matrix by Gauss-Jordan."""
    n = len(A)
    rows = [[A[j][i] for j in range(n)] + [field.one if k == i else field.zero
                                           for k in range(n)]
            for i in range(n)]
    for c in range(n):
        piv = None
        for r in range(c, n):
            if not field.is_zero(rows[r][c]):
                piv = r
                break
        if piv is None:
            raise ArithmeticError("matrix is singular")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = field.inv(rows[c][c])
        rows[c] = [field.mul(v, inv) for v in rows[c]]
        for r in range(n):
            if r != c and not field.is_zero(rows[r][c]):
                coef = rows[r][c]
                rows[r] = [field.sub(v, field.mul(coef, pv))
                           for v, pv in zip(rows[r], rows[c])]
    return [[rows[i][n + j] for i in range(n)] for j in range(n)]
