"""Modules that are free of finite rank over the Cartan polynomial algebra,
with the action of each root vector given by a twisted polynomial matrix.

A FreeHModule stores, for every Chevalley basis label x of weight alpha, a
rank x rank matrix A_x of polynomials; the action on coefficient vectors is
x . (p . v_j) = sigma_alpha(p) . sum_i (A_x)_{ij} v_i, where sigma_alpha
shifts every Cartan variable by the value of alpha on it.  Constructors:
the rank-one sp(2n) module M0, exponential tensor modules realized through
a Weyl-algebra carrier, parabolic-complement induced modules, and the
closure operations (twist, tensor by finite, dual).
"""

from __future__ import annotations

from fractions import Fraction

from .algebras import (
    Weight,
    build_algebra,
    gelfand_invariant,
    irrep_gl,
    meye,
    mtrans,
    mzeros,
    parabolic_complement,
    rat,
)
from .polys import Poly, PolyMatrix, rat_solve


def _acc(d, key, v):
    s = d.get(key, Fraction(0)) + v
    if s:
        d[key] = s
    else:
        d.pop(key, None)


class FreeHModule:
    """A module free over the Cartan polynomial algebra."""

    def __init__(self, algebra, rank, action, meta=None):
        self.algebra = algebra
        self.rank = rank
        self.action = dict(action)
        self.meta = dict(meta or {})
        missing = [lab for lab in algebra.labels if lab not in self.action]
        if missing:
            raise ValueError("action missing labels: %s" % ", ".join(missing))
        for lab, m in self.action.items():
            if m.rows != rank or m.cols != rank or m.nvars != algebra.n:
                raise ValueError("action matrix for %s has wrong shape" % lab)

    def act(self, lab, vec):
        """Apply a basis element to a coefficient vector (list of Poly)."""
        alpha = self.algebra.weight_of(lab).coords
        shifted = [p.shift(alpha) for p in vec]
        a = self.action[lab]
        return [
            sum((a.entries[i][j] * shifted[j] for j in range(self.rank)), Poly.zero(a.nvars))
            for i in range(self.rank)
        ]

    def word_matrix(self, word):
        """The composite operator of a label word (rightmost letter acting
        first) as (PolyMatrix, accumulated weight): the operator is the
        matrix followed by the shift by the accumulated weight."""
        n = self.algebra.n
        p = PolyMatrix.identity(self.rank, n)
        s = Weight.zero(n)
        for lab in word:
            p = p * self.action[lab].shift(s.coords)
            s = s + self.algebra.weight_of(lab)
        return p, s

    def same_action(self, other):
        return (
            self.algebra is other.algebra
            and self.rank == other.rank
            and all(self.action[lab] == other.action[lab] for lab in self.algebra.labels)
        )

    def __repr__(self):
        return "FreeHModule(%s%d, rank=%d)" % (
            self.algebra.family,
            self.algebra.n,
            self.rank,
        )


class BracketReport:
    """Residuals of the defining relations of a FreeHModule: Cartan labels
    must act as their linear polynomial times the identity, and commutators
    must match the structure-constant expansion."""

    def __init__(self, cartan, pairs):
        self.cartan = cartan
        self.pairs = pairs
        self.passed = all(r.is_zero() for _, r in cartan) and all(
            r.is_zero() for _, r in pairs
        )

    def failures(self):
        out = [(lab, r) for lab, r in self.cartan if not r.is_zero()]
        out += [(pair, r) for pair, r in self.pairs if not r.is_zero()]
        return out

    def __repr__(self):
        return "BracketReport(passed=%s, failures=%d)" % (self.passed, len(self.failures()))


def validate_bracket(module):
    alg = module.algebra
    n = alg.n
    cartan = []
    for i, lab in enumerate(alg.cartan_labels):
        expect = PolyMatrix.scalar(module.rank, Poly.variable(n, i))
        cartan.append((lab, module.action[lab] - expect))
    pairs = []
    labels = alg.labels
    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            x, y = labels[a], labels[b]
            ax = alg.weight_of(x).coords
            ay = alg.weight_of(y).coords
            lhs = module.action[x] * module.action[y].shift(ax) - module.action[y] * module.action[x].shift(ay)
            rhs = PolyMatrix(module.rank, module.rank, n)
            for z, c in alg.bracket_in_basis(x, y).items():
                rhs = rhs + module.action[z].scale(c)
            pairs.append(((x, y), lhs - rhs))
    return BracketReport(cartan, pairs)


# ---------------------------------------------------------------------------
# the rank-one sp(2n) module


def from_sp2n_M0(n):
    """The rank-one sp(2n)-module on the Cartan polynomial algebra with
    e_{2eps_i} acting by (h_i - 1/2)(h_i - 3/2) against the sigma-squared
    twist, and companions."""
    if n < 2:
        raise ValueError("the rank-one symplectic module needs n >= 2")
    alg = build_algebra("C", n)

    def var(i):
        return Poly.variable(n, i)

    half = Fraction(1, 2)
    action = {}
    for i, lab in enumerate(alg.cartan_labels):
        action[lab] = PolyMatrix.scalar(1, var(i))
    for lab in alg.root_labels:
        coords = alg.weight_of(lab).coords
        pos = [i for i, c in enumerate(coords) if c > 0]
        negs = [i for i, c in enumerate(coords) if c < 0]
        if coords.count(2) == 1 and len(pos) == 1 and not negs:
            i = pos[0]
            p = (var(i) - Poly.const(n, half)) * (var(i) - Poly.const(n, 3 * half))
        elif coords.count(-2) == 1 and len(negs) == 1 and not pos:
            p = Poly.const(n, 1)
        elif len(pos) == 2:
            i, j = pos
            p = (var(i) - Poly.const(n, half)) * (var(j) - Poly.const(n, half))
        elif len(negs) == 2:
            p = Poly.const(n, 1)
        else:
            i = pos[0]
            p = var(i) - Poly.const(n, half)
        action[lab] = PolyMatrix(1, 1, n, [[p]])
    return FreeHModule(alg, 1, action, meta={"constructor": "m0", "n": n})


def m0_reduction_witness(f):
    """A witness for cyclicity of the rank-one symplectic module: greedy
    applications of (1 - e_{-2eps_i}) reducing f to a nonzero constant.
    Returns the list of (variable index 1-based, polynomial after the step)."""
    if not f:
        raise ValueError("cannot reduce the zero element")
    steps = []
    cur = f
    while cur.total_degree() > 0:
        i = max(range(cur.nvars), key=lambda k: cur.degree_in(k))
        offsets = [Fraction(-2) if k == i else Fraction(0) for k in range(cur.nvars)]
        nxt = cur - cur.shift(offsets)
        if nxt.total_degree() >= cur.total_degree():
            raise AssertionError("reduction step failed to decrease degree")
        steps.append((i + 1, nxt))
        cur = nxt
    if not cur.constant_term():
        raise AssertionError("reduction ended at zero")
    return steps


# ---------------------------------------------------------------------------
# Weyl-algebra carrier for the exponential tensor modules


class WeylCarrier:
    """The space of finite sums x^m e^{b.x} (x) v with v in a gl(n) irrep,
    carrying the sl(n+1)-action through the polynomial-differential-operator
    realization.  Elements are dicts {(exponent tuple, V basis index): c}.

    The printed form of the realization has three typographical artifacts;
    the readings fixed here (recorded in ``readings``) are the unique ones
    under which the commutator relations close on the carrier.
    """

    readings = {
        "levi_mixed": "x_i x_j for the S-to-complement Levi entries",
        "lowering_case_split": "the case split of the lowering operators is by column index",
        "raising_inner_sum": "x_r tensor E_{i,r} inside the raising sum over S",
        "raising_complement_sign": "minus partial_j tensor E_{i,j} inside the raising sum over the complement",
    }

    def __init__(self, b, V, S):
        self.b = tuple(rat(x) for x in b)
        if any(not x for x in self.b):
            raise ValueError("all entries of b must be nonzero")
        self.n = len(self.b)
        if V.kind != "gl" or V.n != self.n:
            raise ValueError("V must be a gl(%d) representation" % self.n)
        self.V = V
        self.S = frozenset(int(s) for s in S)
        if not self.S <= set(range(1, self.n + 1)):
            raise ValueError("S must be a subset of {1..%d}" % self.n)
        self.algebra = build_algebra("A", self.n)
        self._tpoly = None

    # primitive operators on carrier elements ------------------------------

    def _x(self, k, state, sign=1):
        out = {}
        for (m, v), c in state.items():
            m2 = m[:k] + (m[k] + 1,) + m[k + 1 :]
            _acc(out, (m2, v), sign * c)
        return out

    def _d(self, k, state, sign=1):
        out = {}
        bk = self.b[k]
        for (m, v), c in state.items():
            if m[k]:
                m2 = m[:k] + (m[k] - 1,) + m[k + 1 :]
                _acc(out, (m2, v), sign * c * m[k])
            _acc(out, (m, v), sign * c * bk)
        return out

    def _vop(self, i, j, state, sign=1):
        mat = self.V.action["E(%d,%d)" % (i, j)]
        out = {}
        for (m, v), c in state.items():
            for i2 in range(self.V.dim):
                if mat[i2][v]:
                    _acc(out, (m, i2), sign * c * mat[i2][v])
        return out

    @staticmethod
    def _merge(*states):
        out = {}
        for st in states:
            for key, c in st.items():
                _acc(out, key, c)
        return out

    # the realization -------------------------------------------------------

    def act_htilde(self, k, state):
        """Action of E_{k,k} - Id/(n+1), 1-based k <= n."""
        i = k - 1
        if k in self.S:
            return self._merge(self._x(i, self._d(i, state)), self._vop(k, k, state))
        scaled = {key: -c for key, c in state.items()}
        return self._merge(
            self._x(i, self._d(i, state), sign=-1), self._vop(k, k, state), scaled
        )

    def _act_levi(self, i, j, state):
        out = self._vop(i, j, state)
        ii, jj = i - 1, j - 1
        i_in, j_in = i in self.S, j in self.S
        if not i_in and not j_in:
            part = self._x(jj, self._d(ii, state), sign=-1)
        elif i_in and j_in:
            part = self._x(ii, self._d(jj, state))
        elif i_in and not j_in:
            part = self._x(ii, self._x(jj, state))
        else:
            part = self._d(ii, self._d(jj, state), sign=-1)
        return self._merge(out, part)

    def _act_lowering(self, j, state):
        if j in self.S:
            return self._d(j - 1, state, sign=-1)
        return self._x(j - 1, state, sign=-1)

    def _act_raising(self, i, state):
        n = self.n
        ii = i - 1
        parts = []
        if i not in self.S:
            for j in range(1, n + 1):
                jj = j - 1
                if j not in self.S:
                    parts.append(self._x(jj, self._d(jj, self._d(ii, state))))
                    parts.append(self._vop(i, j, self._d(jj, state), sign=-1))
                else:
                    parts.append(self._x(jj, self._d(jj, self._d(ii, state)), sign=-1))
                    parts.append(self._vop(i, j, self._x(jj, state)))
            for j in range(1, n + 1):
                parts.append(self._vop(j, j, self._d(ii, state), sign=-1))
            c = Fraction(n + 1 - len(self.S))
            parts.append({key: c * v for key, v in self._d(ii, state).items()})
        else:
            for j in range(1, n + 1):
                jj = j - 1
                if j in self.S:
                    parts.append(self._x(ii, self._x(jj, self._d(jj, state))))
                    parts.append(self._vop(i, j, self._x(jj, state)))
                else:
                    parts.append(self._x(ii, self._x(jj, self._d(jj, state)), sign=-1))
                    parts.append(self._vop(i, j, self._d(jj, state), sign=-1))
            for j in range(1, n + 1):
                parts.append(self._vop(j, j, self._x(ii, state)))
            c = Fraction(n - len(self.S))
            parts.append({key: -c * v for key, v in self._x(ii, state).items()})
        return self._merge(*parts)

    def act_label(self, lab, state):
        """Action of an sl(n+1) Chevalley basis label on a carrier element."""
        n = self.n
        if lab.startswith("h"):
            hmat = self.algebra.mat(lab)
            parts = []
            for k in range(1, n + 1):
                d = hmat[k - 1][k - 1] - hmat[n][n]
                if d:
                    part = self.act_htilde(k, state)
                    parts.append({key: d * c for key, c in part.items()})
            return self._merge(*parts)
        inner = lab[2:-1].split(",")
        i, j = int(inner[0]), int(inner[1])
        if i <= n and j <= n:
            return self._act_levi(i, j, state)
        if i == n + 1:
            return self._act_lowering(j, state)
        return self._act_raising(i, state)

    def basis_state(self, vidx):
        return {((0,) * self.n, vidx): Fraction(1)}

    # rewriting into the free picture ---------------------------------------

    def _conversion_data(self):
        if getattr(self, "_tpoly", None) is not None:
            return self._tpoly
        n = self.n
        alg = self.algebra
        httilde = []
        for k in range(n):
            m = mzeros(alg.N, alg.N)
            m[k][k] = Fraction(1)
            m = [
                [m[r][c] - Fraction(1, alg.N) * (r == c) for c in range(alg.N)]
                for r in range(alg.N)
            ]
            httilde.append(alg.cartan_poly(m))
        tpoly = {}
        for vidx in range(self.V.dim):
            mu = self.V.weights[vidx]
            for k in range(n):
                if (k + 1) in self.S:
                    tpoly[(k, vidx)] = httilde[k] - Poly.const(n, mu[k])
                else:
                    tpoly[(k, vidx)] = -httilde[k] + Poly.const(n, mu[k] - 1)
        self._tpoly = tpoly
        return tpoly

    def to_coords(self, state):
        """Coordinates of a carrier element over the free generators
        e^{b.x} (x) v_i: each monomial factor x^m is rewritten through the
        affine expressions satisfied by the x_k d_k operators."""
        tpoly = self._conversion_data()
        n = self.n
        coords = [Poly.zero(n) for _ in range(self.V.dim)]
        for (m, vidx), c in state.items():
            p = Poly.const(n, c)
            for k in range(n):
                for l in range(m[k]):
                    p = p * (tpoly[(k, vidx)] - Poly.const(n, l))
                if m[k]:
                    p = p.scale(Fraction(1) / self.b[k] ** m[k])
            coords[vidx] = coords[vidx] + p
        return coords


def weyl_carrier(b, V, S):
    return WeylCarrier(b, V, S)


def weyl_to_free(carrier):
    """Convert a Weyl carrier to a FreeHModule on the generators
    e^{b.x} (x) v_mu: monomials x^m are rewritten through the affine
    expressions that the operators x_k d_k satisfy on each generator."""
    n = carrier.n
    alg = carrier.algebra
    V = carrier.V

    action = {}
    for lab in alg.labels:
        entries = [[Poly.zero(n) for _ in range(V.dim)] for _ in range(V.dim)]
        for col in range(V.dim):
            coords = carrier.to_coords(carrier.act_label(lab, carrier.basis_state(col)))
            for row in range(V.dim):
                entries[row][col] = coords[row]
        action[lab] = PolyMatrix(V.dim, V.dim, n, entries)

    for i, lab in enumerate(alg.cartan_labels):
        if action[lab] != PolyMatrix.scalar(V.dim, Poly.variable(n, i)):
            raise AssertionError("carrier conversion broke Cartan consistency")

    meta = {
        "constructor": "exponential",
        "b": carrier.b,
        "S": tuple(sorted(carrier.S)),
        "gl_weight": V.hw,
        "readings": dict(WeylCarrier.readings),
    }
    return FreeHModule(alg, V.dim, action, meta=meta)


def gl_weight_of(algebra, lam, shift=1):
    """The gl(n) weight with entries lam(E_kk - Id/(n+1)) + shift."""
    eps = algebra.eps_coords(lam)
    return tuple(eps[k] + shift for k in range(algebra.n))


def exponential_module(b, lam, S):
    """The exponential tensor module with parameters b, lam, S: the carrier
    on the gl(n) irrep of highest weight lam + (n+1)*omega_n, made free."""
    n = len(b)
    alg = build_algebra("A", n)
    if not isinstance(lam, Weight):
        lam = Weight(lam)
    V = irrep_gl(n, gl_weight_of(alg, lam))
    module = weyl_to_free(weyl_carrier(b, V, S))
    module.meta["lambda"] = lam.coords
    return module


# ---------------------------------------------------------------------------
# modules induced from a parabolic complement


def parabolic_verma(q, V):
    """The induced module of the complement decomposition g = h (+) q: free
    of rank dim V, with x acting through its h-part as a linear polynomial
    and its q-part through V (Levi tags act by the gl matrices, nilradical
    tags by zero)."""
    alg = q.algebra
    n = alg.n
    if V.kind != "gl" or V.n != n:
        raise ValueError("V must be a gl(%d) representation" % n)
    action = {}
    for lab in alg.labels:
        h_coeffs, q_coords = q.decompose(alg.mat(lab))
        qmat = mzeros(V.dim, V.dim)
        for tag, c in zip(q.q_tags, q_coords):
            if not c or tag[0] != "l":
                continue
            _, i, j = tag
            qmat = [
                [qmat[r][s] + c * V.action["E(%d,%d)" % (i, j)][r][s] for s in range(V.dim)]
                for r in range(V.dim)
            ]
        entries = [
            [
                Poly.linear(h_coeffs) + Poly.const(n, qmat[r][s])
                if r == s
                else Poly.const(n, qmat[r][s])
                for s in range(V.dim)
            ]
            for r in range(V.dim)
        ]
        action[lab] = PolyMatrix(V.dim, V.dim, n, entries)
    meta = {"constructor": "verma", "b": q.b, "gl_weight": V.hw}
    return FreeHModule(alg, V.dim, action, meta=meta)


def exponential_partner_verma(algebra, b, lam):
    """The induced module matching exponential_module(b, lam, empty set):
    built on the gl(n) irrep whose highest weight is the exponential
    carrier's, less one box per row."""
    if not isinstance(lam, Weight):
        lam = Weight(lam)
    q = parabolic_complement(algebra, b)
    V = irrep_gl(algebra.n, gl_weight_of(algebra, lam, shift=0))
    module = parabolic_verma(q, V)
    module.meta["lambda"] = lam.coords
    return module


# ---------------------------------------------------------------------------
# closure operations


def twist(module, auto):
    """The module with action x.m = (psi(x)).m for an automorphism psi that
    preserves the Cartan subalgebra, with coefficients rewritten through
    the inverse of the substitution psi induces on the variables."""
    if auto.algebra is not module.algebra:
        raise ValueError("automorphism belongs to a different algebra")
    if not auto.preserves_h:
        raise ValueError("twists require an automorphism preserving the Cartan subalgebra")
    n = module.algebra.n
    cmat = [list(row) for row in auto.h_images]
    cinv = rat_solve(cmat, meye(n))
    if cinv is None:
        raise ValueError("substitution on the Cartan subalgebra is singular")
    inv_images = [Poly.linear(cinv[i]) for i in range(n)]

    action = {}
    for i, lab in enumerate(module.algebra.cartan_labels):
        action[lab] = PolyMatrix.scalar(module.rank, Poly.variable(n, i))
    for lab in module.algebra.root_labels:
        c, target = auto.image_label(lab)
        amat = module.action[target].scale(c)
        action[lab] = amat.map(lambda p: p.subs_linear(inv_images))
    meta = {"constructor": "twist", "kind": auto.kind, "params": auto.params, "base": module.meta}
    return FreeHModule(module.algebra, module.rank, action, meta=meta)


def tensor_finite(module, rep):
    """Tensor with a finite-dimensional representation of the same algebra:
    free of rank rank x dim, with the coefficient convention that makes the
    Cartan labels act as multiplication again."""
    alg = module.algebra
    if rep.kind != "algebra" or rep.n != alg.n or not set(alg.labels) <= set(rep.action):
        raise ValueError("representation does not match the module's algebra")
    n = alg.n
    r = module.rank
    rank = r * rep.dim
    action = {}
    for lab in alg.labels:
        amat = module.action[lab]
        xv = rep.action[lab]
        entries = [[Poly.zero(n) for _ in range(rank)] for _ in range(rank)]
        for j in range(rep.dim):
            shifted = amat.shift(rep.weights[j])
            for a in range(r):
                for bidx in range(r):
                    entries[j * r + bidx][j * r + a] = shifted.entries[bidx][a]
        for i in range(rep.dim):
            for j in range(rep.dim):
                if xv[i][j]:
                    for a in range(r):
                        entries[i * r + a][j * r + a] = entries[i * r + a][j * r + a] + Poly.const(
                            n, xv[i][j]
                        )
        action[lab] = PolyMatrix(rank, rank, n, entries)
    for i, lab in enumerate(alg.cartan_labels):
        expect = PolyMatrix.scalar(rank, Poly.variable(n, i))
        if action[lab] != expect:
            raise AssertionError("tensor construction broke Cartan consistency")
    meta = {"constructor": "tensor", "dim": rep.dim, "base": module.meta}
    return FreeHModule(alg, rank, action, meta=meta)


def dual_module(module):
    """The weight-space dual, free of the same rank: the action matrix of x
    is the sigma-shifted transpose of the matrix of the transpose partner
    of x."""
    alg = module.algebra
    action = {}
    for lab in alg.labels:
        partner = alg.expand_in_basis(mtrans(alg.mat(lab)))
        if len(partner) != 1:
            raise AssertionError("transpose of %s is not a single basis term" % lab)
        [(target, c)] = partner.items()
        alpha = alg.weight_of(lab).coords
        action[lab] = module.action[target].scale(c).shift(alpha).transpose()
    meta = {"constructor": "dual", "base": module.meta}
    return FreeHModule(alg, module.rank, action, meta=meta)


# ---------------------------------------------------------------------------
# central fingerprints


class NotScalar:
    """Marker for a central element acting by a non-scalar matrix."""

    def __init__(self, matrix):
        self.matrix = matrix

    @property
    def deviation(self):
        top = self.matrix.entries[0][0]
        return self.matrix - PolyMatrix.scalar(self.matrix.rows, top)

    def __eq__(self, other):
        return isinstance(other, NotScalar) and self.matrix == other.matrix

    def __repr__(self):
        return "NotScalar(rank=%d)" % self.matrix.rows


def central_fingerprint(module, degrees):
    """The scalars by which the Gelfand invariants of the given degrees act,
    or NotScalar markers carrying the full action matrix."""
    alg = module.algebra
    out = {}
    for k in degrees:
        z = gelfand_invariant(alg, k)
        total = PolyMatrix(module.rank, module.rank, alg.n)
        for word, coeff in z.terms.items():
            mat, s = module.word_matrix(word)
            if not s.is_zero():
                raise AssertionError("central word does not have weight zero")
            total = total + mat.scale(coeff)
        value = total.scalar_value()
        out[k] = value if value is not None else NotScalar(total)
    return out
