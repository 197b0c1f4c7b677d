"""Concrete Chevalley data for sl(n+1) and sp(2n): basis matrices, roots and
coroots, Weyl groups, finite-dimensional irreps, Gelfand central elements,
Harish-Chandra eigenvalues, automorphisms, parabolic complements.

Conventions.  The fixed Cartan basis is h_i = E_{i,i} - E_{i+1,i+1} for
sl(n+1) and h_i = E_{i,i} - E_{n+i,n+i} for sp(2n).  A Weight stores its
value vector on this basis.  Root vectors are labeled "E(i,j)" (type A,
1-based matrix positions) or "e(c1,...,cn)" (type C, epsilon-coefficients
of the root, e.g. "e(1,-1)" or "e(2,0)").
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .polys import Poly, rat, rat_kernel, rat_rank, rat_solve

# ---------------------------------------------------------------------------
# exact matrix helpers (dense lists of Fractions)


def mzeros(r, c):
    return [[Fraction(0)] * c for _ in range(r)]


def meye(n):
    m = mzeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def madd(a, b):
    return [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def msub(a, b):
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def mscale(a, c):
    c = rat(c)
    return [[c * x for x in row] for row in a]


def mmul(a, b):
    n, mid, m = len(a), len(b), len(b[0])
    out = mzeros(n, m)
    for i in range(n):
        for k in range(mid):
            v = a[i][k]
            if v:
                brow = b[k]
                orow = out[i]
                for j in range(m):
                    if brow[j]:
                        orow[j] += v * brow[j]
    return out


def mcomm(a, b):
    return msub(mmul(a, b), mmul(b, a))


def mtrans(a):
    return [list(col) for col in zip(*a)]


def mflat(a):
    return [x for row in a for x in row]


def is_zero_mat(a):
    return all(not x for row in a for x in row)


# ---------------------------------------------------------------------------
# weights


class Weight:
    """A weight, stored as its values on the fixed Cartan basis."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(rat(x) for x in coords)

    @classmethod
    def zero(cls, n):
        return cls((0,) * n)

    def __add__(self, other):
        return Weight(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        return Weight(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return Weight(-a for a in self.coords)

    def scale(self, c):
        c = rat(c)
        return Weight(c * a for a in self.coords)

    def is_zero(self):
        return not any(self.coords)

    def __eq__(self, other):
        return isinstance(other, Weight) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __len__(self):
        return len(self.coords)

    def __repr__(self):
        return "Weight(%s)" % (", ".join(str(c) for c in self.coords))


class WeylElement:
    """A Weyl group element: a reduced word plus its signed-permutation
    action on epsilon coordinates (signs all +1 in type A)."""

    __slots__ = ("word", "perm", "signs")

    def __init__(self, word, perm, signs):
        self.word = tuple(word)
        self.perm = tuple(perm)
        self.signs = tuple(signs)

    @property
    def key(self):
        return (self.perm, self.signs)

    def __len__(self):
        return len(self.word)

    def __repr__(self):
        return "WeylElement(%s)" % (self.word,)


def _clabel(coeffs):
    return "e(%s)" % ",".join(str(c) for c in coeffs)


class Algebra:
    """Chevalley basis data for sl(n+1) (family "A") or sp(2n) (family "C")."""

    def __init__(self, family, n):
        if family not in ("A", "C"):
            raise ValueError("family must be 'A' or 'C'")
        if n < 1:
            raise ValueError("rank must be >= 1")
        self.family = family
        self.n = n
        self.N = n + 1 if family == "A" else 2 * n
        N = self.N

        self.cartan_labels = ["h%d" % (i + 1) for i in range(n)]
        self._mats = {}
        for i in range(n):
            m = mzeros(N, N)
            m[i][i] = Fraction(1)
            if family == "A":
                m[i + 1][i + 1] = Fraction(-1)
            else:
                m[n + i][n + i] = Fraction(-1)
            self._mats[self.cartan_labels[i]] = m

        self.root_labels = []
        if family == "A":
            for i in range(1, N + 1):
                for j in range(1, N + 1):
                    if i == j:
                        continue
                    m = mzeros(N, N)
                    m[i - 1][j - 1] = Fraction(1)
                    lab = "E(%d,%d)" % (i, j)
                    self._mats[lab] = m
                    self.root_labels.append(lab)
        else:
            for cf, m in self._sp_root_vectors(n):
                lab = _clabel(cf)
                self._mats[lab] = m
                self.root_labels.append(lab)
        self.labels = self.cartan_labels + self.root_labels

        # roots read off from the adjoint action of the fixed Cartan basis
        self._root_of = {lab: Weight.zero(n) for lab in self.cartan_labels}
        for lab in self.root_labels:
            self._root_of[lab] = self._ad_weight(lab)
        self._label_by_root = {self._root_of[lab].coords: lab for lab in self.root_labels}

        if family == "A":
            self.simple_root_labels = ["E(%d,%d)" % (i, i + 1) for i in range(1, n + 1)]
        else:
            simples = []
            for i in range(n - 1):
                cf = [0] * n
                cf[i], cf[i + 1] = 1, -1
                simples.append(_clabel(cf))
            cf = [0] * n
            cf[n - 1] = 2
            simples.append(_clabel(cf))
            self.simple_root_labels = simples
        self.simple_roots = [self._root_of[lab] for lab in self.simple_root_labels]

        if family == "A":
            self.rho = Weight([1] * n)
        else:
            self.rho = Weight([n - k for k in range(n)])

        # expansion of arbitrary matrices in the basis: exact left inverse of
        # the (N^2 x dim) column-stacked basis matrix
        cols = [mflat(self._mats[lab]) for lab in self.labels]
        bt = cols  # rows of B^T
        btb = [[sum(x * y for x, y in zip(r1, r2)) for r2 in bt] for r1 in bt]
        inv = rat_solve(btb, meye(len(self.labels)))
        if inv is None:
            raise AssertionError("basis matrices are linearly dependent")
        self._expand_left = mmul(inv, bt)

        # coroots h_alpha, stored as coefficient vectors on the fixed basis
        self._coroot_coeffs = {}
        for lab in self.root_labels:
            alpha = self._root_of[lab]
            neg = self._label_by_root[(-alpha).coords]
            hmat = mcomm(self._mats[lab], self._mats[neg])
            coeffs = self.cartan_coeffs(hmat)
            val = sum(c * a for c, a in zip(coeffs, alpha.coords))
            if not val:
                raise AssertionError("degenerate coroot pairing for %s" % lab)
            self._coroot_coeffs[lab] = [2 * c / val for c in coeffs]

        # simple-root coordinates of every root (exact integer vectors)
        smat = [[sr.coords[k] for sr in self.simple_roots] for k in range(n)]
        self._simple_coords = {}
        for lab in self.root_labels:
            sol = rat_solve(smat, [[c] for c in self._root_of[lab].coords])
            coords = tuple(row[0] for row in sol)
            if any(c.denominator != 1 for c in coords):
                raise AssertionError("non-integral root coordinates")
            self._simple_coords[lab] = tuple(int(c) for c in coords)
        self.positive_root_labels = [
            lab for lab in self.root_labels if self._is_positive_coords(self._simple_coords[lab])
        ]

        self._weyl = None
        self._bracket_cache = {}

    # -- construction helpers ------------------------------------------

    @staticmethod
    def _sp_root_vectors(n):
        """Root vectors of sp(2n); e_{2eps_i} normalized to 2E_{i,n+i}."""
        N = 2 * n
        out = []
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                m = mzeros(N, N)
                m[i][j] = Fraction(1)
                m[n + j][n + i] = Fraction(-1)
                cf = [0] * n
                cf[i], cf[j] = 1, -1
                out.append((cf, m))
        for i in range(n):
            for j in range(i, n):
                plus = mzeros(N, N)
                minus = mzeros(N, N)
                if i == j:
                    plus[i][n + i] = Fraction(2)
                    minus[n + i][i] = Fraction(-2)
                else:
                    plus[i][n + j] = Fraction(1)
                    plus[j][n + i] = Fraction(1)
                    minus[n + i][j] = Fraction(-1)
                    minus[n + j][i] = Fraction(-1)
                cf = [0] * n
                cf[i] += 1
                cf[j] += 1
                out.append((list(cf), plus))
                out.append(([-c for c in cf], minus))
        out.sort(key=lambda pair: pair[0])
        return out

    def _ad_weight(self, lab):
        x = self._mats[lab]
        vals = []
        for hl in self.cartan_labels:
            comm = mcomm(self._mats[hl], x)
            c = None
            for r in range(self.N):
                for s in range(self.N):
                    if x[r][s]:
                        c = comm[r][s] / x[r][s]
                        break
                if c is not None:
                    break
            if not is_zero_mat(msub(comm, mscale(x, c))):
                raise AssertionError("%s is not an ad-eigenvector" % lab)
            vals.append(c)
        return Weight(vals)

    @staticmethod
    def _is_positive_coords(coords):
        for c in coords:
            if c:
                return c > 0
        return False

    # -- basic queries ---------------------------------------------------

    def mat(self, lab):
        return self._mats[lab]

    def weight_of(self, lab):
        """The ad-weight of a basis label (zero for Cartan labels)."""
        return self._root_of[lab]

    def root_label(self, alpha):
        return self._label_by_root[alpha.coords]

    def simple_pairs(self):
        """(e_label, f_label) for each simple root."""
        return [
            (lab, self._label_by_root[(-self._root_of[lab]).coords])
            for lab in self.simple_root_labels
        ]

    def cartan_coeffs(self, hmat):
        """Coefficients of a Cartan-subalgebra matrix on the fixed basis."""
        d = [hmat[i][i] for i in range(self.N)]
        if self.family == "A":
            coeffs = []
            acc = Fraction(0)
            for k in range(self.n):
                acc += d[k]
                coeffs.append(acc)
        else:
            coeffs = d[: self.n]
        check = mzeros(self.N, self.N)
        for c, lab in zip(coeffs, self.cartan_labels):
            check = madd(check, mscale(self._mats[lab], c))
        if not is_zero_mat(msub(check, hmat)):
            raise ValueError("matrix is not in the Cartan subalgebra")
        return coeffs

    def cartan_poly(self, hmat):
        """The linear polynomial on h* represented by a Cartan matrix."""
        return Poly.linear(self.cartan_coeffs(hmat))

    def pair(self, lam, hmat):
        """lam(h) for a Cartan-subalgebra matrix h."""
        return sum(c * a for c, a in zip(self.cartan_coeffs(hmat), lam.coords))

    def coroot_value(self, alpha, lam):
        """lam(h_alpha) for a root alpha (given as Weight or root label)."""
        lab = alpha if isinstance(alpha, str) else self._label_by_root[alpha.coords]
        return sum(c * a for c, a in zip(self._coroot_coeffs[lab], lam.coords))

    def expand_in_basis(self, m):
        """Write an NxN matrix as a label->coefficient dict over the basis."""
        vec = mflat(m)
        coords = [sum(r * v for r, v in zip(row, vec)) for row in self._expand_left]
        out = {}
        recon = mzeros(self.N, self.N)
        for lab, c in zip(self.labels, coords):
            if c:
                out[lab] = c
                recon = madd(recon, mscale(self._mats[lab], c))
        if not is_zero_mat(msub(recon, m)):
            raise ValueError("matrix does not lie in the algebra")
        return out

    def bracket_in_basis(self, x, y):
        """[x, y] for basis labels, expanded on the basis (cached)."""
        key = (x, y)
        if key not in self._bracket_cache:
            comm = mcomm(self._mats[x], self._mats[y])
            self._bracket_cache[key] = self.expand_in_basis(comm)
        return self._bracket_cache[key]

    # -- coordinate systems ------------------------------------------------

    def fundamental_coords(self, lam):
        """Values of lam on the simple coroots."""
        return tuple(self.coroot_value(lab, lam) for lab in self.simple_root_labels)

    def from_fundamental(self, coeffs):
        """The weight sum_i coeffs[i] * omega_i."""
        coeffs = [rat(c) for c in coeffs]
        if len(coeffs) != self.n:
            raise ValueError("need %d fundamental coefficients" % self.n)
        if self.family == "A":
            return Weight(coeffs)
        # type C: lam(h_k) = sum_{i >= k} coeffs[i]
        out = []
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc += c
            out.append(acc)
        return Weight(reversed(out))

    def omega(self, k):
        """The k-th fundamental weight (1-based)."""
        coeffs = [0] * self.n
        coeffs[k - 1] = 1
        return self.from_fundamental(coeffs)

    def eps_coords(self, lam):
        """Epsilon coordinates: zero-sum length-(n+1) vector for type A,
        the plain coordinates for type C."""
        if self.family == "C":
            return lam.coords
        tails = []
        acc = Fraction(0)
        for c in reversed(lam.coords):
            acc += c
            tails.append(acc)
        tails = list(reversed(tails)) + [Fraction(0)]
        shift = -sum(tails) / (self.n + 1)
        return tuple(t + shift for t in tails)

    def from_eps(self, eps):
        if self.family == "C":
            return Weight(eps)
        return Weight(rat(eps[k]) - rat(eps[k + 1]) for k in range(self.n))

    def root_lattice_to_weight(self, m):
        total = Weight.zero(self.n)
        for c, alpha in zip(m, self.simple_roots):
            total = total + alpha.scale(c)
        return total

    def weight_in_root_lattice(self, lam):
        """Integer simple-root coordinates of lam, or None if not in Q."""
        smat = [[sr.coords[k] for sr in self.simple_roots] for k in range(self.n)]
        sol = rat_solve(smat, [[c] for c in lam.coords])
        coords = [row[0] for row in sol]
        if any(c.denominator != 1 for c in coords):
            return None
        return tuple(int(c) for c in coords)

    # -- integrality / dominance -------------------------------------------

    def is_integral(self, lam):
        return all(self.coroot_value(lab, lam).denominator == 1 for lab in self.simple_root_labels)

    def in_dominant_cone(self, lam):
        """lam(h_alpha) not in Z_{<= -1} for every positive root alpha."""
        for lab in self.positive_root_labels:
            v = self.coroot_value(lab, lam)
            if v.denominator == 1 and v <= -1:
                return False
        return True

    def is_dominant_integral(self, lam):
        vals = self.fundamental_coords(lam)
        return all(v.denominator == 1 and v >= 0 for v in vals)

    # -- Weyl group ----------------------------------------------------------

    def _eps_len(self):
        return self.n + 1 if self.family == "A" else self.n

    def _gen(self, i):
        m = self._eps_len()
        perm = list(range(m))
        signs = [1] * m
        if self.family == "A" or i < self.n:
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
        else:
            signs[self.n - 1] = -1
        return WeylElement((i,), perm, signs)

    def weyl_elements(self):
        """All Weyl group elements with BFS-minimal (reduced) words."""
        if self._weyl is None:
            m = self._eps_len()
            ident = WeylElement((), tuple(range(m)), (1,) * m)
            seen = {ident.key: ident}
            queue = [ident]
            gens = [(i, self._gen(i)) for i in range(1, self.n + 1)]
            while queue:
                cur = queue.pop(0)
                for i, g in gens:
                    perm = tuple(cur.perm[g.perm[k]] for k in range(m))
                    signs = tuple(g.signs[k] * cur.signs[g.perm[k]] for k in range(m))
                    if (perm, signs) not in seen:
                        el = WeylElement(cur.word + (i,), perm, signs)
                        seen[el.key] = el
                        queue.append(el)
            self._weyl = list(seen.values())
        return self._weyl

    def simple_reflection(self, i, lam):
        lab = self.simple_root_labels[i - 1]
        return lam - self.simple_roots[i - 1].scale(self.coroot_value(lab, lam))

    def weyl_act(self, w, lam):
        word = w.word if isinstance(w, WeylElement) else tuple(w)
        for i in reversed(word):
            lam = self.simple_reflection(i, lam)
        return lam

    def dot_action(self, w, lam):
        return self.weyl_act(w, lam + self.rho) - self.rho

    def weyl_orbit(self, lam):
        return sorted({self.weyl_act(w, lam).coords for w in self.weyl_elements()})

    def dot_orbit(self, lam):
        return sorted({self.dot_action(w, lam).coords for w in self.weyl_elements()})

    def dot_stabilizer(self, lam):
        return frozenset(w.key for w in self.weyl_elements() if self.dot_action(w, lam) == lam)

    def dominant_conjugate(self, lam):
        """The unique dominant representative of the plain W-orbit of an
        integral weight."""
        for coords in self.weyl_orbit(lam):
            cand = Weight(coords)
            if self.is_dominant_integral(cand):
                return cand
        raise ValueError("no dominant conjugate; weight is not integral")


@lru_cache(maxsize=None)
def build_algebra(family, n):
    return Algebra(family, n)


def same_central_character(algebra, lam, mu):
    return mu.coords in set(algebra.dot_orbit(lam))


def translation_compatible(algebra, lam, mu):
    """Both lam+rho and mu+rho dominant, lam-mu integral, equal dot stabilizers."""
    if not algebra.in_dominant_cone(lam + algebra.rho):
        return False
    if not algebra.in_dominant_cone(mu + algebra.rho):
        return False
    if not algebra.is_integral(lam - mu):
        return False
    return algebra.dot_stabilizer(lam) == algebra.dot_stabilizer(mu)


def weyl_dim(algebra, levi, lam):
    """Weyl dimension formula over the positive roots of the Levi factor
    spanned by the simple roots with (1-based) indices in ``levi``."""
    levi = frozenset(levi)
    for i in sorted(levi):
        v = algebra.coroot_value(algebra.simple_root_labels[i - 1], lam)
        if v.denominator != 1 or v < 0:
            raise ValueError("weight is not dominant integral on the Levi factor")
    rho = algebra.rho
    num = Fraction(1)
    den = Fraction(1)
    for lab in algebra.positive_root_labels:
        support = {
            k + 1 for k, c in enumerate(algebra._simple_coords[lab]) if c
        }
        if not support <= levi:
            continue
        num *= algebra.coroot_value(lab, lam + rho)
        den *= algebra.coroot_value(lab, rho)
    dim = num / den
    if dim.denominator != 1:
        raise AssertionError("Weyl dimension is not an integer")
    return int(dim)


# ---------------------------------------------------------------------------
# finite-dimensional representations


class FiniteRep:
    """An explicit finite-dimensional representation.

    ``kind`` is "gl" (labels E(i,j), weights = value tuples on E_kk) or
    "algebra" (labels of an Algebra, weights = value tuples on the fixed
    Cartan basis).  ``weights[i]`` is the weight of the i-th basis vector.
    """

    def __init__(self, kind, n, dim, action, weights, hw=None):
        self.kind = kind
        self.n = n
        self.dim = dim
        self.action = action
        self.weights = [tuple(rat(x) for x in w) for w in weights]
        self.hw = tuple(rat(x) for x in hw) if hw is not None else None

    def weight_spaces(self):
        out = {}
        for i, w in enumerate(self.weights):
            out.setdefault(w, []).append(i)
        return out

    def __repr__(self):
        return "FiniteRep(%s, dim=%d)" % (self.kind, self.dim)


def _acc(d, key, v):
    """Accumulate into a sparse dict, dropping exact zeros."""
    s = d.get(key, Fraction(0)) + v
    if s:
        d[key] = s
    else:
        d.pop(key, None)


def _wedge_apply(i, j, subset):
    """E_ij on the wedge basis vector e_subset (0-based sorted tuple)."""
    if j not in subset:
        return {}
    if i == j:
        return {subset: Fraction(1)}
    if i in subset:
        return {}
    rest = tuple(s for s in subset if s != j)
    between = sum(1 for s in rest if min(i, j) < s < max(i, j))
    sign = Fraction(-1) ** between
    return {tuple(sorted(rest + (i,))): sign}


def _apply_to_vec(apply_label, lab, vec):
    out = {}
    for idx, c in vec.items():
        for j, c2 in apply_label(lab, idx).items():
            _acc(out, j, c * c2)
    return out


def _coords_in_span(vecs, v):
    support = sorted(set().union(*[set(x) for x in vecs], set(v)))
    a = [[vec.get(k, Fraction(0)) for vec in vecs] for k in support]
    rhs = [[v.get(k, Fraction(0))] for k in support]
    sol = rat_solve(a, rhs)
    if sol is None:
        return None
    return [row[0] for row in sol]


def _hw_submodule(apply_label, labels, raisings, lowerings, start_indices, weight_of, lowering_shifts):
    """Extract the submodule generated by a highest-weight vector.

    Finds the kernel of all raising operators inside the span of
    ``start_indices`` (big-space basis indices of one weight space), takes a
    kernel vector, closes its span under the lowering operators, and
    restricts every label to that span.  Returns (action dict, weight list).
    """
    images = []  # rows: one per (raising, image index)
    image_index = {}
    cols = []
    for bi in start_indices:
        col = {}
        for rl in raisings:
            for j, c in apply_label(rl, bi).items():
                key = (rl, j)
                if key not in image_index:
                    image_index[key] = len(image_index)
                    images.append(key)
                col[image_index[key]] = c
        cols.append(col)
    nrows = max(len(image_index), 1)
    matrix = [[cols[k].get(r, Fraction(0)) for k in range(len(cols))] for r in range(nrows)]
    kernel = rat_kernel(matrix)
    if not kernel:
        raise ValueError("no highest-weight vector in the target weight space")
    v0 = {bi: c for bi, c in zip(start_indices, kernel[0]) if c}

    basis = [v0]
    weights = [weight_of(next(iter(v0)))]
    queue = [0]
    while queue:
        k = queue.pop(0)
        for li, ll in enumerate(lowerings):
            img = _apply_to_vec(apply_label, ll, basis[k])
            if not img:
                continue
            if _coords_in_span(basis, img) is None:
                basis.append(img)
                weights.append(tuple(a + b for a, b in zip(weights[k], lowering_shifts[li])))
                queue.append(len(basis) - 1)

    action = {}
    for lab in labels:
        columns = []
        for vec in basis:
            img = _apply_to_vec(apply_label, lab, vec)
            coords = _coords_in_span(basis, img) if img else [Fraction(0)] * len(basis)
            if coords is None:
                raise AssertionError("generated span is not invariant under %s" % lab)
            columns.append(coords)
        action[lab] = [[columns[j][i] for j in range(len(basis))] for i in range(len(basis))]
    return action, weights, len(kernel)


def irrep_gl(n, mu):
    """The irreducible gl(n) representation of highest weight ``mu``
    (values on E_11..E_nn; consecutive differences must be nonnegative
    integers, the last coordinate may be any rational)."""
    mu = tuple(rat(x) for x in mu)
    if len(mu) != n:
        raise ValueError("need %d weight coordinates" % n)
    diffs = [mu[k] - mu[k + 1] for k in range(n - 1)]
    if any(d.denominator != 1 or d < 0 for d in diffs):
        raise ValueError("weight is not gl-dominant: %s" % (mu,))
    c = mu[n - 1]
    gl_labels = ["E(%d,%d)" % (i, j) for i in range(1, n + 1) for j in range(1, n + 1)]

    factors = []
    for k, d in enumerate(diffs, start=1):
        factors.extend([k] * int(d))
    if not factors:
        action = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                action["E(%d,%d)" % (i, j)] = [[c if i == j else Fraction(0)]]
        return FiniteRep("gl", n, 1, action, [mu], hw=mu)

    bases = [list(itertools.combinations(range(n), k)) for k in factors]
    big = list(itertools.product(*bases))

    def apply_label(lab, idx):
        i, j = _parse_eij(lab)
        out = {}
        for f in range(len(idx)):
            for sub, coeff in _wedge_apply(i - 1, j - 1, idx[f]).items():
                _acc(out, idx[:f] + (sub,) + idx[f + 1 :], coeff)
        return out

    def weight_of(idx):
        w = [Fraction(0)] * n
        for sub in idx:
            for s in sub:
                w[s] += 1
        return tuple(w)

    top = tuple(Fraction(sum(1 for k in factors if k >= pos + 1)) for pos in range(n))
    start = [idx for idx in big if weight_of(idx) == top]
    raisings = ["E(%d,%d)" % (i, i + 1) for i in range(1, n)]
    lowerings = ["E(%d,%d)" % (i + 1, i) for i in range(1, n)]
    shifts = []
    for i in range(1, n):
        s = [Fraction(0)] * n
        s[i] = Fraction(1)
        s[i - 1] = Fraction(-1)
        shifts.append(tuple(s))

    action, weights, hw_mult = _hw_submodule(
        apply_label, gl_labels, raisings, lowerings, start, weight_of, shifts
    )
    if hw_mult != 1:
        raise AssertionError("highest weight space is not one-dimensional")
    dim = len(weights)
    for i in range(1, n + 1):
        m = action["E(%d,%d)" % (i, i)]
        for k in range(dim):
            m[k][k] += c
    weights = [tuple(w + c for w in wt) for wt in weights]
    return FiniteRep("gl", n, dim, action, weights, hw=mu)


def _parse_eij(lab):
    inner = lab[2:-1]
    i, j = inner.split(",")
    return int(i), int(j)


def finite_irrep(algebra, coeffs):
    """The irreducible representation of the algebra with highest weight
    sum_i coeffs[i] * omega_i (coeffs nonnegative integers)."""
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) != algebra.n or any(c < 0 for c in coeffs):
        raise ValueError("need %d nonnegative integer coefficients" % algebra.n)
    n = algebra.n
    hw = algebra.from_fundamental(coeffs)

    if algebra.family == "A":
        m = n + 1
        factors = []
        for k, a in enumerate(coeffs, start=1):
            factors.extend([k] * a)
        if not factors:
            action = {lab: [[Fraction(0)]] for lab in algebra.labels}
            return FiniteRep("algebra", n, 1, action, [Weight.zero(n).coords], hw=hw.coords)
        bases = [list(itertools.combinations(range(m), k)) for k in factors]
        big = list(itertools.product(*bases))

        def apply_gl(i, j, idx):
            out = {}
            for f in range(len(idx)):
                for sub, coeff in _wedge_apply(i - 1, j - 1, idx[f]).items():
                    _acc(out, idx[:f] + (sub,) + idx[f + 1 :], coeff)
            return out

        def apply_label(lab, idx):
            if lab.startswith("h"):
                k = int(lab[1:])
                out = dict(apply_gl(k, k, idx))
                for key, c in apply_gl(k + 1, k + 1, idx).items():
                    _acc(out, key, -c)
                return out
            i, j = _parse_eij(lab)
            return apply_gl(i, j, idx)

        def weight_of(idx):
            w = [Fraction(0)] * m
            for sub in idx:
                for s in sub:
                    w[s] += 1
            return tuple(w[k] - w[k + 1] for k in range(n))

        start = [idx for idx in big if weight_of(idx) == hw.coords]
        raisings = ["E(%d,%d)" % (i, i + 1) for i in range(1, m)]
        lowerings = ["E(%d,%d)" % (i + 1, i) for i in range(1, m)]
        shifts = [tuple((-algebra.simple_roots[i].coords[k] for k in range(n))) for i in range(n)]
        action, weights, _ = _hw_submodule(
            apply_label, algebra.labels, raisings, lowerings, start, weight_of, shifts
        )
        return FiniteRep("algebra", n, len(weights), action, weights, hw=hw.coords)

    # type C: highest-weight submodule of a power of the natural representation
    d = sum(k * a for k, a in enumerate(coeffs, start=1))
    if d == 0:
        action = {lab: [[Fraction(0)]] for lab in algebra.labels}
        return FiniteRep("algebra", n, 1, action, [Weight.zero(n).coords], hw=hw.coords)
    N = algebra.N
    big = list(itertools.product(range(N), repeat=d))

    def apply_label(lab, idx):
        m = algebra.mat(lab)
        out = {}
        for f in range(d):
            j = idx[f]
            for i in range(N):
                if m[i][j]:
                    _acc(out, idx[:f] + (i,) + idx[f + 1 :], m[i][j])
        return out

    def weight_of(idx):
        w = [Fraction(0)] * n
        for j in idx:
            if j < n:
                w[j] += 1
            else:
                w[j - n] -= 1
        return tuple(w)

    start = [idx for idx in big if weight_of(idx) == hw.coords]
    pairs = algebra.simple_pairs()
    raisings = [e for e, _ in pairs]
    lowerings = [f for _, f in pairs]
    shifts = [tuple(-c for c in algebra.simple_roots[i].coords) for i in range(n)]
    action, weights, _ = _hw_submodule(
        apply_label, algebra.labels, raisings, lowerings, start, weight_of, shifts
    )
    return FiniteRep("algebra", n, len(weights), action, weights, hw=hw.coords)


# ---------------------------------------------------------------------------
# enveloping-algebra words and central elements


class UEAWord:
    """A rational linear combination of words over the basis labels,
    standing for an element of the enveloping algebra.  Words act with
    their rightmost letter first."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for word, c in terms.items():
                c = rat(c)
                if c:
                    self.terms[tuple(word)] = self.terms.get(tuple(word), Fraction(0)) + c

    @classmethod
    def identity(cls):
        return cls({(): 1})

    @classmethod
    def from_labels(cls, labels, coeff=1):
        return cls({tuple(labels): coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, Fraction(0)) + c
            if s:
                out[w] = s
            else:
                del out[w]
        res = UEAWord()
        res.terms = out
        return res

    def scale(self, c):
        c = rat(c)
        res = UEAWord()
        if c:
            res.terms = {w: c * v for w, v in self.terms.items()}
        return res

    def __mul__(self, other):
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = out.get(w, Fraction(0)) + c1 * c2
                if s:
                    out[w] = s
                else:
                    del out[w]
        res = UEAWord()
        res.terms = out
        return res

    def word_weight(self, algebra, word):
        total = Weight.zero(algebra.n)
        for lab in word:
            total = total + algebra.weight_of(lab)
        return total

    def is_zero_weight(self, algebra):
        return all(self.word_weight(algebra, w).is_zero() for w in self.terms)

    def __repr__(self):
        return "UEAWord(%d terms)" % len(self.terms)


def gelfand_invariant(algebra, k):
    """The degree-k symmetrized-trace central element: the sum over index
    cycles of products of the trace-form projections of the E_ij onto the
    algebra."""
    if not 2 <= k <= algebra.N:
        raise ValueError("degree must be between 2 and %d" % algebra.N)
    N = algebra.N
    proj = {}
    for i in range(N):
        for j in range(N):
            m = mzeros(N, N)
            m[i][j] = Fraction(1)
            proj[(i, j)] = _project_onto(algebra, m)

    terms = {}
    for cycle in itertools.product(range(N), repeat=k):
        factors = [proj[(cycle[t], cycle[(t + 1) % k])] for t in range(k)]
        if any(not f for f in factors):
            continue
        partial = [((), Fraction(1))]
        for f in factors:
            partial = [
                (word + (lab,), c * c2) for word, c in partial for lab, c2 in f.items()
            ]
        for word, c in partial:
            s = terms.get(word, Fraction(0)) + c
            if s:
                terms[word] = s
            else:
                del terms[word]
    out = UEAWord()
    out.terms = terms
    return out


def _project_onto(algebra, m):
    """Trace-form orthogonal projection of a gl(N) matrix onto the algebra,
    expanded on the Chevalley basis."""
    N = algebra.N
    if algebra.family == "A":
        t = sum(m[i][i] for i in range(N)) / N
        p = [row[:] for row in m]
        for i in range(N):
            p[i][i] -= t
    else:
        n = algebra.n
        J = mzeros(N, N)
        for i in range(n):
            J[i][n + i] = Fraction(1)
            J[n + i][i] = Fraction(-1)
        p = mscale(madd(m, mmul(mmul(J, mtrans(m)), J)), Fraction(1, 2))
    return algebra.expand_in_basis(p)


def verma_hc_eigenvalue(algebra, z, lam):
    """The scalar by which a weight-0 element acts on the highest-weight
    vector of the Verma module M(lam).

    States are PBW-ordered monomials in the negative root vectors applied
    to the highest-weight vector, straightened on the fly.
    """
    if not z.is_zero_weight(algebra):
        raise ValueError("element does not have weight zero")
    neg = [lab for lab in algebra.root_labels if lab not in set(algebra.positive_root_labels)]
    neg_index = {lab: i for i, lab in enumerate(neg)}
    pos = set(algebra.positive_root_labels)
    cartan = set(algebra.cartan_labels)
    memo = {}

    def lmul(f, state):
        """Left-multiply a PBW state by the f-th negative generator."""
        if not state or f >= state[0]:
            return {(f,) + state: Fraction(1)}
        key = ("m", f, state)
        if key in memo:
            return memo[key]
        g, rest = state[0], state[1:]
        out = {}
        for st, c in lmul(f, rest).items():
            for st2, c2 in lmul(g, st).items():
                _acc(out, st2, c * c2)
        for lab, c in algebra.bracket_in_basis(neg[f], neg[g]).items():
            for st2, c2 in lmul(neg_index[lab], rest).items():
                _acc(out, st2, c * c2)
        memo[key] = out
        return out

    def act(lab, state):
        key = ("a", lab, state)
        if key in memo:
            return memo[key]
        if not state:
            if lab in cartan:
                v = lam.coords[algebra.cartan_labels.index(lab)]
                out = {(): v} if v else {}
            elif lab in pos:
                out = {}
            else:
                out = {(neg_index[lab],): Fraction(1)}
        else:
            f, rest = state[0], state[1:]
            out = {}
            for y, c in algebra.bracket_in_basis(lab, neg[f]).items():
                for st, c2 in act(y, rest).items():
                    _acc(out, st, c * c2)
            for st, c in act(lab, rest).items():
                for st2, c2 in lmul(f, st).items():
                    _acc(out, st2, c * c2)
        memo[key] = out
        return out

    total = Fraction(0)
    for word, coeff in z.terms.items():
        states = {(): Fraction(1)}
        for lab in reversed(word):
            nxt = {}
            for state, c in states.items():
                for st, c2 in act(lab, state).items():
                    _acc(nxt, st, c * c2)
            states = nxt
        total += coeff * states.get((), Fraction(0))
    return total


# ---------------------------------------------------------------------------
# automorphisms and parabolic complements


class AlgebraAutomorphism:
    """A Lie algebra automorphism given on the Chevalley basis.

    ``basis_map[x]`` expands the image of basis label x on the basis.  When
    the map preserves the Cartan subalgebra, ``h_images[i]`` holds the
    coefficient vector of the image of h_{i+1} on the fixed basis.
    """

    def __init__(self, algebra, kind, basis_map, preserves_h, conjugator=None, params=None):
        self.algebra = algebra
        self.kind = kind
        self.basis_map = basis_map
        self.preserves_h = preserves_h
        self.conjugator = conjugator
        self.params = params
        self.h_images = None
        if preserves_h:
            self.h_images = []
            for lab in algebra.cartan_labels:
                img = basis_map[lab]
                if any(y not in algebra.cartan_labels for y in img):
                    raise ValueError("map does not preserve the Cartan subalgebra")
                vec = [Fraction(0)] * algebra.n
                for y, c in img.items():
                    vec[algebra.cartan_labels.index(y)] = c
                self.h_images.append(vec)

    def apply_matrix(self, m):
        out = mzeros(self.algebra.N, self.algebra.N)
        for lab, c in self.algebra.expand_in_basis(m).items():
            for lab2, c2 in self.basis_map[lab].items():
                out = madd(out, mscale(self.algebra.mat(lab2), c * c2))
        return out

    def image_label(self, lab):
        """(coefficient, label) when the image of a basis label is a single
        basis term; raises otherwise."""
        img = self.basis_map[lab]
        if len(img) != 1:
            raise ValueError("image of %s is not a single basis term" % lab)
        [(lab2, c)] = img.items()
        return c, lab2

    def weight_substitution(self, lam):
        """The weight mu with mu(h_i) = lam(psi(h_i)); only for maps that
        preserve the Cartan subalgebra."""
        if not self.preserves_h:
            raise ValueError("map does not preserve the Cartan subalgebra")
        return Weight(
            sum(c * x for c, x in zip(vec, lam.coords)) for vec in self.h_images
        )


def make_automorphism(algebra, kind, param=None):
    """Construct tau (negative transpose), theta(b) (conjugation by 1 - x_b,
    type A), or diag(a) (conjugation by an invertible diagonal torus element)."""
    N = algebra.N
    if kind == "tau":
        basis_map = {
            lab: algebra.expand_in_basis(mscale(mtrans(algebra.mat(lab)), -1))
            for lab in algebra.labels
        }
        return AlgebraAutomorphism(algebra, "tau", basis_map, preserves_h=True)

    if kind == "theta":
        if algebra.family != "A":
            raise ValueError("theta(b) is defined for type A only")
        b = [rat(x) for x in param]
        if len(b) != algebra.n or any(not x for x in b):
            raise ValueError("b must have %d nonzero coordinates" % algebra.n)
        xb = mzeros(N, N)
        for j, bj in enumerate(b):
            xb[N - 1][j] = bj
        left = msub(meye(N), xb)
        right = madd(meye(N), xb)
        basis_map = {
            lab: algebra.expand_in_basis(mmul(mmul(left, algebra.mat(lab)), right))
            for lab in algebra.labels
        }
        return AlgebraAutomorphism(
            algebra, "theta", basis_map, preserves_h=False, conjugator=left, params=tuple(b)
        )

    if kind == "diag":
        a = [rat(x) for x in param]
        if any(not x for x in a):
            raise ValueError("diagonal entries must be nonzero")
        if algebra.family == "A":
            if len(a) != N:
                raise ValueError("need %d diagonal entries" % N)
            diag = list(a)
        else:
            if len(a) != algebra.n:
                raise ValueError("need %d diagonal entries" % algebra.n)
            diag = list(a) + [1 / x for x in a]
        conj = mzeros(N, N)
        for i, d in enumerate(diag):
            conj[i][i] = d
        inv = mzeros(N, N)
        for i, d in enumerate(diag):
            inv[i][i] = 1 / d
        basis_map = {
            lab: algebra.expand_in_basis(mmul(mmul(conj, algebra.mat(lab)), inv))
            for lab in algebra.labels
        }
        return AlgebraAutomorphism(
            algebra, "diag", basis_map, preserves_h=True, conjugator=conj, params=tuple(a)
        )

    raise ValueError("unknown automorphism kind %r" % kind)


class ParabolicComplement:
    """A complement q_b with g = h (+) q_b, built as the theta_b-image of
    (Levi gl(n)) (+) (nilradical spanned by the E_{j,n+1}).

    ``q_tags`` name the q-basis: ("l", i, j) is the image of the Levi
    element matching gl(n)'s E_ij (with E_kk read as the traceless
    E_kk - Id/(n+1)), and ("u", j) the image of E_{j,n+1}.
    """

    def __init__(self, algebra, b):
        if algebra.family != "A":
            raise ValueError("parabolic complements are built for type A only")
        b = [rat(x) for x in b]
        if len(b) != algebra.n or any(not x for x in b):
            raise ValueError("b must have %d nonzero coordinates" % algebra.n)
        self.algebra = algebra
        self.b = tuple(b)
        self.theta = make_automorphism(algebra, "theta", b)
        n, N = algebra.n, algebra.N

        self.q_tags = []
        self.q_mats = []
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                m = mzeros(N, N)
                m[i - 1][j - 1] = Fraction(1)
                if i == j:
                    for k in range(N):
                        m[k][k] -= Fraction(1, N)
                self.q_tags.append(("l", i, j))
                self.q_mats.append(self.theta.apply_matrix(m))
        for j in range(1, n + 1):
            m = mzeros(N, N)
            m[j - 1][N - 1] = Fraction(1)
            self.q_tags.append(("u", j))
            self.q_mats.append(self.theta.apply_matrix(m))

        cols = [mflat(algebra.mat(lab)) for lab in algebra.cartan_labels]
        cols += [mflat(m) for m in self.q_mats]
        self._solve_matrix = [[cols[c][r] for c in range(len(cols))] for r in range(N * N)]
        if rat_rank(self._solve_matrix) != len(cols):
            raise AssertionError("h and q_b do not form a direct sum")

    @property
    def dim_q(self):
        return len(self.q_mats)

    def decompose(self, m):
        """Split x = h_x + q_x; returns (coefficients of h_x on the fixed
        Cartan basis, coordinates of q_x on the q basis)."""
        sol = rat_solve(self._solve_matrix, [[v] for v in mflat(m)])
        if sol is None:
            raise ValueError("matrix is not in the algebra")
        flat = [row[0] for row in sol]
        n = self.algebra.n
        return flat[:n], flat[n:]


def parabolic_complement(algebra, b):
    return ParabolicComplement(algebra, b)
