"""Classification-side invariants of weight families: degree polynomials
along the distinguished crossing words, central-character normal forms,
admissible twisting words, degree-one pattern recognition, and
almost-coherence certificates for windows.

Everything here is pure and exact; grid evaluations are independent per
sample point.
"""

from fractions import Fraction

from .algebras import Weight, weyl_dim
from .polys import rat_rank
from .windows import NoFit, default_probe_catalog, trace_polynomial


class NotInScope(ValueError):
    """The central character lies outside the classified families."""


def _coroot_values(algebra, lam):
    return [algebra.coroot_value(lab, lam) for lab in algebra.simple_root_labels]


def crossing_word(n, i):
    """The i-th wall-crossing word s_n s_{n-1} ... s_{n-i+1} (identity for
    i = 0)."""
    return tuple(range(n, n - i, -1))


# ---------------------------------------------------------------------------
# degree polynomials


def deg_k(algebra, lam, k):
    """The k-th degree of the coherent family attached to a dominant
    integral weight: an alternating sum of Levi-factor dimensions along the
    crossing words."""
    if algebra.family != "A":
        raise NotInScope("degree polynomials are defined for type A only")
    n = algebra.n
    if not 1 <= k <= n:
        raise ValueError("k must lie in 1..%d" % n)
    if not algebra.is_dominant_integral(lam):
        raise ValueError("weight is not dominant integral")
    levi = tuple(range(1, n))
    total = 0
    for i in range(0, n - k + 1):
        mu = algebra.dot_action(crossing_word(n, k + i), lam)
        total += (-1) ** i * weyl_dim(algebra, levi, mu)
    return total


def deg_table(algebra, lam):
    return [deg_k(algebra, lam, k) for k in range(1, algebra.n + 1)]


def deg_identity_check(algebra, lam):
    """deg_k + deg_{k+1} telescopes back to a single Levi dimension; this is
    an internal consistency check on the alternating sums."""
    n = algebra.n
    degs = deg_table(algebra, lam) + [0]
    levi = tuple(range(1, n))
    for k in range(1, n + 1):
        mu = algebra.dot_action(crossing_word(n, k), lam)
        if degs[k - 1] + degs[k] != weyl_dim(algebra, levi, mu):
            return False
    return True


def deg_linear_independence(algebra, weights):
    """The degree functions deg_1 .. deg_n evaluated on the given dominant
    weights must have full rank n."""
    n = algebra.n
    if len(weights) < n:
        raise ValueError("need at least %d sample weights" % n)
    matrix = [[Fraction(deg_k(algebra, lam, k)) for lam in weights] for k in range(1, n + 1)]
    return rat_rank(matrix)


# ---------------------------------------------------------------------------
# central character normal forms


class CentralCharClass:
    """A classified central character: its kind, the distinguished weight
    representing it, and (in the singular case) the wall index."""

    def __init__(self, algebra, weight, kind, normal_form, wall=None):
        self.algebra = algebra
        self.weight = weight
        self.kind = kind
        self.normal_form = normal_form
        self.wall = wall

    def report(self):
        out = {
            "kind": self.kind,
            "input": [str(c) for c in self.weight.coords],
            "normal_form": [str(c) for c in self.normal_form.coords],
        }
        if self.wall is not None:
            out["wall"] = self.wall
        return out

    def __repr__(self):
        tail = ", wall=%d" % self.wall if self.wall is not None else ""
        return "CentralCharClass(%s, %s%s)" % (self.kind, self.normal_form.coords, tail)


def _char_kind(algebra, lam):
    if not algebra.is_integral(lam):
        return "non-integral"
    if len(algebra.dot_stabilizer(lam)) == 1:
        return "integral-regular"
    return "integral-singular"


def _normal_candidates_a(algebra, lam, kind):
    n = algebra.n
    found = []
    for coords in algebra.dot_orbit(lam):
        w = Weight(coords)
        v = _coroot_values(algebra, w)
        if kind == "integral-regular":
            if all(x.denominator == 1 and x >= 0 for x in v):
                found.append((w, None))
        elif kind == "integral-singular":
            shifted = [x + 1 for x in v]
            zeros = [i for i, x in enumerate(shifted) if x == 0]
            rest = [x for i, x in enumerate(shifted) if i not in zeros]
            if len(zeros) == 1 and all(x.denominator == 1 and x > 0 for x in rest):
                found.append((w, zeros[0] + 1))
        else:
            if v[0].denominator != 1 and all(
                x.denominator == 1 and x >= 0 for x in v[1:]
            ):
                found.append((w, None))
    return found


def _normal_candidates_c(algebra, lam):
    n = algebra.n
    found = []
    for coords in algebra.dot_orbit(lam):
        w = Weight(coords)
        v = _coroot_values(algebra, w)
        heads = all(v[i].denominator == 1 and v[i] >= 0 for i in range(n - 1))
        half = (v[n - 1] - Fraction(1, 2)).denominator == 1 and v[n - 1] >= Fraction(-1, 2)
        mixed = v[n - 2] + 2 * v[n - 1] + 2
        if heads and half and mixed.denominator == 1 and mixed >= 0:
            found.append((w, None))
    return found


def wt_normal_form(algebra, lam):
    """Classify the central character of lam and return its distinguished
    representative.  Raises NotInScope when the dot-orbit contains no weight
    satisfying the family's constraint list, and fails loudly on ties."""
    if not isinstance(lam, Weight):
        lam = Weight(lam)
    kind = _char_kind(algebra, lam)
    if algebra.family == "A":
        found = _normal_candidates_a(algebra, lam, kind)
    elif algebra.n >= 2:
        found = _normal_candidates_c(algebra, lam)
    else:
        raise NotInScope("no classification for this algebra")
    unique = sorted({(w.coords, wall) for w, wall in found})
    if not unique:
        raise NotInScope("central character is not of admissible-infinite type")
    if len(unique) > 1:
        raise AssertionError("normal form is not unique: %r" % (unique,))
    coords, wall = unique[0]
    return CentralCharClass(algebra, lam, kind, Weight(coords), wall)


# ---------------------------------------------------------------------------
# admissible twisting words


def admissible_word_list(char_class):
    """The reduced Weyl words entering the classification lists.

    Type A, integral regular: a dict mapping each family index i to its n
    words.  Type A, integral singular or non-integral: a flat list.  Type C:
    the single-family case, trivially the identity word.
    """
    algebra = char_class.algebra
    n = algebra.n
    if algebra.family != "A":
        return [()]
    if char_class.kind == "integral-regular":
        out = {}
        for i in range(1, n + 1):
            words = {tuple(range(j, i - 1, -1)) for j in range(i, n + 1)}
            words |= {tuple(range(j, i + 1)) for j in range(1, i + 1)}
            out[i] = sorted(words, key=lambda w: (len(w), w))
        return out
    if char_class.kind == "integral-singular":
        wall = char_class.wall
        words = {tuple(range(j, wall)) for j in range(1, wall)}
        words |= {tuple(range(j, wall, -1)) for j in range(wall + 1, n + 1)}
        return sorted(words, key=lambda w: (len(w), w))
    return [tuple(range(k, 0, -1)) for k in range(1, n + 1)]


# ---------------------------------------------------------------------------
# degree-one recognition


class RecognitionVerdict:
    """Outcome of matching a degree-one family against the two known
    degree-one highest-weight patterns."""

    def __init__(self, name, patterns=()):
        self.name = name
        self.patterns = list(patterns)

    @property
    def degree_one(self):
        return self.name == "degree-one"

    def report(self):
        return {
            "verdict": self.name,
            "patterns": [[kind, str(param)] for kind, param in self.patterns],
        }

    def __repr__(self):
        return "RecognitionVerdict(%s, %r)" % (self.name, self.patterns)


def degree_one_recognition(char_class, fitted_degree):
    """Degree-one families carry the central character of either a*omega_1
    (a not a nonnegative integer) or -(N+2)*omega_1 + (N+1)*omega_2; match
    the class's dot-orbit against both shapes."""
    if fitted_degree != 1:
        return RecognitionVerdict("NotDegreeOne")
    algebra = char_class.algebra
    if algebra.family != "A":
        raise NotInScope("degree-one patterns are stated for type A only")
    n = algebra.n
    patterns = []
    for coords in algebra.dot_orbit(char_class.normal_form):
        v = _coroot_values(algebra, Weight(coords))
        if all(x == 0 for x in v[1:]) and not (v[0].denominator == 1 and v[0] >= 0):
            patterns.append(("a*omega1", v[0]))
        if n >= 2 and all(x == 0 for x in v[2:]):
            big_n = v[1] - 1
            if big_n.denominator == 1 and big_n >= 0 and v[0] == -(big_n + 2):
                patterns.append(("-(N+2)*omega1+(N+1)*omega2", big_n))
    if not patterns:
        return RecognitionVerdict("unmatched")
    return RecognitionVerdict("degree-one", sorted(patterns))


# ---------------------------------------------------------------------------
# almost-coherence certificates


class AlmostCoherentCertificate:
    """Evidence that a window is the restriction of an almost-coherent
    family: a single generic slot dimension and exactly-fitting trace
    polynomials for every probe."""

    def __init__(self, window, degree, exceptional, fits, failures, probe_names):
        self.window = window
        self.degree = degree
        self.exceptional = exceptional
        self.fits = fits
        self.failures = failures
        self.probe_names = probe_names

    @property
    def passed(self):
        return not self.exceptional and not self.failures

    def report(self):
        return {
            "degree": self.degree,
            "passed": self.passed,
            "exceptional": [[str(c) for c in w] for w in self.exceptional],
            "traces": {
                name: fit.poly.text() for name, fit in sorted(self.fits.items())
            },
            "failures": {
                name: [[str(c) for c in w] for w in slots]
                for name, slots in sorted(self.failures.items())
            },
            "probes": list(self.probe_names),
        }

    def __repr__(self):
        state = "passed" if self.passed else "failed"
        return "AlmostCoherentCertificate(degree=%d, %s)" % (self.degree, state)


def certify_almost_coherent(window, probes=None):
    """Check the window against the almost-coherence contract; fit failures
    and dimension outliers are recorded in the certificate, never raised."""
    if probes is None:
        probes = default_probe_catalog(window.algebra)
    valid = window.valid_slots()
    degree = max((window.dims[m] for m in valid), default=0)
    exceptional = [
        window.weight_at(m).coords for m in valid if window.dims[m] != degree
    ]
    fits = {}
    failures = {}
    names = []
    for name, probe in probes:
        names.append(name)
        try:
            fits[name] = trace_polynomial(window, probe)
        except NoFit as err:
            failures[name] = list(err.slots)
    return AlmostCoherentCertificate(window, degree, exceptional, fits, failures, names)
