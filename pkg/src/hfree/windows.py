"""Windowed weight-space slices of modules and the operations on them:
trace tables, exact polynomial fits with holdout validation, cuspidality
determinants, tensor and translation of windows, and almost-equivalence
verdicts.

A WeightWindow materializes finitely many weight spaces of a module on one
coset of the root lattice: slots are indexed by integer offset vectors in
simple-root coordinates around a base weight, and for every Chevalley label
the transition slot(m) -> slot(m + q(alpha)) is stored as an exact rational
matrix (the action matrix evaluated at the target weight).  All slot-level
computations are independent per slot and safe to parallelize; windows are
immutable once built.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .algebras import (
    UEAWord,
    Weight,
    finite_irrep,
    gelfand_invariant,
    meye,
    mmul,
    mzeros,
    translation_compatible,
    verma_hc_eigenvalue,
)
from .polys import fit_polynomial, rat_det, rat_kernel, rat_solve


class NoFit(ValueError):
    """An exact polynomial fit failed; carries the offending slot weights."""

    def __init__(self, message, slots=()):
        super().__init__(message)
        self.slots = list(slots)


class WeightWindow:
    """Finitely many weight spaces of a module around a base weight."""

    def __init__(self, algebra, base, dims, matrices, entry_degrees, partial=(), meta=None):
        self.algebra = algebra
        self.base = base
        self.dims = dict(dims)
        self.matrices = dict(matrices)
        self.entry_degrees = dict(entry_degrees)
        self.partial = frozenset(partial)
        self.meta = dict(meta or {})
        self._q = {
            lab: algebra.weight_in_root_lattice(algebra.weight_of(lab))
            for lab in algebra.labels
        }

    def weight_at(self, m):
        return self.base + self.algebra.root_lattice_to_weight(m)

    def slots(self):
        return sorted(self.dims)

    def valid_slots(self):
        return sorted(set(self.dims) - self.partial)

    def target_of(self, m, lab):
        return tuple(a + b for a, b in zip(m, self._q[lab]))

    def slot_matrix(self, m, lab):
        return self.matrices.get((m, lab))

    def slot_word_matrix(self, m, word):
        """Compose transition matrices along a label word (rightmost letter
        first) starting at slot m, or None when the excursion leaves the
        usable window."""
        if m in self.partial or m not in self.dims:
            return None, None
        cur = meye(self.dims[m])
        pos = m
        for lab in reversed(word):
            mat = self.matrices.get((pos, lab))
            if mat is None:
                return None, None
            cur = mmul(mat, cur)
            pos = self.target_of(pos, lab)
            if pos in self.partial:
                return None, None
        return cur, pos

    def slot_operator(self, m, probe):
        """The matrix of a zero-weight enveloping-algebra element on slot m,
        or None when some term's excursion leaves the window."""
        dim = self.dims.get(m)
        if dim is None or m in self.partial:
            return None
        out = mzeros(dim, dim)
        for word, coeff in probe.terms.items():
            mat, pos = self.slot_word_matrix(m, word)
            if mat is None:
                return None
            if pos != m:
                raise ValueError("probe word does not have weight zero")
            out = [[out[i][j] + coeff * mat[i][j] for j in range(dim)] for i in range(dim)]
        return out


def weighting(module, base, radius=6):
    """Materialize the weight spaces of a free module on the box of
    root-lattice offsets [-radius, radius]^n around the base weight."""
    alg = module.algebra
    n = alg.n
    if not isinstance(base, Weight):
        base = Weight(base)
    box = list(itertools.product(range(-radius, radius + 1), repeat=n))
    boxset = set(box)
    qs = {lab: alg.weight_in_root_lattice(alg.weight_of(lab)) for lab in alg.labels}
    dims = {m: module.rank for m in box}
    matrices = {}
    for m in box:
        for lab in alg.labels:
            target = tuple(a + b for a, b in zip(m, qs[lab]))
            if target not in boxset:
                continue
            point = (base + alg.root_lattice_to_weight(target)).coords
            matrices[(m, lab)] = module.action[lab].evaluate(point)
    degrees = {lab: max(module.action[lab].max_entry_degree(), 0) for lab in alg.labels}
    meta = {"kind": "weighting", "radius": radius, "module": dict(module.meta)}
    return WeightWindow(alg, base, dims, matrices, degrees, meta=meta)


# ---------------------------------------------------------------------------
# trace tables and exact fits


class TraceTable:
    def __init__(self, probe, values, window):
        self.probe = probe
        self.values = dict(values)
        self.window = window

    def report(self):
        out = []
        for m in sorted(self.values):
            w = self.window.weight_at(m)
            out.append(
                {
                    "slot": [str(c) for c in w.coords],
                    "offset": list(m),
                    "value": str(self.values[m]),
                }
            )
        return out


def trace_map(window, probe, m):
    op = window.slot_operator(m, probe)
    if op is None:
        raise ValueError("probe excursion leaves the window at slot %s" % (m,))
    return sum((op[i][i] for i in range(len(op))), Fraction(0))


def trace_table(window, probe):
    if not probe.is_zero_weight(window.algebra):
        raise ValueError("trace probes must have weight zero")
    values = {}
    for m in window.valid_slots():
        op = window.slot_operator(m, probe)
        if op is not None:
            values[m] = sum((op[i][i] for i in range(len(op))), Fraction(0))
    return TraceTable(probe, values, window)


def _probe_degree_bound(window, probe):
    best = 0
    for word in probe.terms:
        best = max(best, sum(window.entry_degrees[lab] for lab in word))
    return best


def _fit_over_slots(window, values, degree_bound, stride=4):
    """Exact interpolation with a deterministic holdout: every stride-th
    slot (in sorted order) is withheld and must be reproduced exactly."""
    slots = sorted(values)
    if len(slots) < 2:
        raise NoFit("not enough usable slots to fit", [window.weight_at(m).coords for m in slots])
    holdout = slots[::stride]
    train = [m for m in slots if m not in set(holdout)]
    samples = [(window.weight_at(m).coords, values[m]) for m in train]
    poly = fit_polynomial(samples, degree_bound, nvars=window.algebra.n)
    if poly is None:
        raise NoFit(
            "no polynomial of degree <= %d fits the training slots" % degree_bound,
            [window.weight_at(m).coords for m in train],
        )
    residuals = {}
    bad = []
    for m in holdout:
        r = values[m] - poly.evaluate(window.weight_at(m).coords)
        residuals[m] = r
        if r:
            bad.append(m)
    if bad:
        raise NoFit(
            "holdout residuals are nonzero", [window.weight_at(m).coords for m in bad]
        )
    return poly, {"train": train, "holdout": holdout, "residuals": residuals}


class TraceFit:
    def __init__(self, probe, poly, report):
        self.probe = probe
        self.poly = poly
        self.train = report["train"]
        self.holdout = report["holdout"]
        self.residuals = report["residuals"]


def trace_polynomial(window, probe, degree_bound=None, holdout_fraction=None):
    """Fit the trace table of a probe by an exact polynomial, withholding a
    quarter of the slots (or the requested fraction) for validation; raises
    NoFit when no polynomial of the expected degree reproduces the table
    exactly."""
    table = trace_table(window, probe)
    if degree_bound is None:
        degree_bound = _probe_degree_bound(window, probe)
    stride = 4 if holdout_fraction is None else max(2, round(1 / holdout_fraction))
    poly, report = _fit_over_slots(window, table.values, degree_bound, stride=stride)
    return TraceFit(probe, poly, report)


# ---------------------------------------------------------------------------
# cuspidality


class CuspidalityReport:
    def __init__(self, cuspidal, degenerate, det_polys, zero_slots):
        self.cuspidal = cuspidal
        self.degenerate = degenerate
        self.det_polys = det_polys
        self.zero_slots = zero_slots

    def __repr__(self):
        if self.degenerate:
            return "CuspidalityReport(degenerate)"
        return "CuspidalityReport(cuspidal=%s)" % self.cuspidal


def cuspidality_test(window, offsets=None):
    """For every root alpha, fit the determinant of the up-then-down
    composite f_alpha e_alpha from each slot; the window is cuspidal when
    every determinant polynomial is nonzero and no sampled slot lies on its
    zero locus."""
    alg = window.algebra
    slots = list(offsets) if offsets is not None else window.valid_slots()
    if not slots or all(window.dims[m] == 0 for m in slots):
        return CuspidalityReport(False, True, {}, {})
    det_polys = {}
    zero_slots = {}
    cuspidal = True
    for lab in alg.root_labels:
        neg = alg.root_label(-alg.weight_of(lab))
        word = (neg, lab)
        values = {}
        for m in slots:
            mat, pos = window.slot_word_matrix(m, word)
            if mat is None:
                continue
            assert pos == m
            values[m] = rat_det(mat)
        rank = max(window.dims[m] for m in slots)
        bound = rank * (window.entry_degrees[lab] + window.entry_degrees[neg])
        poly, _ = _fit_over_slots(window, values, bound)
        det_polys[lab] = poly
        zeros = sorted(m for m, v in values.items() if not v)
        zero_slots[lab] = [window.weight_at(m).coords for m in zeros]
        if not poly or zeros:
            cuspidal = False
    return CuspidalityReport(cuspidal, False, det_polys, zero_slots)


# ---------------------------------------------------------------------------
# tensoring a window with a finite-dimensional representation


def window_tensor(window, rep):
    """slot(lambda) = direct sum over V-weights mu of slot(lambda - mu)
    tensor V_mu; slots whose components are not all available are marked
    partial and excluded from fits."""
    alg = window.algebra
    if rep.kind != "algebra" or rep.n != alg.n or not set(alg.labels) <= set(rep.action):
        raise ValueError("representation does not match the window's algebra")
    hw = Weight(rep.hw)
    shifts = []
    for j in range(rep.dim):
        diff = hw - Weight(rep.weights[j])
        q = alg.weight_in_root_lattice(diff)
        if q is None:
            raise ValueError("representation weight outside the root-lattice coset")
        shifts.append(tuple(int(c) for c in q))
    new_base = window.base + hw

    dims = {}
    partial = set()
    sizes = {}
    for m in window.slots():
        comp = [tuple(a + b for a, b in zip(m, s)) for s in shifts]
        if all(c in window.dims and c not in window.partial for c in comp):
            sizes[m] = [window.dims[c] for c in comp]
            dims[m] = sum(sizes[m])
        else:
            dims[m] = sum(window.dims.get(c, 0) for c in comp)
            partial.add(m)

    qs = {lab: alg.weight_in_root_lattice(alg.weight_of(lab)) for lab in alg.labels}
    matrices = {}
    for m in sizes:
        comp = [tuple(a + b for a, b in zip(m, s)) for s in shifts]
        col_off = [sum(sizes[m][:j]) for j in range(rep.dim)]
        for lab in alg.labels:
            target = tuple(a + b for a, b in zip(m, qs[lab]))
            if target not in sizes:
                continue
            tcomp = [tuple(a + b for a, b in zip(target, s)) for s in shifts]
            row_off = [sum(sizes[target][:j]) for j in range(rep.dim)]
            out = mzeros(dims[target], dims[m])
            ok = True
            xv = rep.action[lab]
            for j in range(rep.dim):
                block = window.matrices.get((comp[j], lab))
                if block is None:
                    ok = False
                    break
                for r in range(len(block)):
                    for s in range(len(block[0])):
                        out[row_off[j] + r][col_off[j] + s] = block[r][s]
            if not ok:
                continue
            for i in range(rep.dim):
                for j in range(rep.dim):
                    if not xv[i][j]:
                        continue
                    # the V-side jump lands in the same underlying slot
                    assert tcomp[i] == comp[j]
                    for r in range(sizes[m][j]):
                        out[row_off[i] + r][col_off[j] + r] += xv[i][j]
            matrices[(m, lab)] = out

    meta = {"kind": "tensor", "dim": rep.dim, "base": dict(window.meta)}
    return WeightWindow(
        alg, new_base, dims, matrices, dict(window.entry_degrees), partial=partial, meta=meta
    )


# ---------------------------------------------------------------------------
# windowed translation functors


def _gelfand_degrees(algebra):
    return [2, 3] if algebra.N >= 3 else [2]


def _mat_power(mat, k):
    out = meye(len(mat))
    for _ in range(k):
        out = mmul(out, mat)
    return out


def window_translate(window, mu, lam, degrees=None):
    """Translate a window with generalized central character at mu to the
    character at lam: tensor with the irreducible of highest weight the
    dominant conjugate of lam - mu, then cut each slot down to the joint
    generalized eigenspace of the invariant slot operators at lam's
    eigenvalues."""
    alg = window.algebra
    if not isinstance(mu, Weight):
        mu = Weight(mu)
    if not isinstance(lam, Weight):
        lam = Weight(lam)
    if not translation_compatible(alg, lam, mu):
        raise ValueError("weights are not compatible for translation")
    if degrees is None:
        degrees = _gelfand_degrees(alg)
    probes = [gelfand_invariant(alg, k) for k in degrees]
    source_values = [verma_hc_eigenvalue(alg, z, mu) for z in probes]
    target_values = [verma_hc_eigenvalue(alg, z, lam) for z in probes]

    # the input must actually carry mu's generalized central character
    for m in window.valid_slots():
        ops = [window.slot_operator(m, z) for z in probes]
        if any(op is None for op in ops):
            continue
        for op, c in zip(ops, source_values):
            d = len(op)
            shifted = [[op[i][j] - c * (i == j) for j in range(d)] for i in range(d)]
            if any(any(row) for row in _mat_power(shifted, d)):
                raise ValueError(
                    "window does not have the stated generalized central character"
                )
        break

    vcoords = alg.fundamental_coords(alg.dominant_conjugate(lam - mu))
    rep = finite_irrep(alg, vcoords)
    big = window_tensor(window, rep)

    bases = {}
    for m in big.valid_slots():
        ops = [big.slot_operator(m, z) for z in probes]
        if any(op is None for op in ops):
            continue
        d = big.dims[m]
        stacked = []
        for op, c in zip(ops, target_values):
            shifted = [[op[i][j] - c * (i == j) for j in range(d)] for i in range(d)]
            stacked.extend(_mat_power(shifted, d))
        bases[m] = rat_kernel(stacked)

    dims = {m: len(bases[m]) for m in bases}
    partial = set()
    matrices = {}
    qs = {lab: alg.weight_in_root_lattice(alg.weight_of(lab)) for lab in alg.labels}
    for m in bases:
        for lab in alg.labels:
            target = tuple(a + b for a, b in zip(m, qs[lab]))
            if target not in bases:
                continue
            big_mat = big.matrices.get((m, lab))
            if big_mat is None:
                continue
            bsrc = bases[m]
            btgt = bases[target]
            if not bsrc:
                matrices[(m, lab)] = mzeros(dims[target], 0)
                continue
            image = [
                [
                    sum(big_mat[r][k] * vec[k] for k in range(len(vec)))
                    for vec in bsrc
                ]
                for r in range(len(big_mat))
            ]
            if not btgt:
                if any(any(row) for row in image):
                    raise ValueError("translation projection is not invariant")
                matrices[(m, lab)] = mzeros(0, dims[m])
                continue
            bmat = [[vec[r] for vec in btgt] for r in range(len(btgt[0]))]
            sol = rat_solve(bmat, image)
            if sol is None:
                raise ValueError("translation projection is not invariant")
            matrices[(m, lab)] = sol

    meta = {
        "kind": "translate",
        "from": [str(c) for c in mu.coords],
        "to": [str(c) for c in lam.coords],
        "base": dict(window.meta),
    }
    return WeightWindow(
        alg, big.base, dims, matrices, dict(big.entry_degrees), partial=partial, meta=meta
    )


# ---------------------------------------------------------------------------
# almost-equivalence and support


class EquivalenceVerdict:
    """Finite-window evidence for almost-equivalence: the disagreement set
    must fit within the configured threshold.  A finite window cannot
    certify cofiniteness, so the verdict is labeled as evidence."""

    label = "evidence"

    def __init__(self, equivalent, exceptional, probes, threshold):
        self.equivalent = equivalent
        self.exceptional = exceptional
        self.probes = probes
        self.threshold = threshold

    def report(self):
        return {
            "equivalent": self.equivalent,
            "label": self.label,
            "threshold": self.threshold,
            "exceptional": [[str(c) for c in w] for w in self.exceptional],
            "probes": list(self.probes),
        }


def almost_equivalent(w1, w2, probes, threshold=None):
    """Compare trace tables of two windows on their common slots; the
    verdict is positive when the slots of disagreement would fit on the
    boundary shell (default threshold)."""
    if w1.algebra is not w2.algebra:
        raise ValueError("windows live over different algebras")
    shift = w1.algebra.weight_in_root_lattice(w1.base - w2.base)
    if shift is None:
        raise ValueError("windows live on different root-lattice cosets")
    shift = tuple(int(c) for c in shift)
    overlap = [
        m
        for m in w1.valid_slots()
        if tuple(a + b for a, b in zip(m, shift)) in set(w2.valid_slots())
    ]
    if not overlap:
        raise ValueError("windows do not overlap")
    if threshold is None:
        rmax = max(max(abs(c) for c in m) for m in overlap)
        threshold = sum(1 for m in overlap if max(abs(c) for c in m) == rmax)

    bad = set()
    names = []
    for name, probe in probes:
        names.append(name)
        for m in overlap:
            m2 = tuple(a + b for a, b in zip(m, shift))
            if w1.dims[m] != w2.dims[m2]:
                bad.add(m)
                continue
            op1 = w1.slot_operator(m, probe)
            op2 = w2.slot_operator(m2, probe)
            if op1 is None or op2 is None:
                continue
            t1 = sum((op1[i][i] for i in range(len(op1))), Fraction(0))
            t2 = sum((op2[i][i] for i in range(len(op2))), Fraction(0))
            if t1 != t2:
                bad.add(m)
    exceptional = [w1.weight_at(m).coords for m in sorted(bad)]
    return EquivalenceVerdict(len(bad) <= threshold, exceptional, names, threshold)


def essential_support(window):
    """Slots achieving the maximal slot dimension."""
    valid = window.valid_slots()
    if not valid:
        return []
    top = max(window.dims[m] for m in valid)
    return [window.weight_at(m).coords for m in valid if window.dims[m] == top]


def default_probe_catalog(algebra):
    """The standard probe set: Cartan labels, both composites of each simple
    root pair, and low-degree invariants of the enveloping algebra."""
    probes = []
    for lab in algebra.cartan_labels:
        probes.append((lab, UEAWord.from_labels((lab,), 1)))
    for e, f in algebra.simple_pairs():
        probes.append(("%s*%s" % (e, f), UEAWord.from_labels((e, f), 1)))
        probes.append(("%s*%s" % (f, e), UEAWord.from_labels((f, e), 1)))
    for k in _gelfand_degrees(algebra):
        probes.append(("gelfand%d" % k, gelfand_invariant(algebra, k)))
    return probes
