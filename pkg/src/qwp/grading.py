"""Weighted gradings and strong-grading certificates.

A weight tuple m assigns degree m_i to z_i, -m_i to z_i*, and -2*m_n to
the central unitary w.  The grading group is Z (modulus 0) or Z_N.  A
grading is strong at degree g when identity resolves: finitely many
pairs (a_i, b_i) with a_i of degree -g, b_i of degree g and
sum_i a_i b_i = 1.  Three constructors produce such certificates:

  * bezout_lens_resolution: a Bezout identity along z_0 certifies the
    cyclic Z_N-grading (degrees 1 and N-1);
  * weighted_resolution: a triangular elimination over the commuting
    diagonal elements b_i = z_i z_i* certifies degrees +-1 of the
    index-N Z-grading carried by the weighted lens subalgebra;
  * compose_tower_resolutions: splices the two along the exact sequence
    0 -> Z -(xN)-> Z -> Z_N -> 0 into +-1 certificates for the weighted
    Z-grading of the whole algebra.

All arithmetic is exact over Q(q); verify_resolution re-normalizes the
pair sums and reports any defect, so no construction is trusted blindly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from qwp.scalar import QScalar
from qwp.star_algebra import (
    AlgebraElement,
    AlgebraPresentation,
    normalize,
    z,
    z_star,
)

INHOMOGENEOUS = "inhomogeneous"

_ONE = QScalar.one()


class AnsatzExhaustionError(RuntimeError):
    """No solution found up to the configured total-degree cap."""


@dataclass(frozen=True)
class GradingSpec:
    """Weights plus group data fixing the degree of every generator.

    modulus 0 means the group Z; modulus N >= 1 means Z_N with degrees
    reduced mod N.  scale embeds a coarser Z-grading: degree k under a
    scaled spec means raw weighted degree k*scale.  Raw degrees outside
    scale*Z are reported inhomogeneous (such elements lie outside the
    index-scale subalgebra the scaled grading lives on).
    """

    pres: AlgebraPresentation
    weights: tuple
    modulus: int = 0
    scale: int = 1

    def __post_init__(self):
        weights = tuple(int(m) for m in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != self.pres.n + 1:
            raise ValueError(
                f"need {self.pres.n + 1} weights for n = {self.pres.n}, got {len(weights)}"
            )
        if any(m <= 0 for m in weights):
            raise ValueError("weights must be positive")
        if math.gcd(*weights) != 1:
            raise ValueError("weights must be coprime as a tuple")
        if self.modulus < 0:
            raise ValueError("modulus must be 0 (for Z) or a positive integer")
        if self.scale < 1:
            raise ValueError("scale must be a positive integer")
        if self.modulus and self.scale != 1:
            raise ValueError("scaled gradings are Z-gradings; use modulus 0")

    @property
    def w_weight(self):
        return -2 * self.weights[-1]

    def raw_degree(self, mon):
        """Weighted Z-degree of a normal monomial, before reduction."""
        d = mon.s * self.w_weight
        for i, m in enumerate(self.weights):
            d += (mon.a[i] - mon.b[i]) * m
        return d

    def reduce(self, d):
        """Map a raw Z-degree into the grading group; None if not in scale*Z."""
        if self.modulus:
            return d % self.modulus
        if self.scale != 1:
            if d % self.scale:
                return None
            return d // self.scale
        return d


def degree(x, g):
    """Common degree of all monomials of x under g, or INHOMOGENEOUS.

    The zero element is reported as degree 0 (it is homogeneous of every
    degree, and 0 keeps verify_resolution's bookkeeping simple).
    """
    if x.pres != g.pres:
        raise ValueError("element and grading use different presentations")
    raws = {g.raw_degree(mon) for mon in x.terms}
    if not raws:
        return 0
    if len(raws) > 1:
        return INHOMOGENEOUS
    d = g.reduce(raws.pop())
    return INHOMOGENEOUS if d is None else d


def homogeneous_components(x, g):
    """Split x into its homogeneous parts: {degree: AlgebraElement}.

    Monomials whose raw degree falls outside scale*Z are collected under
    the INHOMOGENEOUS key.
    """
    if x.pres != g.pres:
        raise ValueError("element and grading use different presentations")
    parts = {}
    for mon, coeff in x.terms.items():
        d = g.reduce(g.raw_degree(mon))
        key = INHOMOGENEOUS if d is None else d
        parts.setdefault(key, {})[mon] = coeff
    return {d: AlgebraElement(x.pres, terms) for d, terms in parts.items()}


@dataclass(frozen=True)
class ResolutionOfIdentity:
    """Certificate that identity resolves at the target degree.

    pairs is a tuple of (a, b) with a of degree -target, b of degree
    target, and sum a*b = 1; verify_resolution checks all three.
    """

    target: int
    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((a, b) for a, b in self.pairs))

    def to_json(self):
        return {
            "target": self.target,
            "pairs": [[a.to_json(), b.to_json()] for a, b in self.pairs],
        }

    @staticmethod
    def from_json(data, pres=None):
        pairs = []
        for a, b in data["pairs"]:
            ea, eb = AlgebraElement.from_json(a), AlgebraElement.from_json(b)
            if pres is not None and (ea.pres != pres or eb.pres != pres):
                raise ValueError("serialized pair uses a different presentation")
            pairs.append((ea, eb))
        return ResolutionOfIdentity(data["target"], tuple(pairs))


@dataclass(frozen=True)
class TowerSpec:
    """The exact sequence 0 -> Z -(x modulus)-> Z -> Z_modulus -> 0."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("tower modulus must be a positive integer")

    @property
    def scale(self):
        return self.modulus


def verify_resolution(r, g):
    """Check degrees and re-normalize the pair sum; never raises on failure.

    Returns {"valid": bool, "failures": [...], "defect": element or None}
    where failures lists per-pair degree violations and defect is
    sum a_i b_i - 1 when nonzero.
    """
    pres = g.pres
    # r.target is a group element already; only cyclic targets need reduction
    if g.modulus:
        target = r.target % g.modulus
        cotarget = -r.target % g.modulus
    else:
        target = r.target
        cotarget = -r.target
    failures = []
    total = AlgebraElement.zero(pres)
    for idx, (a, b) in enumerate(r.pairs):
        for slot, elem, want in (("a", a, cotarget), ("b", b, target)):
            if elem.is_zero():
                continue
            d = degree(elem, g)
            if d != want:
                failures.append({"pair": idx, "slot": slot, "degree": d, "expected": want})
        total = total + a * b
    defect = total - AlgebraElement.one(pres)
    valid = not failures and defect.is_zero()
    return {"valid": valid, "failures": failures, "defect": None if defect.is_zero() else defect}


def compose_resolutions(r1, r2, g):
    """Certificate for the sum of targets: pairs (a_i c_j, d_j b_i)."""
    pairs = tuple(
        (a * c, d * b) for a, b in r1.pairs for c, d in r2.pairs
    )
    target = r1.target + r2.target
    if g.modulus:
        target %= g.modulus
    return ResolutionOfIdentity(target, pairs)


# ---------------------------------------------------------------------------
# univariate polynomials over Q(q): coefficient lists, low degree first


def _qtrim(p):
    while p and p[-1].is_zero():
        p.pop()
    return p


def _qadd(p, r):
    out = list(p) + [QScalar.zero()] * (len(r) - len(p))
    for i, c in enumerate(r):
        out[i] = out[i] + c
    return _qtrim(out)


def _qsub(p, r):
    out = list(p) + [QScalar.zero()] * (len(r) - len(p))
    for i, c in enumerate(r):
        out[i] = out[i] - c
    return _qtrim(out)


def _qmul(p, r):
    if not p or not r:
        return []
    out = [QScalar.zero()] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                if b:
                    out[i + j] = out[i + j] + a * b
    return _qtrim(out)


def _qscale(p, c):
    return _qtrim([x * c for x in p])


def _qdivmod(p, r):
    if not r:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    lead = r[-1]
    dr = len(r) - 1
    quot = [QScalar.zero()] * max(len(rem) - dr, 0)
    for i in range(len(rem) - 1, dr - 1, -1):
        c = rem[i] / lead
        if c:
            quot[i - dr] = c
            for j in range(dr + 1):
                rem[i - dr + j] = rem[i - dr + j] - c * r[j]
    return _qtrim(quot), _qtrim(rem)


def _qpow(p, k):
    out = [_ONE]
    for _ in range(k):
        out = _qmul(out, p)
    return out


def _qext_one(p, r):
    """u, v with u*p + v*r = 1; remainders kept monic for determinism."""
    r0, u0, v0 = list(p), [_ONE], []
    r1, u1, v1 = list(r), [], [_ONE]
    while r1:
        quot, rem = _qdivmod(r0, r1)
        r0, u0, v0, r1, u1, v1 = (
            r1,
            u1,
            v1,
            rem,
            _qsub(u0, _qmul(quot, u1)),
            _qsub(v0, _qmul(quot, v1)),
        )
        if r1:
            lead = r1[-1]
            if lead != _ONE:
                inv = _ONE / lead
                r1, u1, v1 = _qscale(r1, inv), _qscale(u1, inv), _qscale(v1, inv)
    if len(r0) != 1:
        raise ValueError("polynomials are not coprime over Q(q)")
    c = r0[0]
    if c != _ONE:
        inv = _ONE / c
        u0, v0 = _qscale(u0, inv), _qscale(v0, inv)
    return u0, v0


# ---------------------------------------------------------------------------
# element helpers


def _zpow(pres, i, k, star=False):
    gen = z_star(i) if star else z(i)
    return normalize((gen,) * k, pres)


def _belem(pres, i):
    return normalize((z(i), z_star(i)), pres)


def _a_elem(pres):
    terms = [(_ONE, (z(i), z_star(i))) for i in range(1, pres.n + 1)]
    return normalize(terms, pres) if terms else AlgebraElement.zero(pres)


def _poly_at(poly, x, pres):
    """Evaluate a Q(q)[t] polynomial at an algebra element (Horner)."""
    acc = AlgebraElement.zero(pres)
    for c in reversed(poly):
        acc = acc * x + AlgebraElement.from_scalar(pres, c)
    return acc


# ---------------------------------------------------------------------------
# constructors


def bezout_lens_resolution(N, n, weights=None, target=1, pres=None):
    """Cyclic certificate along z_0 for Z_N-degree 1 (or N-1 with target=-1).

    With a = sum_{i>=1} z_i z_i*, the closed products
      z_0^N z_0*^N  = prod_{s=0}^{N-1} (1 - q^{2s} a)
      z_0*^N z_0^N  = prod_{s=1}^{N}   (1 - q^{-2s} a)
    turn the certificate into a polynomial Bezout identity in a; the two
    factors never share a root (q^{-2s} vs q^2, distinct for 0 < q < 1),
    so the extended Euclidean algorithm over Q(q)[x] always succeeds.
    """
    if N < 1:
        raise ValueError("modulus N must be a positive integer")
    if target not in (1, -1):
        raise ValueError("target must be +1 or -1")
    if pres is None:
        pres = AlgebraPresentation.sphere(n)
    if weights is None:
        weights = (1,) * (n + 1)
    if weights[0] % N != 1 % N:
        raise ValueError("the z_0 weight must be congruent to 1 mod N")
    one = AlgebraElement.one(pres)
    if N == 1:
        return ResolutionOfIdentity(0, ((one, one),))
    a = _a_elem(pres)
    if target == 1:
        # alpha*P + beta*Q = 1 with P = prod_{s=0}^{N-2}(1 - q^{2s}x),
        # Q = 1 - q^{-2}x; P(a) = z_0^{N-1} z_0*^{N-1}, Q(a) = z_0* z_0.
        p = [_ONE]
        for s in range(N - 1):
            p = _qmul(p, [_ONE, -QScalar.q(2 * s)])
        qpoly = [_ONE, -QScalar.q(-2)]
        alpha, beta = _qext_one(p, qpoly)
        pairs = (
            (_poly_at(alpha, a, pres) * _zpow(pres, 0, N - 1), _zpow(pres, 0, N - 1, star=True)),
            (_poly_at(beta, a, pres) * _zpow(pres, 0, 1, star=True), _zpow(pres, 0, 1)),
        )
        return ResolutionOfIdentity(1, pairs)
    # gamma*(1 - x) + delta*prod_{s=1}^{N-1}(1 - q^{-2s}x) = 1, with
    # 1 - a = z_0 z_0* and the product equal to z_0*^{N-1} z_0^{N-1}.
    p = [_ONE]
    for s in range(1, N):
        p = _qmul(p, [_ONE, -QScalar.q(-2 * s)])
    gamma, delta = _qext_one([_ONE, -_ONE], p)
    pairs = (
        (_poly_at(gamma, a, pres) * _zpow(pres, 0, 1), _zpow(pres, 0, 1, star=True)),
        (_poly_at(delta, a, pres) * _zpow(pres, 0, N - 1, star=True), _zpow(pres, 0, N - 1)),
    )
    return ResolutionOfIdentity(N - 1, pairs)


def _level_poly(l, plus):
    """The dehomogenized level form in y = c_j/b_j, degree l.

    minus: prod_{k=0}^{l-1} (1 + (1 - q^{2k}) y)   from z^l z*^l
    plus:  prod_{s=1}^{l}   (1 - (q^{-2s} - 1) y)  from z*^l z^l
    """
    out = [_ONE]
    if plus:
        for s in range(1, l + 1):
            out = _qmul(out, [_ONE, -(QScalar.q(-2 * s) - _ONE)])
    else:
        for k in range(l):
            out = _qmul(out, [_ONE, _ONE - QScalar.q(2 * k)])
    return out


def _homogenize_at(poly, total, belem, celem, pres):
    """Evaluate the degree-`total` homogenization of poly at (b, c)."""
    if len(poly) - 1 > total:
        raise ValueError("polynomial degree exceeds homogenization degree")
    bpow = [AlgebraElement.one(pres)]
    cpow = [AlgebraElement.one(pres)]
    for _ in range(total):
        bpow.append(bpow[-1] * belem)
        cpow.append(cpow[-1] * celem)
    acc = AlgebraElement.zero(pres)
    for d, coeff in enumerate(poly):
        if coeff:
            acc = acc + (bpow[total - d] * cpow[d]).scale(coeff)
    return acc


def _triangular_coeffs(pres, exps, plus):
    """Coefficients C_i with sum_i C_i * P_i(b) = 1 by back-substitution.

    P_i(b) is the closed product for z_i^{l_i} z_i*^{l_i} (or its starred
    mirror), a binary form of degree l_i in (b_i, c_i) with c_i =
    sum_{j>i} b_j.  Working upward from i = n, each level writes the
    previous level's c_j^L as a combination of P_j and c_j^L via a
    homogeneous Bezout identity against (b_j + c_j)^{L_j}; at the top,
    b_0 + c_0 = 1 collapses the accumulated form to 1.
    """
    n = pres.n
    coeffs = {n: AlgebraElement.one(pres)}
    level = exps[n]
    for j in range(n - 1, -1, -1):
        lj = exps[j]
        pj = _level_poly(lj, plus)
        total = lj + level - 1
        ypow = [QScalar.zero()] * level + [_ONE]
        u, _v = _qext_one(pj, ypow)
        t = _qpow([_ONE, _ONE], total)
        u1 = _qtrim(_qmul(t, u)[:level])
        rem = _qsub(t, _qmul(u1, pj))
        if any(rem[:level]):
            raise ArithmeticError("level elimination failed to clear low terms")
        w1 = rem[level:]
        belem = _belem(pres, j)
        celem = AlgebraElement.zero(pres)
        for k in range(j + 1, n + 1):
            celem = celem + _belem(pres, k)
        ncoeffs = {j: _homogenize_at(u1, total - lj, belem, celem, pres)}
        wfac = _homogenize_at(w1, total - level, belem, celem, pres)
        for i, c in coeffs.items():
            ncoeffs[i] = wfac * c
        coeffs = ncoeffs
        level = total
    return [coeffs[i] for i in range(n + 1)]


def _free_b_monomials(nvars, maxdeg):
    """Exponent tuples over b_0..b_{nvars-1} of total degree <= maxdeg."""
    out = [()]
    for _ in range(nvars):
        out = [alpha + (e,) for alpha in out for e in range(maxdeg + 1 - sum(alpha))]
    return out


def _solve_linear(columns, rhs):
    """One exact solution of sum_k x_k columns[k] = rhs over Q(q), or None.

    columns and rhs are dicts keyed by monomial; free unknowns are set to
    zero, so the first solution found is returned.
    """
    keys = sorted(set().union(rhs, *columns), key=repr)
    ncols = len(columns)
    rows = [
        [col.get(key, QScalar.zero()) for col in columns] + [rhs.get(key, QScalar.zero())]
        for key in keys
    ]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = _ONE / rows[rank][col]
        rows[rank] = [c * inv for c in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][ncols]:
            return None
    solution = [QScalar.zero()] * ncols
    for r, col in enumerate(pivots):
        solution[col] = rows[r][ncols]
    return solution


def _ansatz_coeffs(pres, exps, plus, cap):
    """Bounded-degree linear solve for the same coefficients C_i.

    Unknowns are coefficients of monomials in the free variables
    b_0..b_{n-1} (b_n is eliminated by the unit relation); the bound on
    total degree starts at sum(l_i) and grows to the cap.
    """
    n = pres.n
    prods = []
    for i in range(n + 1):
        zp = _zpow(pres, i, exps[i])
        zs = _zpow(pres, i, exps[i], star=True)
        prods.append(zs * zp if plus else zp * zs)
    bmons = {}

    def bmon(alpha):
        if alpha not in bmons:
            k = next((k for k, e in enumerate(alpha) if e), None)
            if k is None:
                bmons[alpha] = AlgebraElement.one(pres)
            else:
                prev = alpha[:k] + (alpha[k] - 1,) + alpha[k + 1 :]
                bmons[alpha] = bmon(prev) * _belem(pres, k)
        return bmons[alpha]

    start = sum(exps)
    rhs = dict(AlgebraElement.one(pres).terms)
    for bound in range(start, cap + 1):
        alphas = _free_b_monomials(n, bound)
        columns = []
        labels = []
        for i in range(n + 1):
            for alpha in alphas:
                columns.append(dict((bmon(alpha) * prods[i]).terms))
                labels.append((i, alpha))
        solution = _solve_linear(columns, rhs)
        if solution is not None:
            coeffs = [AlgebraElement.zero(pres) for _ in range(n + 1)]
            for (i, alpha), c in zip(labels, solution):
                if c:
                    coeffs[i] = coeffs[i] + bmon(alpha).scale(c)
            return coeffs
    raise AnsatzExhaustionError(
        f"no resolution coefficients of total degree <= {cap} (started at {start})"
    )


def weighted_resolution(m, pres=None, method="triangular", degree_cap=None):
    """Certificates for degrees -1 and +1 of the index-N Z-grading.

    With l_i = prod_{j != i} m_j, the pairs are (C_i z_i^{l_i}, z_i*^{l_i})
    for degree -1 and (D_i z_i*^{l_i}, z_i^{l_i}) for degree +1, where the
    C_i, D_i are polynomials in the commuting b_0..b_n found either by
    the triangular elimination (default) or by a bounded-degree linear
    ansatz (method="ansatz", cap degree_cap, default 4*sum(l_i)).
    """
    m = tuple(int(w) for w in m)
    if len(m) < 2 or any(w <= 0 for w in m):
        raise ValueError("need at least two positive weights")
    n = len(m) - 1
    if pres is None:
        pres = AlgebraPresentation.sphere(n)
    if pres.n != n:
        raise ValueError("presentation size does not match the weight tuple")
    total = math.prod(m)
    exps = tuple(total // m[i] for i in range(n + 1))
    if method == "triangular":
        minus_c = _triangular_coeffs(pres, exps, plus=False)
        plus_c = _triangular_coeffs(pres, exps, plus=True)
    elif method == "ansatz":
        cap = 4 * sum(exps) if degree_cap is None else degree_cap
        minus_c = _ansatz_coeffs(pres, exps, plus=False, cap=cap)
        plus_c = _ansatz_coeffs(pres, exps, plus=True, cap=cap)
    else:
        raise ValueError(f"unknown method {method!r}")
    res_minus = ResolutionOfIdentity(
        -1,
        tuple(
            (minus_c[i] * _zpow(pres, i, exps[i]), _zpow(pres, i, exps[i], star=True))
            for i in range(n + 1)
        ),
    )
    res_plus = ResolutionOfIdentity(
        1,
        tuple(
            (plus_c[i] * _zpow(pres, i, exps[i], star=True), _zpow(pres, i, exps[i]))
            for i in range(n + 1)
        ),
    )
    return {"res_plus": res_plus, "res_minus": res_minus}


def _lens_certificate(lens_res, k, g):
    """Lens certificate for target k, composing the +-1 inputs."""
    base = lens_res["res_plus"] if k > 0 else lens_res["res_minus"]
    out = base
    for _ in range(abs(k) - 1):
        out = compose_resolutions(out, base, g)
    return out


def compose_tower_resolutions(tower, lens_res, cyclic_res, g):
    """Splice lens and cyclic certificates into +-1 certificates for g.

    g is the weighted Z-grading of the full algebra (modulus 0, scale 1,
    first weight 1).  Each cyclic pair is split into Z-homogeneous
    components; matched components of complementary degree either already
    sit in degrees (-d, d) or get a lens certificate spliced in between
    to shift them there.  Inputs are verified first and rejected if
    invalid.
    """
    if g.modulus or g.scale != 1:
        raise ValueError("the ambient grading must be the Z-grading (modulus 0, scale 1)")
    if g.weights[0] != 1:
        raise ValueError("tower composition needs first weight 1")
    N = tower.modulus
    if N != math.prod(g.weights):
        raise ValueError("tower modulus must equal the product of the weights")
    pres = g.pres
    g_cyc = GradingSpec(pres, g.weights, modulus=N)
    g_lens = GradingSpec(pres, g.weights, scale=N)
    checks = (
        ("lens res_plus", lens_res["res_plus"], g_lens),
        ("lens res_minus", lens_res["res_minus"], g_lens),
        ("cyclic res_plus", cyclic_res["res_plus"], g_cyc),
        ("cyclic res_minus", cyclic_res["res_minus"], g_cyc),
    )
    for name, res, spec in checks:
        verdict = verify_resolution(res, spec)
        if not verdict["valid"]:
            raise ValueError(f"input certificate {name} failed verification")
    out = {}
    for d, cyc in ((1, cyclic_res["res_plus"]), (-1, cyclic_res["res_minus"])):
        pairs = []
        for a, b in cyc.pairs:
            acomp = homogeneous_components(a, g)
            bcomp = homogeneous_components(b, g)
            for t, at in acomp.items():
                if t == INHOMOGENEOUS or (t + d) % N:
                    raise ValueError("cyclic certificate is not Z_N-homogeneous")
                bt = bcomp.get(-t)
                if bt is None:
                    continue
                k = (t + d) // N
                if k == 0:
                    pairs.append((at, bt))
                    continue
                shift = _lens_certificate(lens_res, k, g_lens)
                pairs.extend((at * u, v * bt) for u, v in shift.pairs)
        out[d] = ResolutionOfIdentity(d, tuple(pairs))
    return {"res_plus": out[1], "res_minus": out[-1]}


def check_strong_grading(p, g, degrees):
    """Try the applicable constructor at each degree and verify the result.

    Returns {"degrees": {d: entry}, "all_certified": bool} where each
    entry carries the certificate (or None), the verification verdict,
    and a note explaining any failure.  Failures are reported, never
    raised.
    """
    if g.pres != p:
        raise ValueError("grading spec was built for a different presentation")
    report = {"degrees": {}, "all_certified": True}
    cache = {}
    for d in sorted(set(degrees), key=lambda v: (abs(v), v)):
        entry = {"degree": d, "certified": False, "resolution": None, "verification": None, "note": ""}
        try:
            res = _certificate_for_degree(p, g, d, cache)
        except (ValueError, ArithmeticError, AnsatzExhaustionError) as exc:
            entry["note"] = str(exc)
        else:
            verdict = verify_resolution(res, g)
            entry["resolution"] = res
            entry["verification"] = verdict
            entry["certified"] = verdict["valid"]
            if not verdict["valid"]:
                entry["note"] = "constructed certificate failed verification"
        report["degrees"][d] = entry
        report["all_certified"] = report["all_certified"] and entry["certified"]
    return report


def _certificate_for_degree(p, g, d, cache):
    one = AlgebraElement.one(p)
    if g.modulus:
        d %= g.modulus
        if d == 0:
            return ResolutionOfIdentity(0, ((one, one),))
        if "cyclic" not in cache:
            cache["cyclic"] = {
                1: bezout_lens_resolution(g.modulus, p.n, g.weights, target=1, pres=p),
                -1: bezout_lens_resolution(g.modulus, p.n, g.weights, target=-1, pres=p),
            }
        plus, minus = cache["cyclic"][1], cache["cyclic"][-1]
        if d <= g.modulus - d:
            out = plus
            for _ in range(d - 1):
                out = compose_resolutions(out, plus, g)
        else:
            out = minus
            for _ in range(g.modulus - d - 1):
                out = compose_resolutions(out, minus, g)
        return out
    if d == 0:
        return ResolutionOfIdentity(0, ((one, one),))
    if g.scale != 1:
        if "lens" not in cache:
            cache["lens"] = weighted_resolution(g.weights, pres=p)
        return _lens_certificate(cache["lens"], d, g)
    if g.weights[0] != 1:
        raise ValueError("no constructor applies: the Z-grading route needs first weight 1")
    if "tower" not in cache:
        N = math.prod(g.weights)
        lens = weighted_resolution(g.weights, pres=p)
        cyclic = {
            "res_plus": bezout_lens_resolution(N, p.n, g.weights, target=1, pres=p),
            "res_minus": bezout_lens_resolution(N, p.n, g.weights, target=-1, pres=p),
        }
        cache["tower"] = compose_tower_resolutions(TowerSpec(N), lens, cyclic, g)
    tower = cache["tower"]
    base = tower["res_plus"] if d > 0 else tower["res_minus"]
    out = base
    for _ in range(abs(d) - 1):
        out = compose_resolutions(out, base, g)
    return out
