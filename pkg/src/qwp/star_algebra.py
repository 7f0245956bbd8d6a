"""Presentations of the quantum sphere and Σ *-algebras as rewriting systems.

Generators are z_0..z_n, their adjoints z_0*..z_n*, and (Σ presentation
only) a central unitary w with z_n* = w z_n.  The defining relations are

    z_i z_j  = q z_j z_i            (i < j)
    z_i z_j* = q z_j* z_i           (i != j)
    z_i z_i* = z_i* z_i + (q^-2 - 1) sum_{j>i} z_j z_j*
    sum_j z_j z_j* = 1

oriented into a terminating rewrite system whose normal forms are the
monomials z^a z*^b with the z-block in ascending index order, the z*-block
in descending index order, and min(a_n, b_n) = 0.  In the Σ presentation
z_n* is eliminated via z_n* = w z_n, the central w exponent s ranges over
Z, and z_n^2 rewrites to w^-1 (1 - sum_{j<n} z_j z_j*), so a_n ∈ {0, 1}.

Elements are finite Q(q)-linear combinations of normal-form monomials;
all arithmetic routes through the rewriting engine, which supports both a
deterministic leftmost strategy and a seeded random-position strategy (the
two are compared in the confluence tests).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from qwp.scalar import QScalar

Q = QScalar.q()
Q_INV = QScalar.q(-1)
QINV2_M1 = QScalar.q(-2) - 1  # the (q^-2 - 1) coefficient of the zz* relation
ONE = QScalar.one()


class InvalidGeneratorError(ValueError):
    """A generator outside the presentation's alphabet."""


class ParameterError(ValueError):
    """A named-element parameter violating its defining constraint."""


class Generator(NamedTuple):
    kind: str  # "z", "z*", "w", "w*"
    index: int  # -1 for w/w*

    def star(self):
        return Generator(_STAR_OF[self.kind], self.index)

    def __str__(self):
        if self.kind in ("w", "w*"):
            return self.kind
        return f"z{self.index}" + ("*" if self.kind == "z*" else "")


_STAR_OF = {"z": "z*", "z*": "z", "w": "w*", "w*": "w"}


def z(i):
    return Generator("z", i)


def z_star(i):
    return Generator("z*", i)


W = Generator("w", -1)
W_STAR = Generator("w*", -1)


class Monomial(NamedTuple):
    a: tuple  # z exponents, length n+1
    b: tuple  # z* exponents, length n+1
    s: int  # w exponent (0 in sphere presentation)

    def word(self):
        gens = []
        for i, e in enumerate(self.a):
            gens.extend([z(i)] * e)
        for i in range(len(self.b) - 1, -1, -1):
            gens.extend([z_star(i)] * self.b[i])
        if self.s > 0:
            gens.extend([W] * self.s)
        elif self.s < 0:
            gens.extend([W_STAR] * (-self.s))
        return tuple(gens)

    def degree_total(self):
        return sum(self.a) + sum(self.b)

    def __str__(self):
        parts = [f"z{i}^{e}" if e > 1 else f"z{i}" for i, e in enumerate(self.a) if e]
        parts += [
            f"z{i}*^{e}" if e > 1 else f"z{i}*"
            for i in range(len(self.b) - 1, -1, -1)
            if (e := self.b[i])
        ]
        if self.s:
            parts.append("w" if self.s == 1 else f"w^{self.s}")
        return " ".join(parts) if parts else "1"


@dataclass(frozen=True)
class AlgebraPresentation:
    """The sphere(n) or sigma(n) presentation; n >= 1."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("sphere", "sigma"):
            raise ValueError(f"unknown presentation kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("presentation needs n >= 1")

    @staticmethod
    def sphere(n):
        return AlgebraPresentation("sphere", n)

    @staticmethod
    def sigma(n):
        return AlgebraPresentation("sigma", n)

    def check_generator(self, g):
        if g.kind in ("w", "w*"):
            if self.kind != "sigma":
                raise InvalidGeneratorError("w generators only exist in sigma presentations")
            return
        if not 0 <= g.index <= self.n:
            raise InvalidGeneratorError(f"generator index {g.index} outside 0..{self.n}")


# ---------------------------------------------------------------------------
# rewriting engine
#
# Working terms are (coeff, zword, s): zword is a tuple of z/z* generators
# (never w, never z_n* in sigma), s the collected central w exponent.


def _ingest(pres, gens, s=0):
    """Strip w/w* into the exponent s; in sigma replace z_n* by w z_n."""
    zword = []
    for g in gens:
        pres.check_generator(g)
        if g.kind == "w":
            s += 1
        elif g.kind == "w*":
            s -= 1
        elif pres.kind == "sigma" and g.kind == "z*" and g.index == pres.n:
            s += 1
            zword.append(z(g.index))
        else:
            zword.append(g)
    return tuple(zword), s


def _reducible_positions(pres, word):
    n = pres.n
    out = []
    for t in range(len(word) - 1):
        k1, i1 = word[t]
        k2, i2 = word[t + 1]
        if k1 == "z":
            if k2 == "z":
                if i1 > i2 or (pres.kind == "sigma" and i1 == i2 == n):
                    out.append(t)
            elif i1 == i2 == n:  # z_n z_n* (sphere only; sigma has no z_n*)
                out.append(t)
        else:  # k1 == "z*"
            if k2 == "z*":
                if i1 < i2:
                    out.append(t)
            else:
                out.append(t)  # any z* before z is reducible
    return out


def _first_reducible(pres, word):
    """Leftmost redex position, or -1; same patterns as _reducible_positions."""
    n = pres.n
    sigma = pres.kind == "sigma"
    for t in range(len(word) - 1):
        k1, i1 = word[t]
        k2, i2 = word[t + 1]
        if k1 == "z":
            if k2 == "z":
                if i1 > i2 or (sigma and i1 == n and i2 == n):
                    return t
            elif i1 == n and i2 == n:
                return t
        elif k2 == "z" or i1 < i2:
            return t
    return -1


def _apply_rule(pres, word, s, t):
    """Expand the redex at position t; yields (factor, new_word, new_s)."""
    n = pres.n
    head, tail = word[:t], word[t + 2 :]
    g1, g2 = word[t], word[t + 1]
    k1, i1 = g1
    k2, i2 = g2
    if k1 == "z" and k2 == "z":
        if i1 > i2:
            yield Q_INV, head + (g2, g1) + tail, s
        else:  # sigma: z_n z_n -> w^-1 (1 - sum_{j<n} z_j z_j*)
            yield ONE, head + tail, s - 1
            for j in range(n):
                yield -ONE, head + (z(j), z_star(j)) + tail, s - 1
    elif k1 == "z" and k2 == "z*":
        # only the sphere pattern z_n z_n* -> 1 - sum_{j<n} z_j z_j*
        yield ONE, head + tail, s
        for j in range(n):
            yield -ONE, head + (z(j), z_star(j)) + tail, s
    elif k1 == "z*" and k2 == "z*":
        yield Q_INV, head + (g2, g1) + tail, s
    else:  # z* then z
        if i1 != i2:
            yield Q_INV, head + (g2, g1) + tail, s
        elif i1 == n:  # z_n* z_n -> z_n z_n* (empty higher sum)
            yield ONE, head + (g2, g1) + tail, s
        else:
            yield ONE, head + (g2, g1) + tail, s
            for j in range(i1 + 1, n + 1):
                zj_pair = _ingest(pres, (z(j), z_star(j)))
                yield -QINV2_M1, head + zj_pair[0] + tail, s + zj_pair[1]


def _chase(pres, word, s):
    """Apply non-branching rules at leftmost positions until stuck.

    Every non-branching rule has factor q^-1 or 1, so the combined factor
    is q^-k.  Returns (k, word, s, t) where t is the leftmost branching
    redex, or -1 if the word is normal.
    """
    n = pres.n
    sigma = pres.kind == "sigma"
    w = list(word)
    k = 0
    t = 0
    last = len(w) - 1
    while t < last:
        k1, i1 = w[t]
        k2, i2 = w[t + 1]
        if k1 == "z":
            if k2 == "z":
                if i1 > i2:
                    w[t], w[t + 1] = w[t + 1], w[t]
                    k += 1
                    if t:
                        t -= 1
                    continue
                if sigma and i1 == n and i2 == n:
                    return k, tuple(w), s, t
            elif i1 == n and i2 == n:  # sphere z_n z_n*
                return k, tuple(w), s, t
        elif k2 == "z*":
            if i1 < i2:
                w[t], w[t + 1] = w[t + 1], w[t]
                k += 1
                if t:
                    t -= 1
                continue
        else:  # z* then z
            if i1 != i2:
                w[t], w[t + 1] = w[t + 1], w[t]
                k += 1
                if t:
                    t -= 1
                continue
            if i1 == n:  # sphere z_n* z_n -> z_n z_n*, factor 1
                w[t], w[t + 1] = w[t + 1], w[t]
                if t:
                    t -= 1
                continue
            return k, tuple(w), s, t  # z_i* z_i with i < n
        t += 1
    return k, tuple(w), s, -1


_QINV_POWS = [ONE, Q_INV]


def _qinv_pow(k):
    while len(_QINV_POWS) <= k:
        _QINV_POWS.append(_QINV_POWS[-1] * Q_INV)
    return _QINV_POWS[k]


def _word_to_monomial(pres, word, s):
    n = pres.n
    a = [0] * (n + 1)
    b = [0] * (n + 1)
    for kind, i in word:
        if kind == "z":
            a[i] += 1
        else:
            b[i] += 1
    return Monomial(tuple(a), tuple(b), s)


def _is_normal(pres, word):
    return _first_reducible(pres, word) < 0


def _rewrite(pres, terms, strategy="leftmost", rng=None):
    """Exhaustively rewrite a {(word, s): coeff} map to normal form."""
    if strategy == "leftmost":
        return _rewrite_leftmost(pres, terms)
    if strategy == "random":
        return _rewrite_random(pres, terms, rng or random.Random(0))
    raise ValueError(f"unknown strategy {strategy!r}")


def _rewrite_leftmost(pres, terms):
    """Leftmost rewriting with per-call memoization.

    Normal forms of intermediate words are cached for the duration of the
    call, so branches that reconverge on the same word are expanded once
    instead of once per path.  Only branch sites become cache nodes;
    single-branch rule chains are followed inline by the chase.
    """
    memo = {}
    raw = {}    # key -> branch list: branch site found, not yet expanded
    edges = {}  # key -> [(factor, child key)]: expanded, children pending
    todo = []

    def intern(word, s):
        # Registers the word for normalization; returns (factor, key).
        k, word, s, t = _chase(pres, word, s)
        fac = _qinv_pow(k) if k else ONE
        key = (word, s)
        if key in memo or key in raw or key in edges:
            return fac, key
        if t < 0:
            memo[key] = {_word_to_monomial(pres, word, s): ONE}
        else:
            raw[key] = list(_apply_rule(pres, word, s, t))
            todo.append(key)
        return fac, key

    roots = []
    for (word, s), coeff in terms.items():
        if coeff:
            fac, key = intern(word, s)
            roots.append((coeff * fac if fac is not ONE else coeff, key))

    while todo:
        key = todo[-1]
        if key in memo:
            todo.pop()
            continue
        if key in raw:
            out = []
            for rf, new_word, new_s in raw.pop(key):
                fac, child = intern(new_word, new_s)
                out.append((rf * fac if fac is not ONE else rf, child))
            edges[key] = out
            continue
        out = edges[key]
        missing = [child for _, child in out if child not in memo]
        if missing:
            todo.extend(missing)
            continue
        nf = {}
        for fac, child in out:
            for mon, c in memo[child].items():
                fc = c if fac is ONE else fac * c
                acc = nf.get(mon)
                acc = fc if acc is None else acc + fc
                if acc:
                    nf[mon] = acc
                elif mon in nf:
                    del nf[mon]
        del edges[key]
        memo[key] = nf
        todo.pop()

    result = {}
    for coeff, key in roots:
        for mon, c in memo[key].items():
            fc = coeff * c
            acc = result.get(mon)
            acc = fc if acc is None else acc + fc
            if acc:
                result[mon] = acc
            elif mon in result:
                del result[mon]
    return result


def _rewrite_random(pres, terms, rng):
    """Rewriting by a randomly chosen redex at each step.

    Memoized like the leftmost engine; a word met twice reuses the redex
    choices made on first contact.  Chains of single-branch applications
    are walked inline and recorded in a side table.
    """
    memo = {}
    raw = {}       # key -> branch list: branch site found, not yet expanded
    edges = {}     # key -> [(factor, child key)]: expanded, children pending
    walkmemo = {}  # key -> (factor, key of the walk's end)
    todo = []

    def intern(word, s):
        # Registers the word for normalization; returns (factor, key).
        trail = []
        while True:
            key = (word, s)
            if key in walkmemo:
                sfx, final = walkmemo[key]
                break
            if key in memo or key in raw or key in edges:
                sfx, final = ONE, key
                break
            positions = _reducible_positions(pres, word)
            if not positions:
                memo[key] = {_word_to_monomial(pres, word, s): ONE}
                sfx, final = ONE, key
                break
            branches = list(_apply_rule(pres, word, s, rng.choice(positions)))
            if len(branches) > 1:
                raw[key] = branches
                todo.append(key)
                sfx, final = ONE, key
                break
            f, word, s = branches[0]
            trail.append((key, f))
        for wkey, f in reversed(trail):
            sfx = f if sfx is ONE else f * sfx
            walkmemo[wkey] = (sfx, final)
        return sfx, final

    roots = []
    for (word, s), coeff in terms.items():
        if coeff:
            fac, key = intern(word, s)
            roots.append((coeff * fac if fac is not ONE else coeff, key))

    while todo:
        key = todo[-1]
        if key in memo:
            todo.pop()
            continue
        if key in raw:
            out = []
            for rf, new_word, new_s in raw.pop(key):
                fac, child = intern(new_word, new_s)
                out.append((rf * fac if fac is not ONE else rf, child))
            edges[key] = out
            continue
        out = edges[key]
        missing = [child for _, child in out if child not in memo]
        if missing:
            todo.extend(missing)
            continue
        nf = {}
        for fac, child in out:
            for mon, c in memo[child].items():
                fc = c if fac is ONE else fac * c
                acc = nf.get(mon)
                acc = fc if acc is None else acc + fc
                if acc:
                    nf[mon] = acc
                elif mon in nf:
                    del nf[mon]
        del edges[key]
        memo[key] = nf
        todo.pop()

    result = {}
    for coeff, key in roots:
        for mon, c in memo[key].items():
            fc = coeff * c
            acc = result.get(mon)
            acc = fc if acc is None else acc + fc
            if acc:
                result[mon] = acc
            elif mon in result:
                del result[mon]
    return result


class AlgebraElement:
    """A finite Q(q)-linear combination of normal-form monomials."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms=None):
        self.pres = pres
        self.terms = dict(terms) if terms else {}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(pres):
        return AlgebraElement(pres)

    @staticmethod
    def one(pres):
        n = pres.n
        unit = Monomial((0,) * (n + 1), (0,) * (n + 1), 0)
        return AlgebraElement(pres, {unit: ONE})

    @staticmethod
    def from_scalar(pres, c):
        c = c if isinstance(c, QScalar) else QScalar(c)
        return AlgebraElement.one(pres) * c

    # -- structure -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.pres == other.pres and self.terms == other.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mon, coeff in self.sorted_terms():
            cs = str(coeff)
            ms = str(mon)
            if ms == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(ms)
            else:
                if any(op in cs for op in (" + ", " - ", "/")) or cs.startswith("-"):
                    cs = f"({cs})"
                parts.append(f"{cs} {ms}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self.pres.kind}({self.pres.n}) element: {self}>"

    # -- ring operations -----------------------------------------------------

    def _check_same(self, other):
        if self.pres != other.pres:
            raise ValueError("elements of different presentations cannot be combined")

    def __add__(self, other):
        if isinstance(other, (int, QScalar)):
            other = AlgebraElement.from_scalar(self.pres, other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_same(other)
        out = dict(self.terms)
        for mon, c in other.terms.items():
            acc = out.get(mon)
            acc = c if acc is None else acc + c
            if acc:
                out[mon] = acc
            elif mon in out:
                del out[mon]
        return AlgebraElement(self.pres, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.pres, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, QScalar)):
            other = AlgebraElement.from_scalar(self.pres, other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = c if isinstance(c, QScalar) else QScalar(c)
        if not c:
            return AlgebraElement(self.pres)
        return AlgebraElement(self.pres, {m: cc * c for m, cc in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_same(other)
        work = {}
        for m1, c1 in self.terms.items():
            w1 = m1.word()
            for m2, c2 in other.terms.items():
                word, s = _ingest(self.pres, w1 + m2.word())
                key = (word, s)
                c = c1 * c2
                cur = work.get(key)
                val = c if cur is None else cur + c
                if val:
                    work[key] = val
                elif key in work:
                    del work[key]
        return AlgebraElement(self.pres, _rewrite(self.pres, work))

    def __rmul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("element powers must be nonnegative integers")
        acc = AlgebraElement.one(self.pres)
        for _ in range(k):
            acc = acc * self
        return acc

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {
            "presentation": {"kind": self.pres.kind, "n": self.pres.n},
            "terms": [
                {
                    "monomial": {"a": list(m.a), "b": list(m.b), "s": m.s},
                    "coeff": str(c),
                }
                for m, c in self.sorted_terms()
            ],
        }

    @staticmethod
    def from_json(data):
        from qwp.parsing import parse_scalar

        pres = AlgebraPresentation(data["presentation"]["kind"], data["presentation"]["n"])
        terms = {}
        for t in data["terms"]:
            m = Monomial(
                tuple(t["monomial"]["a"]), tuple(t["monomial"]["b"]), t["monomial"]["s"]
            )
            terms[m] = parse_scalar(t["coeff"])
        return AlgebraElement(pres, terms)


def normalize(x, pres, strategy="leftmost", rng=None):
    """Rewrite x to its normal-form element.

    x may be a Generator, a word (iterable of Generator), a list of
    (coeff, word) pairs, or an AlgebraElement (idempotence: renormalizing
    an element returns an equal element).
    """
    work = {}

    def _feed(coeff, gens, s=0):
        word, s = _ingest(pres, tuple(gens), s)
        key = (word, s)
        cur = work.get(key)
        val = coeff if cur is None else cur + coeff
        if val:
            work[key] = val
        elif key in work:
            del work[key]

    if isinstance(x, Generator):
        _feed(ONE, (x,))
    elif isinstance(x, AlgebraElement):
        if x.pres != pres:
            raise ValueError("element belongs to a different presentation")
        for mon, coeff in x.terms.items():
            _feed(coeff, mon.word())
    elif isinstance(x, Iterable):
        x = list(x)
        if x and isinstance(x[0], tuple) and len(x[0]) == 2 and not isinstance(x[0], Generator):
            for coeff, gens in x:
                coeff = coeff if isinstance(coeff, QScalar) else QScalar(coeff)
                _feed(coeff, tuple(gens))
        else:
            _feed(ONE, tuple(x))
    else:
        raise TypeError(f"cannot normalize object of type {type(x).__name__}")
    return AlgebraElement(pres, _rewrite(pres, work, strategy=strategy, rng=rng))


def adjoint(x):
    """The *-involution, extended antilinearly (coefficients are real)."""
    pres = x.pres
    work = []
    for mon, coeff in x.terms.items():
        starred = tuple(g.star() for g in reversed(mon.word()))
        work.append((coeff, starred))
    return normalize(work, pres)


def defining_relations(pres):
    """The presentation's relations as (name, lhs_terms, rhs_terms) triples.

    Each side is a list of (QScalar, word) pairs; normalize(lhs - rhs) must
    vanish, and representations must satisfy them up to truncation effects.
    """
    n = pres.n
    rels = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            rels.append((f"z{i} z{j} = q z{j} z{i}", [(ONE, (z(i), z(j)))], [(Q, (z(j), z(i)))]))
    for i in range(n + 1):
        for j in range(n + 1):
            if i != j:
                rels.append(
                    (
                        f"z{i} z{j}* = q z{j}* z{i}",
                        [(ONE, (z(i), z_star(j)))],
                        [(Q, (z_star(j), z(i)))],
                    )
                )
    for i in range(n + 1):
        rhs = [(ONE, (z_star(i), z(i)))]
        rhs += [(QINV2_M1, (z(j), z_star(j))) for j in range(i + 1, n + 1)]
        rels.append((f"z{i} z{i}* = z{i}* z{i} + (q^-2-1) sum", [(ONE, (z(i), z_star(i)))], rhs))
    rels.append(
        ("sum_j z_j z_j* = 1", [(ONE, (z(j), z_star(j))) for j in range(n + 1)], [(ONE, ())])
    )
    if pres.kind == "sigma":
        rels.append(("w w* = 1", [(ONE, (W, W_STAR))], [(ONE, ())]))
        rels.append(("w* w = 1", [(ONE, (W_STAR, W))], [(ONE, ())]))
        rels.append(("z_n* = w z_n", [(ONE, (z_star(n),))], [(ONE, (W, z(n)))]))
        for i in range(n + 1):
            rels.append((f"w z{i} = z{i} w", [(ONE, (W, z(i)))], [(ONE, (z(i), W))]))
            rels.append(
                (f"w z{i}* = z{i}* w", [(ONE, (W, z_star(i)))], [(ONE, (z_star(i), W))])
            )
    return rels


# ---------------------------------------------------------------------------
# distinguished elements


def make_named_element(name, params, pres):
    """Construct one of the named elements, normalized.

    name/params:
      "a"        {}                      sum_{i>=1} z_i z_i*
      "b"        {"i": i} or {"i","j"}   z_i z_j*   (i <= j <= n-1 for pairs)
      "c"        {"l": vec, "m": m}      z_0^l0 .. z_{n-1}^l_{n-1} z_n*,  sum l = m
      "c_tilde"  {"l": vec, "m": m}      z_0^l0 .. z_{n-1}^l_{n-1},       sum l = m
      "c_index"  {"i": i, "m": m}        z_i^m z_n*
      "d"        {"p": vec, "m": m}      z_0^p0 .. z_{n-1}^p_{n-1} w,     sum p = 2m
    """
    n = pres.n
    if name == "a":
        word_terms = [(ONE, (z(i), z_star(i))) for i in range(1, n + 1)]
        return normalize(word_terms, pres)
    if name == "b":
        i = params["i"]
        j = params.get("j", i)
        if not (0 <= i <= n and 0 <= j <= n):
            raise ParameterError(f"b indices must lie in 0..{n}")
        return normalize((z(i), z_star(j)), pres)
    if name in ("c", "c_tilde"):
        l = tuple(params["l"])
        m = params["m"]
        if len(l) != n:
            raise ParameterError(f"c exponent vector must have length n = {n}")
        if any(e < 0 for e in l):
            raise ParameterError("c exponents must be nonnegative")
        if sum(l) != m:
            raise ParameterError(f"sum(l) = {sum(l)} must equal m = {m}")
        gens = []
        for i, e in enumerate(l):
            gens.extend([z(i)] * e)
        if name == "c":
            gens.append(z_star(n))
        return normalize(gens, pres)
    if name == "c_index":
        i = params["i"]
        m = params["m"]
        if not 0 <= i <= n:
            raise ParameterError(f"c_index i must lie in 0..{n}")
        if m < 1:
            raise ParameterError("c_index needs m >= 1")
        return normalize([z(i)] * m + [z_star(n)], pres)
    if name == "d":
        p = tuple(params["p"])
        m = params["m"]
        if pres.kind != "sigma":
            raise ParameterError("d elements live in sigma presentations")
        if len(p) != n:
            raise ParameterError(f"d exponent vector must have length n = {n}")
        if any(e < 0 for e in p):
            raise ParameterError("d exponents must be nonnegative")
        if sum(p) != 2 * m:
            raise ParameterError(f"sum(p) = {sum(p)} must equal 2m = {2 * m}")
        gens = []
        for i, e in enumerate(p):
            gens.extend([z(i)] * e)
        gens.append(W)
        return normalize(gens, pres)
    raise ParameterError(f"unknown named element {name!r}")


def degree_zero_membership(x, gspec):
    """True iff every monomial of x has the neutral degree under gspec."""
    from qwp.grading import INHOMOGENEOUS, degree

    if x.is_zero():
        return True
    d = degree(x, gspec)
    return d != INHOMOGENEOUS and d == 0
