"""Exact arithmetic in finitely presented, evenly graded commutative rings over Z.

A ring is described by named generators with positive weights (weight w means
cohomological degree 2w), homogeneous integer relations, and a truncation
weight above which everything vanishes.  Because every graded piece is a
finitely generated abelian group, equality is decided by a canonical normal
form: for each weight the coefficient vector over the weight-d monomials is
reduced modulo the integer lattice spanned by all relation multiples of that
weight, using the Hermite normal form of that lattice.  This is exact, handles
torsion, and never needs rational arithmetic.

Example::

    >>> from blowup_chern.ring import Ring
    >>> free = Ring([("x", 1), ("e", 1)], [], 4)
    >>> x, e = free.gen("x"), free.gen("e")
    >>> ring = Ring([("x", 1), ("e", 1)], [x * x + x * e], 4)
    >>> ring.gen("x") * ring.gen("x")
    -x*e
"""

from dataclasses import dataclass

from . import kernels


class AlgebraError(Exception):
    """Base class for algebraic errors."""


class UnknownGenerator(AlgebraError):
    pass


class NonHomogeneousRelation(AlgebraError):
    pass


class ZeroTruncation(AlgebraError):
    pass


class RingMismatch(AlgebraError):
    pass


class DegreeMismatch(AlgebraError):
    pass


class IllDefinedRingMap(AlgebraError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    """A ring generator: `name` in cohomological degree 2*`weight`."""

    name: str
    weight: int


@dataclass(frozen=True)
class GradedBasis:
    """Free basis monomials and torsion invariant factors of one graded piece."""

    monomials: tuple
    torsion: tuple

    @property
    def rank(self):
        return len(self.monomials)


class Element:
    """An element of a :class:`Ring`, stored in canonical normal form.

    Supports +, -, * (by elements of the same ring or integers), ** and ==.
    Instances are immutable; all arithmetic returns new normalized elements.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring, terms, _normalized=False):
        self.ring = ring
        if not _normalized:
            terms = ring._normal_terms(terms)
        self._terms = terms

    @property
    def terms(self):
        """Monomial-to-coefficient mapping (a copy)."""
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def constant_term(self):
        return self._terms.get(self.ring._unit_monomial, 0)

    def weights(self):
        """Sorted weights carrying a nonzero component."""
        return sorted({self.ring.monomial_weight(m) for m in self._terms})

    def max_weight(self):
        ws = self.weights()
        return ws[-1] if ws else 0

    def is_homogeneous(self):
        return len(self.weights()) <= 1

    def weight(self):
        """Weight of a homogeneous element (0 for the zero element)."""
        ws = self.weights()
        if len(ws) > 1:
            raise DegreeMismatch(f"element is not homogeneous: {self}")
        return ws[0] if ws else 0

    def homogeneous_component(self, weight):
        ring = self.ring
        terms = {
            m: c for m, c in self._terms.items() if ring.monomial_weight(m) == weight
        }
        return Element(ring, terms, _normalized=True)

    def components(self):
        """Mapping weight -> homogeneous component, nonzero weights only."""
        return {w: self.homogeneous_component(w) for w in self.weights()}

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.ring is other.ring and self._terms == other._terms

    __hash__ = None

    def __neg__(self):
        return Element(
            self.ring, {m: -c for m, c in self._terms.items()}, _normalized=True
        )

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, Element):
            return NotImplemented
        if other.ring is not self.ring:
            raise RingMismatch("cannot add elements of different rings")
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0) + c
        return Element(self.ring, terms)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.ring.zero()
            # scaling can change the canonical representative (torsion), renormalize
            return Element(self.ring, {m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Element):
            return NotImplemented
        if other.ring is not self.ring:
            raise RingMismatch("cannot multiply elements of different rings")
        ring = self.ring
        trunc = ring.truncation
        weights = ring._weights
        acc = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                if sum(e * w for e, w in zip(mono, weights)) > trunc:
                    continue
                acc[mono] = acc.get(mono, 0) + c1 * c2
        return Element(ring, acc)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __repr__(self):
        return render_terms(self.ring, self._terms)


class Ring:
    """A finitely presented graded ring over Z, truncated above a weight."""

    def __init__(self, generators, relations=(), truncation_weight=0):
        gens = []
        for g in generators:
            if not isinstance(g, GeneratorSpec):
                g = GeneratorSpec(*g)
            gens.append(g)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise UnknownGenerator(f"duplicate generator names in {names}")
        for g in gens:
            if not isinstance(g.weight, int) or g.weight < 1:
                raise DegreeMismatch(
                    f"generator {g.name} must have integer weight >= 1"
                )
        if not isinstance(truncation_weight, int) or truncation_weight < 0:
            raise ZeroTruncation("truncation weight must be a nonnegative integer")
        self.generators = tuple(gens)
        self.truncation = truncation_weight
        self._weights = tuple(g.weight for g in gens)
        self._index = {g.name: i for i, g in enumerate(gens)}
        self._unit_monomial = (0,) * len(gens)
        self.relations = tuple(self._validate_relation(r) for r in relations)
        self.relations = tuple(r for r in self.relations if r)
        self._monomials_cache = {}
        self._mono_index_cache = {}
        self._reduction_cache = {}
        self._basis_cache = {}

    # -- construction helpers -------------------------------------------------

    def _validate_relation(self, rel):
        if isinstance(rel, Element):
            terms = rel.terms
            if len(rel.ring.generators) != len(self.generators) or any(
                a.name != b.name or a.weight != b.weight
                for a, b in zip(rel.ring.generators, self.generators)
            ):
                raise UnknownGenerator(
                    "relation element comes from a ring with different generators"
                )
        elif isinstance(rel, dict):
            terms = dict(rel)
        else:
            raise TypeError("relation must be an Element or a term dict")
        clean = {}
        for mono, coeff in terms.items():
            if coeff == 0:
                continue
            if len(mono) != len(self.generators) or any(
                not isinstance(e, int) or e < 0 for e in mono
            ):
                raise UnknownGenerator(f"bad monomial {mono} in relation")
            clean[tuple(mono)] = clean.get(tuple(mono), 0) + coeff
        clean = {m: c for m, c in clean.items() if c}
        if not clean:
            return None
        ws = {self.monomial_weight(m) for m in clean}
        if len(ws) > 1:
            raise NonHomogeneousRelation(
                f"relation mixes weights {sorted(ws)}: {render_terms(self, clean)}"
            )
        if next(iter(ws)) == 0:
            raise NonHomogeneousRelation("constant relations are not allowed")
        return clean

    def monomial_weight(self, mono):
        return sum(e * w for e, w in zip(mono, self._weights))

    # -- element constructors -------------------------------------------------

    def element(self, terms):
        """Element from a monomial->coefficient dict (validated, normalized)."""
        clean = {}
        for mono, coeff in terms.items():
            mono = tuple(mono)
            if len(mono) != len(self.generators) or any(
                not isinstance(e, int) or e < 0 for e in mono
            ):
                raise UnknownGenerator(f"bad monomial {mono}")
            if not isinstance(coeff, int):
                raise TypeError("coefficients must be integers")
            if coeff:
                clean[mono] = clean.get(mono, 0) + coeff
        return Element(self, clean)

    def zero(self):
        return Element(self, {}, _normalized=True)

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        if n == 0:
            return self.zero()
        return Element(self, {self._unit_monomial: n}, _normalized=True)

    def gen(self, name):
        if name not in self._index:
            raise UnknownGenerator(f"no generator named {name!r}")
        i = self._index[name]
        mono = tuple(1 if j == i else 0 for j in range(len(self.generators)))
        return self.element({mono: 1})

    def monomial(self, mono, coeff=1):
        return self.element({tuple(mono): coeff})

    # -- graded structure -----------------------------------------------------

    def monomials(self, weight):
        """Weight-`weight` monomials in canonical (descending lex) order."""
        if weight in self._monomials_cache:
            return self._monomials_cache[weight]
        if weight > self.truncation or weight < 0:
            result = ()
        else:
            out = []
            exps = [0] * len(self.generators)

            def rec(i, remaining):
                if i == len(exps):
                    if remaining == 0:
                        out.append(tuple(exps))
                    return
                w = self._weights[i]
                for e in range(remaining // w + 1):
                    exps[i] = e
                    rec(i + 1, remaining - e * w)
                exps[i] = 0

            if len(exps) == 0:
                result = ((),) if weight == 0 else ()
            else:
                rec(0, weight)
                result = tuple(sorted(out, reverse=True))
        self._monomials_cache[weight] = result
        return result

    def _mono_index(self, weight):
        if weight not in self._mono_index_cache:
            self._mono_index_cache[weight] = {
                m: i for i, m in enumerate(self.monomials(weight))
            }
        return self._mono_index_cache[weight]

    def relation_rows(self, weight):
        """Vectors (over the weight-`weight` monomials) spanning the relation lattice."""
        if weight < 0 or weight > self.truncation:
            return []
        idx = self._mono_index(weight)
        n = len(idx)
        rows = []
        for rel in self.relations:
            rw = self.monomial_weight(next(iter(rel)))
            if rw > weight:
                continue
            for mult in self.monomials(weight - rw):
                row = [0] * n
                for rmono, rc in rel.items():
                    prod = tuple(a + b for a, b in zip(rmono, mult))
                    row[idx[prod]] += rc
                if any(row):
                    rows.append(row)
        return rows

    def _reduction_data(self, weight):
        if weight not in self._reduction_cache:
            rows = self.relation_rows(weight)
            if rows:
                self._reduction_cache[weight] = kernels.hnf_rows(rows)
            else:
                self._reduction_cache[weight] = ([], [])
        return self._reduction_cache[weight]

    def _normal_terms(self, terms):
        buckets = {}
        for mono, coeff in terms.items():
            if not coeff:
                continue
            w = self.monomial_weight(mono)
            if w > self.truncation:
                continue
            bucket = buckets.setdefault(w, {})
            bucket[mono] = bucket.get(mono, 0) + coeff
        out = {}
        for w, bucket in buckets.items():
            rows, pivots = self._reduction_data(w)
            if not rows:
                out.update({m: c for m, c in bucket.items() if c})
                continue
            monos = self.monomials(w)
            idx = self._mono_index(w)
            vec = [0] * len(monos)
            for m, c in bucket.items():
                vec[idx[m]] = c
            vec = kernels.reduce_vector(vec, rows, pivots)
            for i, c in enumerate(vec):
                if c:
                    out[monos[i]] = c
        return out

    def normal_form(self, element):
        """Canonical representative of `element` (idempotent)."""
        if element.ring is not self:
            raise RingMismatch("element belongs to a different ring")
        return Element(self, element._terms, _normalized=True)

    def graded_basis(self, weight):
        """Free basis monomials and torsion invariant factors at `weight`."""
        if weight not in self._basis_cache:
            rows, pivots = self._reduction_data(weight)
            pivot_set = set(pivots)
            free = tuple(
                m
                for i, m in enumerate(self.monomials(weight))
                if i not in pivot_set
            )
            torsion = tuple(
                f for f in kernels.smith_invariants(rows) if f > 1
            )
            self._basis_cache[weight] = GradedBasis(free, torsion)
        return self._basis_cache[weight]

    def rank(self, weight):
        return self.graded_basis(weight).rank

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.weight}" for g in self.generators)
        return f"Ring([{gens}], {len(self.relations)} relations, trunc={self.truncation})"


def make_ring(generators, relations=(), truncation_weight=0):
    """Build a validated ring presentation.

    Each relation must be homogeneous in the declared generators; the quotient
    is well defined because equality is decided per weight by lattice
    reduction, under which every relation (and all its monomial multiples)
    normalizes to zero.
    """
    ring = Ring(generators, relations, truncation_weight)
    for rel in ring.relations:
        assert not ring._normal_terms(dict(rel)), "relation does not normalize to 0"
    return ring


class RingMap:
    """A degree-preserving ring homomorphism given on generators.

    Well-definedness (every source relation maps to zero) is checked at
    construction unless `check=False`.
    """

    def __init__(self, source, target, images, check=True):
        self.source = source
        self.target = target
        imgs = {}
        for g in source.generators:
            if g.name not in images:
                raise UnknownGenerator(f"no image given for generator {g.name}")
            img = images[g.name]
            if isinstance(img, int):
                img = target.from_int(img)
            if img.ring is not target:
                raise RingMismatch(f"image of {g.name} lies in the wrong ring")
            if img and (not img.is_homogeneous() or img.weight() != g.weight):
                raise DegreeMismatch(
                    f"image of {g.name} must be homogeneous of weight {g.weight}"
                )
            imgs[g.name] = img
        extra = set(images) - set(imgs)
        if extra:
            raise UnknownGenerator(f"images given for unknown generators {sorted(extra)}")
        self.images = imgs
        self._image_list = [imgs[g.name] for g in source.generators]
        self._power_cache = [{} for _ in source.generators]
        if check:
            for rel in source.relations:
                if self._apply_terms(rel):
                    raise IllDefinedRingMap(
                        f"relation {render_terms(source, rel)} does not map to zero"
                    )

    def _gen_power(self, i, e):
        cache = self._power_cache[i]
        if e not in cache:
            if e == 0:
                cache[e] = self.target.one()
            else:
                cache[e] = self._gen_power(i, e - 1) * self._image_list[i]
        return cache[e]

    def _apply_terms(self, terms):
        acc = self.target.zero()
        for mono, coeff in terms.items():
            part = self.target.from_int(coeff)
            for i, e in enumerate(mono):
                if e and part:
                    part = part * self._gen_power(i, e)
            acc = acc + part
        return acc

    def __call__(self, element):
        if element.ring is not self.source:
            raise RingMismatch("element does not belong to the map's source ring")
        return self._apply_terms(element._terms)

    def then(self, other):
        """Composition: first self, then other."""
        if other.source is not self.target:
            raise RingMismatch("maps do not compose")
        return RingMap(
            self.source,
            other.target,
            {name: other(img) for name, img in self.images.items()},
            check=False,
        )

    def __repr__(self):
        ims = ", ".join(f"{n} -> {v!r}" for n, v in self.images.items())
        return f"RingMap({ims})"


def apply_map(ring_map, element):
    """Apply a :class:`RingMap` to an element (same as calling the map)."""
    return ring_map(element)


def identity_map(ring):
    return RingMap(ring, ring, {g.name: ring.gen(g.name) for g in ring.generators},
                   check=False)


# -- rendering ----------------------------------------------------------------


def render_monomial(ring, mono, extra=""):
    parts = []
    for g, e in zip(ring.generators, mono):
        if e == 1:
            parts.append(g.name)
        elif e > 1:
            parts.append(f"{g.name}^{e}")
    if extra:
        parts.append(extra)
    return "*".join(parts) if parts else "1"


def render_terms(ring, terms, extra=""):
    """Deterministic polynomial rendering: ascending weight, then monomial order."""
    if not terms:
        return "0"
    keyed = sorted(
        terms.items(),
        key=lambda mc: (ring.monomial_weight(mc[0]), tuple(-e for e in mc[0])),
    )
    out = []
    for mono, coeff in keyed:
        name = render_monomial(ring, mono, extra)
        if name == "1":
            body = str(abs(coeff))
        elif abs(coeff) == 1:
            body = name
        else:
            body = f"{abs(coeff)}*{name}"
        if not out:
            out.append(body if coeff > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(out)
