"""Total-class arithmetic for complex vector bundles.

Total classes are formal sums 1 + c_1 + c_2 + ... living in a graded ring,
with the usual Whitney calculus: products for direct sums, a geometric-series
inverse for formal differences, the closed formula for twisting by a line
bundle, duals, projective-bundle rings, and integer Chern numbers against a
top-degree pairing.
"""

from dataclasses import dataclass

from .ring import (
    AlgebraError,
    DegreeMismatch,
    Element,
    GeneratorSpec,
    Ring,
    RingMap,
    RingMismatch,
    render_monomial,
)


class NonUnitLeadingTerm(AlgebraError):
    pass


class RankMismatch(AlgebraError):
    pass


class NoPairing(AlgebraError):
    pass


class BadPartition(AlgebraError):
    pass


@dataclass(frozen=True, eq=False)
class TotalClass:
    """A total characteristic class: weight-0 component 1, plus higher terms.

    `rank` is the complex rank of the bundle the class came from, when known.
    """

    value: Element
    rank: int

    def component(self, r):
        return self.value.homogeneous_component(r)

    def map_through(self, ring_map):
        return TotalClass(ring_map(self.value), self.rank)

    def __eq__(self, other):
        if isinstance(other, TotalClass):
            return self.value == other.value
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, TotalClass):
            return TotalClass(self.value * other.value, self.rank + other.rank)
        return NotImplemented

    def __repr__(self):
        return f"TotalClass({self.value!r}, rank={self.rank})"


def total_class(value, rank):
    """Validated constructor: the weight-0 component must be 1."""
    if value.constant_term() != 1:
        raise NonUnitLeadingTerm(
            f"total class must start with 1, got {value.constant_term()}"
        )
    return TotalClass(value, rank)


def invert_unit(element):
    """Inverse of an element with weight-0 component 1, as a geometric series.

    The positive-weight part is nilpotent under truncation, so
    (1 + N)^(-1) = 1 - N + N^2 - ... terminates.
    """
    if element.constant_term() != 1:
        raise NonUnitLeadingTerm("only elements with constant term 1 are invertible")
    ring = element.ring
    n = element - ring.one()
    acc = ring.one()
    term = ring.one()
    for _ in range(ring.truncation):
        term = -term * n
        if term.is_zero():
            break
        acc = acc + term
    return acc


def total_inverse(tc):
    """Total class of a formal difference: C(xi - eta) = C(xi) * C(eta)^(-1)."""
    if isinstance(tc, Element):
        return invert_unit(tc)
    return TotalClass(invert_unit(tc.value), -tc.rank)


def tensor_line_bundle(t, c_xi, m):
    """Total class of (line bundle with c_1 = t) tensor (rank-m bundle with class c_xi).

    Computed as sum over 0 <= r <= m of (1 + t)^(m - r) * c_r(xi), matching
    the expansion of prod_i (1 + t + s_i) in the Chern roots s_i.
    """
    ring = c_xi.value.ring
    if t.ring is not ring:
        raise RingMismatch("twisting class lies in the wrong ring")
    if t and (not t.is_homogeneous() or t.weight() != 1):
        raise DegreeMismatch("twisting class must be homogeneous of weight 1")
    if c_xi.value.max_weight() > m:
        raise RankMismatch(
            f"class has components above weight {m}; rank does not match"
        )
    base = ring.one() + t
    acc = ring.zero()
    power = ring.one()
    powers = [power]
    for _ in range(m):
        power = power * base
        powers.append(power)
    for r in range(m + 1):
        acc = acc + powers[m - r] * c_xi.component(r)
    return total_class(acc, m)


def dual_total_class(tc):
    """Total class of the conjugate bundle: c_r picks up the sign (-1)^r."""
    ring = tc.value.ring
    acc = ring.zero()
    for w, part in tc.value.components().items():
        acc = acc + part * ((-1) ** w)
    return TotalClass(acc, tc.rank)


@dataclass(frozen=True, eq=False)
class ProjectiveBundle:
    """The cohomology ring of P(gamma) for a rank-k bundle gamma over a base.

    `total` is the ring of the projectivization, `pull` the pullback map from
    the base, `fiber_gen` the degree-2 class of the tautological line bundle.
    Canonical forms keep the fiber generator's exponent below k, so elements
    split uniquely as sum_r (base class)*fiber_gen^r with r < k.
    """

    base: Ring
    total: Ring
    pull: RingMap
    fiber_name: str
    k: int

    @property
    def fiber_gen(self):
        return self.total.gen(self.fiber_name)

    def fiber_components(self, element):
        """Split as {r: base element} with element == sum pull(a_r) * t^r."""
        if element.ring is not self.total:
            raise RingMismatch("element does not live on the projective bundle")
        parts = {}
        for mono, coeff in element.terms.items():
            r = mono[0]
            bucket = parts.setdefault(r, {})
            bucket[mono[1:]] = coeff
        return {r: self.base.element(terms) for r, terms in sorted(parts.items())}

    def assemble(self, parts):
        """Inverse of fiber_components."""
        acc = self.total.zero()
        t = self.fiber_gen
        for r, a in parts.items():
            acc = acc + self.pull(a) * t**r
        return acc


def fresh_name(taken, base):
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def extend_ring(base, new_gens, extra_relations, truncation):
    """Ring with `new_gens` prepended to base's generators and relations lifted.

    New generators come first so that, in the descending-lex monomial order,
    relations led by powers of the new generators eliminate those powers from
    canonical forms.
    """
    pad = len(new_gens)
    gens = list(new_gens) + list(base.generators)
    lifted = [
        {(0,) * pad + mono: c for mono, c in rel.items()} for rel in base.relations
    ]
    ring = Ring(gens, lifted + list(extra_relations), truncation)
    inclusion = RingMap(
        base,
        ring,
        {g.name: ring.gen(g.name) for g in base.generators},
        check=False,
    )
    return ring, inclusion


def projective_bundle_ring(base_ring, chern):
    """Cohomology of the projectivization of a bundle with Chern classes `chern`.

    `chern` lists c_1 .. c_k as elements of the base ring (c_r homogeneous of
    weight r, possibly zero).  The result adjoins the degree-2 class t of the
    tautological line bundle, subject to the rank relation

        t^k - c_1 t^(k-1) + c_2 t^(k-2) - ... + (-1)^k c_k = 0,

    the alternating signs reflecting that t is the first Chern class of the
    tautological subbundle.  Truncation grows by the fiber dimension k - 1.
    """
    k = len(chern)
    if k < 1:
        raise RankMismatch("projective bundle needs rank >= 1")
    for r, c in enumerate(chern, start=1):
        if c.ring is not base_ring:
            raise RingMismatch("Chern classes must live on the base ring")
        if c and (not c.is_homogeneous() or c.weight() != r):
            raise DegreeMismatch(f"c_{r} must be homogeneous of weight {r}")
    tname = fresh_name({g.name for g in base_ring.generators}, "t")
    trunc = base_ring.truncation + (k - 1)
    rel = {(k,) + (0,) * len(base_ring.generators): 1}
    for r, c in enumerate(chern, start=1):
        sign = (-1) ** r
        for mono, coeff in c.terms.items():
            key = (k - r,) + mono
            rel[key] = rel.get(key, 0) + sign * coeff
    ring, inclusion = extend_ring(
        base_ring, [GeneratorSpec(tname, 1)], [rel], trunc
    )
    return ProjectiveBundle(base_ring, ring, inclusion, tname, k)


def exceptional_total_chern(bundle, center_chern, normal_chern):
    """Total Chern class of the projectivized normal bundle itself.

    The tangent bundle splits off the base's tangent bundle plus the bundle of
    homomorphisms from the tautological line into its complement; the latter
    is the conjugate line tensored with the full pullback, divided by the
    trivial conjugate-times-itself factor.
    """
    t = bundle.fiber_gen
    pulled = normal_chern.map_through(bundle.pull)
    hom_part = tensor_line_bundle(-t, pulled, bundle.k)
    unit_part = tensor_line_bundle(
        -t, total_class(bundle.total.one() + t, 1), 1
    )
    value = (
        bundle.pull(center_chern.value)
        * hom_part.value
        * invert_unit(unit_part.value)
    )
    return total_class(value, center_chern.rank + bundle.k - 1)


class Pairing:
    """Evaluation against the fundamental class at the top weight.

    `values` assigns an integer to every free basis monomial of the top graded
    piece; classes are normalized first, so any declared monomial expression
    that reduces to a basis monomial works.
    """

    def __init__(self, ring, values):
        self.ring = ring
        self.top_weight = ring.truncation
        basis = ring.graded_basis(self.top_weight)
        vals = {}
        for mono, v in values.items():
            mono = tuple(mono)
            if mono not in basis.monomials:
                raise NoPairing(
                    f"{render_monomial(ring, mono)} is not a top-weight basis monomial"
                )
            vals[mono] = v
        missing = set(basis.monomials) - set(vals)
        if missing:
            names = ", ".join(render_monomial(ring, m) for m in sorted(missing))
            raise NoPairing(f"pairing misses top basis monomials: {names}")
        self.values = vals

    def evaluate(self, element):
        if element.ring is not self.ring:
            raise RingMismatch("element does not belong to the pairing's ring")
        total = 0
        for mono, coeff in element.homogeneous_component(self.top_weight).terms.items():
            if mono not in self.values:
                raise NoPairing(
                    f"no pairing value for {render_monomial(self.ring, mono)}"
                )
            total += coeff * self.values[mono]
        return total


def partitions_of(n, max_part=None):
    """Partitions of n as descending tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return out


def chern_numbers(tc, pairing, partition_list):
    """Chern numbers <c_{i_1} ... c_{i_m}> for each partition of the top weight."""
    if pairing is None:
        raise NoPairing("no pairing data available")
    if tc.value.ring is not pairing.ring:
        raise RingMismatch("class and pairing live in different rings")
    top = pairing.top_weight
    out = {}
    for part in partition_list:
        part = tuple(sorted(part, reverse=True))
        if sum(part) != top or any(p < 1 for p in part):
            raise BadPartition(f"{part} is not a partition of {top}")
        prod = pairing.ring.one()
        for p in part:
            prod = prod * tc.component(p)
        out[part] = pairing.evaluate(prod)
    return out
