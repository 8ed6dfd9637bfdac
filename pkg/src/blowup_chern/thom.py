"""Cohomology of the Thom space of a complex line bundle.

All arithmetic happens in the ambient ring base[x]/(x^2 + x*e), where e is the
line bundle's degree-2 Euler class; intermediate expressions (inverses of
classes like 1 + x + e) only exist there.  The Thom space's reduced cohomology
is the subgroup Z + base*{x}, and membership is enforced at the boundaries
where results are consumed.

Because x is declared first and relations led by x^2 eliminate all higher x
powers from canonical forms, every normalized element has x-exponent at most
one, which makes the subgroup split a matter of reading exponents.
"""

from .ring import (
    AlgebraError,
    DegreeMismatch,
    GeneratorSpec,
    RingMismatch,
    render_terms,
)
from .chern import (
    RankMismatch,
    TotalClass,
    extend_ring,
    fresh_name,
    invert_unit,
    total_class,
)


class SubgroupViolation(AlgebraError):
    """An element that must lie in Z + base*{x} has a pure-base part."""


class ThomRing:
    """Ambient ring of the Thom space of a line bundle with Euler class `euler`."""

    def __init__(self, base, euler):
        if euler.ring is not base:
            raise RingMismatch("Euler class must live on the base ring")
        if euler and (not euler.is_homogeneous() or euler.weight() != 1):
            raise DegreeMismatch("Euler class must be homogeneous of weight 1")
        self.base = base
        self.euler = euler
        xname = fresh_name({g.name for g in base.generators}, "x")
        rel = {(2,) + (0,) * len(base.generators): 1}
        for mono, coeff in euler.terms.items():
            key = (1,) + mono
            rel[key] = rel.get(key, 0) + coeff
        self.ambient, self.include = extend_ring(
            base, [GeneratorSpec(xname, 1)], [rel], base.truncation + 1
        )
        self.x_name = xname
        self.x = self.ambient.gen(xname)

    def split(self, element):
        """Decompose as (integer constant, base element a) with element == c + a*x.

        Raises SubgroupViolation when a positive-weight pure-base term remains.
        """
        if element.ring is not self.ambient:
            raise RingMismatch("element does not live in the Thom ring")
        const = 0
        xpart = {}
        for mono, coeff in element.terms.items():
            if mono[0] == 0:
                if any(mono[1:]):
                    raise SubgroupViolation(
                        "element leaves the Thom subgroup: "
                        + render_terms(self.ambient, {mono: coeff})
                    )
                const = coeff
            elif mono[0] == 1:
                xpart[mono[1:]] = coeff
            else:
                raise AssertionError("canonical form kept an x power above 1")
        return const, self.base.element(xpart)

    def contains_in_subgroup(self, element):
        try:
            self.split(element)
        except SubgroupViolation:
            return False
        return True

    def __repr__(self):
        return f"ThomRing(euler={self.euler!r})"


def thom_ring(base, euler):
    return ThomRing(base, euler)


def relative_class_chern(c_xi, m, thom):
    """Total Chern class of the Thom-space difference class built from a bundle.

    For a rank-m bundle over the base with total class c_xi this is

        (sum over 0 <= r <= m of (1 + x)^(m - r) * c_r) * c_xi^(-1),

    normalized in the ambient ring.  The result minus 1 lies in base*{x}; a
    leftover pure-base component signals inconsistent input.
    """
    if c_xi.value.ring is not thom.base:
        raise RingMismatch("bundle class must live on the Thom ring's base")
    if c_xi.value.max_weight() > m:
        raise RankMismatch(f"class has components above weight {m}")
    amb = thom.ambient
    x = thom.x
    one_plus_x = amb.one() + x
    powers = [amb.one()]
    for _ in range(m):
        powers.append(powers[-1] * one_plus_x)
    acc = amb.zero()
    for r in range(m + 1):
        acc = acc + powers[m - r] * thom.include(c_xi.component(r))
    value = acc * invert_unit(thom.include(c_xi.value))
    thom.split(value - amb.one())
    return total_class(value, 0)


def q_pullback(element, context):
    """Pull a Thom-subgroup element back to the blow-up decomposition.

    Constants land in the pulled-back summand; a term a*t^r*x maps to
    (-1)^r * a * omega^(r+1), with omega powers at or above the codimension
    rewritten through the divisor relation of `context`.
    """
    if isinstance(element, TotalClass):
        element = element.value
    thom = context.thom
    if thom.base is not context.bundle.total:
        raise RingMismatch("Thom ring is not the one attached to the context")
    const, xcoeff = thom.split(element)
    result = context.scalar(const)
    for r, a in context.bundle.fiber_components(xcoeff).items():
        if a:
            result = result + context.dec(a, r + 1) * ((-1) ** r)
    return result
