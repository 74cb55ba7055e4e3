"""Multivectors as cyclic densities in the paired odd letters, the graded
bracket between them, their evaluation on covectors, and the structural
identity checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .words import FormalSum, close, concat
from .jets import (
    GeneratingSection,
    JetContext,
    evolutionary_apply,
    graded_commutator,
    make_section,
)
from .operators import DifferentialOperator
from .variational import (
    Covector,
    Functional,
    coupling,
    euler_derivative,
    is_trivial,
)


@dataclass(frozen=True)
class Multivector:
    """A homogeneous cyclic density of fixed degree in the odd letters,
    considered up to total divergences.

    For degree 1 the extracted section components are stored; for degree 2
    with a single field pair, the extracted one-slot operator.
    """

    ctx: JetContext
    degree: int
    density: FormalSum
    section: tuple[FormalSum, ...] | None = None
    operator: DifferentialOperator | None = None

    def is_zero(self) -> bool:
        return self.density.is_zero()


def normalize_multivector(
    ctx: JetContext, density: FormalSum, degree: int | None = None
) -> Multivector:
    """Re-present a homogeneous density in the standard form with one bare
    odd letter out front, scaling by the degree; extract the section (degree
    1) or the one-slot operator (degree 2, single field pair) on the way."""
    if not density.cyclic:
        raise PreconditionError("a multivector density must be cyclic")
    degrees = density.odd_degrees()
    if len(degrees) > 1:
        raise PreconditionError(f"density mixes odd degrees {sorted(degrees)}")
    found = degrees.pop() if degrees else None
    if found is not None:
        if degree is not None and degree != found:
            raise PreconditionError(
                f"density has degree {found}, expected {degree}"
            )
        degree = found
    elif degree is None:
        degree = 0

    if degree == 0 or density.is_zero():
        section = None
        if degree == 1:
            section = tuple(
                FormalSum(cyclic=False) for _ in range(ctx.fields)
            )
        return Multivector(ctx, degree, density, section=section)

    variations = [
        euler_derivative(ctx, density, odd_kind=True, index=j)
        for j in range(1, ctx.fields + 1)
    ]
    rebuilt = FormalSum(cyclic=True)
    for j, var in enumerate(variations, start=1):
        slot_word = FormalSum.single(False, (ctx.letter(True, j),), ctx.one())
        for w, c in close(concat(slot_word, var)).terms.items():
            rebuilt.add_word(w, c * Fraction(1, degree))

    section = tuple(variations) if degree == 1 else None
    operator = None
    if degree == 2 and ctx.fields == 1:
        operator = DifferentialOperator(ctx)
        for w, c in variations[0].terms.items():
            pos = next(i for i, l in enumerate(w) if l.odd)
            operator.add_term(w[:pos], w[pos].orders, w[pos + 1:], c)
    return Multivector(ctx, degree, rebuilt, section=section, operator=operator)


def multivector_from_operator(
    ctx: JetContext, op: DifferentialOperator
) -> Multivector:
    """The degree-2 density of a skew one-slot operator, acting diagonally:
    half the closed pairing of the odd letters with their images."""
    density = FormalSum(cyclic=True)
    for j in range(1, ctx.fields + 1):
        b_j = FormalSum.single(False, (ctx.letter(True, j),), ctx.one())
        paired = close(concat(b_j, op.apply(b_j)))
        for w, c in paired.terms.items():
            density.add_word(w, c * Fraction(1, 2))
    return normalize_multivector(ctx, density, degree=2)


def functional_multivector(ctx: JetContext, f) -> Multivector:
    """Degree-0 multivector wrapping a functional (or plain density)."""
    density = f.density if isinstance(f, Functional) else f
    return normalize_multivector(ctx, density, degree=0)


def q_field(ctx: JetContext, mv: Multivector) -> GeneratingSection:
    """The evolutionary field attached to a multivector: even components from
    the right variation along the odd letters (negated), odd components from
    the variation along the position letters."""
    even = tuple(
        -euler_derivative(ctx, mv.density, odd_kind=True, index=j, side="right")
        for j in range(1, ctx.fields + 1)
    )
    odd = tuple(
        euler_derivative(ctx, mv.density, odd_kind=False, index=j)
        for j in range(1, ctx.fields + 1)
    )
    return make_section(ctx, even=even, odd=odd, parity=(mv.degree - 1) % 2)


def schouten_bracket(ctx: JetContext, xi: Multivector, eta: Multivector) -> Multivector:
    """Graded bracket of two multivectors: act with the field of the first on
    the density of the second, then renormalize."""
    density = evolutionary_apply(ctx, q_field(ctx, xi), eta.density)
    degree = max(xi.degree + eta.degree - 1, 0)
    return normalize_multivector(ctx, density, degree=degree)


def schouten_by_variations(
    ctx: JetContext, xi: Multivector, eta: Multivector
) -> FormalSum:
    """Independent coordinate route to the bracket density: pair the
    variations of the two arguments family by family.  Differs from the
    primary route by a total divergence only."""
    out = FormalSum(cyclic=True)
    for j in range(1, ctx.fields + 1):
        da_xi = euler_derivative(ctx, xi.density, odd_kind=False, index=j)
        db_eta = euler_derivative(ctx, eta.density, odd_kind=True, index=j)
        out = out + close(concat(da_xi, db_eta))
        db_xi = euler_derivative(ctx, xi.density, odd_kind=True, index=j, side="right")
        da_eta = euler_derivative(ctx, eta.density, odd_kind=False, index=j)
        out = out - close(concat(db_xi, da_eta))
    return out


def contraction_section(ctx: JetContext, p: Covector) -> GeneratingSection:
    """The odd insertion field of a covector: odd letters are replaced by the
    covector components, position letters are untouched."""
    return make_section(ctx, odd=p.components, parity=1)


def evaluate(ctx: JetContext, mv: Multivector, covectors) -> Functional:
    """Value of a degree-k multivector on k covectors, by iterated insertion;
    the insertions anticommute, so the result is totally antisymmetric."""
    covectors = tuple(covectors)
    if len(covectors) != mv.degree:
        raise PreconditionError(
            f"degree {mv.degree} multivector takes {mv.degree} covectors, got {len(covectors)}"
        )
    density = mv.density
    for p in covectors:
        density = evolutionary_apply(ctx, contraction_section(ctx, p), density)
    if density.odd_degrees() - {0}:
        raise PreconditionError("evaluation left odd letters behind")
    return Functional(ctx, density)


def check_skew(ctx: JetContext, xi: Multivector, eta: Multivector) -> bool:
    """Graded antisymmetry of the bracket, up to total divergences."""
    lhs = schouten_bracket(ctx, xi, eta).density
    rhs = schouten_bracket(ctx, eta, xi).density
    sign = -1 if ((xi.degree - 1) * (eta.degree - 1)) % 2 else 1
    return is_trivial(ctx, lhs + rhs.scale(sign))


def check_jacobi(
    ctx: JetContext, xi: Multivector, eta: Multivector, omega: Multivector
) -> bool:
    """Graded Jacobi identity of the bracket, up to total divergences."""
    sign = -1 if ((xi.degree - 1) * (eta.degree - 1)) % 2 else 1
    lhs = schouten_bracket(ctx, xi, schouten_bracket(ctx, eta, omega)).density
    mid = schouten_bracket(ctx, schouten_bracket(ctx, xi, eta), omega).density
    rhs = schouten_bracket(ctx, eta, schouten_bracket(ctx, xi, omega)).density
    return is_trivial(ctx, lhs - mid - rhs.scale(sign))


def _probe_words(ctx: JetContext) -> list[FormalSum]:
    """Small deterministic family of open even words used to test section
    components for triviality of their pairings."""
    probes = [FormalSum.single(False, (), ctx.one())]
    for j in range(1, ctx.fields + 1):
        a = ctx.letter(False, j)
        a_x = ctx.shift(a, 1)
        probes.append(FormalSum.single(False, (a,), ctx.one()))
        probes.append(FormalSum.single(False, (a_x,), ctx.one()))
        probes.append(FormalSum.single(False, (a, a), ctx.one()))
        probes.append(FormalSum.single(False, (a, a_x), ctx.one()))
        probes.append(FormalSum.single(False, (a,), ctx.x_power(1, 1)))
        probes.append(FormalSum.single(False, (ctx.shift(a_x, 1),), ctx.one()))
    return probes


def sections_match(
    ctx: JetContext, u: GeneratingSection, v: GeneratingSection
) -> bool:
    """Whether two sections generate the same field: exact equality, else
    triviality of every probe pairing with the difference."""
    if u == v:
        return True
    probes = _probe_words(ctx)
    for cu, cv in zip(u.even + u.odd, v.even + v.odd):
        diff = cu - cv
        if diff.is_zero():
            continue
        for probe in probes:
            if not is_trivial(ctx, close(concat(probe, diff))):
                return False
    return True


def check_field_morphism(
    ctx: JetContext, xi: Multivector, eta: Multivector
) -> bool:
    """The field of a bracket matches the graded commutator of the fields."""
    qx = q_field(ctx, xi)
    qe = q_field(ctx, eta)
    commutator = graded_commutator(ctx, qx, qe)
    bracket_field = q_field(ctx, schouten_bracket(ctx, xi, eta))
    return sections_match(ctx, commutator, bracket_field)
