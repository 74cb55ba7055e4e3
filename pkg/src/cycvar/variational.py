"""Variational derivatives, the triviality test, couplings of covectors with
sections, functionals, and the induced motion of covectors along a flow."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .words import FormalSum, Word, close, concat, odd_count, pass_sign
from .jets import (
    GeneratingSection,
    JetContext,
    d_power,
    evolutionary_apply,
)
from .operators import DifferentialOperator, linearization


def euler_derivative(
    ctx: JetContext,
    f: FormalSum,
    odd_kind: bool,
    index: int = 1,
    side: str = "left",
) -> FormalSum:
    """Variational derivative of a cyclic sum along one letter family.

    For each occurrence of the family, cut the circle there and apply (-D) to
    the multi-index of the removed letter.  `side` chooses on which side of
    the density the variation is collected; the two differ, per word, by a
    sign on odd families only.
    """
    if not f.cyclic:
        raise PreconditionError("euler_derivative expects a cyclic sum")
    if side not in ("left", "right"):
        raise PreconditionError(f"side must be 'left' or 'right', got {side!r}")
    out = FormalSum(cyclic=False)
    for w, c in f.terms.items():
        total_odd = odd_count(w)
        word_sign = 1
        if side == "right" and odd_kind and (total_odd - 1) % 2:
            word_sign = -1
        sign = 1
        for i, letter in enumerate(w):
            if letter.odd == odd_kind and letter.index == index:
                opened = FormalSum.single(
                    False, w[i + 1:] + w[:i], c * (sign * word_sign)
                )
                for w2, c2 in d_power(ctx, opened, letter.orders, negate=True).terms.items():
                    out.add_word(w2, c2)
            sign *= pass_sign(letter, total_odd)
    return out


def is_trivial(ctx: JetContext, f: FormalSum) -> bool:
    """Whether a cyclic sum is a total divergence (up to a pure-x remainder):
    all its variational derivatives vanish."""
    if not f.cyclic:
        raise PreconditionError("is_trivial expects a cyclic sum")
    for odd_kind, index in sorted(f.letters_present()):
        if euler_derivative(ctx, f, odd_kind, index):
            return False
    return True


@dataclass(frozen=True)
class Covector:
    """An m-tuple of open-word sums, to be coupled against section components.
    Components must have evenly many odd letters per word."""

    components: tuple[FormalSum, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        for comp in self.components:
            if comp.cyclic:
                raise PreconditionError("covector components must be open sums")
            if any(k % 2 for k in comp.odd_degrees()):
                raise PreconditionError("covector components must be even words")

    def __neg__(self) -> "Covector":
        return Covector(tuple(-c for c in self.components))


def coupling(ctx: JetContext, p, values) -> FormalSum:
    """Closed pairing of an m-tuple of covector components with an m-tuple of
    open-word sums: the cyclic closure of the componentwise concatenations."""
    p_components = p.components if isinstance(p, Covector) else tuple(p)
    values = tuple(values)
    if len(p_components) != ctx.fields or len(values) != ctx.fields:
        raise PreconditionError(f"coupling needs {ctx.fields} components per side")
    out = FormalSum(cyclic=True)
    for pc, vc in zip(p_components, values):
        out = out + close(concat(pc, vc))
    return out


@dataclass(frozen=True)
class Functional:
    """A cyclic density considered up to total divergences."""

    ctx: JetContext
    density: FormalSum

    def __post_init__(self):
        if not self.density.cyclic:
            raise PreconditionError("a functional stores a cyclic density")
        if self.density.odd_degrees() - {0}:
            raise PreconditionError("a functional density must be even-kind only")

    def equivalent(self, other: "Functional") -> bool:
        return is_trivial(self.ctx, self.density - other.density)

    def is_trivial(self) -> bool:
        return is_trivial(self.ctx, self.density)


def covector_of(ctx: JetContext, f) -> Covector:
    """The covector of variational derivatives of a functional (or density)
    along the position families."""
    density = f.density if isinstance(f, Functional) else f
    return Covector(
        tuple(
            euler_derivative(ctx, density, odd_kind=False, index=j)
            for j in range(1, ctx.fields + 1)
        )
    )


def lift_covector_velocity(
    ctx: JetContext, p: Covector, flow: GeneratingSection
) -> Covector:
    """Velocity induced on a covector by an evolutionary flow of the position
    fields: move the components along the flow and add the transported action
    of the adjoint linearization of the flow's components."""
    if flow.parity % 2:
        raise PreconditionError("covector transport needs an even flow")
    out = []
    for j in range(1, ctx.fields + 1):
        comp = evolutionary_apply(ctx, flow, p.components[j - 1])
        for i in range(1, ctx.fields + 1):
            ell = linearization(ctx, flow.even[i - 1], odd_slot=False, index=j)
            comp = comp + ell.adjoint().mirror_apply(p.components[i - 1])
        out.append(comp)
    return Covector(tuple(out))
