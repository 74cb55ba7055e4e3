"""Jet-space bookkeeping: contexts, total derivatives, cuts, and the action
of evolutionary fields on word sums."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundExceeded, PreconditionError
from .words import (
    Coefficient,
    FormalSum,
    Letter,
    Word,
    odd_count,
    pass_sign,
)


@dataclass(frozen=True)
class JetContext:
    """Shape of the jet alphabet: number of field pairs, number of base
    directions, and an optional cap on derivative orders."""

    fields: int = 1
    directions: int = 1
    max_order: int | None = None

    def __post_init__(self):
        if self.fields < 1:
            raise PreconditionError("need at least one field pair")
        if self.directions < 1:
            raise PreconditionError("need at least one base direction")
        if self.max_order is not None and self.max_order < 0:
            raise PreconditionError("max_order must be nonnegative")

    # -- letters ---------------------------------------------------------

    def zero_orders(self) -> tuple[int, ...]:
        return (0,) * self.directions

    def letter(self, odd: bool, index: int, orders=None) -> Letter:
        if not 1 <= index <= self.fields:
            raise PreconditionError(
                f"field index {index} outside 1..{self.fields}"
            )
        if orders is None:
            orders = self.zero_orders()
        orders = tuple(orders)
        if len(orders) != self.directions or any(o < 0 for o in orders):
            raise PreconditionError(f"bad derivative multi-index {orders}")
        if self.max_order is not None and sum(orders) > self.max_order:
            raise BoundExceeded(
                f"derivative order {sum(orders)} exceeds cap {self.max_order}"
            )
        return Letter(odd, index, orders)

    def check_direction(self, direction: int) -> None:
        if not 1 <= direction <= self.directions:
            raise PreconditionError(
                f"direction {direction} outside 1..{self.directions}"
            )

    def shift(self, letter: Letter, direction: int) -> Letter:
        """The letter with one more derivative along a 1-based direction."""
        d = direction - 1
        orders = letter.orders[:d] + (letter.orders[d] + 1,) + letter.orders[d + 1:]
        if self.max_order is not None and sum(orders) > self.max_order:
            raise BoundExceeded(
                f"derivative order {sum(orders)} exceeds cap {self.max_order}"
            )
        return Letter(letter.odd, letter.index, orders)

    # -- coefficients ----------------------------------------------------

    def one(self) -> Coefficient:
        return Coefficient.constant(1, self.directions)

    def const(self, value) -> Coefficient:
        return Coefficient.constant(value, self.directions)

    def x_power(self, direction: int = 1, power: int = 1, value=1) -> Coefficient:
        self.check_direction(direction)
        exps = [0] * self.directions
        exps[direction - 1] = power
        return Coefficient.monomial(exps, value)


def total_derivative(ctx: JetContext, f: FormalSum, direction: int = 1) -> FormalSum:
    """Total derivative along a base direction: acts on the coefficient and on
    each letter by the product rule (no signs; the derivation is even)."""
    ctx.check_direction(direction)
    out = FormalSum(f.cyclic)
    for w, c in f.terms.items():
        dc = c.diff(direction)
        if dc:
            out.add_word(w, dc)
        for i, letter in enumerate(w):
            out.add_word(w[:i] + (ctx.shift(letter, direction),) + w[i + 1:], c)
    return out


def d_power(ctx: JetContext, f: FormalSum, orders, negate: bool = False) -> FormalSum:
    """Iterated total derivative D^orders; with negate=True apply (-D)^orders."""
    orders = tuple(orders)
    total = sum(orders)
    for direction, count in enumerate(orders, start=1):
        for _ in range(count):
            f = total_derivative(ctx, f, direction)
    if negate and total % 2:
        f = -f
    return f


def partial_jet(ctx: JetContext, f: FormalSum, target: Letter) -> FormalSum:
    """Cyclic partial derivative with respect to one exact letter: cut the
    circle at each occurrence, reading onward from the cut."""
    if not f.cyclic:
        raise PreconditionError("partial_jet expects a cyclic sum")
    out = FormalSum(cyclic=False)
    for w, c in f.terms.items():
        total_odd = odd_count(w)
        sign = 1
        for i, letter in enumerate(w):
            if letter == target:
                opened = w[i + 1:] + w[:i]
                out.add_word(opened, c * sign)
            sign *= pass_sign(letter, total_odd)
    return out


@dataclass(frozen=True)
class GeneratingSection:
    """Componentwise data of an evolutionary field: what it inserts at even
    slots and at odd slots, plus the parity of the field itself.

    Component j of `even` replaces position letters of field j; component j of
    `odd` replaces their parity-reversed partners.  Words in an even component
    must have parity equal to the field parity; words in an odd component must
    have the opposite parity (the odd slot itself absorbs one parity flip).
    """

    even: tuple[FormalSum, ...]
    odd: tuple[FormalSum, ...]
    parity: int

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.even) and all(
            c.is_zero() for c in self.odd
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GeneratingSection)
            and self.even == other.even
            and self.odd == other.odd
            and (self.parity == other.parity or (self.is_zero() and other.is_zero()))
        )

    def __neg__(self) -> "GeneratingSection":
        return GeneratingSection(
            tuple(-c for c in self.even), tuple(-c for c in self.odd), self.parity
        )


def make_section(
    ctx: JetContext, even=None, odd=None, parity: int | None = None
) -> GeneratingSection:
    """Build a GeneratingSection, validating shapes and parity homogeneity."""
    zero = lambda: FormalSum(cyclic=False)
    even = tuple(even) if even is not None else tuple(zero() for _ in range(ctx.fields))
    odd = tuple(odd) if odd is not None else tuple(zero() for _ in range(ctx.fields))
    if len(even) != ctx.fields or len(odd) != ctx.fields:
        raise PreconditionError(
            f"section needs {ctx.fields} components of each kind"
        )
    seen: set[int] = set()
    for comp in even:
        if comp.cyclic:
            raise PreconditionError("section components must be open sums")
        seen.update(k % 2 for k in comp.odd_degrees())
    for comp in odd:
        if comp.cyclic:
            raise PreconditionError("section components must be open sums")
        seen.update((k + 1) % 2 for k in comp.odd_degrees())
    if len(seen) > 1:
        raise PreconditionError("section components have mixed parity")
    if seen:
        found = seen.pop()
        if parity is not None and parity % 2 != found:
            raise PreconditionError(
                f"declared parity {parity} does not match components"
            )
        parity = found
    elif parity is None:
        raise PreconditionError("parity of a zero section must be given")
    return GeneratingSection(even, odd, parity % 2)


def zero_section(ctx: JetContext, parity: int) -> GeneratingSection:
    return make_section(ctx, parity=parity)


def evolutionary_apply(
    ctx: JetContext, section: GeneratingSection, f: FormalSum
) -> FormalSum:
    """Act with the evolutionary field of `section` on a word sum.

    The field is a graded derivation: each letter occurrence is replaced by
    the matching component, differentiated to the letter's multi-index, with
    a sign when an odd field passes the odd part of the prefix.
    """
    out = FormalSum(f.cyclic)
    memo: dict[tuple[bool, int, tuple[int, ...]], FormalSum] = {}
    for w, c in f.terms.items():
        prefix_odd = 0
        for i, letter in enumerate(w):
            comp = (section.odd if letter.odd else section.even)[letter.index - 1]
            if comp:
                key = (letter.odd, letter.index, letter.orders)
                value = memo.get(key)
                if value is None:
                    value = d_power(ctx, comp, letter.orders)
                    memo[key] = value
                sign = -1 if section.parity and prefix_odd % 2 else 1
                for vw, vc in value.terms.items():
                    out.add_word(w[:i] + vw + w[i + 1:], (c * vc) * sign)
            if letter.odd:
                prefix_odd += 1
    return out


def graded_commutator(
    ctx: JetContext, x: GeneratingSection, y: GeneratingSection
) -> GeneratingSection:
    """Commutator of two evolutionary fields, as a section:
    [X, Y] = X(Y) - (-1)^{|X||Y|} Y(X), componentwise."""
    sign = -1 if x.parity and y.parity else 1
    even = tuple(
        evolutionary_apply(ctx, x, cy) - evolutionary_apply(ctx, y, cx).scale(sign)
        for cx, cy in zip(x.even, y.even)
    )
    odd = tuple(
        evolutionary_apply(ctx, x, cy) - evolutionary_apply(ctx, y, cx).scale(sign)
        for cx, cy in zip(x.odd, y.odd)
    )
    return GeneratingSection(even, odd, (x.parity + y.parity) % 2)
