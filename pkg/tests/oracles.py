"""Independent reference computations used to cross-check the library.

Everything here is deliberately written by a different route than the
package code: the rotation sign comes from a block-transposition count
rather than letter-by-letter transport, substitution is assembled directly
on words rather than through operator terms, and bivector evaluation goes
through the pairing formula rather than through contraction of the density.
"""

from __future__ import annotations

from fractions import Fraction

from cycvar.words import Coefficient, FormalSum, close, concat, word_key
from cycvar.jets import JetContext, d_power
from cycvar.variational import Covector, coupling
from cycvar.operators import DifferentialOperator


def brute_normalize(letters):
    """Canonical representative of a signed necklace by exhaustive rotation.

    The sign of the rotation by r is computed as one block move: the r
    leading letters hop over the n-r trailing ones, and only odd letters
    interact, so the sign is (-1)^(moved_odd * remaining_odd).
    """
    letters = tuple(letters)
    n = len(letters)
    if n == 0:
        return (), 1
    total_odd = sum(1 for l in letters if l.odd)
    seen: dict[tuple, dict[tuple, set[int]]] = {}
    candidates = {}
    for r in range(n):
        rotated = letters[r:] + letters[:r]
        moved_odd = sum(1 for l in letters[:r] if l.odd)
        sign = -1 if (moved_odd * (total_odd - moved_odd)) % 2 else 1
        key = word_key(rotated)
        entry = candidates.setdefault(key, (rotated, set()))
        entry[1].add(sign)
    best_key = min(candidates)
    word, signs = candidates[best_key]
    if len(signs) == 2:
        return None, 0
    return word, signs.pop()


def brute_close(ctx: JetContext, f: FormalSum) -> FormalSum:
    """Close an open sum using the brute normalizer only."""
    out = FormalSum(cyclic=True)
    for w, c in f.terms.items():
        word, sign = brute_normalize(w)
        if word is None:
            continue
        acc = out.terms.get(word)
        scaled = c * sign
        acc = scaled if acc is None else acc + scaled
        if acc:
            out.terms[word] = acc
        else:
            out.terms.pop(word, None)
    return out


def substitute_occurrences(
    ctx: JetContext,
    values: FormalSum,
    odd_slot: bool,
    index: int,
    argument: FormalSum,
) -> FormalSum:
    """Replace, one occurrence at a time, each letter of one family by the
    correspondingly differentiated argument, and sum.  This is the action the
    one-family linearization operator must reproduce."""
    out = FormalSum(cyclic=False)
    for w, c in values.terms.items():
        for i, letter in enumerate(w):
            if letter.odd == odd_slot and letter.index == index:
                shifted = d_power(ctx, argument, letter.orders)
                for u, uc in shifted.terms.items():
                    out.add_word(w[:i] + u + w[i + 1 :], c * uc)
    return out


def pairing_bivector_value(
    ctx: JetContext, op: DifferentialOperator, p: Covector, q: Covector
) -> FormalSum:
    """Value of the antisymmetric 2-form attached to an operator, computed
    straight from the pairing:  (<p, A q> - <q, A p>) / 2."""
    lhs = coupling(ctx, p, tuple(op.apply(c) for c in q.components))
    rhs = coupling(ctx, q, tuple(op.apply(c) for c in p.components))
    return (lhs - rhs).scale(Fraction(1, 2))


def exhaustive_words(alphabet, max_len: int):
    """Every tuple over the alphabet up to the given length, including the
    empty word."""
    out = [()]
    layer = [()]
    for _ in range(max_len):
        layer = [w + (l,) for w in layer for l in alphabet]
        out.extend(layer)
    return out
