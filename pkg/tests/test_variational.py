"""Variational derivatives, triviality, couplings, functionals."""

import random

import pytest

from cycvar.errors import PreconditionError
from cycvar.words import Coefficient, FormalSum, close, concat
from cycvar.jets import JetContext, evolutionary_apply, make_section, total_derivative
from cycvar.variational import (
    Covector,
    Functional,
    coupling,
    covector_of,
    euler_derivative,
    is_trivial,
    lift_covector_velocity,
)

CTX = JetContext(fields=1, directions=1)
A = CTX.letter(False, 1)
AX = CTX.shift(A, 1)
AXX = CTX.shift(AX, 1)
B = CTX.letter(True, 1)
BX = CTX.shift(B, 1)


def cyc(letters, value=1):
    return FormalSum.single(True, tuple(letters), CTX.const(value))


def opn(letters, value=1):
    return FormalSum.single(False, tuple(letters), CTX.const(value))


class TestEuler:
    def test_cube(self):
        assert euler_derivative(CTX, cyc([A, A, A]), False) == opn([A, A], 3)

    def test_second_order_term(self):
        assert euler_derivative(CTX, cyc([A, AXX]), False) == opn([AXX], 2)

    def test_exact_density_annihilated(self):
        assert euler_derivative(CTX, cyc([A, AX]), False).is_zero()

    def test_coordinate_coefficient(self):
        f = FormalSum.single(True, (B, BX), CTX.x_power(1, 1))
        out = euler_derivative(CTX, f, True)
        expect = opn([B]) + FormalSum.single(False, (BX,), CTX.x_power(1, 1)).scale(2)
        assert out == expect

    def test_right_side_sign_flips_on_even_odd_count(self):
        f = cyc([A, B, B])
        left = euler_derivative(CTX, f, True)
        right = euler_derivative(CTX, f, True, side="right")
        assert left == opn([B, A]) - opn([A, B])
        assert right == -left

    def test_right_side_equal_on_odd_odd_count(self):
        f = cyc([A, B])
        assert euler_derivative(CTX, f, True) == euler_derivative(
            CTX, f, True, side="right"
        )

    def test_annihilates_total_derivatives_exactly(self):
        rng = random.Random(2)
        letters = [A, AX, B, BX]
        for _ in range(15):
            w = tuple(rng.choice(letters) for _ in range(rng.randint(1, 4)))
            f = cyc(w)
            df = total_derivative(CTX, f)
            for odd_kind in (False, True):
                assert euler_derivative(CTX, df, odd_kind).is_zero()


class TestTriviality:
    def test_exact_densities(self):
        assert is_trivial(CTX, cyc([AX]))
        assert is_trivial(CTX, cyc([A, AX]))

    def test_nontrivial_densities(self):
        assert not is_trivial(CTX, cyc([A, AXX]))
        assert not is_trivial(CTX, cyc([B]))

    def test_pure_coordinate_density_is_exact(self):
        f = FormalSum.single(True, (), CTX.x_power(1, 3))
        assert is_trivial(CTX, f)


class TestCouplingAndCovectors:
    def test_simple_coupling(self):
        p = Covector((opn([AXX]),))
        out = coupling(CTX, p, (opn([A, A]),))
        assert out == cyc([AXX, A, A])

    def test_covector_components_validated(self):
        with pytest.raises(PreconditionError):
            Covector((cyc([A]),))
        with pytest.raises(PreconditionError):
            Covector((opn([B]),))

    def test_covector_of_cube(self):
        p = covector_of(CTX, cyc([A, A, A]))
        assert p.components == (opn([A, A], 3),)


class TestFunctional:
    def test_rejects_odd_density(self):
        with pytest.raises(PreconditionError):
            Functional(CTX, cyc([B, BX]))

    def test_equivalence_mod_exact(self):
        f = Functional(CTX, cyc([A, A]) + cyc([A, AX]))
        g = Functional(CTX, cyc([A, A]))
        assert f.equivalent(g)
        assert not f.equivalent(Functional(CTX, cyc([A, A, A])))

    def test_exact_density_is_trivial_functional(self):
        assert Functional(CTX, cyc([A, AX], 5)).is_trivial()


class TestLiftCovectorVelocity:
    def test_agrees_with_variation_of_transported_density(self):
        # moving the variation inside the flow must match transporting the
        # covector: delta(X f) = X(delta f) + (linearization of X)^T delta f
        flows = [
            make_section(CTX, even=[opn([AX])]),
            make_section(CTX, even=[opn([A, A])]),
            make_section(CTX, even=[FormalSum.single(False, (AX,), CTX.x_power(1, 1))]),
        ]
        densities = [
            cyc([A, A, A]),
            cyc([A, AXX]),
            FormalSum.single(True, (A, A), CTX.x_power(1, 1)),
        ]
        probes = [
            opn([]),
            opn([A]),
            opn([AX]),
            opn([A, A]),
            FormalSum.single(False, (A,), CTX.x_power(1, 1)),
        ]
        for x in flows:
            for f in densities:
                direct = covector_of(CTX, evolutionary_apply(CTX, x, f))
                lifted = lift_covector_velocity(CTX, covector_of(CTX, f), x)
                for d_comp, l_comp in zip(direct.components, lifted.components):
                    diff = d_comp - l_comp
                    for probe in probes:
                        assert is_trivial(CTX, close(concat(diff, probe)))

    def test_requires_even_flow(self):
        q = make_section(CTX, odd=[opn([A])])
        with pytest.raises(PreconditionError):
            lift_covector_velocity(CTX, Covector((opn([A]),)), q)
