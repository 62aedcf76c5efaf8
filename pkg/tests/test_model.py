"""Parameter containers, exponent branches, ordering exponents."""

import math

import numpy as np
import pytest

from lienard.model import (
    AmbiguityParams,
    DomainError,
    EtaBranch,
    LienardParams,
    QuantumSetup,
    SolutionParams,
    ambiguity_for_epsilon,
    check_constraint,
    default_ordering,
    derive_ell,
    eta_branch,
    setup_for_ell,
    solve_eta_quadratic,
)


def test_params_reject_bad_values():
    with pytest.raises(ValueError):
        LienardParams(k=0.0, omega=1.0)
    with pytest.raises(ValueError):
        LienardParams(k=math.inf, omega=1.0)
    with pytest.raises(ValueError):
        LienardParams(k=1.0, omega=0.0)
    with pytest.raises(ValueError):
        LienardParams(k=1.0, omega=-2.0)


def test_derived_coefficients_single_rounding():
    # a and b are stored as one rounded quotient each, so multiplying
    # back recovers k exactly for friendly values and to one ulp otherwise.
    p = LienardParams(k=9.0, omega=1.0)
    assert p.a * 9.0 == 9.0
    assert p.b == 1.0 / 9.0

    rng = np.random.default_rng(5)
    for k in rng.uniform(0.3, 50.0, size=20):
        q = LienardParams(k=float(k), omega=2.0)
        assert q.a * 9.0 == pytest.approx(k, rel=4e-16)
        assert q.b * k == pytest.approx(4.0, rel=4e-16)


def test_negative_damping_allowed():
    p = LienardParams(k=-2.0, omega=1.0)
    assert p.a == -2.0 / 9.0
    assert p.b == -0.5


def test_eta_quadratic_roots_are_exact():
    p = LienardParams(k=1.0, omega=1.0)
    harm, iso = solve_eta_quadratic(p)
    # the discriminant 81 - 72 = 9 is exact in floating point, so both
    # roots come out as exact binary values
    assert harm.eta == -3.0
    assert iso.eta == -1.5
    assert harm.nu == harm.eta * p.b
    assert iso.nu == iso.eta * p.b
    assert harm.momentum_scale == -2.0
    assert iso.momentum_scale == -0.5


def test_eta_branch_selector_and_rejection():
    p = LienardParams(k=1.0, omega=1.0)
    assert eta_branch(p, -3.0).eta == -3.0
    assert eta_branch(p, -1.5).eta == -1.5
    with pytest.raises(ValueError):
        eta_branch(p, -2.0)
    with pytest.raises(ValueError):
        EtaBranch(eta=-2.0, nu=2.0)


def test_constraint_value_and_guards():
    """2a x + (1/eta)(1/eta + 1) k x vanishes only at the quadratic roots."""
    p = LienardParams(k=1.0, omega=1.0)
    for eta in (-3.0, -1.5):
        assert abs(check_constraint(p, eta, 0.7)) < 1e-15
    r = check_constraint(p, -2.0, 0.7)
    expected = 2.0 * p.a * 0.7 + (1.0 / -2.0) * (1.0 / -2.0 + 1.0) * p.k * 0.7
    assert r == pytest.approx(expected, rel=1e-14)
    assert abs(r) > 1e-3
    with pytest.raises(ValueError):
        check_constraint(p, -3.0, 0.0)
    with pytest.raises(ValueError):
        check_constraint(p, 0.0, 0.7)


def test_solution_params_orbit_bound():
    p = LienardParams(k=1.0, omega=1.0)
    ok = SolutionParams(A=1.0, delta=0.0)
    ok.validate_for(p)
    assert ok.amplitude_ratio(p) == pytest.approx(1.0 / 3.0)
    edge = SolutionParams(A=3.0, delta=0.0)
    with pytest.raises(DomainError):
        edge.validate_for(p)
    with pytest.raises(DomainError):
        SolutionParams(A=3.5, delta=0.0).validate_for(p)


def test_ambiguity_sum_constraint():
    AmbiguityParams(alpha=0.0, beta=-1.0, gamma=0.0)
    AmbiguityParams(alpha=0.5, beta=-1.5, gamma=0.0)
    with pytest.raises(ValueError):
        AmbiguityParams(alpha=0.0, beta=0.0, gamma=0.0)


def test_default_ordering_epsilon_is_plus_zero():
    eps = default_ordering().epsilon
    assert eps == 0.0
    assert math.copysign(1.0, eps) == 1.0


def test_epsilon_formula():
    a0 = AmbiguityParams(alpha=1.0, beta=-2.5, gamma=0.5)
    assert a0.epsilon == pytest.approx(-4.0 * 1.0 * (1.0 - 2.5 + 1.0), rel=1e-15)


def test_ambiguity_for_epsilon_round_trip():
    for eps in (0.0, 1.0, -2.0, 0.37):
        amb = ambiguity_for_epsilon(eps)
        assert amb.alpha + amb.beta + amb.gamma == pytest.approx(-1.0, abs=1e-12)
        assert amb.epsilon == pytest.approx(eps, abs=1e-12)
    assert ambiguity_for_epsilon(0.0) == default_ordering()


def test_quantum_setup_consistency_check():
    # k = 384 with the default ordering puts the barrier exactly at zero
    setup = setup_for_ell(0.0, 1.0)
    assert setup.params.k == pytest.approx(384.0, rel=1e-12)
    assert setup.ell == 0.0
    assert setup.centrifugal_strength == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        QuantumSetup(params=setup.params, ambiguity=default_ordering(), ell=1.0)


def test_derive_ell_examples():
    amb = default_ordering()
    assert derive_ell(amb, LienardParams(k=384.0, omega=1.0)).ell == pytest.approx(
        0.0, abs=1e-12
    )
    # k = 96 gives ell(ell+1) = 3/4, i.e. ell = 1/2
    assert derive_ell(amb, LienardParams(k=96.0, omega=1.0)).ell == pytest.approx(0.5)
    # weak damping pushes the barrier strength up like 96/k
    assert derive_ell(amb, LienardParams(k=1.0, omega=1.0)).ell == pytest.approx(
        (math.sqrt(384.0) - 1.0) / 2.0, rel=1e-13
    )
    minus = derive_ell(amb, LienardParams(k=96.0, omega=1.0), branch="-")
    assert minus.ell == pytest.approx(-1.5)


def test_setup_for_ell_round_trip():
    for ell in (0.0, 1.0, 2.0):
        setup = setup_for_ell(ell, 1.0)
        assert derive_ell(setup.ambiguity, setup.params).ell == pytest.approx(
            ell, abs=1e-10
        )
