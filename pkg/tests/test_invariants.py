"""Conserved family F_{j,i} from the pencil expansion of Tr-power invariants.

The oracle here is deliberately independent of `expand_pencil`'s internals:
evaluate P_i(λx − y) at distinct nodes and solve the (signed) Vandermonde
system for the coefficients.  Everything else must agree with that.
"""

import numpy as np
import pytest

from toda2 import (
    PairPoint,
    ScalarFunction,
    expand_pencil,
    family,
    family_labels,
    form,
    gradient2,
    hamiltonian_field,
    independence_rank,
    pencil_pullback,
    phase_tp,
    rais_vectors,
    trace_invariant,
)

EXPECTED_CARD = {"sl2": 3, "sl3": 7, "sl4": 12, "gl2": 5, "gl3": 9}


def random_pair(alg, rng):
    return PairPoint(
        alg.element(rng.uniform(-1, 1, alg.dim)),
        alg.element(rng.uniform(-1, 1, alg.dim)),
    )


# ---------------------------------------------------------------------------
# generators P_i
# ---------------------------------------------------------------------------

def test_trace_invariant_values(sl3, gl2):
    rng = np.random.default_rng(0)
    x = sl3.element(rng.uniform(-1, 1, sl3.dim))
    X = x.matrix()
    assert trace_invariant(sl3, 1)(x) == pytest.approx(0.5 * np.trace(X @ X))
    assert trace_invariant(sl3, 2)(x) == pytest.approx(np.trace(X @ X @ X) / 3.0)
    g = gl2.element(rng.uniform(-1, 1, gl2.dim))
    assert trace_invariant(gl2, 0)(g) == pytest.approx(np.trace(g.matrix()))
    with pytest.raises(ValueError):
        trace_invariant(sl3, -1)


def test_trace_invariant_gradient_is_projected_power(sl3):
    # ⟨∇P_i(x), u⟩ = Tr(xⁱ u) for every direction u
    rng = np.random.default_rng(1)
    x = sl3.element(rng.uniform(-1, 1, sl3.dim))
    P2 = trace_invariant(sl3, 2)
    g = P2.gradient(x)
    for _ in range(6):
        u = sl3.element(rng.uniform(-1, 1, sl3.dim))
        assert form(g, u) == pytest.approx(
            float(np.trace(x.matrix() @ x.matrix() @ u.matrix())), abs=1e-12
        )


# ---------------------------------------------------------------------------
# pencil expansion against the Vandermonde oracle
# ---------------------------------------------------------------------------

def vandermonde_coefficients(alg, i, m):
    """Solve for F_{j,i} from values of P_i(λx − y) at distinct nodes."""
    P = trace_invariant(alg, i)
    d = i + 1
    nodes = np.linspace(-1.1, 1.7, d + 1)
    A = np.array(
        [[(-1.0) ** (d - j) * lam**j for j in range(d + 1)] for lam in nodes]
    )
    vals = np.array([P(lam * m.x - m.y) for lam in nodes])
    return np.linalg.solve(A, vals)


def test_expansion_matches_vandermonde(sl3, sl4, gl3):
    rng = np.random.default_rng(2)
    for alg in (sl3, sl4, gl3):
        for i in alg.exponents:
            m = random_pair(alg, rng)
            exp = expand_pencil(alg, i, m)
            want = vandermonde_coefficients(alg, i, m)
            assert exp.degree == i + 1
            assert np.allclose(exp.coeffs, want, atol=1e-10), (alg.name, i)


def test_pencil_value_consistency(sl3):
    rng = np.random.default_rng(3)
    m = random_pair(sl3, rng)
    P2 = trace_invariant(sl3, 2)
    exp = expand_pencil(sl3, 2, m)
    for lam in (-1.0, 0.0, 0.5, 2.0):
        assert exp.pencil_value(lam) == pytest.approx(P2(lam * m.x - m.y), abs=1e-12)
        assert pencil_pullback(sl3, 2, lam)(m) == pytest.approx(
            exp.pencil_value(lam), abs=1e-12
        )


def test_gradient_coefficients_match_fd(gl3):
    rng = np.random.default_rng(4)
    m = random_pair(gl3, rng)
    exp = expand_pencil(gl3, 2, m)
    fam, labels = family(gl3), family_labels(gl3)
    for j in range(exp.degree + 1):
        F = fam[labels.index((j, 2))]
        bare = ScalarFunction("fd-only", F.evaluator)  # force the FD path
        assert (gradient2(bare, m) - exp.grad_coeffs[j]).norm() < 1e-8


def test_low_coefficients_are_classical(sl3):
    # F_{2,1} = ½⟨x,x⟩, F_{1,1} = ⟨x,y⟩, F_{0,1} = ½⟨y,y⟩
    rng = np.random.default_rng(5)
    m = random_pair(sl3, rng)
    exp = expand_pencil(sl3, 1, m)
    assert exp.coeffs[2] == pytest.approx(0.5 * form(m.x, m.x), abs=1e-12)
    assert exp.coeffs[1] == pytest.approx(form(m.x, m.y), abs=1e-12)
    assert exp.coeffs[0] == pytest.approx(0.5 * form(m.y, m.y), abs=1e-12)
    # and ∇F_{1,1} = (y, −x): at (e, h) that is (h, −e)
    g = expand_pencil(sl3, 1, PairPoint(sl3.e, sl3.h)).grad_coeffs[1]
    assert np.allclose(g.x.coords, sl3.h.coords, atol=1e-13)
    assert np.allclose(g.y.coords, -sl3.e.coords, atol=1e-13)


# ---------------------------------------------------------------------------
# the family: cardinality, Casimir at λ = 1, independence
# ---------------------------------------------------------------------------

def test_family_cardinalities(desk_algebras):
    for name, alg in desk_algebras.items():
        fam = family(alg)
        assert len(fam) == EXPECTED_CARD[name]
        assert len(family_labels(alg)) == len(fam)
        assert sum(mi + 2 for mi in alg.exponents) == len(fam)


def test_pullback_at_one_is_casimir(sl3):
    rng = np.random.default_rng(6)
    for i in sl3.exponents:
        C = pencil_pullback(sl3, i, 1.0)
        for _ in range(4):
            m = random_pair(sl3, rng)
            assert hamiltonian_field(C, m).norm() < 1e-9


def test_family_independent_at_principal_point(desk_algebras):
    for name, alg in desk_algebras.items():
        ps = phase_tp(alg)
        fam = family(alg)
        pt = PairPoint(alg.e, alg.h)
        assert independence_rank(fam, ps, [pt]) == EXPECTED_CARD[name]


def test_constant_adds_no_rank(sl3):
    ps = phase_tp(sl3)
    fam = family(sl3)
    pts = ps.sample_points(seed=7, count=5)
    base = independence_rank(fam, ps, pts)
    padded = fam + [ScalarFunction("const", lambda m: 4.0)]
    assert independence_rank(padded, ps, pts) == base


def test_independence_requires_points(sl3):
    with pytest.raises(ValueError):
        independence_rank(family(sl3), phase_tp(sl3), [])


# ---------------------------------------------------------------------------
# Raïs vectors V_{k,i} = k!·∂_x F_{k+1,i}(e, h)
# ---------------------------------------------------------------------------

def test_rais_vectors(desk_algebras):
    expected_count = {"sl2": 2, "sl3": 5, "sl4": 9, "gl2": 3, "gl3": 6}
    for name, alg in desk_algebras.items():
        rd = rais_vectors(alg)
        assert rd.count == expected_count[name]
        assert rd.count == (alg.dim + alg.rank) // 2
        assert rd.rank == rd.count          # linearly independent
        assert rd.max_negative_component < 1e-12   # span inside 𝔤_{≥0}
        assert all(d >= 0 for d in rd.degree_profile)


def test_first_rais_vector_is_grading_element(sl3, gl3):
    # V_{0,1} = ∂_x⟨x,y⟩ at (e, h) = h
    for alg in (sl3, gl3):
        rd = rais_vectors(alg)
        by_label = {(k, i): v for (k, i, v) in rd.vectors}
        assert np.allclose(by_label[(0, 1)].coords, alg.h.coords, atol=1e-12)
