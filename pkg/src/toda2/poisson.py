"""Linear and quadratic Poisson ℛ-brackets on 𝔤×𝔤.

Gradients are taken with respect to the pairing ⟨(x₁,y₁),(x₂,y₂)⟩₂ =
⟨x₁,x₂⟩ − ⟨y₁,y₂⟩, so a Euclidean partial-derivative covector (w_x, w_y)
converts to the gradient pair (G⁻¹w_x, −G⁻¹w_y) — note the sign flip on the
second component.  The linear bracket is

    {F, G}_ℛ(m) = ½⟨m, [ℛ∇F, ∇G] + [∇F, ℛ∇G]⟩₂,

the quadratic one (associative algebras only)

    {F, G}^Q_ℛ(m) = ½⟨[m, ∇F], ℛ(m∇G + ∇G m)⟩₂ − (F ↔ G),

with products taken componentwise.  Hamiltonian fields use the convention
X_F[K] = {K, F} and are assembled generically from the coordinate functions
z_a of the ambient basis: X_F = Σ_a {z_a, F} ∂_a.

Affine phase spaces (T_P and friends) are a base point plus a tangent basis;
their coordinate functions are Euclidean duals of the tangent vectors.  For
the linear bracket these spaces are genuine Poisson submanifolds, so the
matrix of coordinate brackets is the restricted structure.  The quadratic
bracket does not leave the 2-Toda phase space invariant for n ≥ 3 (the
Hamiltonian flow of a generic function moves the frozen unit superdiagonal),
so `poisson_matrix` computes the canonical induced structure instead: the
coordinate matrix plus the Dirac correction along the normal directions,
which coincides with the naive matrix whenever the subspace is invariant and
exists precisely when the normal bracket pairings satisfy the usual range
condition (validated at every call).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import AlgebraError, AlgebraSpec, Element, bracket, form, mult
from .rmatrix import (
    PairPoint,
    RMatrixConfig,
    form2,
    pair_bracket,
    rr_apply,
)

__all__ = [
    "CapabilityError",
    "PreconditionError",
    "ScalarFunction",
    "PhaseSpace",
    "PoissonMatrixAt",
    "gradient2",
    "linear_bracket",
    "quadratic_bracket",
    "hamiltonian_field",
    "poisson_matrix",
    "rank_at",
    "rank_sweep",
    "numerical_rank",
    "check_morphism_psi1",
    "linear_function",
    "coordinate_functions",
    "pullback_psi1_coordinate",
    "phase_tp",
    "phase_full",
    "psi1",
    "lie_poisson_bracket",
]

_DEFAULT = RMatrixConfig()
FD_STEP = 1e-5


class CapabilityError(ValueError):
    """Operation requires a capability the algebra does not have."""


class PreconditionError(ValueError):
    """A documented precondition of the operation is violated."""


# --------------------------------------------------------------------------
# scalar functions and gradients
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarFunction:
    """A scalar function of a PairPoint with an optional analytic ⟨·,·⟩₂-gradient."""

    name: str
    evaluator: Callable[[PairPoint], float]
    gradient: Optional[Callable[[PairPoint], PairPoint]] = None

    def __call__(self, m: PairPoint) -> float:
        return float(self.evaluator(m))


def _fd_partials(F: ScalarFunction, m: PairPoint, step: float = FD_STEP) -> np.ndarray:
    """Central finite-difference partials of F in the 2·dim basis coordinates."""
    alg = m.alg
    v0 = m.vec()
    w = np.empty(2 * alg.dim)
    for a in range(2 * alg.dim):
        vp, vm = v0.copy(), v0.copy()
        vp[a] += step
        vm[a] -= step
        w[a] = (
            F(PairPoint.from_vec(alg, vp)) - F(PairPoint.from_vec(alg, vm))
        ) / (2.0 * step)
    return w


def _covector_to_gradient(alg: AlgebraSpec, w: np.ndarray) -> PairPoint:
    gi = alg.gram_inv
    return PairPoint(
        Element(alg, gi @ w[: alg.dim]),
        Element(alg, -(gi @ w[alg.dim:])),
    )


def gradient2(F: ScalarFunction, m: PairPoint, step: float = FD_STEP) -> PairPoint:
    """⟨·,·⟩₂-gradient of F at m: analytic when available, else central differences."""
    if F.gradient is not None:
        return F.gradient(m)
    return _covector_to_gradient(m.alg, _fd_partials(F, m, step))


def linear_function(p: PairPoint, name: str = "linear") -> ScalarFunction:
    """The function m ↦ ⟨p, m⟩₂, whose gradient is the constant pair p."""
    return ScalarFunction(name, lambda m: form2(p, m), lambda m: p)


def coordinate_functions(alg: AlgebraSpec) -> list[ScalarFunction]:
    """The 2·dim basis-coordinate functions z_a with constant dual gradients."""
    gi = alg.gram_inv
    out = []
    for a in range(alg.dim):
        grad = PairPoint(Element(alg, gi[:, a].copy()), Element(alg, np.zeros(alg.dim)))
        out.append(
            ScalarFunction(f"x[{a}]", lambda m, a=a: m.x.coords[a], lambda m, g=grad: g)
        )
    for a in range(alg.dim):
        grad = PairPoint(Element(alg, np.zeros(alg.dim)), Element(alg, -gi[:, a]))
        out.append(
            ScalarFunction(f"y[{a}]", lambda m, a=a: m.y.coords[a], lambda m, g=grad: g)
        )
    return out


def psi1(m: PairPoint) -> Element:
    """ψ₁(x, y) = x − y."""
    return m.x - m.y


def pullback_psi1_coordinate(a: Element, name: str = "z") -> ScalarFunction:
    """The ψ₁-pullback linear coordinate m ↦ ⟨a, x − y⟩, gradient (a, a)."""
    grad = PairPoint(a, a)
    return ScalarFunction(name, lambda m: form(a, psi1(m)), lambda m: grad)


# --------------------------------------------------------------------------
# the two brackets
# --------------------------------------------------------------------------


def _linear_value(m: PairPoint, gF: PairPoint, gG: PairPoint,
                  cfg: RMatrixConfig = _DEFAULT) -> float:
    term = pair_bracket(rr_apply(gF, cfg), gG) + pair_bracket(gF, rr_apply(gG, cfg))
    return 0.5 * form2(m, term)


def linear_bracket(F: ScalarFunction, G: ScalarFunction, m: PairPoint,
                   cfg: RMatrixConfig = _DEFAULT) -> float:
    """{F, G}_ℛ(m) = ½⟨m, [ℛ∇F, ∇G] + [∇F, ℛ∇G]⟩₂."""
    return _linear_value(m, gradient2(F, m), gradient2(G, m), cfg)


def _pmul(p: PairPoint, q: PairPoint) -> PairPoint:
    return PairPoint(mult(p.x, q.x), mult(p.y, q.y))


def _require_associative(alg: AlgebraSpec) -> None:
    if not alg.associative:
        raise CapabilityError(
            f"quadratic bracket needs an associative matrix algebra; "
            f"{alg.name} has associative=False"
        )


def _quad_value(m: PairPoint, gF: PairPoint, gG: PairPoint,
                cfg: RMatrixConfig = _DEFAULT) -> float:
    sF = rr_apply(_pmul(m, gF) + _pmul(gF, m), cfg)
    sG = rr_apply(_pmul(m, gG) + _pmul(gG, m), cfg)
    aF = pair_bracket(m, gF)
    aG = pair_bracket(m, gG)
    return 0.5 * (form2(aF, sG) - form2(aG, sF))


def quadratic_bracket(F: ScalarFunction, G: ScalarFunction, m: PairPoint,
                      cfg: RMatrixConfig = _DEFAULT) -> float:
    """{F, G}^Q_ℛ(m); requires the algebra to be associative."""
    _require_associative(m.alg)
    return _quad_value(m, gradient2(F, m), gradient2(G, m), cfg)


_BRACKET_VALUES = {"linear": _linear_value, "quadratic": _quad_value}


def bracket_value(which: str, m: PairPoint, gF: PairPoint, gG: PairPoint,
                  cfg: RMatrixConfig = _DEFAULT) -> float:
    """Bracket evaluation from precomputed gradients (sweep-friendly)."""
    if which == "quadratic":
        _require_associative(m.alg)
    try:
        fn = _BRACKET_VALUES[which]
    except KeyError:
        raise ValueError(f"unknown bracket kind {which!r}") from None
    return fn(m, gF, gG, cfg)


def hamiltonian_field(F: ScalarFunction, m: PairPoint, which: str = "linear",
                      cfg: RMatrixConfig = _DEFAULT) -> PairPoint:
    """X_F(m) with X_F[K] = {K, F}, assembled from basis coordinate brackets.

    The a-th coordinate of the field is {z_a, F}(m) for the basis coordinate
    function z_a, so the identity X_F[K] = {K, F} holds by construction for
    every coordinate K and extends to all functions by Leibniz.
    """
    alg = m.alg
    if which == "quadratic":
        _require_associative(alg)
    gF = gradient2(F, m)
    value = _BRACKET_VALUES[which]
    v = np.empty(2 * alg.dim)
    for a, z in enumerate(coordinate_functions(alg)):
        v[a] = value(m, z.gradient(m), gF, cfg)
    return PairPoint.from_vec(alg, v)


def lie_poisson_bracket(f_grad: Element, g_grad: Element, u: Element) -> float:
    """Lie–Poisson value ⟨u, [∇f, ∇g]⟩ from single-algebra gradients."""
    return form(u, bracket(f_grad, g_grad))


# --------------------------------------------------------------------------
# affine phase spaces
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PhaseSpace:
    """An affine subspace base + span(tangent) of 𝔤×𝔤 with dual coordinates."""

    name: str
    base: PairPoint
    tangent: tuple[PairPoint, ...]

    @property
    def alg(self) -> AlgebraSpec:
        return self.base.alg

    @property
    def dim(self) -> int:
        return len(self.tangent)

    @cached_property
    def tangent_matrix(self) -> np.ndarray:
        T = np.stack([t.vec() for t in self.tangent], axis=1)
        if np.linalg.matrix_rank(T) < T.shape[1]:
            raise AlgebraError(f"{self.name}: tangent vectors are linearly dependent")
        return T

    @cached_property
    def _pinv(self) -> np.ndarray:
        return np.linalg.pinv(self.tangent_matrix)

    @cached_property
    def duals(self) -> np.ndarray:
        # Euclidean-dual covectors: D^T @ tangent_matrix = identity
        return self._pinv.T

    @cached_property
    def coords(self) -> tuple[ScalarFunction, ...]:
        """Coordinate functions ζ_a dual to the tangent basis (constant gradients)."""
        alg, base_vec = self.alg, self.base.vec()
        out = []
        for a in range(self.dim):
            d = self.duals[:, a].copy()
            grad = _covector_to_gradient(alg, d)
            out.append(
                ScalarFunction(
                    f"{self.name}[{a}]",
                    lambda m, d=d, b=base_vec: float(d @ (m.vec() - b)),
                    lambda m, g=grad: g,
                )
            )
        return tuple(out)

    @cached_property
    def normal_covectors(self) -> tuple[PairPoint, ...]:
        """⟨·,·⟩₂-gradients of a dual basis of the normal directions."""
        T = self.tangent_matrix
        u, s, vt = np.linalg.svd(T, full_matrices=True)
        N = u[:, T.shape[1]:]  # orthonormal basis of the Euclidean complement
        return tuple(_covector_to_gradient(self.alg, N[:, j]) for j in range(N.shape[1]))

    def membership_residual(self, m: PairPoint) -> float:
        v = m.vec() - self.base.vec()
        return float(np.abs(v - self.tangent_matrix @ (self._pinv @ v)).max())

    def require_member(self, m: PairPoint, tol: float = 1e-10) -> None:
        r = self.membership_residual(m)
        if r > tol:
            raise PreconditionError(
                f"point lies off {self.name} (normal residual {r:.3e} > {tol:g})"
            )

    def normal_residual(self, w: PairPoint) -> float:
        """Size of the component of a *vector* w transverse to the tangent space."""
        v = w.vec()
        return float(np.abs(v - self.tangent_matrix @ (self._pinv @ v)).max())

    def point_from_coords(self, u: Sequence[float]) -> PairPoint:
        v = self.base.vec() + self.tangent_matrix @ np.asarray(u, dtype=float)
        return PairPoint.from_vec(self.alg, v)

    def coords_of(self, m: PairPoint) -> np.ndarray:
        return self._pinv @ (m.vec() - self.base.vec())

    def sample_points(self, seed: int, count: int) -> list[PairPoint]:
        rng = np.random.default_rng(seed)
        return [
            self.point_from_coords(rng.uniform(-1.0, 1.0, self.dim))
            for _ in range(count)
        ]


def phase_tp(alg: AlgebraSpec) -> PhaseSpace:
    """T_P = 𝔤_{≤0} × 𝔤_{≥−1} + (e, 0), the 2-Toda phase space."""
    zero = alg.zero()
    tangent = [
        PairPoint(Element(alg, v), zero)
        for v in np.eye(alg.dim)[alg.mask("<=0")]
    ] + [
        PairPoint(zero, Element(alg, v))
        for v in np.eye(alg.dim)[alg.mask(">=-1")]
    ]
    return PhaseSpace("T_P", PairPoint(alg.e, zero), tuple(tangent))


def phase_full(alg: AlgebraSpec) -> PhaseSpace:
    """All of 𝔤×𝔤 as a PhaseSpace (base 0, full tangent basis)."""
    zero = alg.zero()
    tangent = [PairPoint(Element(alg, v), zero) for v in np.eye(alg.dim)] + [
        PairPoint(zero, Element(alg, v)) for v in np.eye(alg.dim)
    ]
    return PhaseSpace("g×g", PairPoint(zero, zero), tuple(tangent))


# --------------------------------------------------------------------------
# Poisson matrices and rank
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PoissonMatrixAt:
    point: PairPoint
    matrix: np.ndarray
    which: str
    corrected: bool = False          # True iff a Dirac correction was applied
    invariance_defect: float = 0.0   # max |{ζ, χ}| against normal coordinates

    def __post_init__(self):
        skew = np.abs(self.matrix + self.matrix.T).max()
        if skew > 1e-12 * (1.0 + np.abs(self.matrix).max()):
            raise AssertionError(
                f"Poisson matrix not antisymmetric (residual {skew:.3e})"
            )


def _bracket_table(m: PairPoint, grads: list[PairPoint], which: str,
                   cfg: RMatrixConfig) -> np.ndarray:
    k = len(grads)
    M = np.zeros((k, k))
    if which == "linear":
        rg = [rr_apply(g, cfg) for g in grads]
        for a in range(k):
            for b in range(a + 1, k):
                term = pair_bracket(rg[a], grads[b]) + pair_bracket(grads[a], rg[b])
                M[a, b] = 0.5 * form2(m, term)
                M[b, a] = -M[a, b]
    else:
        s = [rr_apply(_pmul(m, g) + _pmul(g, m), cfg) for g in grads]
        av = [pair_bracket(m, g) for g in grads]
        for a in range(k):
            for b in range(a + 1, k):
                M[a, b] = 0.5 * (form2(av[a], s[b]) - form2(av[b], s[a]))
                M[b, a] = -M[a, b]
    return M


def poisson_matrix(ps: PhaseSpace, m: PairPoint, which: str = "linear",
                   cfg: RMatrixConfig = _DEFAULT,
                   membership_tol: float = 1e-10) -> PoissonMatrixAt:
    """Induced Poisson matrix {ζ_a, ζ_b}(m) of the phase-space coordinates.

    When the subspace is invariant under the bracket's Hamiltonian flows
    (the normal pairings {ζ, χ} all vanish) this is plainly the matrix of
    coordinate brackets.  Otherwise the canonical induced structure is
    returned: the coordinate matrix plus the Dirac correction
    −{ζ, χ} C⁺ {χ, ζ} with C = {χ, χ} over the normal coordinates χ, which
    is well-defined exactly when range({χ, ζ}) ⊆ range(C).
    """
    ps.require_member(m, membership_tol)
    if which == "quadratic":
        _require_associative(ps.alg)
    if which not in _BRACKET_VALUES:
        raise ValueError(f"unknown bracket kind {which!r}")
    grads_t = [z.gradient(m) for z in ps.coords]
    grads_n = list(ps.normal_covectors)
    full = _bracket_table(m, grads_t + grads_n, which, cfg)
    kt = len(grads_t)
    M, D, C = full[:kt, :kt], full[:kt, kt:], full[kt:, kt:]
    defect = float(np.abs(D).max()) if D.size else 0.0
    if defect <= 1e-12 * (1.0 + float(np.abs(M).max())):
        return PoissonMatrixAt(point=m, matrix=M, which=which,
                               invariance_defect=defect)
    Cp = np.linalg.pinv(C, rcond=1e-12)
    range_residual = float(np.abs(D.T - C @ (Cp @ D.T)).max())
    if range_residual > 1e-8 * (1.0 + defect):
        raise PreconditionError(
            f"{which} bracket does not induce a Poisson structure on "
            f"{ps.name}: the normal pairings violate the range condition "
            f"(residual {range_residual:.3e})"
        )
    M = M + D @ Cp @ D.T
    M = 0.5 * (M - M.T)  # scrub pinv roundoff from the exact antisymmetry
    return PoissonMatrixAt(point=m, matrix=M, which=which, corrected=True,
                           invariance_defect=defect)


def numerical_rank(M: np.ndarray, rel: float = 1e-10) -> int:
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > sv[0] * max(M.shape) * rel))


def rank_at(ps: PhaseSpace, m: PairPoint, which: str = "linear",
            cfg: RMatrixConfig = _DEFAULT) -> int:
    """Numerical rank of the restricted Poisson matrix at one point."""
    return numerical_rank(poisson_matrix(ps, m, which, cfg).matrix)


def rank_sweep(ps: PhaseSpace, which: str = "linear", cfg: RMatrixConfig = _DEFAULT,
               seed: int = 42, points: int = 25) -> int:
    """Max rank over seeded sample points (rank is lower semicontinuous)."""
    return max(rank_at(ps, m, which, cfg) for m in ps.sample_points(seed, points))


# --------------------------------------------------------------------------
# the ψ₁ morphism check
# --------------------------------------------------------------------------


def check_morphism_psi1(alg: AlgebraSpec, samples: int = 100, seed: int = 42,
                        cfg: RMatrixConfig = _DEFAULT, tol: float = 1e-9):
    """Verify {F∘ψ₁, G∘ψ₁}_ℛ(x,y) = {F, G}_LP(x−y) on random functions.

    F, G run over random linear functions of 𝔤 (analytic gradients) plus a
    batch of quadratic trace monomials u ↦ ⟨a,u⟩⟨b,u⟩ differentiated by
    central finite differences.  Requires c = 1.
    """
    from .reports import CheckReport

    if cfg.c != 1.0:
        raise PreconditionError(
            f"psi1 is a Poisson morphism only for c = 1 (configured c = {cfg.c})"
        )
    rng = np.random.default_rng(seed)
    gi = alg.gram_inv
    worst = 0.0
    for k in range(samples):
        m = PairPoint(
            Element(alg, rng.uniform(-1, 1, alg.dim)),
            Element(alg, rng.uniform(-1, 1, alg.dim)),
        )
        w = psi1(m)
        quadratic = k % 5 == 4
        if quadratic:
            # f(u) = ⟨a,u⟩⟨b,u⟩, pulled back through ψ₁ with FD gradients;
            # unit covectors keep the FD roundoff floor well under tol
            def unit():
                v = rng.uniform(-1, 1, alg.dim)
                return Element(alg, v / np.linalg.norm(v))
            a, b, c, d = unit(), unit(), unit(), unit()
            F = ScalarFunction("f∘ψ₁", lambda m, a=a, b=b: form(a, psi1(m)) * form(b, psi1(m)))
            G = ScalarFunction("g∘ψ₁", lambda m, c=c, d=d: form(c, psi1(m)) * form(d, psi1(m)))
            gf = form(b, w) * a + form(a, w) * b
            gg = form(d, w) * c + form(c, w) * d
        else:
            a = Element(alg, gi @ rng.uniform(-1, 1, alg.dim))
            c = Element(alg, gi @ rng.uniform(-1, 1, alg.dim))
            F = pullback_psi1_coordinate(a, "f∘ψ₁")
            G = pullback_psi1_coordinate(c, "g∘ψ₁")
            gf, gg = a, c
        lhs = linear_bracket(F, G, m, cfg)
        rhs = lie_poisson_bracket(gf, gg, w)
        worst = max(worst, abs(lhs - rhs))
    return CheckReport(
        check="morphism-psi1",
        anchor="psi1-poisson-morphism",
        algebra=alg.name,
        params={"samples": samples, "seed": seed, "tol": tol},
        measured=worst,
        expected=f"< {tol:g}",
        verdict=worst < tol,
    )
