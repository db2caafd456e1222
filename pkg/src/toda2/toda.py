"""The classical Toda lattice as the diagonal restriction of the 2-Toda system.

Single-algebra side: T_T = 𝔤₋₁ ⊕ 𝔤₀ + e carries the R-bracket

    {f, g}_R(x) = ½⟨x, [R∇f, ∇g] + [∇f, R∇g]⟩,

whose flow for H = P₁ is the Toda equation Ȧ = [A₊, A].  The diagonal
embedding φ(x) = (x, x) lands in T_T′ = Δ(𝔤₋₁⊕𝔤₀) + (e, e) ⊂ T_P, and
matching dual coordinates through φ gives a Poisson isomorphism between
(T_T, {,}_R) and (T_T′, {,}_ℛ).  Restricting the pencil family to the
diagonal collapses it into binomial multiples of the Toda invariants:
F_{k,i}(φ(x)) = C(m_i+1, k)·P_i(x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import AlgebraSpec, Element, bracket, form, project
from .flows import _rk4_step
from .invariants import expand_pencil, trace_invariant
from .poisson import (
    PhaseSpace,
    PreconditionError,
    ScalarFunction,
    linear_bracket,
    numerical_rank,
)
from .rmatrix import PairPoint, RMatrixConfig, r_apply

__all__ = [
    "TodaSpace",
    "toda_space",
    "diag_phase_space",
    "embed_phi",
    "field_toda",
    "r_poisson_bracket",
    "toda_hamiltonian_field",
    "check_poisson_iso",
    "check_binomial_identity",
    "toda_suite",
]

_DEFAULT = RMatrixConfig()


@dataclass(frozen=True, eq=False)
class TodaSpace:
    """The affine space T_T = 𝔤₋₁ ⊕ 𝔤₀ + e inside a single algebra."""

    alg: AlgebraSpec
    base: Element
    tangent: tuple[Element, ...]

    @property
    def dim(self) -> int:
        return len(self.tangent)

    @cached_property
    def tangent_matrix(self) -> np.ndarray:
        return np.stack([t.coords for t in self.tangent], axis=1)

    @cached_property
    def _pinv(self) -> np.ndarray:
        return np.linalg.pinv(self.tangent_matrix)

    def membership_residual(self, x: Element) -> float:
        v = x.coords - self.base.coords
        return float(np.abs(v - self.tangent_matrix @ (self._pinv @ v)).max())

    def require_member(self, x: Element, tol: float = 1e-10) -> None:
        r = self.membership_residual(x)
        if r > tol:
            raise PreconditionError(
                f"element lies off T_T (normal residual {r:.3e} > {tol:g})"
            )

    def normal_residual(self, w: Element) -> float:
        v = w.coords
        return float(np.abs(v - self.tangent_matrix @ (self._pinv @ v)).max())

    def point_from_coords(self, u) -> Element:
        return Element(
            self.alg, self.base.coords + self.tangent_matrix @ np.asarray(u, float)
        )

    def sample_points(self, seed: int, count: int) -> list[Element]:
        rng = np.random.default_rng(seed)
        return [
            self.point_from_coords(rng.uniform(-1.0, 1.0, self.dim))
            for _ in range(count)
        ]

    @cached_property
    def coords(self) -> tuple[ScalarFunction, ...]:
        """Euclidean-dual coordinate functions (Element → scalar, with gradients)."""
        duals = self._pinv.T
        gi = self.alg.gram_inv
        out = []
        for a in range(self.dim):
            d = duals[:, a].copy()
            grad = Element(self.alg, gi @ d)
            out.append(
                ScalarFunction(
                    f"T_T[{a}]",
                    lambda x, d=d, b=self.base.coords: float(d @ (x.coords - b)),
                    lambda x, g=grad: g,
                )
            )
        return tuple(out)


def toda_space(alg: AlgebraSpec) -> TodaSpace:
    tangent = tuple(
        Element(alg, v)
        for v in np.eye(alg.dim)[alg.mask(">=-1") & alg.mask("<=0")]
    )
    return TodaSpace(alg=alg, base=alg.e, tangent=tangent)


def diag_phase_space(alg: AlgebraSpec) -> PhaseSpace:
    """T_T′ = Δ(𝔤₋₁⊕𝔤₀) + (e, e), the diagonal image of T_T inside 𝔤×𝔤."""
    ts = toda_space(alg)
    tangent = tuple(PairPoint(t, t) for t in ts.tangent)
    return PhaseSpace("T_T'", PairPoint(alg.e, alg.e), tangent)


def embed_phi(ts: TodaSpace, x: Element, tol: float = 1e-10) -> PairPoint:
    """φ(x) = (x, x), with a membership check on the Toda space."""
    ts.require_member(x, tol)
    return PairPoint(x, x)


def field_toda(x: Element, cfg: RMatrixConfig = _DEFAULT) -> Element:
    """The Toda equation right-hand side [A₊, A]."""
    return bracket(project(x, cfg.plus_region), x)


# --------------------------------------------------------------------------
# single-algebra R-bracket machinery
# --------------------------------------------------------------------------


def _gradient_g(f: ScalarFunction, x: Element, step: float = 1e-5) -> Element:
    if f.gradient is not None:
        return f.gradient(x)
    alg = x.alg
    w = np.empty(alg.dim)
    for a in range(alg.dim):
        vp, vm = x.coords.copy(), x.coords.copy()
        vp[a] += step
        vm[a] -= step
        w[a] = (f(Element(alg, vp)) - f(Element(alg, vm))) / (2.0 * step)
    return Element(alg, alg.gram_inv @ w)


def r_poisson_bracket(f: ScalarFunction, g: ScalarFunction, x: Element,
                      cfg: RMatrixConfig = _DEFAULT) -> float:
    """{f, g}_R(x) = ½⟨x, [R∇f, ∇g] + [∇f, R∇g]⟩ on the single algebra."""
    gf = _gradient_g(f, x)
    gg = _gradient_g(g, x)
    term = bracket(r_apply(gf, cfg), gg) + bracket(gf, r_apply(gg, cfg))
    return 0.5 * form(x, term)


def toda_hamiltonian_field(f: ScalarFunction, x: Element,
                           cfg: RMatrixConfig = _DEFAULT) -> Element:
    """X_f(x) with X_f[K] = {K, f}_R, assembled from basis coordinates of 𝔤."""
    alg = x.alg
    gf = _gradient_g(f, x)
    rf = r_apply(gf, cfg)
    gi = alg.gram_inv
    v = np.empty(alg.dim)
    for a in range(alg.dim):
        pa = Element(alg, gi[:, a].copy())
        term = bracket(r_apply(pa, cfg), gf) + bracket(pa, rf)
        v[a] = 0.5 * form(x, term)
    return Element(alg, v)


def integrate_toda(x0: Element, dt: float = 1e-3, T: float = 1.0,
                   cfg: RMatrixConfig = _DEFAULT):
    """RK4 run of Ȧ = [A₊, A]; returns (times, states) coordinate arrays."""
    alg = x0.alg

    def f(v):
        return field_toda(Element(alg, v), cfg).coords

    n_steps = int(round(T / dt))
    states = [x0.coords.copy()]
    for _ in range(n_steps):
        states.append(_rk4_step(f, states[-1], dt))
    return np.arange(n_steps + 1) * dt, np.array(states)


# --------------------------------------------------------------------------
# the reduction checks
# --------------------------------------------------------------------------


def check_poisson_iso(alg: AlgebraSpec, samples: int = 100, seed: int = 42,
                      cfg: RMatrixConfig = _DEFAULT):
    """φ matches the R-bracket on T_T with the ℛ-bracket on T_T′.

    Coordinate functions are the Euclidean duals of the matched tangent
    bases (t_a on the Toda side, (t_a, t_a) on the diagonal side), so
    ξ_a∘φ = ζ_a identically and the residual |{ξ_a,ξ_b}_ℛ(φx) − {ζ_a,ζ_b}_R(x)|
    measures exactly the Poisson property.
    """
    from .reports import CheckReport

    ts = toda_space(alg)
    dps = diag_phase_space(alg)
    xi = dps.coords
    zeta = ts.coords
    rng = np.random.default_rng(seed)
    worst = 0.0
    k = ts.dim
    for _ in range(samples):
        x = ts.point_from_coords(rng.uniform(-1.0, 1.0, k))
        p = embed_phi(ts, x)
        for a in range(k):
            for b in range(a + 1, k):
                lhs = linear_bracket(xi[a], xi[b], p, cfg)
                rhs = r_poisson_bracket(zeta[a], zeta[b], x, cfg)
                worst = max(worst, abs(lhs - rhs))
    return CheckReport(
        check="toda-poisson-iso",
        anchor="diagonal-embedding-poisson-iso",
        algebra=alg.name,
        params={"samples": samples, "seed": seed, "tol": 1e-9},
        measured=worst,
        expected="< 1e-09",
        verdict=worst < 1e-9,
    )


def check_binomial_identity(alg: AlgebraSpec, samples: int = 20, seed: int = 42):
    """F_{k,i}(φ(x)) = C(m_i+1, k) · P_i(x) on seeded Toda points, to 1e−10."""
    from .reports import CheckReport

    ts = toda_space(alg)
    gens = {i: trace_invariant(alg, i) for i in alg.exponents}
    worst = 0.0
    for x in ts.sample_points(seed, samples):
        p = PairPoint(x, x)
        for i in alg.exponents:
            exp = expand_pencil(alg, i, p)
            pi = gens[i](x)
            for k in range(i + 2):
                target = math.comb(i + 1, k) * pi
                worst = max(worst, abs(exp.coeffs[k] - target))
    return CheckReport(
        check="toda-binomial",
        anchor="diagonal-binomial-collapse",
        algebra=alg.name,
        params={"samples": samples, "seed": seed, "tol": 1e-10},
        measured=worst,
        expected="< 1e-10",
        verdict=worst < 1e-10,
    )


def toda_suite(alg: AlgebraSpec, seed: int = 42, cfg: RMatrixConfig = _DEFAULT) -> list:
    """The Toda-side verification battery; returns a list of CheckReports."""
    from .reports import CheckReport

    ts = toda_space(alg)
    reports = []
    points = ts.sample_points(seed, 20)
    coords_g = [
        ScalarFunction(
            f"z[{a}]",
            lambda x, a=a: x.coords[a],
            lambda x, g=Element(alg, alg.gram_inv[:, a].copy()): g,
        )
        for a in range(alg.dim)
    ]

    # T_T is a Poisson submanifold: every Hamiltonian field is tangent to it
    worst = max(
        ts.normal_residual(toda_hamiltonian_field(z, x, cfg))
        for x in points[:5]
        for z in coords_g
    )
    reports.append(CheckReport(
        check="toda-submanifold",
        anchor="toda-space-poisson-submanifold",
        algebra=alg.name,
        params={"points": 5, "seed": seed, "tol": 1e-9},
        measured=worst, expected="< 1e-09", verdict=worst < 1e-9,
    ))

    # the P₁ flow is the Toda equation [A₊, A]
    p1 = trace_invariant(alg, 1)
    worst = max(
        (toda_hamiltonian_field(p1, x, cfg) - field_toda(x, cfg)).norm()
        for x in points
    )
    reports.append(CheckReport(
        check="toda-lax-form",
        anchor="toda-flow-is-lax-bracket",
        algebra=alg.name,
        params={"points": len(points), "seed": seed, "tol": 1e-9},
        measured=worst, expected="< 1e-09", verdict=worst < 1e-9,
    ))

    # involutivity of the P_i on (𝔤, R-bracket)
    gens = [trace_invariant(alg, i) for i in alg.exponents]
    worst = 0.0
    for x in points:
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                worst = max(worst, abs(r_poisson_bracket(gens[a], gens[b], x, cfg)))
    reports.append(CheckReport(
        check="toda-involutivity",
        anchor="toda-invariants-involutive",
        algebra=alg.name,
        params={"points": len(points), "seed": seed, "tol": 1e-9},
        measured=worst, expected="< 1e-09", verdict=worst < 1e-9,
    ))

    # independence of the P_i on T_T
    best = 0
    for x in points:
        rows = np.array(
            [[form(_gradient_g(g, x), t) for t in ts.tangent] for g in gens]
        )
        best = max(best, numerical_rank(rows))
    reports.append(CheckReport(
        check="toda-independence",
        anchor="toda-invariants-independent",
        algebra=alg.name,
        params={"points": len(points), "seed": seed},
        measured=best, expected=alg.rank, verdict=best == alg.rank,
    ))

    # conservation along the integrated Toda flow
    x0 = ts.point_from_coords(
        np.random.default_rng(seed).uniform(-1.0, 1.0, ts.dim)
    )
    _, states = integrate_toda(x0, dt=1e-3, T=1.0, cfg=cfg)
    worst = 0.0
    for g in gens:
        vals = np.array([g(Element(alg, v)) for v in states])
        worst = max(worst, float(np.abs(vals - vals[0]).max() / (1.0 + abs(vals[0]))))
    reports.append(CheckReport(
        check="toda-conservation",
        anchor="toda-flow-conserves-invariants",
        algebra=alg.name,
        params={"dt": 1e-3, "T": 1.0, "seed": seed, "tol": 1e-6},
        measured=worst, expected="< 1e-06", verdict=worst < 1e-6,
    ))

    # the diagonal is t-flow invariant and the pushforward matches field_t
    from .flows import field_t

    worst = 0.0
    for x in points:
        ft = field_t(PairPoint(x, x), cfg)
        xt = field_toda(x, cfg)
        worst = max(worst, (ft - PairPoint(xt, xt)).norm())
    reports.append(CheckReport(
        check="toda-diagonal-consistency",
        anchor="t-flow-restricts-to-toda-flow",
        algebra=alg.name,
        params={"points": len(points), "seed": seed, "tol": 1e-10},
        measured=worst, expected="< 1e-10", verdict=worst < 1e-10,
    ))

    return reports
