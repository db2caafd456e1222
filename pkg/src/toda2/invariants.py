"""The conserved family F_{j,i} from trace invariants of the pencil λx − y.

For each generator label i (= exponent m_i, so the generator is
P_i(u) = Tr(u^{m_i+1})/(m_i+1)) the expansion

    P_i(λx − y) = Σ_{j=0}^{m_i+1} (−1)^{m_i+1−j} λ^j F_{j,i}(x, y)

defines the family members; their ⟨·,·⟩₂-gradients come from reading
λ-coefficients of the matrix polynomial (λx − y)^{m_i}:

    ∇F_{j,i}(x, y) = (−1)^{m_i+1−j}(ĝ(W_{j−1}), ĝ(W_j)),   W = (λx−y)^{m_i},

with W_{−1} = W_{m_i+1} = 0 and ĝ the trace-form projection onto 𝔤 (for gl
this is the matrix itself, for sl the traceless part).  Everything is exact
polynomial-matrix arithmetic — no λ sampling — so downstream involutivity
residuals sit at machine precision.

Conventions that make the family uniform across sl and gl: on sl(n) the
labels are the exponents 1..n−1; on gl(n) they are 0..n−1 (so F_{0,0} = Tr(y)
and F_{1,0} = Tr(x) join the family).  Function names follow "F_{j}_{i}".
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraSpec, Element
from .poisson import PhaseSpace, ScalarFunction, numerical_rank
from .rmatrix import PairPoint

__all__ = [
    "PencilExpansion",
    "RaisData",
    "trace_invariant",
    "expand_pencil",
    "pencil_pullback",
    "family",
    "family_labels",
    "rais_vectors",
    "independence_rank",
]


# --------------------------------------------------------------------------
# polynomial-matrix arithmetic: a polynomial is a list of (n, n) coefficients
# --------------------------------------------------------------------------


def matpoly_mul(A: list[np.ndarray], B: list[np.ndarray]) -> list[np.ndarray]:
    n = A[0].shape[0]
    out = [np.zeros((n, n)) for _ in range(len(A) + len(B) - 1)]
    for i, Ai in enumerate(A):
        for j, Bj in enumerate(B):
            out[i + j] += Ai @ Bj
    return out


def matpoly_pow(base: list[np.ndarray], k: int) -> list[np.ndarray]:
    n = base[0].shape[0]
    result = [np.eye(n)]
    for _ in range(k):
        result = matpoly_mul(result, base)
    return result


# --------------------------------------------------------------------------
# generators and the pencil expansion
# --------------------------------------------------------------------------


def trace_invariant(alg: AlgebraSpec, i: int) -> ScalarFunction:
    """P_i(x) = Tr(x^{i+1})/(i+1) on 𝔤, with trace-form gradient ĝ(x^i).

    Returned as a ScalarFunction over single Elements (evaluator and gradient
    both take and return Elements).
    """
    if i < 0:
        raise ValueError(f"trace_invariant: generator label must be ≥ 0, got {i}")

    def evaluate(x: Element) -> float:
        return float(np.trace(np.linalg.matrix_power(x.matrix(), i + 1))) / (i + 1)

    def gradient(x: Element) -> Element:
        p = np.linalg.matrix_power(x.matrix(), i)
        return Element(alg, alg.gradient_from_matrix(p))

    return ScalarFunction(f"P_{i}", evaluate, gradient)


@dataclass(frozen=True)
class PencilExpansion:
    """Coefficients F_{j,i} and gradients ∇F_{j,i} of P_i(λx−y) at one point."""

    i: int                                # generator label (the exponent m_i)
    degree: int                           # m_i + 1
    coeffs: np.ndarray                    # length m_i + 2
    grad_coeffs: tuple[PairPoint, ...]    # length m_i + 2

    def pencil_value(self, lam: float) -> float:
        """Σ_j (−1)^{m_i+1−j} λ^j coeffs[j] — should equal P_i(λx − y)."""
        d = self.degree
        return float(
            sum((-1.0) ** (d - j) * lam**j * self.coeffs[j] for j in range(d + 1))
        )


def expand_pencil(alg: AlgebraSpec, i: int, m: PairPoint) -> PencilExpansion:
    """Exact λ-coefficient extraction of P_i(λx−y) and its gradient at m."""
    if i < 0:
        raise ValueError(f"expand_pencil: generator label must be ≥ 0, got {i}")
    d = i + 1
    X, Y = m.x.matrix(), m.y.matrix()
    base = [-Y, X]
    W = matpoly_pow(base, d)          # d+1 coefficient matrices
    V = matpoly_pow(base, d - 1)      # d matrices, the gradient source
    coeffs = np.array(
        [(-1.0) ** (d - j) * np.trace(W[j]) / d for j in range(d + 1)]
    )
    zero = np.zeros_like(X)
    grads = []
    for j in range(d + 1):
        sgn = (-1.0) ** (d - j)
        left = V[j - 1] if 1 <= j <= d else zero
        right = V[j] if j <= d - 1 else zero
        grads.append(
            PairPoint(
                Element(alg, sgn * alg.gradient_from_matrix(left)),
                Element(alg, sgn * alg.gradient_from_matrix(right)),
            )
        )
    return PencilExpansion(i=i, degree=d, coeffs=coeffs, grad_coeffs=tuple(grads))


def pencil_pullback(alg: AlgebraSpec, i: int, lam: float) -> ScalarFunction:
    """P_i∘ψ_λ as a pair function: m ↦ P_i(λx − y), gradient (λ∇P_i(w), ∇P_i(w)).

    λ = 1 gives the Casimir pullbacks of the linear bracket.
    """
    P = trace_invariant(alg, i)

    def evaluate(m: PairPoint) -> float:
        return P(lam * m.x - m.y)

    def gradient(m: PairPoint) -> PairPoint:
        g = P.gradient(lam * m.x - m.y)
        return PairPoint(lam * g, g)

    return ScalarFunction(f"P_{i}∘ψ_{lam:g}", evaluate, gradient)


def family_labels(alg: AlgebraSpec) -> list[tuple[int, int]]:
    """(j, i) index pairs of the family, in generator-major order."""
    return [(j, i) for i in alg.exponents for j in range(i + 2)]


def family(alg: AlgebraSpec) -> list[ScalarFunction]:
    """The full conserved family as ScalarFunctions named F_{j}_{i}."""
    out = []
    for i in alg.exponents:
        for j in range(i + 2):
            out.append(
                ScalarFunction(
                    f"F_{j}_{i}",
                    lambda m, i=i, j=j: expand_pencil(m.alg, i, m).coeffs[j],
                    lambda m, i=i, j=j: expand_pencil(m.alg, i, m).grad_coeffs[j],
                )
            )
    return out


def family_expansions(alg: AlgebraSpec, m: PairPoint) -> dict[int, PencilExpansion]:
    """All generators expanded at one point (sweep helper, avoids rework)."""
    return {i: expand_pencil(alg, i, m) for i in alg.exponents}


# --------------------------------------------------------------------------
# Raïs vectors and independence
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RaisData:
    """The vectors V_{k,i} = k!·∂_x F_{k+1,i}(e, h), their rank and degrees."""

    vectors: tuple[tuple[int, int, Element], ...]   # (k, i, V_{k,i})
    rank: int
    degree_profile: tuple[int, ...]
    max_negative_component: float

    @property
    def count(self) -> int:
        return len(self.vectors)


def rais_vectors(alg: AlgebraSpec) -> RaisData:
    point = PairPoint(alg.e, alg.h)
    vectors = []
    for i in alg.exponents:
        exp = expand_pencil(alg, i, point)
        for k in range(i + 1):
            u = math.factorial(k) * exp.grad_coeffs[k + 1].x
            vectors.append((k, i, u))
    stack = np.stack([v.coords for (_, _, v) in vectors])
    rank = numerical_rank(stack)
    degrees = alg.degrees
    present = sorted(
        {int(d) for (_, _, v) in vectors for d in degrees[np.abs(v.coords) > 1e-12]}
    )
    neg = max(
        (float(np.abs(v.coords[degrees < 0]).max()) if np.any(degrees < 0) else 0.0)
        for (_, _, v) in vectors
    )
    return RaisData(
        vectors=tuple(vectors),
        rank=rank,
        degree_profile=tuple(present),
        max_negative_component=neg,
    )


def independence_rank(functions: list[ScalarFunction], ps: PhaseSpace,
                      points: list[PairPoint]) -> int:
    """Max over points of the Jacobian rank of the family restricted to ps.

    Row (F, a) is ⟨∇F(m), t_a⟩₂ over the tangent basis t_a — the differential
    of F along the phase space.
    """
    if not points:
        raise ValueError("independence_rank needs at least one point")
    from .poisson import gradient2
    from .rmatrix import form2

    best = 0
    for m in points:
        rows = np.array(
            [[form2(gradient2(F, m), t) for t in ps.tangent] for F in functions]
        )
        best = max(best, numerical_rank(rows))
    return best
