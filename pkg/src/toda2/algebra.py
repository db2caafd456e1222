"""Graded Lie algebras 𝔤 = ⊕_k 𝔤_k with an invariant trace form.

An :class:`AlgebraSpec` stores a homogeneous basis of a matrix Lie algebra
together with the integer degree of each basis vector, the trace-form Gram
matrix, the exponents m_1 ≤ … ≤ m_ℓ, the Cartan matrix, and the principal
pair (e, h) normalised so that [h, e] = 2e.  Degrees come from the matrix
diagonal: the elementary matrix E_ij sits in degree j − i, so 𝔤₀ is the
diagonal (Cartan) part, 𝔤₁ the first superdiagonal, and so on.

Everything downstream (projections, R-matrices, Poisson brackets) reduces to
coordinate masks and dense tensor contractions against the data cached here.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path

import numpy as np

__all__ = [
    "AlgebraError",
    "AlgebraValidationError",
    "AlgebraSpec",
    "Element",
    "bracket",
    "form",
    "project",
    "mult",
    "build_sl",
    "build_gl",
    "load_spec",
    "save_spec",
    "validate_spec",
    "parse_region",
]


class AlgebraError(ValueError):
    """Bad algebra input: wrong order, mismatched handles, off-span matrices."""


class AlgebraValidationError(AlgebraError):
    """An algebra-spec document violates a structural invariant."""

    def __init__(self, name: str, violations: list[dict]):
        self.violations = violations
        parts = []
        for v in violations:
            frag = v["invariant"]
            if v.get("indices") is not None:
                frag += f" at {v['indices']}"
            if v.get("residual") is not None:
                frag += f" (residual {v['residual']:.3g})"
            parts.append(frag)
        super().__init__(f"algebra spec '{name}' violates: " + "; ".join(parts))


# --------------------------------------------------------------------------
# degree regions
# --------------------------------------------------------------------------

_REGION_RE = re.compile(r"\s*(>=|<=|==|=|<|>)\s*(-?\d+)\s*$")


def parse_region(region: str) -> tuple[str, int]:
    """Parse a degree predicate like ``'>=0'``, ``'<0'``, ``'=2'``."""
    m = _REGION_RE.match(region)
    if m is None:
        raise AlgebraError(f"cannot parse degree region {region!r}")
    op, k = m.group(1), int(m.group(2))
    if op == "==":
        op = "="
    return op, k


_OPS = {
    ">=": lambda d, k: d >= k,
    "<=": lambda d, k: d <= k,
    "<": lambda d, k: d < k,
    ">": lambda d, k: d > k,
    "=": lambda d, k: d == k,
}


def degree_mask(degrees: np.ndarray, region: str) -> np.ndarray:
    op, k = parse_region(region)
    return _OPS[op](degrees, k)


# --------------------------------------------------------------------------
# the algebra container
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    """A finite-dimensional graded Lie algebra in a faithful matrix rep.

    Fields mirror the on-disk algebra-spec document; derived tensors
    (structure constants, product tensor, Gram inverse) are cached lazily.
    """

    name: str
    dim: int
    rank: int
    basis: np.ndarray            # (dim, n, n)
    degrees: np.ndarray          # (dim,) integers
    gram: np.ndarray             # (dim, dim), ⟨b_a, b_b⟩ = Tr(b_a b_b)
    exponents: tuple[int, ...]   # m_1 ≤ … ≤ m_ℓ
    cartan: np.ndarray           # (ℓ, ℓ) integers
    e_coords: np.ndarray
    h_coords: np.ndarray
    associative: bool
    n: int | None = None         # matrix size of the stored rep, if meaningful

    # -- derived, cached ---------------------------------------------------

    @cached_property
    def matrix_size(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def _flat_basis(self) -> np.ndarray:
        # columns are the flattened basis matrices, shape (n², dim)
        return self.basis.reshape(self.dim, -1).T

    @cached_property
    def _flat_pinv(self) -> np.ndarray:
        return np.linalg.pinv(self._flat_basis)

    @cached_property
    def struct(self) -> np.ndarray:
        """Structure constants C[a,b,c]: [b_a, b_b] = Σ_c C[a,b,c] b_c."""
        prod = np.einsum("aik,bkj->abij", self.basis, self.basis)
        comm = prod - prod.transpose(1, 0, 2, 3)
        return comm.reshape(self.dim, self.dim, -1) @ self._flat_pinv.T

    @cached_property
    def prod_tensor(self) -> np.ndarray:
        """Associative product tensor P[a,b,c]: b_a b_b = Σ_c P[a,b,c] b_c."""
        if not self.associative:
            raise AlgebraError(
                f"{self.name}: matrix product does not close on a "
                "non-associative spec (associative=False)"
            )
        prod = np.einsum("aik,bkj->abij", self.basis, self.basis)
        return prod.reshape(self.dim, self.dim, -1) @ self._flat_pinv.T

    @cached_property
    def gram_inv(self) -> np.ndarray:
        return np.linalg.inv(self.gram)

    @cached_property
    def identity_coords(self) -> np.ndarray:
        """Coordinates of the identity matrix (associative algebras only)."""
        return self.from_matrix(np.eye(self.matrix_size))

    # -- element plumbing --------------------------------------------------

    def element(self, coords) -> "Element":
        c = np.asarray(coords, dtype=float)
        if c.shape != (self.dim,):
            raise AlgebraError(
                f"{self.name}: coordinate vector has shape {c.shape}, "
                f"expected ({self.dim},)"
            )
        return Element(self, c)

    def zero(self) -> "Element":
        return Element(self, np.zeros(self.dim))

    @cached_property
    def e(self) -> "Element":
        return Element(self, np.asarray(self.e_coords, dtype=float))

    @cached_property
    def h(self) -> "Element":
        return Element(self, np.asarray(self.h_coords, dtype=float))

    def to_matrix(self, coords: np.ndarray) -> np.ndarray:
        return np.einsum("a,aij->ij", coords, self.basis)

    def from_matrix(self, mat: np.ndarray, tol: float = 1e-10) -> np.ndarray:
        """Coordinates of a matrix; error if it lies off the basis span."""
        flat = np.asarray(mat, dtype=float).ravel()
        coords = self._flat_pinv @ flat
        residual = np.linalg.norm(self._flat_basis @ coords - flat)
        scale = 1.0 + np.linalg.norm(flat)
        if residual > tol * scale:
            raise AlgebraError(
                f"{self.name}: matrix lies outside the algebra span "
                f"(reconstruction residual {residual:.3e}, scale {scale:.3e})"
            )
        return coords

    def gradient_from_matrix(self, mat: np.ndarray) -> np.ndarray:
        """Coordinates of the unique g ∈ 𝔤 with ⟨g, z⟩ = Tr(mat·z) ∀ z ∈ 𝔤.

        This is the trace-form projection onto the algebra: for gl it is
        plain `from_matrix`, for sl it strips the trace part, and for an
        imported orthogonal algebra it projects along the form-orthogonal
        complement.  `mat` itself need not belong to the span.
        """
        rhs = np.einsum("ij,aji->a", np.asarray(mat, dtype=float), self.basis)
        return np.linalg.solve(self.gram, rhs)

    def ad(self, x: "Element") -> np.ndarray:
        """Matrix of ad_x in basis coordinates: (ad_x)_{cb} = Σ_a x_a C[a,b,c]."""
        return np.einsum("a,abc->cb", x.coords, self.struct)

    def mask(self, region: str) -> np.ndarray:
        return degree_mask(self.degrees, region)


@dataclass(frozen=True, eq=False)
class Element:
    alg: AlgebraSpec
    coords: np.ndarray

    def matrix(self) -> np.ndarray:
        return self.alg.to_matrix(self.coords)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def __add__(self, other: "Element") -> "Element":
        _same_algebra(self, other)
        return Element(self.alg, self.coords + other.coords)

    def __sub__(self, other: "Element") -> "Element":
        _same_algebra(self, other)
        return Element(self.alg, self.coords - other.coords)

    def __neg__(self) -> "Element":
        return Element(self.alg, -self.coords)

    def __mul__(self, s: float) -> "Element":
        return Element(self.alg, self.coords * float(s))

    __rmul__ = __mul__


def _same_algebra(x: Element, y: Element) -> None:
    if x.alg is not y.alg:
        raise AlgebraError(
            f"mismatched algebra handles: {x.alg.name} vs {y.alg.name}"
        )


# --------------------------------------------------------------------------
# the four basic operations
# --------------------------------------------------------------------------


def bracket(x: Element, y: Element) -> Element:
    """Lie bracket [x, y] via the cached structure constants."""
    _same_algebra(x, y)
    c = np.einsum("a,b,abc->c", x.coords, y.coords, x.alg.struct)
    return Element(x.alg, c)


def form(x: Element, y: Element) -> float:
    """Invariant trace form ⟨x, y⟩ = Tr(xy) through the Gram matrix."""
    _same_algebra(x, y)
    return float(x.coords @ x.alg.gram @ y.coords)


def project(x: Element, region: str) -> Element:
    """Projection onto the span of basis vectors whose degree satisfies `region`."""
    return Element(x.alg, np.where(x.alg.mask(region), x.coords, 0.0))


def mult(x: Element, y: Element) -> Element:
    """Associative matrix product xy (needs spec.associative)."""
    _same_algebra(x, y)
    c = np.einsum("a,b,abc->c", x.coords, y.coords, x.alg.prod_tensor)
    return Element(x.alg, c)


# --------------------------------------------------------------------------
# builders
# --------------------------------------------------------------------------


def _type_a_cartan(size: int) -> np.ndarray:
    C = 2 * np.eye(size, dtype=int)
    for i in range(size - 1):
        C[i, i + 1] = C[i + 1, i] = -1
    return C


def _assemble(name, mats, degs, exponents, cartan, e_mat, h_mat, associative, n):
    basis = np.array(mats, dtype=float)
    dim = basis.shape[0]
    gram = np.einsum("aij,bji->ab", basis, basis)
    flat = basis.reshape(dim, -1).T
    pinv = np.linalg.pinv(flat)
    spec = AlgebraSpec(
        name=name,
        dim=dim,
        rank=len(exponents),
        basis=basis,
        degrees=np.array(degs, dtype=int),
        gram=gram,
        exponents=tuple(exponents),
        cartan=np.asarray(cartan, dtype=int),
        e_coords=pinv @ np.asarray(e_mat, dtype=float).ravel(),
        h_coords=pinv @ np.asarray(h_mat, dtype=float).ravel(),
        associative=associative,
        n=n,
    )
    violations = validate_spec(spec)
    if violations:
        raise AlgebraValidationError(name, violations)
    return spec


def build_sl(n: int) -> AlgebraSpec:
    """sl(n): traceless n×n matrices, diagonal grading, e = superdiagonal ones."""
    if n < 2:
        raise AlgebraError(f"build_sl: order must be ≥ 2, got {n}")
    mats, degs = [], []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            E = np.zeros((n, n))
            E[i, j] = 1.0
            mats.append(E)
            degs.append(j - i)
    for k in range(n - 1):
        H = np.zeros((n, n))
        H[k, k], H[k + 1, k + 1] = 1.0, -1.0
        mats.append(H)
        degs.append(0)
    e_mat = np.diag(np.ones(n - 1), k=1)
    h_mat = np.diag([n - 1 - 2 * i for i in range(n)]).astype(float)
    return _assemble(
        f"sl{n}", mats, degs, range(1, n), _type_a_cartan(n - 1),
        e_mat, h_mat, associative=False, n=n,
    )


def build_gl(n: int) -> AlgebraSpec:
    """gl(n): all n×n matrices; exponent labels 0..n−1 so P_i = Tr(x^{i+1})/(i+1).

    The Cartan matrix stores the A_{n−1} matrix of the simple part padded by a
    zero row/column for the extra (central) generator label.
    """
    if n < 2:
        raise AlgebraError(f"build_gl: order must be ≥ 2, got {n}")
    mats, degs = [], []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n))
            E[i, j] = 1.0
            mats.append(E)
            degs.append(j - i)
    cartan = np.zeros((n, n), dtype=int)
    cartan[: n - 1, : n - 1] = _type_a_cartan(n - 1)
    e_mat = np.diag(np.ones(n - 1), k=1)
    h_mat = np.diag([n - 1 - 2 * i for i in range(n)]).astype(float)
    return _assemble(
        f"gl{n}", mats, degs, range(0, n), cartan,
        e_mat, h_mat, associative=True, n=n,
    )


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------


def validate_spec(spec: AlgebraSpec) -> list[dict]:
    """Check every structural invariant; return a list of violation records.

    Each record carries the violated invariant's name, the offending basis
    indices when meaningful, and the numerical residual.
    """
    out: list[dict] = []

    def hit(invariant, residual=None, indices=None):
        rec = {"invariant": invariant}
        if residual is not None:
            rec["residual"] = float(residual)
        if indices is not None:
            rec["indices"] = tuple(int(i) for i in indices)
        out.append(rec)

    B, D = spec.basis, spec.degrees
    dim = spec.dim
    if B.shape[0] != dim or B.shape[1] != B.shape[2]:
        hit("basis-shape")
        return out
    if len(D) != dim:
        hit("degrees-length")
        return out

    flat = spec._flat_basis
    if np.linalg.matrix_rank(flat) < dim:
        hit("basis-independence")
        return out

    # bracket closure + grading, basis pair by basis pair
    prod = np.einsum("aik,bkj->abij", B, B)
    comm = prod - prod.transpose(1, 0, 2, 3)
    coeffs = comm.reshape(dim, dim, -1) @ spec._flat_pinv.T
    recon = np.einsum("abc,cij->abij", coeffs, B)
    close_res = np.abs(recon - comm).max(axis=(2, 3))
    scale = 1.0 + np.abs(comm).max()
    bad = np.argwhere(close_res > 1e-12 * scale)
    for a, b in bad[:5]:
        hit("bracket-closure", close_res[a, b], (a, b))

    degsum = D[:, None] + D[None, :]
    off_grade = np.abs(coeffs) * (D[None, None, :] != degsum[:, :, None])
    bad = np.argwhere(off_grade.max(axis=2) > 1e-12)
    for a, b in bad[:5]:
        hit("grading", off_grade[a, b].max(), (a, b))

    # graded orthogonality of the form and non-degeneracy
    G = spec.gram
    gram_res = np.abs(G) * (degsum != 0)
    bad = np.argwhere(gram_res > 1e-11 * (1.0 + np.abs(G).max()))
    for a, b in bad[:5]:
        hit("graded-orthogonality", gram_res[a, b], (a, b))
    if np.abs(G - G.T).max() > 1e-12 * (1.0 + np.abs(G).max()):
        hit("gram-symmetry", np.abs(G - G.T).max())
    sv = np.linalg.svd(G, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        hit("form-nondegenerate", sv[-1] / sv[0])

    # form invariance ⟨[x,y],z⟩ + ⟨y,[x,z]⟩ = 0 on basis triples
    bf = np.einsum("abc,cd->abd", coeffs, G)       # ⟨[b_a,b_b], b_d⟩
    inv_res = np.abs(bf + bf.transpose(0, 2, 1)).max()
    if inv_res > 1e-11 * (1.0 + np.abs(bf).max()):
        hit("form-invariance", inv_res)

    # antisymmetry + Jacobi on the basis
    anti = np.abs(coeffs + coeffs.transpose(1, 0, 2)).max()
    if anti > 1e-11:
        hit("bracket-antisymmetry", anti)
    jac = (
        np.einsum("abe,ecd->abcd", coeffs, coeffs)
        + np.einsum("bce,ead->abcd", coeffs, coeffs)
        + np.einsum("cae,ebd->abcd", coeffs, coeffs)
    )
    jac_res = np.abs(jac).max()
    if jac_res > 1e-11 * (1.0 + np.abs(coeffs).max() ** 2):
        hit("jacobi", jac_res)

    # principal pair
    e, h = spec.element(spec.e_coords), spec.element(spec.h_coords)
    he = bracket(h, e)
    he_res = np.abs(he.coords - 2.0 * e.coords).max()
    if he_res > 1e-12 * (1.0 + np.abs(e.coords).max()):
        hit("he-relation", he_res)
    if np.abs(np.where(D == 1, 0.0, e.coords)).max() > 1e-12:
        hit("e-degree")
    if np.abs(np.where(D == 0, 0.0, h.coords)).max() > 1e-12:
        hit("h-degree")

    # exponents and Cartan shape
    ex = spec.exponents
    if len(ex) != spec.rank:
        hit("exponents-length")
    elif list(ex) != sorted(ex) or any(m < 0 for m in ex):
        hit("exponents-ordering")
    elif 2 * sum(m + 1 for m in ex) != dim + spec.rank:
        hit("exponents-count", 2 * sum(m + 1 for m in ex) - dim - spec.rank)
    if spec.cartan.shape != (spec.rank, spec.rank):
        hit("cartan-shape")

    # e regular nilpotent: ad_e has rank dim − ℓ
    ad_e = spec.ad(e)
    sv = np.linalg.svd(ad_e, compute_uv=False)
    r = int(np.sum(sv > sv[0] * dim * 1e-10)) if sv[0] > 0 else 0
    if r != dim - spec.rank:
        hit("regular-nilpotent", float(r))

    if spec.associative:
        prods = prod.reshape(dim, dim, -1)
        pc = prods @ spec._flat_pinv.T
        prec = np.einsum("abc,cij->abij", pc, B).reshape(dim, dim, -1)
        pres = np.abs(prec - prods).max()
        if pres > 1e-12 * (1.0 + np.abs(prods).max()):
            hit("product-closure", pres)

    return out


# --------------------------------------------------------------------------
# serialization: the algebra-spec document
# --------------------------------------------------------------------------

_DOC_FIELDS = (
    "name", "n", "dim", "rank", "basis", "degrees",
    "exponents", "cartan", "e_coords", "h_coords", "associative",
)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, str):
        return json.dumps(v)
    if v is None:
        return "null"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(w) for w in v) + "]"
    raise TypeError(f"cannot serialize {type(v)}")


def spec_to_document(spec: AlgebraSpec) -> dict:
    return {
        "name": spec.name,
        "n": spec.n,
        "dim": spec.dim,
        "rank": spec.rank,
        "basis": [[list(row) for row in mat] for mat in spec.basis],
        "degrees": [int(d) for d in spec.degrees],
        "exponents": list(spec.exponents),
        "cartan": [[int(v) for v in row] for row in spec.cartan],
        "e_coords": list(spec.e_coords),
        "h_coords": list(spec.h_coords),
        "associative": bool(spec.associative),
    }


def save_spec(spec: AlgebraSpec, path) -> None:
    """Write the algebra-spec document (numbers at 17 significant digits)."""
    doc = spec_to_document(spec)
    lines = ["{"]
    for k, key in enumerate(_DOC_FIELDS):
        sep = "," if k < len(_DOC_FIELDS) - 1 else ""
        lines.append(f'  "{key}": {_fmt(doc[key])}{sep}')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_spec(source) -> AlgebraSpec:
    """Load and validate an algebra-spec document (path, JSON text, or dict)."""
    if isinstance(source, dict):
        doc = source
    else:
        try:
            is_file = Path(str(source)).exists()
        except OSError:
            is_file = False
        text = Path(source).read_text() if is_file else str(source)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise AlgebraError(f"algebra spec parse failure: {err}") from err
    try:
        basis = np.array(doc["basis"], dtype=float)
        dim = int(doc["dim"])
        spec = AlgebraSpec(
            name=str(doc["name"]),
            dim=dim,
            rank=int(doc["rank"]),
            basis=basis,
            degrees=np.array(doc["degrees"], dtype=int),
            gram=np.einsum("aij,bji->ab", basis, basis),
            exponents=tuple(int(m) for m in doc["exponents"]),
            cartan=np.array(doc["cartan"], dtype=int),
            e_coords=np.array(doc["e_coords"], dtype=float),
            h_coords=np.array(doc["h_coords"], dtype=float),
            associative=bool(doc["associative"]),
            n=None if doc.get("n") is None else int(doc["n"]),
        )
    except (KeyError, ValueError) as err:
        raise AlgebraError(f"algebra spec parse failure: {err}") from err
    violations = validate_spec(spec)
    if violations:
        raise AlgebraValidationError(spec.name, violations)
    return spec


def with_rescaled_basis(spec: AlgebraSpec, s: float) -> AlgebraSpec:
    """Same algebra with basis scaled by √s, so the trace form scales by s.

    Used by the form-scale invariance checks: verdicts (ranks, Casimirs,
    involutivity) must not depend on the overall normalisation of ⟨·,·⟩.
    """
    r = float(np.sqrt(s))
    basis = spec.basis * r
    return replace(
        spec,
        name=f"{spec.name}@scale{s:g}",
        basis=basis,
        gram=spec.gram * s,
        e_coords=spec.e_coords / r,
        h_coords=spec.h_coords / r,
    )
