"""Time integration of the 2-Toda Lax flows with conservation monitoring.

The two defining flows on T_P are

    t-flow: d(L,M)/dt = [(L₊, L₊), (L, M)],
    s-flow: d(L,M)/ds = [(M₋, M₋), (L, M)],

plus the quadratic-bracket fields on associative algebras and the closed
linear pencil fields used as cross-checks.  Integration is fixed-step RK4
with no re-projection onto the phase space: tangency drift is a measured
signal, not something to suppress.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import AlgebraSpec, Element, project
from .invariants import family
from .poisson import CapabilityError, PhaseSpace, PreconditionError, ScalarFunction
from .rmatrix import PairPoint, RMatrixConfig, pair_bracket, r_apply

__all__ = [
    "FlowConfig",
    "Trajectory",
    "field_t",
    "field_s",
    "field_quadratic",
    "field_linear_pencil",
    "integrate",
    "flow_commutation",
    "trajectory_to_csv",
    "pencil_eigenvalue_drift",
]

_DEFAULT = RMatrixConfig()


def field_t(m: PairPoint, cfg: RMatrixConfig = _DEFAULT) -> PairPoint:
    """[(L₊, L₊), (L, M)] — the t-flow direction."""
    lp = project(m.x, cfg.plus_region)
    return pair_bracket(PairPoint(lp, lp), m)


def field_s(m: PairPoint, cfg: RMatrixConfig = _DEFAULT) -> PairPoint:
    """[(M₋, M₋), (L, M)] — the s-flow direction."""
    mm = project(m.y, cfg.minus_region)
    return pair_bracket(PairPoint(mm, mm), m)


def _pencil_matrix_power(m: PairPoint, lam: float, power: int) -> np.ndarray:
    Z = lam * m.x.matrix() - m.y.matrix()
    return np.linalg.matrix_power(Z, power)


def field_quadratic(i: int, lam: float, m: PairPoint,
                    cfg: RMatrixConfig = _DEFAULT) -> PairPoint:
    """Quadratic-bracket field of P_i∘φ_λ (closed form, associative algebras):

        X = −[(x, y), ((R−I)(λx−y)^{i+1}, (R+I)(λx−y)^{i+1})].
    """
    alg = m.alg
    if not alg.associative:
        raise CapabilityError(
            f"quadratic pencil field needs an associative algebra; "
            f"{alg.name} has associative=False"
        )
    w = Element(alg, alg.from_matrix(_pencil_matrix_power(m, lam, i + 1)))
    u = r_apply(w, cfg) - w      # (R − I)w^{i+1} = −2·(minus part)
    v = r_apply(w, cfg) + w      # (R + I)w^{i+1} = +2·(plus part)
    return -pair_bracket(m, PairPoint(u, v))


def field_linear_pencil(i: int, lam: float, m: PairPoint,
                        cfg: RMatrixConfig = _DEFAULT) -> PairPoint:
    """Closed form of the linear-bracket field of P_i∘φ_λ:

        X = ½(λ−1)·[((R−c)∇P_i(w), (R+c)∇P_i(w)), (x, y)],   w = λx−y.

    (The gradient ∇P_i(w) is the trace-form projection of w^{m_i}, so this
    works on sl as well as gl.)
    """
    alg = m.alg
    p = Element(alg, alg.gradient_from_matrix(_pencil_matrix_power(m, lam, i)))
    u = r_apply(p, cfg) - cfg.c * p
    v = r_apply(p, cfg) + cfg.c * p
    return 0.5 * (lam - 1.0) * pair_bracket(PairPoint(u, v), m)


# --------------------------------------------------------------------------
# the integrator
# --------------------------------------------------------------------------


def _named_field(cfg: "FlowConfig") -> Callable[[PairPoint], PairPoint]:
    rcfg = cfg.rmatrix
    if cfg.field == "t":
        return lambda m: field_t(m, rcfg)
    if cfg.field == "s":
        return lambda m: field_s(m, rcfg)
    if cfg.field == "quadratic":
        if cfg.i is None or cfg.lam is None:
            raise PreconditionError("quadratic field needs generator label i and λ")
        return lambda m: field_quadratic(cfg.i, cfg.lam, m, rcfg)
    if cfg.field == "linear":
        if cfg.i is None or cfg.lam is None:
            raise PreconditionError("linear pencil field needs generator label i and λ")
        return lambda m: field_linear_pencil(cfg.i, cfg.lam, m, rcfg)
    raise PreconditionError(f"unknown field selector {cfg.field!r}")


@dataclass(frozen=True)
class FlowConfig:
    """Field selector plus fixed-step RK4 parameters."""

    field: str = "t"                 # t | s | quadratic | linear
    dt: float = 1e-3
    T: float = 1.0
    i: Optional[int] = None          # generator label for pencil fields
    lam: Optional[float] = None      # λ for pencil fields
    integrator: str = "rk4"
    rmatrix: RMatrixConfig = _DEFAULT

    def __post_init__(self):
        if not (self.dt > 0):
            raise PreconditionError(f"dt must be positive, got {self.dt}")
        if self.T < self.dt:
            raise PreconditionError(f"horizon T = {self.T} shorter than dt = {self.dt}")
        if self.integrator != "rk4":
            raise PreconditionError(f"unknown integrator {self.integrator!r}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Times, states (rows are vec(PairPoint)), and conserved-family values."""

    alg: AlgebraSpec
    times: np.ndarray                  # (N,)
    states: np.ndarray                 # (N, 2·dim)
    conserved: np.ndarray              # (N, card)
    conserved_names: tuple[str, ...]
    truncated: bool = False
    note: str = ""

    def point(self, k: int) -> PairPoint:
        return PairPoint.from_vec(self.alg, self.states[k])

    @property
    def points(self) -> list[PairPoint]:
        return [self.point(k) for k in range(len(self.times))]

    def conservation_drift(self) -> np.ndarray:
        """Per-function max relative drift |F(t) − F(0)| / (1 + |F(0)|)."""
        f0 = self.conserved[0]
        dev = np.abs(self.conserved - f0[None, :]).max(axis=0)
        return dev / (1.0 + np.abs(f0))

    def tangency_drift(self, ps: PhaseSpace) -> float:
        base, T, pinv = ps.base.vec(), ps.tangent_matrix, ps._pinv
        v = self.states - base[None, :]
        normal = v - (pinv @ v.T).T @ T.T
        return float(np.abs(normal).max())


def _rk4_step(f: Callable[[np.ndarray], np.ndarray], v: np.ndarray,
              dt: float) -> np.ndarray:
    k1 = f(v)
    k2 = f(v + 0.5 * dt * k1)
    k3 = f(v + 0.5 * dt * k2)
    k4 = f(v + dt * k3)
    return v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(cfg: FlowConfig, m0: PairPoint,
              conserved: Optional[list[ScalarFunction]] = None) -> Trajectory:
    """Fixed-step RK4 run; truncates with a diagnostic on non-finite states."""
    alg = m0.alg
    fld = _named_field(cfg)

    def f(v: np.ndarray) -> np.ndarray:
        return fld(PairPoint.from_vec(alg, v)).vec()

    if conserved is None:
        conserved = family(alg)
    names = tuple(F.name for F in conserved)
    n_steps = int(round(cfg.T / cfg.dt))
    states = [m0.vec()]
    times = [0.0]
    truncated, note = False, ""
    v = states[0]
    # overflow on the way to a detected blow-up is expected, not a warning
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            v = _rk4_step(f, v, cfg.dt)
            if not np.all(np.isfinite(v)):
                truncated = True
                note = (f"non-finite state at step {k + 1} "
                        f"(t = {(k + 1) * cfg.dt:g}); trajectory truncated")
                break
            states.append(v)
            times.append((k + 1) * cfg.dt)
    state_arr = np.array(states)
    values = np.array(
        [[F(PairPoint.from_vec(alg, row)) for F in conserved] for row in state_arr]
    )
    return Trajectory(
        alg=alg,
        times=np.array(times),
        states=state_arr,
        conserved=values,
        conserved_names=names,
        truncated=truncated,
        note=note,
    )


def flow_commutation(m0: PairPoint, dt: float = 1e-3, n_steps: int = 100,
                     first: FlowConfig | None = None,
                     second: FlowConfig | None = None) -> float:
    """‖(Φ_a∘Φ_b − Φ_b∘Φ_a)(m0)‖∞ for two flows run n_steps each.

    Defaults to the t- and s-flows; commuting Hamiltonians make the defect
    collapse to integrator error.
    """
    horizon = dt * n_steps
    if first is None:
        first = FlowConfig(field="t", dt=dt, T=horizon)
    if second is None:
        second = FlowConfig(field="s", dt=dt, T=horizon)
    fa = _named_field(first)
    fb = _named_field(second)
    alg = m0.alg

    def run(fld, v0):
        def f(v):
            return fld(PairPoint.from_vec(alg, v)).vec()
        v = v0
        for _ in range(n_steps):
            v = _rk4_step(f, v, dt)
        return v

    ab = run(fa, run(fb, m0.vec()))
    ba = run(fb, run(fa, m0.vec()))
    return float(np.abs(ab - ba).max())


# --------------------------------------------------------------------------
# diagnostics and export
# --------------------------------------------------------------------------


def pencil_eigenvalue_drift(traj: Trajectory, lam0: float) -> float:
    """Max eigenvalue movement of λ₀L − M along the trajectory (isospectrality)."""
    alg = traj.alg

    def eigs(row):
        m = PairPoint.from_vec(alg, row)
        w = np.linalg.eigvals(lam0 * m.x.matrix() - m.y.matrix())
        return np.sort_complex(w)

    ref = eigs(traj.states[0])
    drift = 0.0
    for row in traj.states[1:]:
        drift = max(drift, float(np.abs(eigs(row) - ref).max()))
    return drift


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """CSV export: header "t, x_1..x_dim, y_1..y_dim, F_0_1, …", 17 digits."""
    dim = traj.alg.dim
    header = (
        ["t"]
        + [f"x_{k + 1}" for k in range(dim)]
        + [f"y_{k + 1}" for k in range(dim)]
        + list(traj.conserved_names)
    )
    rows = np.hstack(
        [traj.times[:, None], traj.states, traj.conserved]
    )
    lines = [", ".join(header)]
    for row in rows:
        lines.append(", ".join(format(v, ".17g") for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
