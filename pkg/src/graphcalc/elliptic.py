"""Stationary solvers and theorem certificates.

Covers linear Schrodinger systems -lap(u) + Q u = f on truncations, the
Ginzburg-Landau equation lap(u) + u (1 - |u|^2) = 0 with its |u| <= 1 bound,
sub-solution and gradient-estimate certificates, the Keller-Osserman chain
mechanism behind the Liouville theorem, the strong maximum principle, and
eigenpairs of -lap.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .calculus import (
    DEFAULT_TOL,
    CertificateReport,
    _grad_sq_values,
    _laplacian_values,
    _slack_dict,
)
from .errors import (
    BadParamsError,
    BadStartError,
    ComplexNotAllowedError,
    ConvergenceFailureError,
    IncompatibleRHSError,
    NegativeInputError,
    NotASolutionError,
    SingularJacobianError,
    SingularSystemError,
)
from .graph import VertexFunction, WeightedGraph, d_constant, require_same_domain
from .serialize import json_dumps

DENSE_LIMIT = 2048


@dataclass(frozen=True)
class Potential:
    """Nonnegative real coefficient function for -lap(u) + Q u = f."""

    values: VertexFunction

    def __post_init__(self):
        if self.values.is_complex:
            raise ComplexNotAllowedError("a potential must be real-valued")
        if np.any(self.values.values < 0.0):
            raise NegativeInputError("a potential must be nonnegative everywhere")

    @classmethod
    def zero(cls, g: WeightedGraph) -> "Potential":
        return cls(VertexFunction.constant(g, 0.0))

    @classmethod
    def from_dict(cls, g: WeightedGraph, mapping) -> "Potential":
        return cls(VertexFunction.from_dict(g, mapping))

    @property
    def array(self) -> np.ndarray:
        return self.values.values


@dataclass(frozen=True)
class SolverConfig:
    """Shared nonlinear/linear solver knobs; `damping` is the fixed-point step size."""

    tol: float = 1e-12
    max_iters: int = 200_000
    damping: float = 0.2
    seed: int | None = None

    def __post_init__(self):
        if self.tol <= 0 or self.max_iters < 0 or not (0 < self.damping <= 1):
            raise BadParamsError(f"invalid solver configuration {self!r}")

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SolverConfig":
        try:
            return cls(
                tol=float(obj.get("tol", 1e-12)),
                max_iters=int(obj.get("max_iters", 200_000)),
                damping=float(obj.get("damping", 0.2)),
                seed=obj.get("seed"),
            )
        except (TypeError, ValueError, AttributeError) as exc:
            raise BadParamsError(f"invalid solver configuration JSON: {exc}") from None

    def to_json_dict(self) -> dict:
        return {
            "tol": self.tol,
            "max_iters": self.max_iters,
            "damping": self.damping,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SolveReport:
    converged: bool
    iterations: int
    final_residual: float
    damping_events: int = 0

    def to_json_dict(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "damping_events": self.damping_events,
        }

    def to_json(self) -> str:
        return json_dumps(self.to_json_dict())


# -- linear Schrodinger systems on truncations --------------------------------


def _combinatorial_laplacian(g: WeightedGraph) -> sp.csr_matrix:
    """L = D - W, the symmetric form with lap = -D^{-1} L."""
    d = sp.diags(g.degrees)
    return (d - g.weight_matrix).tocsr()


def solve_linear_schrodinger(
    g: WeightedGraph,
    Q: Potential,
    f: VertexFunction,
    dirichlet=None,
    tol: float = 1e-10,
) -> tuple[VertexFunction, SolveReport]:
    """Solve -lap(u) + Q u = f on non-Dirichlet vertices.

    Vertices listed in ``dirichlet`` (mapping or (vertex, value) pairs) are
    clamped to the given values and exempt from the equation. Without any
    Dirichlet vertex and with Q identically zero the system is singular and
    ``f`` must satisfy the compatibility condition sum_x d_x f(x) = 0; the
    returned solution is then gauged to zero degree-weighted mean.
    """
    fv = require_same_domain(g, f)
    qv = require_same_domain(g, Q.values)
    n = g.n_vertices

    pairs = dict(dirichlet.items()) if hasattr(dirichlet, "items") else dict(dirichlet or ())
    bidx = np.array(sorted(g.index_of(v) for v in pairs), dtype=np.int64)
    bvals = np.array([pairs[g.vertices[i]] for i in bidx])
    complex_mode = np.iscomplexobj(fv) or np.iscomplexobj(bvals)
    dtype = np.complex128 if complex_mode else np.float64

    free = np.setdiff1d(np.arange(n), bidx, assume_unique=True)
    L = _combinatorial_laplacian(g)
    S = (L + sp.diags(g.degrees * qv)).tocsr()
    rhs_full = g.degrees * fv

    u = np.zeros(n, dtype=dtype)
    if len(bidx):
        u[bidx] = bvals

    if free.size:
        S_ff = S[np.ix_(free, free)]
        rhs = rhs_full[free].astype(dtype)
        if len(bidx):
            rhs = rhs - S[np.ix_(free, bidx)] @ u[bidx]
        pure_neumann = len(bidx) == 0 and float(np.max(qv)) == 0.0
        if pure_neumann:
            compat = float(np.sum(g.degrees * fv.real)) if not complex_mode else complex(
                np.sum(g.degrees * fv)
            )
            scale = max(1.0, float(np.max(np.abs(rhs_full))))
            if abs(compat) > tol * scale * n:
                raise IncompatibleRHSError(
                    f"singular system: sum d_x f(x) = {compat!r} must vanish"
                )
            sol, *_ = scipy.linalg.lstsq(S_ff.toarray(), rhs)
            sol = sol - np.sum(g.degrees * sol) / np.sum(g.degrees)
            u[free] = sol
        else:
            try:
                if len(free) <= DENSE_LIMIT:
                    c, low = scipy.linalg.cho_factor(S_ff.toarray())
                    u[free] = scipy.linalg.cho_solve((c, low), rhs)
                else:
                    u[free] = spla.splu(S_ff.tocsc()).solve(rhs)
            except (scipy.linalg.LinAlgError, RuntimeError) as exc:
                raise SingularSystemError(f"factorization failed: {exc}") from None

    residual = _laplacian_values(g, u) * -1.0 + qv * u - fv
    res = float(np.max(np.abs(residual[free]))) if free.size else 0.0
    return (
        VertexFunction(g.vertices, u),
        SolveReport(converged=res <= tol, iterations=1, final_residual=res),
    )


# -- Ginzburg-Landau -----------------------------------------------------------


def _gl_residual(g: WeightedGraph, v: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(v):
        return _laplacian_values(g, v) + v * (1.0 - (v.real**2 + v.imag**2))
    return _laplacian_values(g, v) + v * (1.0 - v * v)


def _gl_newton_step(g: WeightedGraph, v: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Solve the linearized system J delta = -r; raises LinAlgError when singular."""
    P = g.dense_transition()
    if np.iscomplexobj(v):
        a, b = v.real, v.imag
        j11 = P - np.diag(3.0 * a * a + b * b)
        j22 = P - np.diag(a * a + 3.0 * b * b)
        cross = np.diag(-2.0 * a * b)
        jac = np.block([[j11, cross], [cross, j22]])
        rhs = -np.concatenate([r.real, r.imag])
        delta = scipy.linalg.solve(jac, rhs)
        if not np.all(np.isfinite(delta)):
            raise scipy.linalg.LinAlgError("non-finite Newton step")
        n = len(v)
        return delta[:n] + 1j * delta[n:]
    jac = P - np.diag(3.0 * v * v)
    delta = scipy.linalg.solve(jac, -r)
    if not np.all(np.isfinite(delta)):
        raise scipy.linalg.LinAlgError("non-finite Newton step")
    return delta


def solve_ginzburg_landau(
    g: WeightedGraph,
    init: VertexFunction,
    config: SolverConfig | None = None,
) -> tuple[VertexFunction, SolveReport]:
    """Damped Newton iteration for lap(u) + u (1 - |u|^2) = 0.

    Each round attempts a Newton step with backtracking line search on the
    sup-norm residual. When the Jacobian is singular or no backtracked step
    decreases the residual (Newton stagnates near sign-changing saddle
    configurations, where it keeps getting pulled back toward the saddle),
    the solver switches to a streak of fixed-point updates
    u <- u + damping * r, which follow the preconditioned gradient flow of
    the free energy away from the saddle; the streak length doubles after
    consecutive failures so slowly translating domain walls can annihilate.
    Every state update counts toward ``max_iters``; the report carries
    ``converged=False`` rather than raising when the budget runs out.
    """
    cfg = config or SolverConfig()
    v = require_same_domain(g, init).copy()
    max_backtracks = 12

    damping_events = 0
    singular_stalls = 0
    streak = 50
    best_level = np.inf
    r = _gl_residual(g, v)
    rn = float(np.max(np.abs(r)))
    iterations = 0
    while iterations < cfg.max_iters and rn > cfg.tol:
        # Newton only gets exclusive control while the residual level keeps
        # improving; once it stalls (cycling near a fold between basins) the
        # flow phases below grow until they carry the state past it.
        if rn < 0.95 * best_level:
            best_level = rn
            streak = 50
            stagnant = False
        else:
            stagnant = True

        took_step = False
        try:
            delta = _gl_newton_step(g, v, r)
            singular = False
        except scipy.linalg.LinAlgError:
            singular = True
        if not singular:
            t = 1.0
            for _ in range(max_backtracks):
                cand = v + t * delta
                cand_r = _gl_residual(g, cand)
                cand_rn = float(np.max(np.abs(cand_r)))
                if np.isfinite(cand_rn) and cand_rn < rn:
                    if t < 1.0:
                        damping_events += 1
                    v, r, rn = cand, cand_r, cand_rn
                    iterations += 1
                    took_step = True
                    break
                t *= 0.5

        if not took_step or stagnant:
            damping_events += 1
            entry_rn = rn
            for _ in range(streak):
                v = v + cfg.damping * r
                r = _gl_residual(g, v)
                rn = float(np.max(np.abs(r)))
                iterations += 1
                if iterations >= cfg.max_iters or rn <= cfg.tol:
                    break
                if not np.isfinite(rn) or rn > 100.0 * max(entry_rn, 1e-8):
                    break
            streak = min(2 * streak, 50_000)
            if singular and rn >= entry_rn:
                singular_stalls += 1
                if singular_stalls >= 10:
                    raise SingularJacobianError(
                        "Jacobian singular and fixed-point fallback is stalled"
                    )
            else:
                singular_stalls = 0

    return (
        VertexFunction(g.vertices, v),
        SolveReport(
            converged=rn <= cfg.tol,
            iterations=iterations,
            final_residual=rn,
            damping_events=damping_events,
        ),
    )


def verify_gl_bound(g: WeightedGraph, u: VertexFunction, tol: float = 1e-9) -> CertificateReport:
    """Certify |u| <= 1 (+ tol) for a Ginzburg-Landau solution.

    The bound is only claimed for solutions, so the residual of
    lap(u) + u (1 - |u|^2) must already be below ``tol``; otherwise
    :class:`NotASolutionError` is raised. Slack is 1 - |u(x)| + tol and the
    report passes iff the minimum slack is nonnegative.
    """
    values = require_same_domain(g, u)
    res = float(np.max(np.abs(_gl_residual(g, values))))
    if res > tol:
        raise NotASolutionError(
            f"residual {res:.3e} exceeds {tol:.3e}; the bound only applies to solutions"
        )
    slack = 1.0 - np.abs(values) + tol
    return CertificateReport.from_slack(
        "gl_bound", _slack_dict(g, slack), tol=0.0, info={"residual_sup": res, "solution_tol": tol}
    )


# -- sub-solutions and the gradient estimate -----------------------------------


def check_subsolution(
    g: WeightedGraph, u: VertexFunction, Q: Potential, tol: float = DEFAULT_TOL
) -> CertificateReport:
    """Certify that u_+ is a sub-solution: lap(u_+) - Q u_+ >= 0 pointwise.

    This holds at every vertex where -lap(u) + Q u = 0; on truncations,
    restrict attention to the slack entries of interior vertices.
    """
    values = require_same_domain(g, u)
    if u.is_complex:
        raise ComplexNotAllowedError("check_subsolution requires a real-valued function")
    qv = require_same_domain(g, Q.values)
    pos = np.maximum(values, 0.0)
    slack = _laplacian_values(g, pos) - qv * pos
    return CertificateReport.from_slack("subsolution", _slack_dict(g, slack), tol)


def verify_gradient_estimate(
    g: WeightedGraph, u: VertexFunction, tol: float = DEFAULT_TOL
) -> CertificateReport:
    """Certify the local gradient estimate for nonnegative u.

    At each qualifying vertex (u > 0 and lap(u) >= 0) the potential
    Q = lap(u)/u makes -lap(u) + Q u = 0 hold there, and the certified bound is

        |grad u|^2 <= (d (1 + Q)^2 - 2 Q - 1) u^2,

    with d the graph constant sup d_x / mu_xy. Vertices outside the
    qualifying set are omitted. The further bound d Q^2 u^2 is reported in
    ``info`` but not asserted: it requires d <= 1, which fails on any graph
    with a vertex of two or more neighbors.
    """
    if u.is_complex:
        raise ComplexNotAllowedError("verify_gradient_estimate requires real input")
    values = require_same_domain(g, u)
    if np.any(values < 0.0):
        bad = g.vertices[int(np.argmin(values))]
        raise NegativeInputError(f"u must be nonnegative; u({bad!r}) < 0")
    lap = _laplacian_values(g, values)
    gsq = _grad_sq_values(g, values)
    d = d_constant(g)

    qualifying = (values > 0.0) & (lap >= 0.0)
    slack: dict[str, float] = {}
    second: dict[str, float] = {}
    for i in np.flatnonzero(qualifying):
        q = lap[i] / values[i]
        usq = values[i] * values[i]
        slack[g.vertices[i]] = float((d * (1.0 + q) ** 2 - 2.0 * q - 1.0) * usq - gsq[i])
        second[g.vertices[i]] = float(d * q * q * usq - gsq[i])
    info = {
        "d_constant": d,
        "second_bound_min_slack": min(second.values()) if second else float("inf"),
        "second_bound_slack": second,
    }
    return CertificateReport.from_slack("gradient_estimate", slack, tol, info=info)


# -- Liouville machinery ---------------------------------------------------------


def check_liouville_premises(
    g: WeightedGraph,
    u: VertexFunction,
    p: float,
    bound: float,
    tol: float = DEFAULT_TOL,
) -> CertificateReport:
    """Check the premises 0 <= u <= bound and lap(u) >= u^p at every vertex.

    The per-vertex slack is the minimum of the three premise slacks; the
    three families are also reported separately in ``info``. The only
    function satisfying all premises is u = 0, so any passing input must be
    zero up to tolerance effects.
    """
    if u.is_complex:
        raise ComplexNotAllowedError("check_liouville_premises requires real input")
    if p <= 0 or bound <= 0:
        raise BadParamsError(f"need p > 0 and bound > 0, got p={p!r}, bound={bound!r}")
    values = require_same_domain(g, u)
    lap = _laplacian_values(g, values)
    # Clipping keeps u^p finite for fractional p; the nonnegativity slack
    # already fails wherever the clip is active.
    powered = np.power(np.maximum(values, 0.0), p)
    s_nonneg = values
    s_upper = bound - values
    s_super = lap - powered
    combined = np.minimum(np.minimum(s_nonneg, s_upper), s_super)
    info = {
        "nonnegative_min": float(np.min(s_nonneg)),
        "upper_bound_min": float(np.min(s_upper)),
        "supersolution_min": float(np.min(s_super)),
    }
    return CertificateReport.from_slack(
        "liouville_premises", _slack_dict(g, combined), tol, info=info
    )


class ChainOutcome(str, Enum):
    ESCAPED_BOUND = "escaped_bound"
    REVISIT_CONTRADICTION = "revisit_contradiction"
    PREMISE_VIOLATION = "premise_violation"


@dataclass(frozen=True)
class ChainCertificate:
    """Greedy growth chain witnessing the Keller-Osserman dichotomy.

    Starting from x0 with rho = u(x0) > 0 and w = u / rho, each step moves to
    the neighbor with the largest w. While lap(u) >= u^p holds along the way,
    the weighted-average identity forces w(next) >= w(current) +
    rho^(p-1) w^p(current), so the recorded values climb; on a finite graph
    the chain must then revisit a vertex (contradiction), exceed the stated
    bound, or expose a vertex where the premise fails.
    """

    chain: tuple[str, ...]
    values: tuple[float, ...]
    increments: tuple[float, ...]
    outcome: ChainOutcome
    rho: float
    p: float
    bound: float
    tol: float
    violation_vertex: str | None = None
    premise_slack: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "chain": list(self.chain),
            "values": list(self.values),
            "increments": list(self.increments),
            "rho": self.rho,
            "p": self.p,
            "bound": self.bound,
            "tol": self.tol,
            "violation_vertex": self.violation_vertex,
            "premise_slack": self.premise_slack,
        }

    def to_json(self) -> str:
        return json_dumps(self.to_json_dict())


def keller_osserman_chain(
    g: WeightedGraph,
    u: VertexFunction,
    p: float,
    x0: str,
    max_steps: int | None = None,
    tol: float = 1e-12,
    bound: float | None = None,
) -> ChainCertificate:
    """Grow the greedy chain from ``x0`` and report how it terminates.

    ``bound`` is the a-priori upper bound on u (defaults to max(u), in which
    case the escape outcome is unreachable and the chain ends in a revisit or
    a premise violation). ``max_steps`` is a safety cap; it is raised to
    |X| + 1 internally since a verdict is always reached within that many
    steps on a finite graph.
    """
    if u.is_complex:
        raise ComplexNotAllowedError("keller_osserman_chain requires real input")
    if p <= 0:
        raise BadParamsError(f"need p > 0, got {p!r}")
    values = require_same_domain(g, u)
    if np.any(values < 0.0):
        raise NegativeInputError("u must be nonnegative")
    i0 = g.index_of(x0)
    rho = float(values[i0])
    if rho <= 0.0:
        raise BadStartError(f"u({x0!r}) = {rho!r} must be positive")

    w = values / rho
    a = float(bound) if bound is not None else float(np.max(values))
    if a <= 0.0:
        raise BadParamsError("bound must be positive")
    w_cap = a / rho

    n = g.n_vertices
    steps = max(max_steps or 0, n + 1)
    chain = [i0]
    chain_values = [float(w[i0])]
    increments: list[float] = []
    visited = {i0}
    outcome = None
    violation_vertex = None
    premise_slack = None

    for _ in range(steps):
        x = chain[-1]
        inc = rho ** (p - 1.0) * w[x] ** p
        lo, hi = g._row_ptr[x], g._row_ptr[x + 1]
        cols = g._ent_cols[lo:hi]
        best = int(cols[np.argmax(w[cols])])
        if w[best] < w[x] + inc - tol:
            # The best neighbor falls short, so the weighted average does too:
            # the premise lap(u) >= u^p cannot hold at x.
            lap_x = float(np.sum(g._ent_coef[lo:hi] * (values[cols] - values[x])))
            outcome = ChainOutcome.PREMISE_VIOLATION
            violation_vertex = g.vertices[x]
            premise_slack = lap_x - float(values[x]) ** p
            break
        increments.append(float(inc))
        chain.append(best)
        chain_values.append(float(w[best]))
        if best in visited:
            outcome = ChainOutcome.REVISIT_CONTRADICTION
            break
        if w[best] > w_cap + tol:
            outcome = ChainOutcome.ESCAPED_BOUND
            break
        visited.add(best)
    if outcome is None:
        raise RuntimeError("chain failed to reach a verdict within the safety cap")

    return ChainCertificate(
        chain=tuple(g.vertices[i] for i in chain),
        values=tuple(chain_values),
        increments=tuple(increments),
        outcome=outcome,
        rho=rho,
        p=float(p),
        bound=a,
        tol=tol,
        violation_vertex=violation_vertex,
        premise_slack=premise_slack,
    )


@dataclass(frozen=True)
class LiouvilleSearchReport:
    """Outcome of an attempted counterexample search for the Liouville claim."""

    p: float
    bound: float
    restarts: int
    steps: int
    seed: int
    norm_threshold: float
    exact_feasible: int
    max_feasible_sup_norm: float
    counterexample: dict | None = None

    @property
    def found_counterexample(self) -> bool:
        return self.counterexample is not None

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "bound": self.bound,
            "restarts": self.restarts,
            "steps": self.steps,
            "seed": self.seed,
            "norm_threshold": self.norm_threshold,
            "exact_feasible": self.exact_feasible,
            "max_feasible_sup_norm": self.max_feasible_sup_norm,
            "counterexample": self.counterexample,
        }


def _cap_root(m: np.ndarray, p: float) -> np.ndarray:
    """Elementwise nonnegative root of t + t^p = m (m >= 0)."""
    if p == 1.0:
        return 0.5 * m
    if p == 2.0:
        return 0.5 * (np.sqrt(1.0 + 4.0 * m) - 1.0)
    t = np.minimum(m, np.power(np.maximum(m, 0.0), 1.0 / p))
    for _ in range(30):
        ft = t + np.power(t, p) - m
        dft = 1.0 + p * np.power(np.maximum(t, 1e-300), p - 1.0)
        t = np.clip(t - ft / dft, 0.0, None)
    return t


def liouville_search(
    g: WeightedGraph,
    p: float,
    bound: float,
    restarts: int = 10_000,
    steps: int = 1000,
    seed: int = 0,
    norm_threshold: float = 1e-6,
) -> LiouvilleSearchReport:
    """Projected random search plus ascent for a nonzero function satisfying
    0 <= u <= bound and lap(u) >= u^p.

    Random starts are pushed upward (ascent on sum u) and repaired toward
    feasibility by capping each vertex at the root of t + t^p = (weighted
    neighbor mean); survivors are then checked against the exact premises
    (zero tolerance). A counterexample is any exactly feasible function with
    sup norm above ``norm_threshold``; the Liouville theorem predicts none.
    """
    if p <= 0 or bound <= 0 or restarts < 1 or steps < 1:
        raise BadParamsError("need p > 0, bound > 0, restarts >= 1, steps >= 1")
    n = g.n_vertices
    rng = np.random.default_rng(seed)
    pt = g.dense_transition().T.copy()
    u = rng.uniform(0.0, bound, (restarts, n))
    eta = 0.01 * bound

    prev = None
    for it in range(steps):
        u += eta
        np.clip(u, 0.0, bound, out=u)
        m = u @ pt
        np.minimum(u, _cap_root(m, p), out=u)
        if it % 25 == 24:
            if prev is not None and float(np.max(np.abs(u - prev))) < 1e-13:
                break
            prev = u.copy()
    for _ in range(60):
        np.minimum(u, _cap_root(u @ pt, p), out=u)

    lap_approx = u @ pt - u
    slack3 = lap_approx - np.power(u, p)
    candidate_rows = np.flatnonzero(np.min(slack3, axis=1) >= -1e-9)

    exact_feasible = 0
    max_norm = 0.0
    counterexample = None
    for row in candidate_rows[:500]:
        vf = VertexFunction(g.vertices, u[row])
        report = check_liouville_premises(g, vf, p, bound, tol=0.0)
        if report.passed:
            exact_feasible += 1
            sup = float(np.max(np.abs(u[row])))
            max_norm = max(max_norm, sup)
            if sup > norm_threshold and counterexample is None:
                counterexample = vf.as_dict()
    return LiouvilleSearchReport(
        p=float(p),
        bound=float(bound),
        restarts=restarts,
        steps=steps,
        seed=seed,
        norm_threshold=norm_threshold,
        exact_feasible=exact_feasible,
        max_feasible_sup_norm=max_norm,
        counterexample=counterexample,
    )


# -- strong maximum principle -----------------------------------------------------


class MaxPrincipleOutcome(str, Enum):
    NOT_SUBHARMONIC = "not_subharmonic"
    CONSTANT_CONFIRMED = "constant_confirmed"
    VIOLATION = "violation"


@dataclass(frozen=True)
class MaxPrincipleResult:
    outcome: MaxPrincipleOutcome
    vertex: str | None = None

    def to_json_dict(self) -> dict:
        return {"outcome": self.outcome.value, "vertex": self.vertex}


def check_strong_max_principle(
    g: WeightedGraph, u: VertexFunction, tol: float = DEFAULT_TOL
) -> MaxPrincipleResult:
    """Desk-scale strong maximum principle check.

    If lap(u) dips below -tol anywhere the input is simply not subharmonic.
    Otherwise the maximum is attained (finite graph) and u must be constant:
    the range is compared against a degree-scaled tolerance, since
    lap(u) >= -tol plus the null-sum identity only pins lap(u) down to
    tol * (sum d_x / min d_x). A ``violation`` return would falsify the
    principle and indicates a bug.
    """
    if u.is_complex:
        raise ComplexNotAllowedError("check_strong_max_principle requires real input")
    values = require_same_domain(g, u)
    lap = _laplacian_values(g, values)
    imin = int(np.argmin(lap))
    if lap[imin] < -tol:
        return MaxPrincipleResult(MaxPrincipleOutcome.NOT_SUBHARMONIC, g.vertices[imin])
    spread = float(np.max(values) - np.min(values))
    scale = max(1.0, float(np.sum(g.degrees) / np.min(g.degrees)))
    if spread <= tol * scale:
        return MaxPrincipleResult(MaxPrincipleOutcome.CONSTANT_CONFIRMED)
    return MaxPrincipleResult(
        MaxPrincipleOutcome.VIOLATION, g.vertices[int(np.argmax(values))]
    )


# -- spectra ------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralPair:
    """Eigenpair of -lap with the eigenvector normalized in the degree norm."""

    eigenvalue: float
    eigenvector: VertexFunction
    residual: float

    def __post_init__(self):
        if not (0.0 <= self.eigenvalue <= 2.0):
            raise ValueError(f"eigenvalue {self.eigenvalue!r} outside [0, 2]")

    def to_json_dict(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "residual": self.residual,
            "eigenvector": self.eigenvector.as_dict(),
        }


def spectrum_smallest(g: WeightedGraph, k: int, tol: float = 1e-8) -> list[SpectralPair]:
    """The k smallest eigenpairs of -lap.

    Computed on the symmetrically normalized operator (conjugation by the
    square root of the degree measure), whose spectrum lies in [0, 2]; the
    returned eigenvectors are orthonormal in the degree-weighted inner
    product. The smallest eigenvalue of a connected graph is 0 with a
    constant eigenvector.
    """
    n = g.n_vertices
    if not (1 <= k <= n):
        raise BadParamsError(f"need 1 <= k <= {n}, got k={k!r}")
    dsqrt = np.sqrt(g.degrees)
    if n <= 512 or k >= n - 1:
        norm_op = -(g.weight_matrix.toarray() / np.outer(dsqrt, dsqrt))
        np.fill_diagonal(norm_op, norm_op.diagonal() + 1.0)
        norm_op = 0.5 * (norm_op + norm_op.T)
        evals, evecs = np.linalg.eigh(norm_op)
        evals, evecs = evals[:k], evecs[:, :k]
    else:
        inv = sp.diags(1.0 / dsqrt)
        norm_op = (sp.identity(n) - inv @ g.weight_matrix @ inv).tocsc()
        try:
            evals, evecs = spla.eigsh(norm_op, k=k, sigma=-0.1, which="LM")
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceFailureError(f"eigensolver did not converge: {exc}") from None
        order = np.argsort(evals)
        evals, evecs = evals[order], evecs[:, order]

    pairs = []
    for j in range(k):
        lam = float(evals[j])
        if lam < 0.0:
            if lam < -tol:
                raise ConvergenceFailureError(f"eigenvalue {lam!r} below 0 beyond tolerance")
            lam = 0.0
        if lam > 2.0:
            if lam > 2.0 + tol:
                raise ConvergenceFailureError(f"eigenvalue {lam!r} above 2 beyond tolerance")
            lam = 2.0
        phi = evecs[:, j] / dsqrt
        peak = int(np.argmax(np.abs(phi)))
        if phi[peak] < 0:
            phi = -phi
        residual = float(np.max(np.abs(-_laplacian_values(g, phi) - lam * phi)))
        if residual > tol:
            raise ConvergenceFailureError(
                f"eigenpair {j} residual {residual:.3e} exceeds {tol:.3e}"
            )
        pairs.append(
            SpectralPair(
                eigenvalue=lam,
                eigenvector=VertexFunction(g.vertices, phi),
                residual=residual,
            )
        )
    return pairs
