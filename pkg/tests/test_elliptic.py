import json

import numpy as np
import pytest

import graphcalc as gc
from conftest import family_corpus
from oracles import eigenvalues_ref


# -- linear Schrodinger systems ---------------------------------------------------


def test_positive_potential_zero_rhs_gives_zero(k3):
    u, report = gc.solve_linear_schrodinger(
        k3, gc.Potential(gc.VertexFunction.constant(k3, 1.0)), gc.VertexFunction.constant(k3, 0.0)
    )
    assert report.converged
    assert np.max(np.abs(u.values)) <= 1e-12


def test_harmonic_with_single_dirichlet_is_constant(k5):
    u, report = gc.solve_linear_schrodinger(
        k5, gc.Potential.zero(k5), gc.VertexFunction.constant(k5, 0.0),
        {k5.vertices[0]: 1.0},
    )
    assert report.converged
    assert np.max(np.abs(u.values - 1.0)) <= 1e-12


def test_p3_interpolation_frozen(p3):
    u, report = gc.solve_linear_schrodinger(
        p3, gc.Potential.zero(p3), gc.VertexFunction.constant(p3, 0.0),
        {"a": 0.0, "c": 1.0},
    )
    assert report.converged
    assert u["a"] == 0.0 and u["c"] == 1.0
    assert u["b"] == pytest.approx(0.5, abs=1e-12)


def test_pure_neumann_needs_compatibility(p3):
    f = gc.VertexFunction.constant(p3, 1.0)
    with pytest.raises(gc.IncompatibleRHSError):
        gc.solve_linear_schrodinger(p3, gc.Potential.zero(p3), f)


def test_pure_neumann_compatible_solves_with_zero_mean_gauge(p3):
    # degrees (1, 2, 1): f = (1, -1, 1) has zero degree-weighted sum
    f = gc.VertexFunction.from_dict(p3, {"a": 1.0, "b": -1.0, "c": 1.0})
    u, report = gc.solve_linear_schrodinger(p3, gc.Potential.zero(p3), f)
    assert report.converged
    assert abs(np.sum(p3.degrees * u.values)) <= 1e-10
    residual = -gc.laplacian(p3, u).values + 0.0 - f.values
    assert np.max(np.abs(residual)) <= 1e-10


@pytest.mark.parametrize("seed", range(10))
def test_random_truncation_solves_to_tolerance(seed):
    rng = np.random.default_rng(seed + 50)
    graphs = family_corpus(2, seed=seed)
    _, g = graphs[int(rng.integers(0, len(graphs)))]
    qvals = np.abs(rng.uniform(0, 2, g.n_vertices))
    Q = gc.Potential(gc.VertexFunction(g.vertices, qvals))
    n_boundary = int(rng.integers(1, g.n_vertices))
    boundary = {
        g.vertices[i]: float(rng.uniform(-1, 1))
        for i in rng.choice(g.n_vertices, size=n_boundary, replace=False)
    }
    f = gc.VertexFunction(g.vertices, rng.uniform(-1, 1, g.n_vertices))
    u, report = gc.solve_linear_schrodinger(g, Q, f, boundary)
    assert report.converged
    for v, val in boundary.items():
        assert u[v] == val
    interior = [v for v in g.vertices if v not in boundary]
    res = -gc.laplacian(g, u).values + qvals * u.values - f.values
    idx = [g.index_of(v) for v in interior]
    assert np.max(np.abs(res[idx])) <= 1e-10 if idx else True


def test_complex_dirichlet_data(p3):
    u, report = gc.solve_linear_schrodinger(
        p3, gc.Potential.zero(p3), gc.VertexFunction.constant(p3, 0.0),
        {"a": 1j, "c": 1.0},
    )
    assert report.converged
    assert u.is_complex
    assert u["b"] == pytest.approx(0.5 + 0.5j, abs=1e-12)


def test_potential_validation(p3):
    with pytest.raises(gc.NegativeInputError):
        gc.Potential(gc.VertexFunction.from_dict(p3, {"a": -0.1, "b": 0.0, "c": 0.0}))
    with pytest.raises(gc.ComplexNotAllowedError):
        gc.Potential(gc.VertexFunction.constant(p3, 1j))


# -- Ginzburg-Landau ----------------------------------------------------------------


def test_gl_constants_recovered_exactly(k3):
    for c in (1.0, -1.0, 0.0):
        init = gc.VertexFunction.constant(k3, c)
        u, report = gc.solve_ginzburg_landau(k3, init)
        assert report.converged and report.iterations == 0
        assert np.array_equal(u.values, init.values)


def test_gl_k5_random_corpus_bounded(k5):
    rng = np.random.default_rng(17)
    for _ in range(50):
        init = gc.VertexFunction(k5.vertices, rng.uniform(-2, 2, 5))
        u, report = gc.solve_ginzburg_landau(k5, init, gc.SolverConfig(tol=1e-10))
        assert report.converged
        assert float(np.max(np.abs(u.values))) <= 1.0 + 1e-9
        assert gc.verify_gl_bound(k5, u, tol=1e-9).passed


def test_gl_complex_corpus(c3):
    rng = np.random.default_rng(23)
    for _ in range(10):
        init = gc.random_vertex_function(c3, rng, complex_values=True, scale=2.0)
        u, report = gc.solve_ginzburg_landau(c3, init)
        assert report.converged
        assert u.is_complex
        assert float(np.max(np.abs(u.values))) <= 1.0 + 1e-9


def test_gl_zero_budget_returns_unconverged(k3):
    init = gc.VertexFunction.constant(k3, 0.5)
    u, report = gc.solve_ginzburg_landau(k3, init, gc.SolverConfig(max_iters=0))
    assert not report.converged
    assert report.final_residual > 0


def test_solver_config_validation():
    with pytest.raises(gc.BadParamsError):
        gc.SolverConfig(tol=-1.0)
    with pytest.raises(gc.BadParamsError):
        gc.SolverConfig(damping=0.0)
    cfg = gc.SolverConfig.from_json_dict({"tol": 1e-8, "max_iters": 10, "damping": 0.5, "seed": 3})
    assert cfg.tol == 1e-8 and cfg.max_iters == 10 and cfg.damping == 0.5 and cfg.seed == 3
    assert json.loads(json.dumps(cfg.to_json_dict()))["tol"] == 1e-8


def test_gl_bound_certificate_frozen(k3):
    one = gc.VertexFunction.constant(k3, 1.0)
    report = gc.verify_gl_bound(k3, one, tol=1e-9)
    assert report.passed
    assert all(s == pytest.approx(1e-9, abs=0.0) for s in report.slack.values())
    zero = gc.VertexFunction.constant(k3, 0.0)
    report0 = gc.verify_gl_bound(k3, zero, tol=1e-9)
    assert report0.passed
    assert all(s == pytest.approx(1.0 + 1e-9) for s in report0.slack.values())


def test_gl_bound_rejects_non_solutions(k3):
    two = gc.VertexFunction.constant(k3, 2.0)
    with pytest.raises(gc.NotASolutionError):
        gc.verify_gl_bound(k3, two, tol=1e-9)


# -- sub-solutions ---------------------------------------------------------------------


def _solve_truncation(g, boundary, qscale=1.0, seed=0):
    rng = np.random.default_rng(seed)
    qvals = np.abs(rng.uniform(0, qscale, g.n_vertices))
    Q = gc.Potential(gc.VertexFunction(g.vertices, qvals))
    u, report = gc.solve_linear_schrodinger(
        g, Q, gc.VertexFunction.constant(g, 0.0), boundary
    )
    assert report.converged
    return u, Q


def test_subsolution_nonpositive_solution_trivial(p3):
    u, Q = _solve_truncation(p3, {"a": -1.0, "c": -2.0})
    assert np.all(u.values <= 0.0)
    report = gc.check_subsolution(p3, u, Q)
    assert all(s == 0.0 for s in report.slack.values())


def test_subsolution_nonnegative_solution_equality_on_interior(p3):
    u, Q = _solve_truncation(p3, {"a": 1.0, "c": 2.0})
    assert np.all(u.values >= 0.0)
    report = gc.check_subsolution(p3, u, Q, tol=1e-10)
    assert abs(report.slack["b"]) <= 1e-10


def test_subsolution_sign_changing_on_truncation():
    g = gc.generate("grid2d", rows=3, cols=3)
    boundary = {g.vertices[0]: -1.0, g.vertices[-1]: 1.0}
    u, Q = _solve_truncation(g, boundary, seed=4)
    assert np.min(u.values) < 0 < np.max(u.values)
    report = gc.check_subsolution(g, u, Q, tol=1e-10)
    interior = [v for v in g.vertices if v not in boundary]
    assert min(report.slack[v] for v in interior) >= -1e-10


def test_subsolution_rejects_complex(p3):
    with pytest.raises(gc.ComplexNotAllowedError):
        gc.check_subsolution(p3, gc.VertexFunction.constant(p3, 1j), gc.Potential.zero(p3))


# -- gradient estimate ---------------------------------------------------------------


def test_gradient_estimate_hand_case(p3):
    u = gc.VertexFunction.from_dict(p3, {"a": 2.0, "b": 1.0, "c": 2.0})
    report = gc.verify_gradient_estimate(p3, u, tol=1e-10)
    assert list(report.slack.keys()) == ["b"]
    assert report.slack["b"] == pytest.approx(4.0, abs=1e-12)
    assert report.passed
    assert report.info["d_constant"] == 2.0
    assert report.info["second_bound_slack"]["b"] == pytest.approx(1.0, abs=1e-12)


def test_gradient_estimate_constant(k3):
    u = gc.VertexFunction.constant(k3, 2.0)
    report = gc.verify_gradient_estimate(k3, u)
    d = gc.d_constant(k3)
    assert set(report.slack) == set(k3.vertices)
    for s in report.slack.values():
        assert s == pytest.approx((d - 1.0) * 4.0, rel=1e-12)


def test_gradient_estimate_second_bound_can_fail(p3):
    # at the middle vertex lap(u) = 0 so Q = 0 and the further bound
    # d Q^2 u^2 = 0 falls below |grad u|^2 = 1: reported, never asserted
    u = gc.VertexFunction.from_dict(p3, {"a": 1.0, "b": 2.0, "c": 3.0})
    report = gc.verify_gradient_estimate(p3, u, tol=1e-10)
    assert report.passed
    assert report.info["second_bound_slack"]["b"] == pytest.approx(-1.0, abs=1e-12)


def test_gradient_estimate_rejects_negative(p3):
    u = gc.VertexFunction.from_dict(p3, {"a": 1.0, "b": -0.5, "c": 1.0})
    with pytest.raises(gc.NegativeInputError):
        gc.verify_gradient_estimate(p3, u)


def test_gradient_estimate_zero_function_vacuous(p3):
    report = gc.verify_gradient_estimate(p3, gc.VertexFunction.constant(p3, 0.0))
    assert report.slack == {}
    assert report.passed


@pytest.mark.parametrize("seed", range(20))
def test_gradient_estimate_random_nonnegative(seed):
    rng = np.random.default_rng(seed + 6000)
    graphs = family_corpus(2, seed=seed % 3)
    _, g = graphs[int(rng.integers(0, len(graphs)))]
    u = gc.VertexFunction(g.vertices, np.abs(rng.uniform(-1, 1, g.n_vertices)))
    report = gc.verify_gradient_estimate(g, u, tol=1e-10)
    assert report.passed


# -- Liouville premises, chain, search --------------------------------------------------


def test_liouville_premises_zero_is_feasible(k3):
    report = gc.check_liouville_premises(k3, gc.VertexFunction.constant(k3, 0.0), 2.0, 1.0)
    assert report.passed
    assert report.min_slack == 0.0


def test_liouville_premises_constants_infeasible(k3):
    report = gc.check_liouville_premises(k3, gc.VertexFunction.constant(k3, 0.5), 2.0, 1.0, tol=1e-10)
    assert not report.passed
    assert all(s < 0 for s in report.slack.values())
    assert report.info["supersolution_min"] == pytest.approx(-0.25)


def test_liouville_premises_fractional_p_no_nan(p3):
    u = gc.VertexFunction.from_dict(p3, {"a": -0.5, "b": 0.25, "c": 0.5})
    report = gc.check_liouville_premises(p3, u, 0.5, 1.0)
    assert np.isfinite(report.min_slack)
    assert not report.passed


def test_liouville_premises_validation(k3):
    u = gc.VertexFunction.constant(k3, 0.0)
    with pytest.raises(gc.BadParamsError):
        gc.check_liouville_premises(k3, u, 0.0, 1.0)
    with pytest.raises(gc.BadParamsError):
        gc.check_liouville_premises(k3, u, 1.0, -1.0)


def test_liouville_premises_random_pass_implies_tiny():
    g = gc.generate("complete", n=4)
    rng = np.random.default_rng(99)
    tol = 1e-10
    for _ in range(10_000):
        u = gc.VertexFunction(g.vertices, np.abs(rng.uniform(0, 1, 4)))
        report = gc.check_liouville_premises(g, u, 2.0, 1.0, tol=tol)
        if report.passed:
            scale = float(np.sum(g.degrees) / np.min(g.degrees))
            assert float(np.max(u.values)) <= (tol * scale) ** 0.5


def test_chain_bad_start(p3):
    u = gc.VertexFunction.from_dict(p3, {"a": 0.0, "b": 1.0, "c": 1.0})
    with pytest.raises(gc.BadStartError):
        gc.keller_osserman_chain(p3, u, 2.0, "a")


def test_chain_constant_premise_violation():
    g = gc.generate("gnp", n=12, p=0.4, seed=9)
    u = gc.VertexFunction.constant(g, 0.5)
    cert = gc.keller_osserman_chain(g, u, 1.0, g.vertices[0])
    assert cert.outcome is gc.ChainOutcome.PREMISE_VIOLATION
    assert cert.violation_vertex == g.vertices[0]
    assert cert.premise_slack == pytest.approx(-0.5)


def test_chain_escape_on_growth_profile():
    # lap(u) >= u holds along v0..v2 while the values blow past the bound
    g = gc.build_graph([("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0)])
    u = gc.VertexFunction.from_dict(g, {"a": 1.0, "b": 4.0, "c": 15.0, "d": 56.0})
    cert = gc.keller_osserman_chain(g, u, 1.0, "a", bound=10.0)
    assert cert.outcome is gc.ChainOutcome.ESCAPED_BOUND
    assert cert.chain == ("a", "b", "c")
    assert cert.values == (1.0, 4.0, 15.0)


def test_chain_plateau_revisit():
    g = gc.build_graph([("a", "b", 1.0), ("b", "c", 1.0)])
    u = gc.VertexFunction.constant(g, 1e-13)
    cert = gc.keller_osserman_chain(g, u, 2.0, "b", tol=1e-12)
    assert cert.outcome is gc.ChainOutcome.REVISIT_CONTRADICTION
    assert cert.chain[-1] in cert.chain[:-1]


def test_chain_structure_invariants():
    g = gc.build_graph([("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0)])
    u = gc.VertexFunction.from_dict(g, {"a": 1.0, "b": 4.0, "c": 15.0, "d": 56.0})
    cert = gc.keller_osserman_chain(g, u, 1.0, "a", bound=10.0, tol=1e-12)
    adj = {v: set(g.neighbors(v)) for v in g.vertices}
    for x, y in zip(cert.chain, cert.chain[1:]):
        assert y in adj[x]
    assert len(cert.increments) == len(cert.chain) - 1
    for i, inc in enumerate(cert.increments):
        assert cert.values[i + 1] >= cert.values[i] + inc - cert.tol
        assert inc == pytest.approx(cert.rho ** (cert.p - 1) * (cert.values[i] ** cert.p))
    assert all(b > a for a, b in zip(cert.values, cert.values[1:]))


def test_chain_rejects_negative_u(p3):
    u = gc.VertexFunction.from_dict(p3, {"a": -1.0, "b": 1.0, "c": 1.0})
    with pytest.raises(gc.NegativeInputError):
        gc.keller_osserman_chain(p3, u, 2.0, "b")


def test_chain_json_round_trip():
    g = gc.build_graph([("a", "b", 1.0), ("b", "c", 1.0)])
    cert = gc.keller_osserman_chain(g, gc.VertexFunction.constant(g, 0.5), 1.0, "a")
    obj = json.loads(cert.to_json())
    assert obj["outcome"] == "premise_violation"
    assert obj["chain"][0] == "a"


def test_liouville_search_finds_nothing(k5):
    report = gc.liouville_search(k5, 2.0, 1.0, restarts=300, steps=200, seed=1)
    assert not report.found_counterexample
    assert report.max_feasible_sup_norm <= 1e-6
    obj = report.to_json_dict()
    assert obj["counterexample"] is None


def test_liouville_search_validation(k5):
    with pytest.raises(gc.BadParamsError):
        gc.liouville_search(k5, -1.0, 1.0)
    with pytest.raises(gc.BadParamsError):
        gc.liouville_search(k5, 1.0, 1.0, restarts=0)


# -- strong maximum principle -------------------------------------------------------


def test_smp_constant_confirmed(k3):
    result = gc.check_strong_max_principle(k3, gc.VertexFunction.constant(k3, 2.0))
    assert result.outcome is gc.MaxPrincipleOutcome.CONSTANT_CONFIRMED


def test_smp_not_subharmonic_frozen(p3):
    u = gc.VertexFunction.from_dict(p3, {"a": 0.0, "b": 1.0, "c": 0.0})
    result = gc.check_strong_max_principle(p3, u)
    assert result.outcome is gc.MaxPrincipleOutcome.NOT_SUBHARMONIC
    assert result.vertex == "b"


def test_smp_near_constant_confirmed(k5):
    rng = np.random.default_rng(3)
    u = gc.VertexFunction(k5.vertices, 1.0 + 1e-16 * rng.uniform(-1, 1, 5))
    result = gc.check_strong_max_principle(k5, u)
    assert result.outcome is gc.MaxPrincipleOutcome.CONSTANT_CONFIRMED


def test_smp_never_violation_random():
    rng = np.random.default_rng(37)
    for name, g in family_corpus(2):
        for _ in range(100):
            u = gc.random_vertex_function(g, rng, zero_prob=0.05)
            result = gc.check_strong_max_principle(g, u)
            assert result.outcome is not gc.MaxPrincipleOutcome.VIOLATION


def test_smp_rejects_complex(k3):
    with pytest.raises(gc.ComplexNotAllowedError):
        gc.check_strong_max_principle(k3, gc.VertexFunction.constant(k3, 1j))


# -- spectra ---------------------------------------------------------------------------


def test_spectrum_k3_frozen(k3):
    pairs = gc.spectrum_smallest(k3, 3)
    evals = [p.eigenvalue for p in pairs]
    assert evals[0] == pytest.approx(0.0, abs=1e-10)
    assert evals[1] == pytest.approx(1.5, abs=1e-8)
    assert evals[2] == pytest.approx(1.5, abs=1e-8)


def test_spectrum_p2_frozen(p2):
    pairs = gc.spectrum_smallest(p2, 2)
    assert pairs[0].eigenvalue == pytest.approx(0.0, abs=1e-10)
    assert pairs[1].eigenvalue == pytest.approx(2.0, abs=1e-10)


def test_spectrum_ground_state_constant():
    for _, g in family_corpus(2):
        pair = gc.spectrum_smallest(g, 1)[0]
        assert pair.eigenvalue == pytest.approx(0.0, abs=1e-10)
        phi = pair.eigenvector.values
        expected = 1.0 / np.sqrt(np.sum(g.degrees))
        assert np.max(np.abs(phi - expected)) <= 1e-8


def test_spectrum_matches_dense_oracle():
    for _, g in family_corpus(2):
        pairs = gc.spectrum_smallest(g, g.n_vertices)
        got = np.array([p.eigenvalue for p in pairs])
        ref = eigenvalues_ref(g)
        assert np.max(np.abs(got - ref)) <= 1e-8


def test_spectrum_in_unit_interval_and_orthonormal():
    for _, g in family_corpus(2):
        pairs = gc.spectrum_smallest(g, g.n_vertices)
        for p in pairs:
            assert -1e-10 <= p.eigenvalue <= 2.0 + 1e-10
            assert p.residual <= 1e-8
        vecs = np.stack([p.eigenvector.values for p in pairs], axis=1)
        gram = vecs.T @ (g.degrees[:, None] * vecs)
        assert np.max(np.abs(gram - np.eye(len(pairs)))) <= 1e-8


def test_spectrum_iterative_path_large_cycle():
    n = 600
    g = gc.generate("cycle", n=n)
    pairs = gc.spectrum_smallest(g, 3)
    evals = [p.eigenvalue for p in pairs]
    assert evals[0] == pytest.approx(0.0, abs=1e-8)
    expected = 1.0 - np.cos(2.0 * np.pi / n)
    assert evals[1] == pytest.approx(expected, abs=1e-8)
    assert evals[2] == pytest.approx(expected, abs=1e-8)


def test_spectrum_k_validation(k3):
    with pytest.raises(gc.BadParamsError):
        gc.spectrum_smallest(k3, 0)
    with pytest.raises(gc.BadParamsError):
        gc.spectrum_smallest(k3, 4)


def test_spectral_pair_rejects_out_of_range(k3):
    phi = gc.VertexFunction.constant(k3, 0.5)
    with pytest.raises(ValueError):
        gc.SpectralPair(eigenvalue=2.5, eigenvector=phi, residual=0.0)
    with pytest.raises(ValueError):
        gc.SpectralPair(eigenvalue=-0.1, eigenvector=phi, residual=0.0)
