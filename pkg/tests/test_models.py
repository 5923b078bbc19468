import numpy as np
import pytest

from physics.duality import build_U, build_W, log_sinh_map
from physics.eigensolver import eigen_lowest
from physics.errors import DomainError, NoAdmissibleRootError, SpectrumExhaustedError
from physics.models import (
    CESParams,
    ESParams,
    ces_energy,
    ces_energy_cubic,
    ces_from_couplings,
    ces_potential,
    ces_root_candidates,
    ces_wavefunction,
    chain_from_es,
    couplings_from_ces,
    couplings_from_es,
    energy_sum_residual,
    es_bound_count,
    es_energy,
    es_from_ces,
    es_potential,
    es_wavefunction,
    printed_exponents,
    resolved_exponents,
)
from physics.specfun import finite_diff
from physics.verify import ces_default_grid, ces_operator


def test_worked_es_energy(worked_es):
    assert es_energy(worked_es, 0) == pytest.approx(-337.0 / 36.0, abs=1e-12)


@pytest.mark.parametrize("alpha, beta, count", [
    (1.0, 4.0, 1),
    (1.5, 4.0, 1),
    (1.0, 100.0, 9),
    (2.5, 25.0, 3),
    (0.8, 10.0, 3),
    (2.0, 4.0, 0),
])
def test_es_bound_count(alpha, beta, count):
    assert es_bound_count(ESParams(alpha, beta)) == count


def test_es_energy_threshold_and_beyond():
    p = ESParams(1.0, 4.0)
    # (alpha + 1)^2 = beta: zero-binding threshold -2 beta
    assert es_energy(p, 1) == pytest.approx(-8.0)
    with pytest.raises(SpectrumExhaustedError):
        es_energy(p, 2)


def test_es_levels_increase_with_n():
    p = ESParams(1.0, 100.0)
    energies = [es_energy(p, n) for n in range(es_bound_count(p))]
    assert np.all(np.diff(energies) > 0.0)
    assert energies[-1] < -200.0


def test_es_params_validation():
    with pytest.raises(DomainError):
        ESParams(0.0, 4.0)
    with pytest.raises(DomainError):
        ESParams(1.0, float("nan"))
    assert not ESParams(2.0, 4.0).in_window
    with pytest.raises(DomainError):
        es_energy(ESParams(1.0, 4.0), -1)


def test_es_potential_equals_W_minus_lambda(worked_es):
    x = np.array([0.05, 0.5, 3.0])
    lam = worked_es.alpha * (worked_es.alpha - 1.0)
    W = build_W(log_sinh_map(), lam, -2.0 * worked_es.beta, x)
    assert es_potential(worked_es, x) == pytest.approx(W - lam, rel=1e-12)


def test_es_potential_rejects_origin(worked_es):
    with pytest.raises(DomainError):
        es_potential(worked_es, 0.0)


@pytest.mark.parametrize("alpha, beta, n", [(1.5, 4.0, 0), (1.0, 100.0, 3), (2.5, 25.0, 2)])
def test_es_wavefunction_solves_schrodinger_equation(alpha, beta, n):
    p = ESParams(alpha, beta)
    energy = es_energy(p, n)
    f = lambda x: es_wavefunction(p, n, x)
    xs = np.linspace(0.1, 1.5, 8)
    values = np.array([f(x) for x in xs])
    residual = np.array([-finite_diff(f, x, order=2, h=3e-5) + (es_potential(p, x) - energy) * f(x) for x in xs])
    assert np.max(np.abs(residual)) <= 1e-5 * abs(energy) * np.max(np.abs(values))


def test_es_wavefunction_has_n_nodes():
    p = ESParams(1.0, 100.0)
    x = np.linspace(0.005, 3.0, 4000)
    for n in range(4):
        psi = es_wavefunction(p, n, x)
        psi = psi[np.abs(psi) > 1e-12 * np.max(np.abs(psi))]
        assert np.count_nonzero(np.diff(np.sign(psi)) != 0) == n


def test_worked_chain_couplings(worked_es):
    couplings = couplings_from_es(worked_es, 0)
    assert couplings.lam == pytest.approx(0.75)
    assert couplings.nu == pytest.approx(-8.0)
    assert couplings.mu == pytest.approx(-337.0 / 36.0 + 0.75)
    ces = ces_from_couplings(couplings.mu, couplings.nu)
    assert ces.A == pytest.approx(82.0 / 9.0, abs=1e-12)
    assert ces.B == pytest.approx(8.0)
    assert couplings_from_ces(ces) == pytest.approx((couplings.mu, couplings.nu))


def test_worked_ces_ground_level(worked_ces):
    level = ces_energy(worked_ces, 0)
    assert level.sqrt_eps == pytest.approx(1.0, abs=1e-12)
    assert level.eps == pytest.approx(1.0, abs=1e-12)
    assert abs(ces_energy_cubic(worked_ces, 0)(level.sqrt_eps)) < 1e-12
    partner = es_from_ces(level, worked_ces)
    assert partner.alpha == pytest.approx(1.5)
    assert partner.beta == pytest.approx(4.0)


def test_worked_ces_single_admissible_root(worked_ces):
    candidates = ces_root_candidates(worked_ces, 0)
    assert len(candidates) == 3
    assert sum(cand.admissible for cand in candidates) == 1
    rejected = {cand.reason for cand in candidates if not cand.admissible}
    assert rejected == {"sqrt_eps not positive", "no decay as y -> +inf"}


def test_worked_ces_excited_level_is_shallower(worked_ces):
    ground = ces_energy(worked_ces, 0)
    excited = ces_energy(worked_ces, 1)
    assert 0.0 < excited.sqrt_eps < ground.sqrt_eps
    with pytest.raises(NoAdmissibleRootError):
        ces_energy(worked_ces, 2)


def test_empty_ces_spectrum():
    p = CESParams(0.75, 0.0)
    roots = [cand.root for cand in ces_root_candidates(p, 0)]
    assert roots == pytest.approx([-0.5, -0.5, -0.25], abs=1e-6)
    with pytest.raises(NoAdmissibleRootError):
        ces_energy(p, 0)


def test_ces_potential_matches_built_U_shift():
    m = log_sinh_map()
    mu, nu = -8.6, -8.0
    y = np.linspace(-10.0, 10.0, 41)
    V = ces_potential(ces_from_couplings(mu, nu), y)
    assert V == pytest.approx(build_U(m, mu, nu, y) - 0.25, abs=1e-12)


def test_ces_potential_limits(worked_ces):
    assert ces_potential(worked_ces, -40.0) == pytest.approx(0.0, abs=1e-12)
    assert ces_potential(worked_ces, 40.0) == pytest.approx(worked_ces.A - worked_ces.B - 0.75)


@pytest.mark.parametrize("alpha, beta, n", [(1.5, 4.0, 0), (2.2, 12.0, 1), (1.8, 20.0, 2)])
def test_energy_sum_identity_along_chain(alpha, beta, n):
    chain = chain_from_es(ESParams(alpha, beta), n)
    level = ces_energy(chain.ces, n)
    assert level.alpha == pytest.approx(alpha, abs=1e-10)
    assert abs(energy_sum_residual(level, chain.es_energy, chain.couplings.mu)) < 1e-10


def test_resolved_exponents_decay_on_both_sides(worked_ces):
    level = ces_energy(worked_ces, 0)
    psi = ces_wavefunction(level, worked_ces, np.array([-25.0, 0.0, 25.0]))
    assert abs(psi[0]) < 1e-9 * abs(psi[1])
    assert abs(psi[2]) < 1e-9 * abs(psi[1])
    e_minus, e_plus = resolved_exponents(level, worked_ces)
    assert e_minus != e_plus


def test_printed_exponents_grow_to_the_left(worked_ces):
    level = ces_energy(worked_ces, 0)
    printed = ces_wavefunction(level, worked_ces, np.array([-20.0, 0.0]), exponents=printed_exponents(level, worked_ces))
    assert abs(printed[0]) > 1e6 * abs(printed[1])


def test_ces_wavefunction_solves_schrodinger_equation(worked_ces):
    for n in (0, 1):
        level = ces_energy(worked_ces, n)
        f = lambda y: ces_wavefunction(level, worked_ces, y)
        ys = (-2.0, 0.3, 1.5)
        scale = max(abs(f(y)) for y in ys)
        for y in ys:
            residual = -finite_diff(f, y, order=2) + (ces_potential(worked_ces, y) + level.eps) * f(y)
            assert abs(residual) <= 1e-6 * scale


def test_ces_wavefunction_matches_transformed_es_state(worked_es, worked_ces):
    # phi(y) = (dy/dx)^(1/2) psi(x(y)) up to normalization
    m = log_sinh_map()
    level = ces_energy(worked_ces, 0)
    y = np.linspace(-6.0, 6.0, 13)
    x = m.inverse(y)
    phi = np.sqrt(m.d1(x)) * es_wavefunction(worked_es, 0, x)
    ratio = ces_wavefunction(level, worked_ces, y) / phi
    assert ratio == pytest.approx(np.full_like(ratio, ratio[0]), rel=1e-10)


@pytest.mark.parametrize("alpha, expected", [
    (1.0, -8.0 * np.sqrt(2.0)),
    (1.5, -8.0 * np.sqrt(2.0) + 0.75),
])
def test_es_potential_spot_values(alpha, expected):
    assert es_potential(ESParams(alpha, 4.0), np.arcsinh(1.0)) == pytest.approx(expected)


def test_es_potential_asymptote(worked_es):
    assert es_potential(worked_es, 30.0) == pytest.approx(-8.0, abs=1e-8)


def test_es_levels_increase_for_random_parameters():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = ESParams(rng.uniform(0.6, 3.0), rng.uniform(10.0, 80.0))
        k = es_bound_count(p)
        energies = [es_energy(p, n) for n in range(k)]
        assert np.all(np.diff(energies) > 0.0)
        assert all(e < -2.0 * p.beta for e in energies)


def test_ces_potential_at_origin(worked_ces):
    expected = 41.0 / 9.0 - 8.0 / np.sqrt(2.0) - 3.0 / 16.0
    assert ces_potential(worked_ces, 0.0) == pytest.approx(expected, abs=1e-12)


def test_cubic_roots_move_continuously(worked_ces):
    roots = [cand.root for cand in ces_root_candidates(worked_ces, 0)]
    nudged = [cand.root for cand in ces_root_candidates(CESParams(worked_ces.A + 1e-9, worked_ces.B), 0)]
    assert nudged == pytest.approx(roots, abs=1e-6)


def test_energy_sum_on_worked_and_alpha_one_chains(worked_es, worked_ces):
    level = ces_energy(worked_ces, 0)
    assert abs(energy_sum_residual(level, es_energy(worked_es, 0), -310.0 / 36.0)) < 1e-12
    chain = chain_from_es(ESParams(1.0, 4.0), 0)
    flat = ces_energy(chain.ces, 0)
    assert flat.eps == pytest.approx(0.25, abs=1e-12)
    assert abs(energy_sum_residual(flat, chain.es_energy, chain.couplings.mu)) < 1e-12


def test_ces_ground_state_overlaps_numeric_eigenvector(worked_ces):
    g = ces_default_grid()
    level = ces_energy(worked_ces, 0)
    psi = ces_wavefunction(level, worked_ces, g.nodes)
    numeric = eigen_lowest(ces_operator(worked_ces, g), 1)[0].vector
    overlap = abs(psi @ numeric) / (np.linalg.norm(psi) * np.linalg.norm(numeric))
    assert overlap >= 0.9999
