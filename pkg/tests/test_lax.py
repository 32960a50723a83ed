"""Tests for the Ward operators, commutator, factorization and transport."""

import numpy as np
import pytest

import dnahm
from dnahm.errors import ChainTooShort, EtaNearZero, PointNotOnCurve

import helpers


def ones_scalar_chain(n=5):
    """k=1 chain with every stored entry equal to 1 (not a solution)."""
    sites = tuple(
        dnahm.DNSite(r=r, A=dnahm.cmatrix([[1.0]]), B=dnahm.cmatrix([[1.0]]), D=dnahm.cmatrix([[1.0]]))
        for r in range(n)
    )
    links = tuple(
        dnahm.DNLink(r=r, Pplus=dnahm.cmatrix([[1.0]]), Pminus=dnahm.cmatrix([[1.0]]))
        for r in range(n - 1)
    )
    return dnahm.DNChain(k=1, sites=sites, links=links)


def section_from(chain, vectors):
    return dnahm.WardSection(start=chain.r0, values=np.array(vectors, dtype=complex))


class TestWardOperators:
    def test_zero_section_maps_to_zero(self):
        chain, _ = dnahm.trig_solution(2)
        f = section_from(chain, np.zeros((4, 2)))
        assert dnahm.max_abs(dnahm.ward_plus(chain, 0.3 + 1j, f).values) == 0.0
        assert dnahm.max_abs(dnahm.ward_minus(chain, 0.3 + 1j, -2.0, f).values) == 0.0

    def test_discrete_difference_at_eta_zero(self):
        chain = ones_scalar_chain(5)
        f = section_from(chain, [[1.0], [2.0], [4.0], [8.0], [16.0]])
        out = dnahm.ward_plus(chain, 0.0, f)
        assert out.start == 1
        # (W+ f)_r = f_{r-1} - f_r when all data are 1 and eta = 0
        np.testing.assert_allclose(out.values[:, 0], [-1.0, -2.0, -4.0, -8.0])

    def test_ward_minus_eta_zero_is_multiplication(self):
        chain, _ = dnahm.trig_solution(2)
        rng = np.random.default_rng(31)
        f = section_from(chain, rng.standard_normal((4, 2)))
        zeta = 0.7 - 0.2j
        out = dnahm.ward_minus(chain, 0.0, zeta, f)
        for i in range(3):
            site = chain.sites[i]
            expected = (zeta * np.eye(2) + site.D) @ f.values[i]
            assert dnahm.max_abs(out.values[i] - expected) < 1e-14

    def test_matches_direct_formula(self):
        chain, _ = dnahm.trig_solution(2)
        rng = np.random.default_rng(32)
        f = section_from(chain, rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2)))
        eta, zeta = 0.6 + 0.1j, -0.4 + 0.9j
        plus = dnahm.ward_plus(chain, eta, f)
        minus = dnahm.ward_minus(chain, eta, zeta, f)
        for r in range(2, 5):
            link = chain.link(r - 1)
            site = chain.site(r)
            expected = link.Pplus @ f.at(r - 1) - (eta * site.A + np.eye(2)) @ f.at(r)
            assert dnahm.max_abs(plus.at(r) - expected) < 1e-14
        for r in range(1, 4):
            link = chain.link(r)
            site = chain.site(r)
            expected = eta * link.Pminus @ f.at(r + 1) + (zeta * np.eye(2) + site.D) @ f.at(r)
            assert dnahm.max_abs(minus.at(r) - expected) < 1e-14


def coefficient_oracle(chain, eta):
    """Hand-expanded commutator: max column norm of the residual matrices.

    At interior site r the commutator's coefficient on f_{r+1} is
    -eta^2 (P- A_{r+1} - A_r P-) on link (r, r+1), on f_{r-1} it is the
    P+ D - D P+ residual of link (r-1, r), and on f_r it is eta times the
    difference of the two B-expressions at r.
    """
    worst = 0.0
    for r in range(chain.r0 + 1, chain.r1):
        right = chain.link(r)
        left = chain.link(r - 1)
        s = chain.site(r)
        comm_a = right.Pminus @ chain.site(r + 1).A - s.A @ right.Pminus
        comm_d = left.Pplus @ chain.site(r - 1).D - s.D @ left.Pplus
        mismatch = (left.Pplus @ left.Pminus + s.D @ s.A) - (
            right.Pminus @ right.Pplus + s.A @ s.D
        )
        worst = max(
            worst,
            abs(eta) ** 2 * dnahm.max_abs(comm_a),
            dnahm.max_abs(comm_d),
            abs(eta) * dnahm.max_abs(mismatch),
        )
    return worst


class TestCommutator:
    def test_trig_solution_commutes(self):
        chain, _ = dnahm.trig_solution(2)
        assert dnahm.commutator_residual(chain, 0.7 + 0.3j, 2.2 - 0.5j) < 1e-12

    def test_scalar_chain_commutes(self):
        assert dnahm.commutator_residual(ones_scalar_chain(4), 1.3 + 0.2j, 0.4j) < 1e-14

    def test_zeta_independence(self):
        chain = dnahm.from_braam_austin(helpers.evolved_chain(2, seed=17, steps=8)[0])
        eta = 0.7 + 0.3j
        a = dnahm.commutator_residual(chain, eta, 0.1)
        b = dnahm.commutator_residual(chain, eta, -3.0 + 2.0j)
        assert abs(a - b) < 1e-13

    def test_perturbed_pplus_detected(self):
        chain, _ = dnahm.trig_solution(2)
        eta = 0.7 + 0.3j
        bad = helpers.replace_link(
            chain, 1, Pplus=helpers.perturb_entry(chain.links[1].Pplus, 0, 0, 1e-3)
        )
        assert dnahm.commutator_residual(bad, eta, 0.5) >= 1e-4 * abs(eta)

    def test_matches_coefficient_oracle_on_non_solution(self):
        rng = np.random.default_rng(33)
        sites = tuple(
            dnahm.DNSite(
                r=r,
                A=helpers.random_cmatrix(rng, 2),
                B=helpers.random_cmatrix(rng, 2),
                D=helpers.random_cmatrix(rng, 2),
            )
            for r in range(4)
        )
        links = tuple(
            dnahm.DNLink(r=r, Pplus=helpers.random_cmatrix(rng, 2), Pminus=helpers.random_cmatrix(rng, 2))
            for r in range(3)
        )
        chain = dnahm.DNChain(k=2, sites=sites, links=links)
        for eta in (0.5, 1.0 + 1.0j, 2.0 - 0.3j):
            ours = dnahm.commutator_residual(chain, eta, 0.8 - 0.1j)
            assert ours == pytest.approx(coefficient_oracle(chain, eta), rel=1e-12)

    def test_chain_too_short(self):
        with pytest.raises(ChainTooShort):
            dnahm.commutator_residual(ones_scalar_chain(2), 1.0, 1.0)


class TestMFactorization:
    def test_trig_interior_sites(self):
        chain, _ = dnahm.trig_solution(2)
        for r in (2, 3):
            assert dnahm.m_factorization_residual(chain, r, 0.7 + 0.3j, 1.1 - 0.4j) < 1e-12

    def test_scalar_chain(self):
        chain = dnahm.scalar_solution(-3j, -13.0, -3j, -2.0, 2.0, length=4)
        assert dnahm.m_factorization_residual(chain, 1, 0.9, 0.3) < 1e-13

    def test_both_orderings_agree_on_solutions(self):
        chain = dnahm.from_braam_austin(helpers.evolved_chain(3, seed=18, steps=6)[0])
        eta, zeta = 1.2 - 0.7j, 0.25 + 0.5j
        a = dnahm.m_factorization_residual(chain, 3, eta, zeta)
        b = dnahm.m_factorization_residual(chain, 3, eta, zeta, reverse_order=True)
        assert a < 1e-12 and b < 1e-12

    def test_non_solution_matches_closed_form(self):
        # residual = max(|eta| ||B_r - P- P+ - A D||, |eta|^2 ||comm_A||) column-wise
        rng = np.random.default_rng(34)
        chain, _ = dnahm.trig_solution(2)
        bad = helpers.replace_site(
            chain, 1, B=helpers.perturb_entry(chain.sites[1].B, 1, 0, 0.01)
        )
        eta, zeta = 0.8 + 0.2j, -0.6j
        ours = dnahm.m_factorization_residual(bad, 2, eta, zeta)
        site = bad.site(2)
        right = bad.link(2)
        b_dev = site.B - (right.Pminus @ right.Pplus + site.A @ site.D)
        comm_a = right.Pminus @ bad.site(3).A - site.A @ right.Pminus
        expected = max(abs(eta) * dnahm.max_abs(b_dev), abs(eta) ** 2 * dnahm.max_abs(comm_a))
        assert ours == pytest.approx(expected, rel=1e-10)

    def test_boundary_site_rejected(self):
        chain, _ = dnahm.trig_solution(2)
        with pytest.raises(ChainTooShort):
            dnahm.m_factorization_residual(chain, 1, 1.0, 1.0)


class TestDualTransport:
    def test_trig_curve_point(self):
        chain, _ = dnahm.trig_solution(2)
        point = dnahm.CurvePoint(eta=1.0 + 0j, zeta=np.exp(1j * np.pi / 6))
        assert dnahm.dual_transport_check(chain, 2, point) < 1e-9

    def test_scalar_chain_trivial(self):
        chain = dnahm.scalar_solution(-3j, -13.0, -3j, -2.0, 2.0, length=3)
        s = dnahm.char_surface(chain.sites[0].A, chain.sites[0].B, chain.sites[0].D)
        point = dnahm.curve_samples(s, 4)[0]
        assert dnahm.dual_transport_check(chain, 0, point) < 1e-12

    def test_perturbed_chain_detected(self):
        chain, _ = dnahm.trig_solution(2)
        # perturb P- on the crossed link (2, 3), which is link index 1
        bad = helpers.replace_link(
            chain, 1, Pminus=helpers.perturb_entry(chain.links[1].Pminus, 0, 0, 1e-2)
        )
        point = dnahm.CurvePoint(eta=1.0 + 0j, zeta=np.exp(1j * np.pi / 6))
        # the point still lies on site 3's curve (site data unchanged)
        assert dnahm.dual_transport_check(bad, 2, point) > 1e-5

    def test_composition_along_links(self):
        # transports a null covector across several links; error grows slowly
        chain, _ = dnahm.trig_solution(3)
        point = dnahm.CurvePoint(eta=np.exp(0.4j), zeta=np.exp(0.4j) * np.exp(-1j * np.pi / 8))
        site = chain.site(5)
        m = (
            point.eta * point.zeta * site.A
            + point.eta * site.B
            + point.zeta * np.eye(2)
            + site.D
        )
        _, basis = dnahm.nullity(m.T, tol=1e-6)
        g = basis[:, -1]
        for r in (4, 3, 2):
            g = dnahm.transport_covector(chain, r, point, g)
            site_l = chain.site(r)
            m_l = (
                point.eta * point.zeta * site_l.A
                + point.eta * site_l.B
                + point.zeta * np.eye(2)
                + site_l.D
            )
            assert np.linalg.norm(g @ m_l) / np.linalg.norm(g) < 1e-8

    def test_eta_near_zero_rejected(self):
        chain, _ = dnahm.trig_solution(2)
        with pytest.raises(EtaNearZero):
            dnahm.transport_covector(chain, 2, dnahm.CurvePoint(0.0, 0.0), np.ones(2))

    def test_off_curve_rejected(self):
        chain, _ = dnahm.trig_solution(2)
        with pytest.raises(PointNotOnCurve):
            dnahm.dual_transport_check(chain, 2, dnahm.CurvePoint(eta=1.0, zeta=5.0))
