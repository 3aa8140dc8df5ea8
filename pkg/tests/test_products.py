import numpy as np
import pytest

from oracles import EmbeddedProductFlow, block_diag, oracle_rk_step, split_blocks

from isoflow.errors import ConfigurationError
from isoflow.flows import (
    ProductFlowDefinition,
    heisenberg_chain_flow,
    point_vortex_flow,
    preset,
    vector_to_su2,
)
from isoflow.integrators import SolverConfig, integrate, product_step, rk_step
from isoflow.linalg import frobenius_norm, trace_powers
from isoflow.rng import SplitMix64
from isoflow.subspaces import su_n
from isoflow.tableaux import gauss_legendre


def random_spins(count, seed):
    rng = SplitMix64(seed)
    out = []
    for _ in range(count):
        x = np.array([rng.normal() for _ in range(3)])
        out.append(vector_to_su2(x / np.linalg.norm(x)))
    return tuple(out)


def zero_product(count):
    return ProductFlowDefinition(
        name="zero-product",
        components=[su_n(2) for _ in range(count)],
        b=lambda ws: tuple(np.zeros((2, 2), dtype=complex) for _ in ws),
    )


class TestTrivial:
    def test_zero_b_is_identity(self):
        flow = zero_product(3)
        ws = random_spins(3, 4)
        out = product_step(flow, gauss_legendre(2), ws, 0.1)
        for a, b in zip(out, ws):
            np.testing.assert_array_equal(a, b)

    def test_component_count_checked(self):
        flow = zero_product(3)
        with pytest.raises(ConfigurationError):
            product_step(flow, gauss_legendre(1), random_spins(2, 4), 0.1)

    def test_off_subspace_component_rejected(self, rng):
        flow = zero_product(2)
        bad = (rng.complex_matrix(2), vector_to_su2([0, 0, 1.0]))
        with pytest.raises(ConfigurationError):
            product_step(flow, gauss_legendre(1), bad, 0.1)


class TestBlockDiagonalEmbedding:
    """A product step must agree with the same method on the block matrix."""

    @pytest.mark.parametrize("s", [1, 2])
    def test_two_vortices(self, s):
        flow = point_vortex_flow([1.0, 2.0])
        ws = random_spins(2, 12)
        t = gauss_legendre(s)
        stepped = product_step(flow, t, ws, 0.1)

        embedded = EmbeddedProductFlow(flow)
        big = rk_step(embedded, t, block_diag(list(ws)), 0.1)
        blocks = split_blocks(big, [2, 2])
        for ours, ref in zip(stepped, blocks):
            assert np.max(np.abs(ours - ref)) <= 1e-11

    def test_heisenberg_against_root_finder(self):
        flow = heisenberg_chain_flow(3)
        ws = random_spins(3, 13)
        t = gauss_legendre(2)
        stepped = product_step(flow, t, ws, 0.1)

        embedded = EmbeddedProductFlow(flow)
        ref = oracle_rk_step(embedded, t, block_diag(list(ws)), 0.1)
        blocks = split_blocks(ref, [2, 2, 2])
        for ours, other in zip(stepped, blocks):
            assert np.max(np.abs(ours - other)) <= 1e-11


class TestConservation:
    def test_heisenberg_per_component_traces(self):
        flow = heisenberg_chain_flow(3)
        ws = flow.initial_state
        out = product_step(flow, gauss_legendre(1), ws, 0.1)
        for before, after in zip(ws, out):
            drift = np.abs(trace_powers(after, 2) - trace_powers(before, 2))
            assert np.max(drift) <= 1e-12

    def test_vortex_casimirs_one_step(self):
        flow = point_vortex_flow([1.0, 0.5, 2.0])
        ws = random_spins(3, 21)
        out = product_step(flow, gauss_legendre(2), ws, 0.1)
        for before, after in zip(ws, out):
            assert abs(frobenius_norm(after) - frobenius_norm(before)) <= 1e-12

    def test_momentum_with_unequal_strengths(self):
        # the weighted spin sum is conserved stage by stage
        strengths = [1.0, 0.5, 2.0]
        flow = point_vortex_flow(strengths)
        ws = random_spins(3, 22)
        cfg = SolverConfig(abs_tol=1e-14)
        rec = integrate(flow, gauss_legendre(1), ws, 0.1, 200, cfg=cfg)
        m0 = sum(g * w for g, w in zip(strengths, rec.states[0]))
        worst = max(
            frobenius_norm(sum(g * w for g, w in zip(strengths, state)) - m0)
            for state in rec.states
        )
        assert worst <= 1e-11

    def test_su2_structure_kept(self):
        flow = heisenberg_chain_flow(4)
        rec = integrate(flow, gauss_legendre(2), flow.initial_state, 0.1, 50)
        for state in rec.states:
            for sub, w in zip(flow.components, state):
                assert sub.membership(w) <= 1e-11


class TestIntegrateProducts:
    def test_monitors(self):
        flow = preset("heisenberg-3")
        rec = integrate(
            flow,
            gauss_legendre(1),
            flow.initial_state,
            0.1,
            5,
            monitors=["trace-powers", "momentum", "hamiltonian", "subspace-residual"],
        )
        assert rec.is_product
        assert rec.monitors["trace-powers"].shape == (6, 3, 2)
        assert rec.monitors["momentum"].shape == (6, 3)

    def test_partitioned_rejected(self):
        from isoflow.tableaux import lobatto_iiia_iiib

        flow = preset("heisenberg-3")
        with pytest.raises(ConfigurationError):
            integrate(flow, lobatto_iiia_iiib(2), flow.initial_state, 0.1, 2)
