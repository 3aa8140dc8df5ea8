import numpy as np
import pytest

from isoflow.diagnostics import (
    ConvergenceReport,
    casimir_drift,
    convergence_study,
    hamiltonian_drift,
    linear_slope,
    momentum_component_drift,
    momentum_drift,
    reference_solution,
    write_convergence_outputs,
    write_monitor_csvs,
    write_trajectory_csv,
)
from isoflow.errors import ConfigurationError, DegenerateStudyError
from isoflow.flows import FlowDefinition, preset, rigid_body_flow, vector_to_su2
from isoflow.integrators import SolverConfig, general, integrate
from isoflow.linalg import frobenius_norm
from isoflow.rng import SplitMix64, random_skew_symmetric
from isoflow.subspaces import FullSpace
from isoflow.tableaux import ButcherTableau, gauss_legendre
from isoflow.trajectory import TrajectoryRecord


def constant_record(state, n=5):
    return TrajectoryRecord(times=np.arange(n) * 0.1, states=[state] * n, h=0.1)


class TestCasimirDrift:
    def test_constant_trajectory_is_zero(self, rng):
        rec = constant_record(rng.complex_matrix(3))
        np.testing.assert_array_equal(casimir_drift(rec, 3), np.zeros(5))

    def test_eigenvalue_variant(self, rng):
        rec = constant_record(rng.complex_matrix(3))
        np.testing.assert_array_equal(casimir_drift(rec, use_eigenvalues=True), np.zeros(5))

    def test_product_states(self):
        spins = (vector_to_su2([1.0, 0, 0]), vector_to_su2([0, 1.0, 0]))
        rec = TrajectoryRecord(times=[0.0, 0.1], states=[spins, spins], h=0.1)
        np.testing.assert_array_equal(casimir_drift(rec, 2), np.zeros(2))

    def test_non_symplectic_tableau_drifts(self):
        # explicit Euler in stage form: the negative control showing that
        # conservation comes from the method, not the harness
        flow = preset("rigid-body-10")
        euler = ButcherTableau(A=[[0.0]], b=[1.0], c=[0.0], name="explicit-euler")
        rec = integrate(flow, euler, flow.initial_state, 0.1, 100, variant=general())
        drift = casimir_drift(rec, 6)
        assert drift[-1] >= 1e-6


class TestHamiltonianDrift:
    def test_constant_trajectory(self):
        flow = preset("toda-4")
        rec = constant_record(flow.initial_state)
        out = hamiltonian_drift(rec, flow)
        np.testing.assert_array_equal(out.series, np.zeros(5))
        assert out.max_abs == 0.0
        assert out.slope_per_time == 0.0

    def test_requires_hamiltonian(self):
        flow = preset("brockett-3")
        rec = constant_record(flow.initial_state)
        with pytest.raises(ConfigurationError):
            hamiltonian_drift(rec, flow)

    def test_halving_h_quarters_amplitude(self):
        flow = preset("rigid-body-10")
        w0 = flow.initial_state
        amps = []
        for h in (0.1, 0.05):
            rec = integrate(flow, gauss_legendre(1), w0, h, round(40 / h))
            amps.append(hamiltonian_drift(rec, flow).max_abs)
        assert 3.0 <= amps[0] / amps[1] <= 5.0


class TestMomentumDrift:
    def test_constant_trajectory(self):
        spins = (vector_to_su2([1.0, 0, 0]), vector_to_su2([0, 0, 1.0]))
        rec = TrajectoryRecord(times=[0.0, 0.1], states=[spins, spins], h=0.1)
        np.testing.assert_array_equal(momentum_drift(rec, [1.0, 1.0]), np.zeros(2))
        np.testing.assert_array_equal(momentum_component_drift(rec, [1.0, 1.0]), np.zeros((2, 3)))

    def test_single_spin_scaling(self):
        w = vector_to_su2([0.3, -1.0, 0.2])
        rec = TrajectoryRecord(times=[0.0, 0.1], states=[(w,), (2 * w,)], h=0.1)
        drift = momentum_drift(rec, [2.0])
        assert drift[1] == pytest.approx(2 * frobenius_norm(w))

    def test_rejects_plain_states(self, rng):
        rec = constant_record(rng.complex_matrix(2))
        with pytest.raises(ConfigurationError):
            momentum_drift(rec, [1.0])


class TestLinearSlope:
    def test_exact_line(self):
        t = np.linspace(0, 10, 50)
        assert linear_slope(t, 3.0 * t + 1.0) == pytest.approx(3.0)

    def test_constant(self):
        assert linear_slope(np.arange(5.0), np.ones(5)) == 0.0


class TestReferenceSolution:
    def test_zero_flow_returns_initial(self, rng):
        n = 3
        flow = FlowDefinition(
            name="zero", n=n, b=lambda w: np.zeros((n, n), dtype=complex),
            subspace=FullSpace(n), variant=general(),
        )
        w0 = rng.complex_matrix(3)
        np.testing.assert_array_equal(reference_solution(flow, w0, 1.0, h_min=0.5), w0)

    def test_matches_tiny_step_classical_rk4(self):
        # independent integrator: classical RK4 on the raw commutator ODE,
        # reprojected onto the subspace after every step
        flow = rigid_body_flow(3, [1.0, 2.0, 3.0])
        w0 = random_skew_symmetric(3, SplitMix64(31))
        ref = reference_solution(flow, w0, 1.0)

        h = 1e-5
        w = w0.copy()
        field = lambda m: flow.b(m) @ m - m @ flow.b(m)
        for _ in range(round(1.0 / h)):
            k1 = field(w)
            k2 = field(w + 0.5 * h * k1)
            k3 = field(w + 0.5 * h * k2)
            k4 = field(w + h * k3)
            w = flow.subspace.project(w + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))
        assert frobenius_norm(ref - w) <= 1e-9

    def test_self_consistency_across_step_sizes(self):
        flow = rigid_body_flow(3, [1.0, 2.0, 3.0])
        w0 = random_skew_symmetric(3, SplitMix64(31))
        a = reference_solution(flow, w0, 0.25)
        b = reference_solution(flow, w0, 0.25, h_min=16 * 0.5**14)
        # h_min large enough that the second run uses twice the step
        assert frobenius_norm(a - b) <= 1e-12

    def test_disk_cache_round_trip(self, tmp_path):
        flow = rigid_body_flow(3, [1.0, 2.0, 3.0])
        w0 = random_skew_symmetric(3, SplitMix64(31))
        first = reference_solution(flow, w0, 0.125, cache_dir=str(tmp_path))
        files = list(tmp_path.glob("ref-*.npy"))
        assert len(files) == 1
        again = reference_solution(flow, w0, 0.125, cache_dir=str(tmp_path))
        np.testing.assert_array_equal(first, again)


class TestConvergenceStudy:
    def test_second_order_slope(self):
        flow = rigid_body_flow(3, [1.0, 2.0, 3.0])
        w0 = random_skew_symmetric(3, SplitMix64(31))
        hs = [0.5**k for k in range(3, 7)]
        report = convergence_study(flow, w0, [1], hs, T=0.5)
        assert report.slopes[2] == pytest.approx(2.0, abs=0.2)
        assert report.points_used[2] == 4

    def test_single_h_degenerate(self):
        flow = rigid_body_flow(3, [1.0, 2.0, 3.0])
        w0 = random_skew_symmetric(3, SplitMix64(31))
        with pytest.raises(DegenerateStudyError):
            convergence_study(flow, w0, [1], [0.125], T=0.5)

    def test_all_below_floor_degenerate(self):
        n = 3
        flow = FlowDefinition(
            name="zero", n=n, b=lambda w: np.zeros((n, n), dtype=complex),
            subspace=FullSpace(n), variant=general(),
        )
        w0 = np.eye(3, dtype=complex)
        with pytest.raises(DegenerateStudyError, match="floor"):
            convergence_study(flow, w0, [1], [0.25, 0.125], T=0.5)

    def test_incommensurate_h_rejected(self):
        flow = rigid_body_flow(3, [1.0, 2.0, 3.0])
        w0 = random_skew_symmetric(3, SplitMix64(31))
        with pytest.raises(ConfigurationError):
            convergence_study(flow, w0, [1], [0.3, 0.125], T=0.5)


class TestCsvOutput:
    def test_trajectory_and_monitors_written(self, tmp_path):
        flow = preset("toda-4")
        rec = integrate(
            flow, gauss_legendre(1), flow.initial_state, 0.1, 5,
            monitors=["trace-powers", "hamiltonian", "iterations"],
        )
        traj = tmp_path / "trajectory.csv"
        write_trajectory_csv(rec, str(traj))
        lines = traj.read_text().strip().splitlines()
        assert len(lines) == 7  # header + 6 rows
        assert lines[0].startswith("time,w00_re,w00_im")
        paths = write_monitor_csvs(rec, str(tmp_path))
        names = {p.split("/")[-1] for p in paths}
        assert names == {"trace_powers.csv", "hamiltonian.csv", "iterations.csv"}

    def test_byte_identical_reruns(self, tmp_path):
        flow = preset("toda-4")
        outs = []
        for tag in ("a", "b"):
            rec = integrate(
                flow, gauss_legendre(1), flow.initial_state, 0.1, 5,
                monitors=["trace-powers"],
            )
            path = tmp_path / f"traj_{tag}.csv"
            write_trajectory_csv(rec, str(path))
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_convergence_outputs(self, tmp_path):
        report = ConvergenceReport(
            hs=np.array([0.25, 0.125]),
            errors={2: np.array([1e-3, 2.5e-4])},
            slopes={2: 2.0},
            points_used={2: 2},
        )
        paths = write_convergence_outputs(report, str(tmp_path))
        assert (tmp_path / "convergence.csv").exists()
        summary = (tmp_path / "convergence_summary.json").read_text()
        assert '"slopes"' in summary
