import io
import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptframe.errors import (
    ConvergenceError,
    DimensionError,
    EmptyFuzzySetError,
    ParameterError,
)
from ptframe.prob import Distribution, Universe
from ptframe.ratedist import (
    DistortionMatrix,
    crisp_dcf_info,
    dcf_minimum_info,
    r_theta_from_rd,
    rd_curve,
    rd_point,
)
from ptframe.semantic import Crisp, SemanticChannel, Tabulated, tautology

from .conftest import named_universe

HAMMING_S = (-0.5, -1.0, -2.0, -4.0)


def h2(p):
    return 0.0 if p in (0.0, 1.0) else -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def binary_uniform():
    return Distribution(named_universe(2), [0.5, 0.5]), DistortionMatrix.hamming(2)


def random_instance(seed=7):
    rng = np.random.default_rng(seed)
    d = rng.uniform(0.5, 3.0, size=(3, 3))
    np.fill_diagonal(d, 0.0)
    prior = Distribution(named_universe(3), rng.dirichlet(np.ones(3) * 3), renormalize=True)
    return prior, DistortionMatrix(d)


def _mutual_info(p, channels):
    # channels: (..., n_y, n_x) column-stochastic
    q = channels @ p
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(channels > 0, channels / q[..., :, None], 1.0)
        terms = np.where(channels > 0, channels * np.log2(ratio), 0.0)
    return (terms * p).sum(axis=(-2, -1))


def brute_force_rd(p, d, D, h0=0.25, h_min=1e-7):
    """Minimum I(X;Y) over channels with E[d] = D by a zooming local mesh.

    The free coordinates are P(y1|x_i), P(y2|x_i) for each of the three
    columns. E[d] is linear in them, so the mesh moves only inside the
    constraint plane (a 5-D null space); candidates leaving the simplex are
    dropped. The minimum of I over E[d] <= D lies on that plane.
    """
    m, n = d.shape
    # E[d] = const + g . z
    g = np.concatenate([[p[i] * (d[i, 0] - d[i, 2]), p[i] * (d[i, 1] - d[i, 2])] for i in range(m)])
    const = float(p @ d[:, 2])
    basis = np.linalg.svd(g[None, :])[2][1:]  # rows span the null space of g

    def channel(z):
        z = z.reshape(-1, m, 2)
        third = 1.0 - z.sum(axis=2)
        return np.transpose(np.concatenate([z, third[:, :, None]], axis=2), (0, 2, 1)), third

    def free(q):
        return q[:2, :].T.reshape(-1)

    lo = np.zeros((n, m))
    lo[np.argmin(d, axis=1), np.arange(m)] = 1.0
    hi = np.zeros((n, m))
    hi[np.argmax(d, axis=1), np.arange(m)] = 1.0
    z_lo, z_hi = free(lo), free(hi)
    t = (D - const - g @ z_lo) / (g @ (z_hi - z_lo))
    z = z_lo + t * (z_hi - z_lo)
    best_val = _mutual_info(p, channel(z)[0][0])
    offsets = np.array(list(itertools.product([-2, -1, 0, 1, 2], repeat=5)), dtype=float) @ basis
    h = h0
    while h > h_min:
        cand = z[None, :] + h * offsets
        chans, third = channel(cand)
        ok = np.all(cand >= 0, axis=1) & np.all(third >= -1e-15, axis=1)
        vals = np.where(ok, _mutual_info(p, chans.clip(0.0)), np.inf)
        k = int(np.argmin(vals))
        if vals[k] < best_val - 1e-15:
            z, best_val = cand[k], vals[k]
        else:
            h /= 2
    return best_val


class TestRdPoint:
    def test_zero_slope(self):
        prior, d = random_instance()
        pt = rd_point(prior, d, 0.0)
        assert pt.R == 0.0
        np.testing.assert_allclose(pt.channel.rows, pt.reproduction_prior.mass[:, None] * np.ones((1, 3)), atol=1e-15)
        assert r_theta_from_rd(pt, prior, d) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("s", HAMMING_S)
    def test_binary_hamming_closed_form(self, s):
        prior, d = binary_uniform()
        pt = rd_point(prior, d, s)
        assert pt.R == pytest.approx(1 - h2(pt.D), abs=1e-6)
        # closed form of the distortion at slope s
        assert pt.D == pytest.approx(math.exp(s) / (1 + math.exp(s)), abs=1e-12)
        assert r_theta_from_rd(pt, prior, d) == pytest.approx(pt.R, abs=1e-9)

    def test_random_instance_matches_brute_force(self):
        prior, d = random_instance()
        for s in (-1.0, -2.0):
            pt = rd_point(prior, d, s)
            assert pt.R > 0.05
            oracle = brute_force_rd(prior.mass, d.values, pt.D)
            assert pt.R == pytest.approx(oracle, abs=1e-3)
            assert r_theta_from_rd(pt, prior, d) == pytest.approx(pt.R, abs=1e-9)

    def test_channel_has_parametric_form(self):
        prior, d = random_instance(3)
        pt = rd_point(prior, d, -1.5)
        q = pt.reproduction_prior.mass
        a = np.exp(-1.5 * d.values)
        lam = a @ q
        np.testing.assert_allclose(pt.channel.rows, (q[:, None] * a.T) / lam[None, :], atol=1e-15)

    @given(st.integers(0, 2**31), st.floats(-6.0, 0.0))
    def test_identity_and_nonnegativity(self, seed, s):
        rng = np.random.default_rng(seed)
        m, n = rng.integers(2, 5, size=2)
        prior = Distribution(named_universe(int(m)), rng.dirichlet(np.ones(m)), renormalize=True)
        d = DistortionMatrix(rng.uniform(0, 2, size=(m, n)))
        pt = rd_point(prior, d, s)
        assert pt.R >= 0
        assert r_theta_from_rd(pt, prior, d) == pytest.approx(pt.R, abs=1e-9)

    def test_positive_slope_rejected(self):
        prior, d = binary_uniform()
        with pytest.raises(ParameterError):
            rd_point(prior, d, 0.5)

    def test_convergence_error_carries_residual(self):
        prior, d = random_instance()
        with pytest.raises(ConvergenceError) as info:
            rd_point(prior, d, -3.0, max_sweeps=2)
        assert info.value.iterations == 2 and info.value.residual > 0

    def test_useless_reproduction_is_pruned(self):
        prior = Distribution(named_universe(2), [0.5, 0.5])
        d = DistortionMatrix([[0.0, 1.0, 50.0], [1.0, 0.0, 50.0]], ("a", "b", "far"))
        pt = rd_point(prior, d, -1.0)
        assert pt.pruned == ("far",)
        assert pt.reproduction_prior.mass[2] == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            rd_point(Distribution.uniform(named_universe(3)), DistortionMatrix.hamming(2), -1.0)


class TestCurve:
    def test_single_zero(self):
        prior, d = random_instance()
        (pt,) = rd_curve(prior, d, [0.0])
        assert pt.R == 0.0
        assert pt.D == pytest.approx(float(prior.mass @ d.values @ pt.reproduction_prior.mass), abs=1e-12)

    def test_monotone_and_convex(self):
        prior, d = random_instance()
        pts = rd_curve(prior, d, -np.linspace(0, 6, 25))
        D = [p.D for p in pts]
        R = [p.R for p in pts]
        assert all(b <= a + 1e-12 for a, b in itertools.pairwise(D))
        assert all(b >= a - 1e-12 for a, b in itertools.pairwise(R))
        for (d0, r0), (d1, r1), (d2, r2) in zip(zip(D, R), zip(D[1:], R[1:]), zip(D[2:], R[2:])):
            if d0 - d2 < 1e-9:
                continue
            chord = r0 + (r2 - r0) * (d1 - d0) / (d2 - d0)
            assert r1 <= chord + 1e-6

    def test_binary_sweep(self):
        prior, d = binary_uniform()
        for pt in rd_curve(prior, d, [0.0, -0.25, -1.0, -3.0, -8.0]):
            assert pt.R == pytest.approx(1 - h2(pt.D), abs=1e-6)

    def test_grid_validation(self):
        prior, d = binary_uniform()
        with pytest.raises(ParameterError):
            rd_curve(prior, d, [])
        with pytest.raises(ParameterError):
            rd_curve(prior, d, [-1.0, 0.0])


class TestDistortionMatrix:
    def test_hamming(self):
        assert DistortionMatrix.hamming(3).values.tolist() == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]

    def test_validation(self):
        with pytest.raises(ParameterError):
            DistortionMatrix([[0.0, -1.0]])
        with pytest.raises(DimensionError):
            DistortionMatrix([[0.0, 1.0]], ("only",))

    def test_csv_and_json(self):
        d = DistortionMatrix.read_csv(io.StringIO("a,b\n0,1\n2,0\n"))
        assert d.labels == ("a", "b") and d.values.tolist() == [[0, 1], [2, 0]]
        back = DistortionMatrix.from_json(d.to_json())
        assert back.labels == d.labels and np.array_equal(back.values, d.values)
        with pytest.raises(DimensionError):
            DistortionMatrix.read_csv(io.StringIO("a,b\n0,x\n"))


def _kl_bits(a, b):
    used = a > 0
    return float(np.sum(a[used] * np.log2(a[used] / b[used])))


class TestDcf:
    def test_crisp_fraction(self):
        u = named_universe(4)
        prior = Distribution(u, [0.1, 0.2, 0.3, 0.4])
        t = Crisp(u, ["x2", "x4"])
        res = dcf_minimum_info(SemanticChannel(("y",), (t,)), prior, Distribution.over(["y"], [1.0]))
        assert res.per_label[0] == pytest.approx(-math.log2(0.6), abs=1e-12)
        assert crisp_dcf_info(t, prior) == pytest.approx(-math.log2(0.6), abs=1e-15)

    def test_weighted_crisp_sum(self):
        u = named_universe(4)
        prior = Distribution.uniform(u)
        dcfs = SemanticChannel(("a", "b"), (Crisp(u, ["x1"]), Crisp(u, ["x2", "x3", "x4"])))
        res = dcf_minimum_info(dcfs, prior, Distribution.over(["a", "b"], [0.25, 0.75]))
        assert res.info == pytest.approx(-(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75)), abs=1e-12)

    def test_tautology(self):
        u = named_universe(3)
        prior = Distribution(u, [0.2, 0.3, 0.5])
        res = dcf_minimum_info(SemanticChannel(("y",), (tautology(u),)), prior, Distribution.over(["y"], [1.0]))
        assert res.info == 0.0

    def test_empty(self):
        u = named_universe(2)
        with pytest.raises(EmptyFuzzySetError):
            dcf_minimum_info(SemanticChannel(("y",), (Crisp(u, ["x2"]),)), Distribution(u, [1, 0]), Distribution.over(["y"], [1.0]))

    def test_label_prior_length(self):
        u = named_universe(2)
        with pytest.raises(DimensionError):
            dcf_minimum_info(SemanticChannel(("y",), (tautology(u),)), Distribution.uniform(u), Distribution.uniform(u))

    def test_minimality_on_simplex_mesh(self):
        # feasibility: expected fuzzy cost -ln T no larger than at the minimizer
        u = named_universe(4)
        prior = Distribution(u, [0.1, 0.2, 0.3, 0.4])
        t = Tabulated(u, [1.0, 0.6, 0.3, 0.1])
        res = dcf_minimum_info(SemanticChannel(("y",), (t,)), prior, Distribution.over(["y"], [1.0]))
        best = res.posteriors[0].mass
        cost = -np.log(t.values)
        budget = float(best @ cost)
        steps = 40
        checked = 0
        for i, j, k in itertools.product(range(steps + 1), repeat=3):
            if i + j + k > steps:
                continue
            cand = np.array([i, j, k, steps - i - j - k]) / steps
            if cand @ cost > budget + 1e-12:
                continue
            checked += 1
            assert _kl_bits(cand, prior.mass) >= res.per_label[0] - 1e-12
        assert checked > 100


def test_universe_alignment_checked():
    prior, d = binary_uniform()
    pt = rd_point(prior, d, -1.0)
    with pytest.raises(DimensionError):
        r_theta_from_rd(pt, Distribution.uniform(Universe.named(["p", "q"])), d)
