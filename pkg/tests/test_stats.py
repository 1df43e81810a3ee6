import math

import numpy as np
import pytest
import scipy.special

from betadec import stats
from betadec.sampler import ChainConfig, sample_ce, sample_gaussian_tridiag
from betadec.density import CircularSpec
from betadec.stats import (
    Histogram,
    ScalingMap,
    gap_prob_closed_form,
    kolmogorov_sf,
    ks_two_sample,
    order_stat_pdf_estimate,
    scaling_map_apply,
    spacing_pdf_estimate,
)

FAST = ChainConfig(burn_in_sweeps=600, chains=4000)


def test_ks_examples():
    res = ks_two_sample([1, 2, 3], [1.5, 2.5, 3.5])
    assert res.D == pytest.approx(1 / 3, rel=1e-12)
    res = ks_two_sample([1, 2, 3], [1, 2, 3])
    assert res.D == 0.0 and res.p_value == 1.0
    res = ks_two_sample([0, 1], [5, 6])
    assert res.D == 1.0
    with pytest.raises(ValueError):
        ks_two_sample([], [1.0])


def test_ks_symmetry():
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=300), rng.normal(0.2, size=400)
    a = ks_two_sample(x, y)
    b = ks_two_sample(y, x)
    assert a.D == b.D and a.p_value == b.p_value


def test_kolmogorov_sf_matches_scipy():
    for lam in (0.05, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0):
        assert kolmogorov_sf(lam) == pytest.approx(
            float(scipy.special.kolmogorov(lam)), abs=1e-12
        )


def test_relation_specs_sizes():
    lhs, rhs = stats.relation_specs("jacobi", 2, 3)
    assert lhs.N == 11 and rhs.N == 3 and lhs.beta == pytest.approx(2 / 3)
    assert rhs.beta == pytest.approx(6.0)
    lhs, rhs = stats.relation_specs("circular-0", 1, 4)
    assert lhs.N == 8 and rhs.N == 4
    with pytest.raises(ValueError):
        stats.relation_specs("weird", 1, 2)


def test_relation_weight_transforms():
    lhs, rhs = stats.relation_specs("jacobi", 2, 2, a=0.5, b=1.0)
    assert rhs.weight.a == pytest.approx(3 * 0.5 + 4)
    assert rhs.weight.b == pytest.approx(3 * 1.0 + 4)
    lhs, rhs = stats.relation_specs("laguerre", 2, 2)
    assert rhs.weight.c == pytest.approx(3.0)
    lhs, rhs = stats.relation_specs("circular-b", 1, 2, b=1.0)
    assert rhs.b == pytest.approx(4.0)


def test_decimation_positive_small():
    rep = stats.verify_decimation_relation("laguerre", 1, 2, 4000, 101, config=FAST)
    assert rep.passed and len(rep.positions) == 2
    # corollary: the ((r+1)k+r+1)-st LHS order statistic matches the (k+1)-st
    # RHS one; these are exactly the per-position tests at k = 0, 1
    for k in (0, 1):
        assert rep.positions[k].p_value > rep.threshold


def test_decimation_negative_controls_small():
    rep = stats.verify_decimation_relation("gaussian", 1, 2, 4000, 102, config=FAST,
                                           negative_control="stride")
    assert not rep.passed
    rep = stats.verify_decimation_relation("gaussian", 1, 2, 4000, 103, config=FAST,
                                           negative_control="beta")
    assert not rep.passed


def test_decimation_circular_anchored_small():
    rep = stats.verify_decimation_relation("circular-0", 1, 3, 4000, 104, config=FAST)
    assert rep.passed and len(rep.positions) == 2
    rot = stats.verify_decimation_relation("circular-0", 1, 3, 4000, 104, config=FAST,
                                           rotate_lhs=2.2)
    assert rot.passed == rep.passed


def test_composition_small():
    rep = stats.verify_composition("jacobi", 1, 2, 4000, 105, config=FAST)
    assert rep.passed
    assert len(rep.positions) == 2 * 2 + 1  # (r+1)N + r points for relation 1
    rep = stats.verify_composition("laguerre", 1, 2, 4000, 106, config=FAST)
    assert rep.passed
    assert len(rep.positions) == 4


def test_superposition_small():
    rep = stats.verify_superposition("jacobi_8_1", 2, 4000, 107, config=FAST)
    assert rep.passed
    with pytest.raises(ValueError):
        stats.verify_superposition("nope", 2, 100, 0, config=ChainConfig(chains=100))


def test_superposition_size_counting():
    # even positions of 2N+1 superimposed points leave N values
    rep = stats.verify_superposition("gaussian", 3, 400,
                                     108, config=ChainConfig(burn_in_sweeps=150, chains=400),
                                     threshold=0.0)
    assert rep.samples["lhs"].shape[1] == 3


def test_spacing_small():
    rep = stats.verify_spacing_relation(1, 4, 0, 4000, 109, config=FAST)
    assert rep.passed
    with pytest.raises(ValueError):
        stats.verify_spacing_relation(1, 2, 1, 100, 0, config=ChainConfig(chains=100))


def test_order_stat_estimate():
    batch = sample_gaussian_tridiag(2.0, 3, 4000, 110)
    hist_max = order_stat_pdf_estimate(batch, 0, "max", bins=30)
    assert isinstance(hist_max, Histogram) and hist_max.count == 4000
    # repulsion pushes the top eigenvalue right of the origin
    assert batch.values[:, 0].mean() > 0
    # symmetric ensemble: max and min histograms mirror within noise
    hist_min = order_stat_pdf_estimate(batch, 0, "min", bins=30)
    assert abs(batch.values[:, 0].mean() + batch.values[:, -1].mean()) < 0.1
    with pytest.raises(ValueError):
        order_stat_pdf_estimate(batch, 3, "max")
    with pytest.raises(ValueError):
        order_stat_pdf_estimate(batch, 0, "median")


def test_order_stat_respects_row_orientation():
    # circular batches ascend: "min" is the first column, "max" the last
    cbatch = sample_ce(CircularSpec(2.0, 3, 0.0),
                       ChainConfig(burn_in_sweeps=150, chains=300), 114)
    lo = order_stat_pdf_estimate(cbatch, 0, "min", bins=10)
    hi = order_stat_pdf_estimate(cbatch, 0, "max", bins=10)
    assert lo.edges[0] < hi.edges[0]
    assert cbatch.values[:, 0].mean() < cbatch.values[:, -1].mean()


def test_spacing_estimate():
    batch = sample_ce(CircularSpec(2.0, 2, 0.0), FAST, 111)
    hist = spacing_pdf_estimate(batch, 0, bins=20)
    spac = np.roll(batch.values, -1, axis=1) - batch.values
    spac[spac <= 0] += 2 * math.pi
    assert spac.mean() == pytest.approx(math.pi, rel=1e-12)  # two gaps sum to 2 pi
    assert hist.count == 2 * batch.chains
    with pytest.raises(ValueError):
        spacing_pdf_estimate(batch, 1)


def test_spacing_vanishes_at_zero():
    batch = sample_ce(CircularSpec(2.0, 4, 0.0), FAST, 112)
    hist = spacing_pdf_estimate(batch, 0, bins=np.linspace(0, 2 * math.pi, 60))
    assert hist.density[0] < 0.2 * hist.density.max()


def test_gap_prob_closed_form():
    assert gap_prob_closed_form(0.0, 0.0, []) == 1.0
    assert gap_prob_closed_form(1.5, 0.5, []) == 1.0
    assert gap_prob_closed_form(0.0, 0.0, [0.5]) == pytest.approx(0.75, rel=1e-12)
    assert gap_prob_closed_form(0.0, 0.0, [0.5, 0.5]) == 0.0
    with pytest.raises(ValueError):
        gap_prob_closed_form(0.0, 0.0, [1.5])
    with pytest.raises(ValueError):
        gap_prob_closed_form(0.0, 0.0, [0.1, 0.9])


def test_gap_prob_brute_force_two_intervals():
    # exactly-one-per-interval event is the product box (t1,1) x (t2,t1) x (0,t2);
    # the beta = 1 Jacobi density at a = b = 0 is (x1-x2)(x1-x3)(x2-x3)/Z on the
    # ordered region with Z = S_3(0,0,1/2)/3!; the cubic integrand is exact
    # under 5-point Gauss-Legendre per axis
    t1, t2 = 0.7, 0.2
    z = math.exp(stats.specfun.selberg_log(stats.specfun.SelbergArgs(3, 0, 0, 0.5))) / 6
    nodes, weights = np.polynomial.legendre.leggauss(5)

    def box(lo, hi):
        return lo + (hi - lo) * (nodes + 1) / 2, weights * (hi - lo) / 2

    x1, w1 = box(t1, 1.0)
    x2, w2 = box(t2, t1)
    x3, w3 = box(0.0, t2)
    X1, X2, X3 = np.meshgrid(x1, x2, x3, indexing="ij")
    W = w1[:, None, None] * w2[None, :, None] * w3[None, None, :]
    brute = float(np.sum(W * (X1 - X2) * (X1 - X3) * (X2 - X3))) / z
    assert gap_prob_closed_form(0.0, 0.0, [t1, t2]) == pytest.approx(brute, rel=1e-12)


def test_verify_gap_small():
    rep = stats.verify_gap_formula(0.0, 0.0, [0.5], 20000, 113,
                                   config=ChainConfig(burn_in_sweeps=600, chains=20000))
    assert rep.passed
    assert rep.extra["closed"] == pytest.approx(0.75, rel=1e-12)


def test_scaling_map():
    smap = ScalingMap("soft", beta=2.0, N=10, c=1.0, scale_const=1.0)
    assert scaling_map_apply(smap, 0.0) == pytest.approx(40.0)
    smap = ScalingMap("hard", beta=2.0, N=10, c=1.0, scale_const=1.0)
    assert scaling_map_apply(smap, 0.0) == 0.0
    with pytest.raises(ValueError):
        ScalingMap("edge", 2.0, 10)


def test_scaling_map_soft_linear_coefficient_ratio():
    # with s_{2/(r+1)} = (r+1)^{2/3} s_{2(r+1)} and the decimation-linked sizes
    # (r+1)N vs N, the beta = 2(r+1) soft map is exactly (r+1) times the
    # beta = 2/(r+1) one: the dilation that carries e^{-x} to e^{-(r+1)x}
    for r in (1, 2, 3):
        N = 7
        s_hi = 1.3
        s_lo = (r + 1) ** (2 / 3) * s_hi
        lo = ScalingMap("soft", beta=2 / (r + 1), N=(r + 1) * N, c=1.0, scale_const=s_lo)
        hi = ScalingMap("soft", beta=2 * (r + 1), N=N, c=1.0, scale_const=s_hi)
        coeff_lo = scaling_map_apply(lo, 1.0) - scaling_map_apply(lo, 0.0)
        coeff_hi = scaling_map_apply(hi, 1.0) - scaling_map_apply(hi, 0.0)
        assert coeff_hi / coeff_lo == pytest.approx(r + 1.0, rel=1e-12)
        assert scaling_map_apply(hi, 0.0) / scaling_map_apply(lo, 0.0) == pytest.approx(
            r + 1.0, rel=1e-12
        )


def test_bulk_circle_map():
    smap = ScalingMap("bulk_circle", beta=2.0, N=8)
    assert scaling_map_apply(smap, 2.0) == pytest.approx(math.pi / 2)
