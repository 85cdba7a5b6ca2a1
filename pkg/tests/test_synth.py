import numpy as np
import pytest

from regionaudit.errors import InvalidInputError
from regionaudit.synth import (
    CONTROL_SD,
    DEFAULT_SD_GRID,
    DEFAULT_USER_GRID,
    FixedVariance,
    HierarchicalVariance,
    PopulationSpec,
    SampledVariance,
    generate_population,
    make_halfspace_dataset,
    make_isolated_variance_config,
    make_population_variance_config,
    make_user_count_configs,
)


def test_spec_validation():
    with pytest.raises(InvalidInputError):
        PopulationSpec(user_count=1)
    with pytest.raises(InvalidInputError):
        PopulationSpec(samples_per_user=1)
    with pytest.raises(InvalidInputError):
        PopulationSpec(isolated_user=0)  # missing isolated_sd
    with pytest.raises(InvalidInputError):
        PopulationSpec(isolated_user=99, isolated_sd=0.1, user_count=10)


def test_generation_shape_and_labels():
    spec = PopulationSpec(user_count=5, feature_count=7, samples_per_user=20)
    pop = generate_population(spec, seed=3)
    assert pop.dataset.features.shape == (100, 7)
    assert (pop.dataset.labels == 1).all()
    assert pop.dataset.distinct_users() == [f"u{i:03d}" for i in range(5)]
    assert len(pop.profiles) == 5


def test_generation_is_deterministic():
    spec = PopulationSpec(user_count=4, feature_count=6, samples_per_user=10)
    a = generate_population(spec, seed=9)
    b = generate_population(spec, seed=9)
    np.testing.assert_array_equal(a.dataset.features, b.dataset.features)
    c = generate_population(spec, seed=10)
    assert not np.array_equal(a.dataset.features, c.dataset.features)


def test_sample_statistics_track_profiles():
    spec = PopulationSpec(
        user_count=3, feature_count=4, samples_per_user=4000,
        variance_policy=FixedVariance(0.15),
    )
    pop = generate_population(spec, seed=21)
    for u, profile in enumerate(pop.profiles):
        rows = pop.dataset.user_rows(profile.user_id)
        block = pop.dataset.features[rows]
        np.testing.assert_allclose(block.mean(axis=0), profile.means, atol=0.02)
        np.testing.assert_allclose(block.std(axis=0), 0.15, atol=0.02)
        np.testing.assert_array_equal(profile.sds, 0.15)


def test_isolated_user_overrides_policy_sd():
    spec = PopulationSpec(
        user_count=4, feature_count=5, samples_per_user=10,
        variance_policy=FixedVariance(0.2), isolated_user=2, isolated_sd=0.8,
    )
    pop = generate_population(spec, seed=5)
    np.testing.assert_array_equal(pop.profiles[2].sds, 0.8)
    for u in (0, 1, 3):
        np.testing.assert_array_equal(pop.profiles[u].sds, 0.2)


def test_variance_knob_moves_only_scale_not_draws():
    """Specs differing only in a policy constant reuse identical noise,
    so non-isolated users' samples are unchanged across grid points."""
    points = make_isolated_variance_config(
        user_sd_grid=(0.1, 0.3), user_count=4, feature_count=5, samples_per_user=8
    )
    pops = [generate_population(p.spec, seed=17) for p in points]
    for user in ("u001", "u002", "u003"):
        rows = pops[0].dataset.user_rows(user)
        np.testing.assert_array_equal(
            pops[0].dataset.features[rows], pops[1].dataset.features[rows]
        )
    iso = pops[0].dataset.user_rows("u000")
    assert not np.array_equal(pops[0].dataset.features[iso], pops[1].dataset.features[iso])


def test_isolated_scale_shifts_samples_monotonically():
    # same Z block: larger SD = same deviations, proportionally stretched
    points = make_isolated_variance_config(
        user_sd_grid=(0.1, 0.2), user_count=3, feature_count=4, samples_per_user=6
    )
    a = generate_population(points[0].spec, seed=2)
    b = generate_population(points[1].spec, seed=2)
    rows = a.dataset.user_rows("u000")
    mean = a.profiles[0].means
    dev_a = a.dataset.features[rows] - mean
    dev_b = b.dataset.features[rows] - mean
    np.testing.assert_allclose(dev_b, 2.0 * dev_a, rtol=1e-10)


def test_sampled_variance_clamps_at_zero():
    policy = SampledVariance(mean=0.0, sd=1.0)
    rng = np.random.default_rng(0)
    sds = policy.user_sds(rng, 1000, policy.feature_params(rng, 1000))
    assert (sds >= 0.0).all()
    assert (sds == 0.0).any()


def test_hierarchical_variance_levels():
    policy = HierarchicalVariance(center=0.2, center_sd=0.0, spread_mean=0.0, spread_sd=0.0)
    rng = np.random.default_rng(0)
    params = policy.feature_params(rng, 50)
    sds = policy.user_sds(rng, 50, params)
    np.testing.assert_allclose(sds, 0.2)


def test_isolated_variance_sweep_layout():
    points = make_isolated_variance_config()
    assert len(points) == len(DEFAULT_SD_GRID)
    for g, point in zip(DEFAULT_SD_GRID, points):
        assert point.axis == "relative_sd"
        assert point.value == pytest.approx(g / CONTROL_SD)
        assert point.spec.isolated_user == 0
        assert point.spec.isolated_sd == pytest.approx(g)
        assert point.spec.variance_policy == FixedVariance(CONTROL_SD)


def test_population_variance_sweep_layout():
    points = make_population_variance_config(mean_sd_grid=(0.1, 0.2))
    for point in points:
        assert point.spec.isolated_sd == pytest.approx(CONTROL_SD)
        assert point.spec.variance_policy.kind == "hierarchical"
    assert points[0].spec.variance_policy.center == pytest.approx(0.1)


def test_user_count_sweep_layout():
    points = make_user_count_configs()
    assert [p.spec.user_count for p in points] == list(DEFAULT_USER_GRID)
    assert all(p.axis == "user_count" for p in points)
    assert points[0].spec.mean_of_means == pytest.approx(0.2)


def test_empty_grid_rejected():
    with pytest.raises(InvalidInputError):
        make_isolated_variance_config(user_sd_grid=())


def test_halfspace_dataset_is_separable():
    data = make_halfspace_dataset(feature_count=6, samples_per_class=50, seed=1)
    assert (data.features[data.labels == 1][:, 0] > 0.5).all()
    assert (data.features[data.labels == -1][:, 0] < 0.5).all()
    assert data.features.min() >= 0.0 and data.features.max() <= 1.0
