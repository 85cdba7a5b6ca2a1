import numpy as np
import pytest

from regionaudit.classifiers import TrainConfig
from regionaudit.dataset import assemble_user_task, min_max_normalize
from regionaudit.synth import PopulationSpec, generate_population


@pytest.fixture(scope="session")
def small_population():
    spec = PopulationSpec(user_count=8, feature_count=10, samples_per_user=40)
    population = generate_population(spec, seed=11)
    normalized, params = min_max_normalize(population.dataset)
    return population, normalized, params


@pytest.fixture(scope="session")
def user_task(small_population):
    _, normalized, _ = small_population
    return assemble_user_task(normalized, "u001", seed=5)


@pytest.fixture(scope="session")
def fast_config():
    # keeps forest/MLP training cheap in unit tests
    return TrainConfig(tree_count=20, train_steps=300, perceptron_epochs=200, seed=9)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
