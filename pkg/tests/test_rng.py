import numpy as np

from regionaudit.rng import derive_seed


def test_derive_seed_frozen_values():
    # pinned so any change to the derivation breaks loudly
    assert derive_seed(0) == 4066689987807800415
    assert derive_seed(0, "split") == 749576159230600040
    assert derive_seed(7, "neg", 3) == 6964945262585544926


def test_derive_seed_is_deterministic_and_sensitive():
    a = derive_seed(42, "train", 0)
    assert a == derive_seed(42, "train", 0)
    assert a != derive_seed(42, "train", 1)
    assert a != derive_seed(43, "train", 0)
    assert a != derive_seed(42, "probe", 0)


def test_derive_seed_int_and_str_parts_render_identically():
    assert derive_seed(7, "neg", 3) == derive_seed(7, "neg", "3")


def test_separator_prevents_path_collisions():
    assert derive_seed(1, "ab", "c") != derive_seed(1, "a", "bc")


def test_derived_seed_fits_numpy_generator():
    seed = derive_seed(123, "anything")
    assert 0 <= seed < 2**64
    rng = np.random.default_rng(seed)
    first = rng.random()
    again = np.random.default_rng(derive_seed(123, "anything")).random()
    assert first == again
