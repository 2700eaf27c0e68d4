import numpy as np
import pytest

from cascadescope.rng import as_seed_sequence, child_seed, derive_rng, seed_record


def test_same_path_same_stream():
    a = derive_rng(5, 1, 2).random(4)
    b = derive_rng(5, 1, 2).random(4)
    assert a.tolist() == b.tolist()


def test_different_paths_differ():
    a = derive_rng(5, 1, 2).random(4)
    b = derive_rng(5, 1, 3).random(4)
    c = derive_rng(5, 2).random(4)
    assert a.tolist() != b.tolist()
    assert a.tolist() != c.tolist()


def test_child_seed_concatenates():
    ss = child_seed(child_seed(7, 3), 4)
    direct = child_seed(7, 3, 4)
    assert tuple(ss.spawn_key) == tuple(direct.spawn_key)
    assert derive_rng(ss).random() == derive_rng(direct).random()


def test_seed_record_round_trip():
    ss = child_seed(42, 1, 9)
    rec = seed_record(ss)
    back = as_seed_sequence(rec)
    assert derive_rng(back).random() == derive_rng(child_seed(42, 1, 9)).random()


def test_as_seed_sequence_accepts_sequence():
    ss = as_seed_sequence(np.random.SeedSequence(11))
    assert derive_rng(ss).random() == derive_rng(11).random()


def test_rejects_junk():
    with pytest.raises(TypeError):
        as_seed_sequence(object())
