import numpy as np
import pytest

from ricean_mimo.channel import UserProfile
from ricean_mimo.errors import ParameterError
from ricean_mimo.interference import mean_interference
from ricean_mimo.scheduler import drop_users, pairwise_interference, rank_users_by_term2

from conftest import iid_user, one_ring_user


def _spiked_user(m, theta=0.0):
    r = np.zeros((m, m), dtype=complex)
    r[0, 0] = m / 2
    r[np.arange(1, m), np.arange(1, m)] = m / (2 * m - 2)
    return UserProfile(0.0, np.ones(m), r)


def test_identity_users_equal_scores():
    m = 20
    scores = rank_users_by_term2([iid_user(m, 0.0, t) for t in (0.1, 0.2, 0.3)])
    np.testing.assert_allclose(scores, 2 * m)


def test_two_users_equal_scores():
    s = rank_users_by_term2([one_ring_user(16, 0.0, 10, 0.2), one_ring_user(16, 0.0, 40, 1.2)])
    assert s[0] == s[1]


def test_spiked_pair_dominates():
    m = 16
    users = [iid_user(m, 0.0, 0.1), _spiked_user(m), iid_user(m, 0.0, 0.5), _spiked_user(m)]
    scores = rank_users_by_term2(users)
    # direct evaluation: spiked users share M/2 + ... while identity pairs give M
    direct = [sum(mean_interference(users[k], users[j]).term2 for j in range(4) if j != k) for k in range(4)]
    np.testing.assert_allclose(scores, direct)
    assert set(np.argsort(scores)[-2:]) == {1, 3}
    assert drop_users(users, 2).dropped_indices[0] == 1


def test_rank_needs_two_users():
    with pytest.raises(ParameterError):
        rank_users_by_term2([iid_user(4)])


def test_drop_none():
    users = [iid_user(8, 0.0, t) for t in (0.1, 0.2, 0.3)]
    d = drop_users(users, 0)
    assert d.dropped_indices == () and d.retained_indices == (0, 1, 2)


def test_drop_tie_break_lowest_index():
    u = one_ring_user(16, 0.0, 5, 0.7)
    assert drop_users([u, u], 1).dropped_indices == (0,)


def test_drop_bounds():
    users = [iid_user(8), iid_user(8, 0.0, 1.0)]
    with pytest.raises(ParameterError):
        drop_users(users, 2)
    with pytest.raises(ParameterError):
        drop_users(users, -1)


def _random_users(seed, l=8, m=32):
    rng = np.random.default_rng(seed)
    return [one_ring_user(m, 0.0, 10, rng.uniform(0, 2 * np.pi)) for _ in range(l)]


@pytest.mark.parametrize("seed", range(5))
def test_drop_partition_and_determinism(seed):
    users = _random_users(seed)
    a = drop_users(users, 3)
    b = drop_users(users, 3)
    assert a.dropped_indices == b.dropped_indices
    assert sorted(a.dropped_indices + a.retained_indices) == list(range(8))
    assert len(a.dropped_indices) == 3


@pytest.mark.parametrize("aggregate", ["sum", "max"])
@pytest.mark.parametrize("seed", range(5))
def test_max_pair_term2_non_increasing(seed, aggregate):
    users = _random_users(seed)
    p = pairwise_interference(users)
    worst = []
    for n in range(0, 6):
        keep = list(drop_users(users, n, aggregate=aggregate).retained_indices)
        worst.append(p[np.ix_(keep, keep)].max())
    assert np.all(np.diff(worst) <= 1e-12)


def test_scores_permutation_equivariant():
    users = _random_users(11, l=6)
    perm = [3, 0, 5, 1, 4, 2]
    s = rank_users_by_term2(users)
    sp = rank_users_by_term2([users[i] for i in perm])
    np.testing.assert_allclose(sp, s[perm], rtol=1e-12)


def test_total_metric_option():
    rng = np.random.default_rng(3)
    users = [one_ring_user(16, rng.uniform(0, 2), 20, rng.uniform(0, 6)) for _ in range(4)]
    p = pairwise_interference(users, "total")
    assert p[0, 1] == pytest.approx(mean_interference(users[0], users[1]).total)
    with pytest.raises(ParameterError):
        rank_users_by_term2(users, metric="bogus")
