import pytest

from directed_share.errors import ValidationError
from directed_share.model import LikesMatrix
from directed_share.similarity import (
    ItemSimilarityCache,
    jaccard,
    jaccard_items,
    jaccard_users,
    user_item_preference,
)

LIKES = LikesMatrix(
    {
        "u": ["a", "b"],
        "v": ["b", "c"],
        "w": ["a", "b", "c"],
    }
)


def test_jaccard_basics():
    assert jaccard({"a"}, {"a"}) == 1.0
    assert jaccard({"a"}, {"b"}) == 0.0
    assert jaccard(set(), set()) == 0.0
    assert jaccard({"a", "b"}, {"b", "c"}) == pytest.approx(1 / 3)


def test_user_and_item_jaccard():
    assert jaccard_users("u", "w", LIKES) == pytest.approx(2 / 3)
    assert jaccard_users("u", "nobody", LIKES) == 0.0
    # likers(a) = {u, w}, likers(c) = {v, w}
    assert jaccard_items("a", "c", LIKES) == pytest.approx(1 / 3)


def test_preference_counts_self_unless_excluded():
    with_self = user_item_preference("u", "a", LIKES)
    without = user_item_preference("u", "a", LIKES, exclude_self=True)
    # profile {a, b}: (1 + J(a,b)) / 2 versus J(a,b) alone
    jab = jaccard_items("a", "b", LIKES)
    assert with_self == pytest.approx((1 + jab) / 2)
    assert without == pytest.approx(jab)
    assert user_item_preference("nobody", "a", LIKES) == 0.0


def test_cache_matches_direct_computation():
    cache = ItemSimilarityCache.build(LIKES)
    for i in LIKES.items:
        for j in LIKES.items:
            expected = 1.0 if i == j else jaccard_items(i, j, LIKES)
            assert cache.get(i, j) == pytest.approx(expected)
    for u in LIKES.users:
        for i in LIKES.items:
            assert user_item_preference(u, i, LIKES, cache=cache) == pytest.approx(
                user_item_preference(u, i, LIKES)
            )


def test_cache_csv_reload(tmp_path):
    cache = ItemSimilarityCache.build(LIKES)
    path = cache.dump_csv(tmp_path / "sim.csv")
    assert ItemSimilarityCache.load_csv(path) == cache


def test_cache_rejects_out_of_range(tmp_path):
    with pytest.raises(ValidationError):
        ItemSimilarityCache({("a", "b"): 1.5})
    p = tmp_path / "sim.csv"
    p.write_text("item_i,item_j,similarity\nb,a,0.5\n")
    with pytest.raises(ValidationError, match="item_i < item_j"):
        ItemSimilarityCache.load_csv(p)
