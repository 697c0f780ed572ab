import pytest

from directed_share.errors import ValidationError
from directed_share.io import (
    frame_rows,
    parse_rows,
    read_frame,
    read_likes,
    read_ratings,
    read_shares,
    read_study,
    write_study,
    write_text,
)

TEN = [f"m{i}" for i in range(10)]


def _write_study_dir(d, *, shares="sender_id,recipient_id,item_id,shared\na,b,m1,1\n"):
    d.mkdir(parents=True, exist_ok=True)
    (d / "likes.csv").write_text("user_id,item_id\na,m1\na,m2\nb,m2\nc,m3\n")
    (d / "ratings.csv").write_text("user_id,item_id,rating\na,m1,4.5\nb,m1,3.0\n")
    (d / "shares.csv").write_text(shares)
    (d / "items.csv").write_text("item_id,ext_rating,ext_popularity\nm1,7.5,1200\n")
    rows = "".join(f"a,b,{m},own_a\n" for m in TEN)
    (d / "sessions.csv").write_text("user_a,user_b,item_id,provenance\n" + rows)
    (d / "friends.csv").write_text("user_id,friend_id\na,b\na,c\n")
    return d


def test_read_study_materializes_non_shares(tmp_path):
    study = read_study(_write_study_dir(tmp_path / "data"))
    assert study.participants == ["a", "b"]
    assert len(study.shares) == 20
    assert [(r.sender, r.item) for r in study.positives] == [("a", "m1")]
    assert study.ratings.get("a", "m1") == 4.5
    assert study.items["m1"].ext_popularity == 1200.0
    assert study.friends["a"] == frozenset({"b", "c"})


def test_write_study_then_read_is_identical(tmp_path):
    study = read_study(_write_study_dir(tmp_path / "data"))
    write_study(study, tmp_path / "copy")
    again = read_study(tmp_path / "copy")
    assert again.likes == study.likes
    assert again.ratings == study.ratings
    assert again.shares == study.shares
    assert again.sessions == study.sessions


def test_missing_column_names_the_file(tmp_path):
    p = tmp_path / "likes.csv"
    p.write_text("user,item_id\nu,a\n")
    with pytest.raises(ValidationError, match="likes.csv: missing column"):
        read_likes(p)


def test_bad_rating_names_the_row(tmp_path):
    p = tmp_path / "ratings.csv"
    p.write_text("user_id,item_id,rating\nu,a,4\nu,b,4.2\n")
    with pytest.raises(ValidationError, match="row 2"):
        read_ratings(p)


def test_shared_flag_must_be_binary(tmp_path):
    p = tmp_path / "shares.csv"
    p.write_text("sender_id,recipient_id,item_id,shared\na,b,m1,yes\n")
    with pytest.raises(ValidationError, match="row 1"):
        read_shares(p)


def test_share_of_unshown_item_rejected(tmp_path):
    d = _write_study_dir(
        tmp_path / "data", shares="sender_id,recipient_id,item_id,shared\na,b,zz,1\n"
    )
    with pytest.raises(ValidationError, match="not shown"):
        read_study(d)


def test_missing_file_and_directory(tmp_path):
    with pytest.raises(ValidationError, match="not found"):
        read_likes(tmp_path / "nope.csv")
    with pytest.raises(ValidationError, match="not found"):
        read_study(tmp_path / "nope")


def test_write_text_replaces_atomically(tmp_path):
    p = write_text(tmp_path / "sub" / "out.txt", "one\n")
    write_text(p, "two\n")
    assert p.read_text() == "two\n"
    assert [f.name for f in p.parent.iterdir()] == ["out.txt"]


def test_parse_rows_names_file_and_row(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text("user_id,score\na,1.5\nb,high\n")
    rows = frame_rows(read_frame(path, ["score", "user_id"]), ["user_id", "score"])
    assert rows == [("a", "1.5"), ("b", "high")]
    assert parse_rows(path, rows[:1], lambda r: float(r[1])) == [1.5]
    with pytest.raises(ValidationError, match=r"scores\.csv: row 2"):
        parse_rows(path, rows, lambda r: float(r[1]))
