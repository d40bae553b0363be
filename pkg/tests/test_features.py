import random
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from hypothesis import given, strategies as st

from learnerclust import synth
from learnerclust.errors import ConfigError, DataError
from learnerclust.features import (
    CSV_HEADER, FeatureConfig, count_cap, extract, extract_all, read_feature_csv, to_matrix,
    weekday_number, with_corpus_caps, write_feature_csv,
)
from learnerclust.logparse import LogRecord, parse_stream
from learnerclust.sessions import CleaningRules, Visit, clean_hits, clean_visits, sessionize

CFG = FeatureConfig(campus_networks=("172.20.0.0/16",), hits_cap=20, downloads_cap=6)
TUE_10 = datetime(2002, 1, 8, 10, 0, tzinfo=timezone(timedelta(hours=-4)))
SUN_23 = datetime(2002, 1, 13, 23, 0, tzinfo=timezone(timedelta(hours=-4)))


def visit(host, start, hits, downloads):
    recs = tuple(LogRecord(host, None, start + timedelta(seconds=i), "GET", "/p", "HTTP/1.1", 200, 1)
                 for i in range(hits))
    return Visit(host, recs, downloads)


def test_saturated_campus_lab_day_visit():
    fv = extract(visit("172.20.3.4", TUE_10, 20, 6), CFG)
    assert fv.as_tuple() == (1.0, 1.0, 1.0, 10.0, 15.0)


def test_quiet_off_campus_night_visit():
    fv = extract(visit("24.1.2.3", SUN_23, 1, 0), CFG)
    assert fv.as_tuple()[:3] == (0.0, 0.0, 0.0) and fv.hits > 0 and fv.downloads == 0


def test_linear_scaling():
    assert extract(visit("24.1.2.3", TUE_10, 10, 3), CFG).hits == 5.0
    assert extract(visit("24.1.2.3", TUE_10, 10, 3), CFG).downloads == 7.5
    assert extract(visit("24.1.2.3", TUE_10, 400, 60), CFG).as_tuple()[3:] == (10.0, 15.0)


def test_daytime_window_half_open():
    eight_pm = TUE_10.replace(hour=20)
    assert extract(visit("h", eight_pm, 1, 1), CFG).daytime == 0.0
    assert extract(visit("h", TUE_10.replace(hour=8), 1, 1), CFG).daytime == 1.0
    assert extract(visit("h", TUE_10.replace(hour=7, minute=59), 1, 1), CFG).daytime == 0.0


def test_weekday_names():
    assert weekday_number("Tue") == 1 and weekday_number("thursday") == 3 and weekday_number(6) == 6
    with pytest.raises(ConfigError):
        weekday_number("Funday")
    assert FeatureConfig(lab_weekdays=("Mon",)).lab_weekdays == frozenset({0})


@pytest.mark.parametrize("kwargs", [
    dict(day_start=20, day_end=8), dict(day_end=25), dict(hits_cap=0),
    dict(downloads_cap=-1), dict(campus_networks=("not-a-net",)),
])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        FeatureConfig(**kwargs)


def test_caps_required():
    with pytest.raises(ConfigError):
        extract(visit("h", TUE_10, 1, 1), FeatureConfig())


def test_count_cap():
    values = list(range(1, 101))
    # upper order statistic at rank ceil(0.99 * (n - 1)) = 99, i.e. the value 100
    assert count_cap(values) == 101.0
    assert count_cap([3] * 199 + [7]) == 4.0  # rank 198 of 200 is still a 3
    assert sum(v < count_cap(values) for v in values) >= 99
    assert count_cap([]) == 1.0 and count_cap([0, 0]) == 1.0


def test_extract_all_order_and_sizes():
    visits = [visit("h%d" % i, TUE_10 + timedelta(hours=i), i + 1, i % 4) for i in range(12)]
    assert extract_all([], CFG) == []
    out = extract_all(visits, CFG)
    assert len(out) == 12
    perm = list(range(12))
    random.Random(3).shuffle(perm)
    assert extract_all([visits[i] for i in perm], CFG) == [out[i] for i in perm]


def test_csv_round_trip(tmp_path):
    visits = [visit("h%d" % i, TUE_10 + timedelta(hours=i), i + 1, i % 4) for i in range(5)]
    vecs = extract_all(visits, CFG)
    write_feature_csv(tmp_path / "f.csv", visits, vecs)
    keys, X = read_feature_csv(tmp_path / "f.csv")
    assert (tmp_path / "f.csv").read_text().splitlines()[0] == ",".join(CSV_HEADER)
    assert keys[0] == ("h0", TUE_10.isoformat())
    assert np.array_equal(X, to_matrix(vecs))


def test_csv_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(DataError):
        read_feature_csv(bad)
    bad.write_text(",".join(CSV_HEADER) + "\nh,t,1,0,0,x,1\n")
    with pytest.raises(DataError):
        read_feature_csv(bad)
    with pytest.raises(DataError):
        read_feature_csv(tmp_path / "missing.csv")
    assert to_matrix([]).shape == (0, 5)


def test_ninety_nine_percent_below_download_top(default_corpus):
    rules = CleaningRules.defaults()
    records, _ = parse_stream(default_corpus.lines)
    visits = clean_visits(sessionize(clean_hits(records, rules), rules=rules), rules)
    cfg = with_corpus_caps(FeatureConfig(campus_networks=(synth.CAMPUS_NETWORK,)), visits)
    X = to_matrix(extract_all(visits, cfg))
    assert np.mean(X[:, 4] < 15) >= 0.99
    assert np.mean(X[:, 3] < 10) >= 0.99


@given(st.integers(1, 500), st.integers(0, 500), st.integers(1, 500), st.integers(0, 200),
       st.integers(0, 6 * 24))
def test_range_safety_and_monotonicity(hits, downloads, more, hcap, hour):
    downloads = min(downloads, hits)
    cfg = FeatureConfig(hits_cap=hcap + 1, downloads_cap=hcap // 2 + 1)
    start = TUE_10 + timedelta(hours=hour)
    a = extract(visit("h", start, hits, downloads), cfg)
    b = extract(visit("h", start, hits + more, downloads), cfg)
    for fv in (a, b):
        assert 0 <= fv.hits <= 10 and 0 <= fv.downloads <= 15
        assert {fv.campus, fv.daytime, fv.labday} <= {0.0, 1.0}
    assert b.hits >= a.hits
