import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from learnerclust import fuzzyclust as fc
from learnerclust.errors import InvalidRule, ShapeMismatch
from learnerclust.regions import (
    BAD, REGULAR, WORKERS, RegionRule, all_regions, assign_regions, format_profile_table,
    name_clusters, profile, region_label, write_profile_csv, write_region_csv,
)

from conftest import blobs

LABELS = [REGULAR, WORKERS, BAD]


def regions_of(*columns, rule=RegionRule()):
    return [a.region for a in assign_regions(np.array(columns).T, rule)]


def test_rule_examples():
    assert regions_of((1, 0, 0)) == [(0,)]
    assert regions_of((0.45, 0.45, 0.10)) == [(0, 1)]
    assert regions_of((0.34, 0.33, 0.33)) == [(0, 1, 2)]
    assert regions_of((0.6, 0.3, 0.1)) == [(0,)]
    # fallback when no cluster reaches theta_member
    assert regions_of((0.2, 0.2, 0.2, 0.2, 0.2)) == [(0,)]


def test_singleton_overlap_set_counts_as_sure():
    a = assign_regions(np.array([[0.55], [0.24], [0.21]]))[0]
    assert a.region == (0,) and a.sure


@pytest.mark.parametrize("sure,member", [(0.5, 0.25), (1.1, 0.25), (0.6, 0.0), (0.6, 0.6)])
def test_invalid_rules(sure, member):
    with pytest.raises(InvalidRule):
        RegionRule(sure, member)


def test_assign_requires_matrix():
    with pytest.raises(ShapeMismatch):
        assign_regions(np.ones(3))


def test_naming_rank_rule():
    centers = np.zeros((3, 5))
    centers[:, 4] = [6.0, 1.2, 0.7]
    centers[:, 3] = [5.0, 2.0, 1.0]
    assert name_clusters(centers) == [BAD, REGULAR, WORKERS]
    two = np.zeros((2, 5))
    two[:, 4] = [3.0, 1.0]
    assert name_clusters(two) == ["C2", "C1"]
    assert name_clusters(fc.ClusterModel(two, 2.0, fc.FCM)) == ["C2", "C1"]
    with pytest.raises(ShapeMismatch):
        name_clusters(np.zeros((3, 2)))


def test_labels_and_region_order():
    assert region_label((1,), LABELS) == WORKERS
    assert region_label((2, 0), LABELS) == "R&B"
    shuffled = [BAD, REGULAR, WORKERS]
    assert [region_label(r, shuffled) for r in all_regions(shuffled)] == [
        "Regular", "Workers", "Bad", "R&W", "R&B", "W&B", "R&W&B"]
    five = [f"C{k}" for k in range(1, 6)]
    assert len(all_regions(five)) == 5
    assert all_regions(five, seen=[(0, 3)])[-1] == (0, 3)
    assert region_label((0, 1), ["Ca", "Cb"]) == "Ca&Cb"


def test_profile_single_point():
    X = np.array([[1.0, 0.0, 1.0, 4.0, 7.5]])
    profs = profile(assign_regions(np.array([[1.0], [0.0], [0.0]])), X, LABELS)
    assert profs[0].size == 1 and profs[0].means == tuple(X[0])
    assert all(p.size == 0 and p.means is None for p in profs[1:])


def test_profile_errors():
    with pytest.raises(ShapeMismatch):
        profile(assign_regions(np.eye(3)), np.zeros((2, 5)), LABELS)


def test_crisp_memberships_give_empty_overlaps():
    U = np.eye(3)[:, [0, 1, 2, 2, 1, 0, 0]]
    profs = profile(assign_regions(U), np.zeros((7, 5)), LABELS)
    assert [p.size for p in profs] == [3, 2, 2, 0, 0, 0, 0]


def test_uniform_memberships_all_in_full_overlap():
    profs = profile(assign_regions(np.full((3, 4), 1 / 3)), np.zeros((4, 5)), LABELS)
    assert profs[-1].region_label == "R&W&B" and profs[-1].size == 4


def test_blob_sure_sizes_and_names():
    X, labels, means = blobs(seed=3, per_blob=40)
    X5 = np.zeros((len(X), 5))
    # hits/downloads coordinates: Workers low, Regular middle, Bad high
    X5[:, 3:] = X + np.array([1.0, 1.0])
    planted_names = {0: WORKERS, 1: REGULAR, 2: REGULAR}
    X5[labels == 2, 3:] += 6.0
    planted_names[2] = BAD
    model, U, _ = fc.fit(X5, 3, seed=0)
    names = name_clusters(model)
    assigned = assign_regions(U)
    for a in assigned:
        assert a.sure and names[a.region[0]] == planted_names[labels[a.point_index]]
    sizes = {p.region_label: p.size for p in profile(assigned, X5, names)}
    for name in (WORKERS, REGULAR, BAD):
        assert abs(sizes[name] - 40) <= 2


def test_report_outputs(tmp_path):
    U = np.array([[0.9, 0.45, 0.34], [0.05, 0.45, 0.33], [0.05, 0.1, 0.33]])
    X = np.arange(15, dtype=float).reshape(3, 5)
    assigned = assign_regions(U)
    profs = profile(assigned, X, LABELS)
    table = format_profile_table(profs, title="Behavior")
    lines = table.splitlines()
    assert lines[0] == "Behavior" and lines[1].split() == ["Class", "Name", "Camp.", "Time", "Lab",
                                                           "Hits", "Req.", "Size"]
    assert lines[-2].split()[0] == "W&B" and lines[-2].split()[-1] == "0"
    write_profile_csv(tmp_path / "p.csv", profs)
    rows = (tmp_path / "p.csv").read_text().splitlines()
    assert rows[0] == "region,campus,daytime,labday,hits,downloads,size"
    assert rows[6] == "W&B,,,,,,0"
    write_region_csv(tmp_path / "r.csv", assigned, [("h", "t")] * 3, LABELS)
    assert (tmp_path / "r.csv").read_text().splitlines() == [
        "point_index,host,start,region,sure", "0,h,t,Regular,1", "1,h,t,R&W,0", "2,h,t,R&W&B,0"]


memberships = st.integers(0, 10_000).flatmap(lambda s: st.just(
    np.random.default_rng(s).dirichlet(np.full(3, np.random.default_rng(s).uniform(0.1, 3)), size=30).T))


@settings(max_examples=50, deadline=None)
@given(memberships, st.floats(0.51, 1.0), st.floats(0.51, 1.0), st.floats(0.01, 0.5))
def test_region_properties(U, s1, s2, member):
    lo, hi = sorted((s1, s2))
    assigned = assign_regions(U, RegionRule(lo, member))
    profs = profile(assigned, np.zeros((U.shape[1], 5)), LABELS)
    assert sum(p.size for p in profs) == U.shape[1]
    assert [a.point_index for a in assigned] == list(range(U.shape[1]))
    for a in assigned:
        col = U[:, a.point_index]
        if col.max() >= lo:
            assert a.region == (int(col.argmax()),)
        else:
            expected = tuple(np.flatnonzero(col >= member)) or (int(col.argmax()),)
            assert a.region == expected
    stricter = assign_regions(U, RegionRule(hi, member))
    assert sum(a.sure for a in stricter) <= sum(a.sure for a in assigned)
