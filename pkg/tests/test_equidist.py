import pytest

from equilab.lab.equidist import (ExperimentConfig, ExperimentError, direct_counts, joint_distribution,
                                  uniformity_stats)
from equilab.multfun import MultiplicativeFunction
from equilab.polynomials import IntPolynomial
from equilab.reports import dumps

ID, PHI, SIGMA = (MultiplicativeFunction.preset(n) for n in ("id", "phi", "sigma"))
FAM = (ID, PHI, SIGMA)


def test_small_x_matches_direct_enumeration():
    cfg = ExperimentConfig(100, 17, FAM)
    rep = joint_distribution(cfg)
    direct = direct_counts(cfg)
    assert rep.rhs_count == sum(direct.values()) == 94
    for cls, c in rep.counts.items():
        assert c == direct.get(cls, 0)
    assert rep.class_sum_conserved()


@pytest.mark.parametrize("q", [3, 5, 9, 15])
def test_random_small_configs_match(q):
    fs = (PHI, MultiplicativeFunction.completely_multiplicative(IntPolynomial((1, 0, 1))))
    cfg = ExperimentConfig(3000, q, fs, segment_width=257)
    rep = joint_distribution(cfg)
    direct = direct_counts(cfg)
    assert {k: v for k, v in rep.counts.items() if v} == direct


def test_q3_identity():
    x = 10**4
    rep = joint_distribution(ExperimentConfig(x, 3, (ID,)))
    assert set(rep.counts) == {(1,), (2,)}
    assert rep.rhs_count == x - x // 3


def test_thread_count_gives_byte_identical_reports():
    texts = {dumps(joint_distribution(ExperimentConfig(2 * 10**5, 17, FAM, segment_width=9973,
                                                        threads=t)).to_json())
             for t in (1, 2, 8)}
    assert len(texts) == 1


def test_counts_independent_of_segment_width():
    counts = [joint_distribution(ExperimentConfig(10**5, 17, FAM, segment_width=w)).counts
              for w in (1 << 22, 4099, 100)]
    assert counts[0] == counts[1] == counts[2]


def test_targets_and_json_shape():
    rep = joint_distribution(ExperimentConfig(10**4, 17, FAM, targets=(1, 1, 1)))
    data = rep.to_json()
    assert set(data) >= {"config", "counts", "rhs_count", "stats", "delta_q", "notes"}
    assert set(data["stats"]) >= {"max_rel_dev", "tv_distance", "chi_square"}
    assert data["target"]["count"] == rep.counts[(1, 1, 1)]
    assert all("," in k for k in data["counts"])


def test_config_validation():
    with pytest.raises(ExperimentError, match="odd"):
        ExperimentConfig(100, 16, FAM)
    with pytest.raises(ExperimentError):
        ExperimentConfig(10, 17, FAM)
    with pytest.raises(ExperimentError):
        ExperimentConfig(100, 17, FAM, targets=(17, 1, 1))


def test_uniformity_stats():
    s = uniformity_stats([10, 10, 10, 10])
    assert s["max_rel_dev"] == 0 and s["tv_distance"] == 0 and s["chi_square"] == 0
    s = uniformity_stats([0, 20])
    assert s["max_rel_dev"] == 1 and s["tv_distance"] == pytest.approx(0.5) and s["chi_square"] == 20


def test_tv_trend_over_x():
    tv = [joint_distribution(ExperimentConfig(x, 17, FAM)).stats["tv_distance"] for x in (10**5, 10**6)]
    assert tv[1] < tv[0]
