import math
from fractions import Fraction

import numpy as np
import pytest

from latwalk import exact
from latwalk.errors import ResourceError
from latwalk.pmf import Pmf

from conftest import FIVE, LAZY, SKEW, W3, enumerated_first_passage, enumerated_joint


def test_marginal_small(w3):
    assert exact.marginal_pmf(w3, 1)[0] == pytest.approx(1 / 3, abs=1e-15)
    assert exact.marginal_pmf(w3, 2)[2] == pytest.approx(1 / 9, abs=1e-15)


def test_marginal_support_and_mass(five):
    for n in (1, 7, 40):
        law = exact.marginal_pmf(five, n)
        assert law.offset >= -2 * n and law.last <= 2 * n
        assert abs(law.total() - 1) <= 1e-12


def test_marginal_local_limit_value(w3):
    # sqrt(n) P[S_n = 0] -> 1/sqrt(2 pi nu) = 0.48860251190291992...
    target = 0.48860251190291992
    errs = [abs(math.sqrt(n) * exact.marginal_pmf(w3, n)[0] - target) for n in (100, 400, 1600)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] < 1e-4


def test_first_passage_small(w3):
    f0 = exact.first_passage_pmf(w3, 0, 2)
    assert f0[1] == pytest.approx(1 / 3, abs=1e-15)
    assert f0[2] == pytest.approx(2 / 9, abs=1e-15)
    assert exact.first_passage_pmf(w3, 1, 2)[2] == pytest.approx(1 / 9, abs=1e-15)


@pytest.mark.parametrize("law", [W3, SKEW], ids=["w3", "skew"])
def test_first_passage_matches_enumeration(law, request):
    from latwalk.walk import validate_step_distribution

    spec = validate_step_distribution(law)
    for a in (-2, 0, 1, 3):
        f = exact.first_passage_pmf(spec, a, 6)
        for k in range(1, 7):
            assert f[k] == pytest.approx(float(enumerated_first_passage(law, k, a)), abs=1e-15)


def test_first_passage_horizon_independent(w3):
    short = exact.first_passage_pmf(w3, 3, 20).values
    long = exact.first_passage_pmf(w3, 3, 200).values[:20]
    np.testing.assert_allclose(short, long, rtol=0, atol=1e-16)


def test_first_passage_cutoff_close_to_exact(w3):
    exact_law = exact.first_passage_pmf(w3, 0, 3000).values
    trimmed = exact.first_passage_pmf(w3, 0, 3000, cutoff=1e-40).values
    assert np.max(np.abs(exact_law - trimmed)) < 1e-30


def test_unreachable_before_distance(five):
    f = exact.first_passage_pmf(five, 9, 30)
    assert all(f[k] == 0 for k in range(1, 5))
    assert f[5] > 0


def test_survival(w3, lazy):
    tail = exact.survival_tail(w3, 2)
    assert tail[0] == 1
    assert tail[1] == pytest.approx(2 / 3, abs=1e-15)
    assert tail[2] == pytest.approx(4 / 9, abs=1e-15)
    assert list(exact.survival_tail(lazy, 0)) == [1.0]
    long = exact.survival_tail(lazy, 500)
    assert np.all(np.diff(long) <= 0)


def test_avoid_small(w3):
    one = exact.avoid_pmf(w3, 1, 1)
    assert one[-1] == pytest.approx(1 / 3) and one[0] == pytest.approx(1 / 3)
    assert one[1] == 0
    two = exact.avoid_pmf(w3, 0, 2)
    assert two[0] == 0
    assert two[2] == pytest.approx(1 / 9, abs=1e-15)


def test_joint_small(w3):
    table = exact.joint_pmf(w3, 0, 2)
    assert table.prob(0, 1) == pytest.approx(2 / 9, abs=1e-15)
    assert table.prob(0, 2) == pytest.approx(1 / 9, abs=1e-15)
    far = exact.joint_pmf(w3, 5, 2)
    assert far.marginal_ell().total() == pytest.approx(1)
    assert far.marginal_ell()[0] == pytest.approx(1)


@pytest.mark.parametrize("law", [W3, LAZY, SKEW], ids=["w3", "lazy", "skew"])
@pytest.mark.parametrize("a", [0, 1, -2])
def test_joint_matches_enumeration(law, a):
    from latwalk.walk import validate_step_distribution

    spec = validate_step_distribution(law)
    for n in range(1, 6):
        table = exact.joint_pmf(spec, a, n)
        oracle = enumerated_joint(law, n, a)
        seen = set()
        for x, ell, p in table.cells():
            assert p == pytest.approx(float(oracle.get((x, ell), Fraction(0))), abs=1e-15)
            seen.add((x, ell))
        assert set(oracle) <= seen | {k for k, v in oracle.items() if v == 0}


def test_occupation_small(w3):
    one = exact.occupation_pmf(w3, 0, 1)
    assert one[1] == pytest.approx(1 / 3) and one[0] == pytest.approx(2 / 3)
    assert exact.occupation_pmf(w3, 0, 2)[2] == pytest.approx(1 / 9, abs=1e-15)
    assert exact.occupation_pmf(w3, 5, 2)[0] == pytest.approx(1)


def test_time_zero_not_counted(w3):
    # S_0 = 0 is never a visit: one step of +-1 leaves Lambda^0_1 = 0
    table = exact.joint_pmf(w3, 0, 1)
    assert table.prob(1, 0) == pytest.approx(1 / 3)
    assert table.prob(0, 1) == pytest.approx(1 / 3)
    assert table.prob(0, 0) == 0


@pytest.mark.parametrize("law", [W3, LAZY, SKEW], ids=["w3", "lazy", "skew"])
def test_slice_consistency(law):
    from latwalk.walk import validate_step_distribution

    spec = validate_step_distribution(law)
    for n in (1, 5, 17, 32):
        for a in (0, 1, -3, 7):
            table = exact.joint_pmf(spec, a, n)
            assert abs(table.total() - 1) <= 1e-10
            marg = exact.marginal_pmf(spec, n)
            lo, hi = marg.offset, marg.last
            np.testing.assert_allclose(table.marginal_x().window(lo, hi), marg.values, atol=1e-12, rtol=0)
            np.testing.assert_allclose(table.slice_ell(0).window(lo, hi), exact.avoid_pmf(spec, a, n).window(lo, hi), atol=1e-12, rtol=0)
            np.testing.assert_allclose(table.marginal_ell().values, exact.occupation_pmf(spec, a, n).values, atol=1e-12, rtol=0)
            assert table.prob(a, 0) == 0
            assert table.entries.shape[1] == n + 1


def test_symmetry(w3, five):
    for spec in (w3, five):
        for n in (3, 10, 25):
            marg = exact.marginal_pmf(spec, n).values
            np.testing.assert_allclose(marg, marg[::-1], atol=1e-14, rtol=0)
            for a in (1, 4):
                plus, minus = exact.joint_pmf(spec, a, n), exact.joint_pmf(spec, -a, n)
                assert plus.x_offset == minus.x_offset
                np.testing.assert_allclose(plus.entries, minus.entries[::-1], atol=1e-14, rtol=0)


def test_kaigh_identity_small(skew):
    # time reversal holds for asymmetric walks as well, for every level a != 0
    for n in (1, 4, 30):
        killed = exact.avoid_pmf(skew, 0, n)
        for a in range(-n, 2 * n + 1):
            if a == 0:
                continue
            assert exact.first_passage_pmf(skew, a, n)[n] == pytest.approx(killed[a], abs=1e-15)


def test_caps(w3):
    with pytest.raises(ResourceError):
        exact.joint_pmf(w3, 0, 65)
    assert exact.joint_pmf(w3, 0, 65, cap=65).n == 65
    with pytest.raises(ResourceError):
        exact.marginal_pmf(w3, 10, cap=5)
    with pytest.raises(ResourceError):
        exact.occupation_pmf(w3, 0, 300)


def test_csv_schemas(w3, tmp_path):
    text = exact.marginal_pmf(w3, 1).to_csv(tmp_path / "m.csv")
    assert text.splitlines()[0] == "index,probability"
    assert text.splitlines()[1].startswith("-1,0.33333333333333")
    back = Pmf.read_csv(tmp_path / "m.csv")
    assert back.to_dict() == exact.marginal_pmf(w3, 1).to_dict()
    joint = exact.joint_pmf(w3, 0, 2).to_csv()
    lines = joint.splitlines()
    assert lines[0] == "x,ell,probability"
    assert len(lines) - 1 == 8  # zero entries omitted
