import logging
import math
import random

import pytest

from siegelsign.errors import MissingCoefficient, ParseError, RamifiedPrime
from siegelsign.hecke import is_prime
from siegelsign.newforms import (
    NewformGL2,
    delta_newform,
    delta_qexp,
    euler_product_series,
    load_newform,
    mul_trunc,
    normalized_ap,
    write_qexp,
)


def naive_delta_oracle(nterms):
    """q * prod_{n<nterms} (1 - q^n)^24, multiplying in one linear factor at a time."""
    series = [0] * nterms
    series[0] = 1
    for n in range(1, nterms):
        for _ in range(24):
            for i in range(nterms - 1, n - 1, -1):
                series[i] -= series[i - n]
    return [0] + series


@pytest.fixture(scope="module")
def tau():
    return delta_qexp(1000)


def test_delta_against_naive_oracle():
    ref = naive_delta_oracle(60)
    assert delta_qexp(60) == ref
    assert ref[1] == 1 and ref[2] == -24 and ref[3] == 252


def test_delta_small(tau):
    oracle = naive_delta_oracle(4)
    assert tau[1] == oracle[1] == 1
    assert tau[2] == oracle[2]
    assert tau[3] == oracle[3]
    assert delta_qexp(1) == [0, 1]


def test_pentagonal_series():
    # direct product of (1 - q^m)
    n = 40
    direct = [1] + [0] * (n - 1)
    for m in range(1, n):
        for i in range(n - 1, m - 1, -1):
            direct[i] -= direct[i - m]
    assert euler_product_series(n) == direct


def test_mul_trunc_against_schoolbook():
    rng = random.Random(5)
    for _ in range(20):
        a = [rng.randint(-10**12, 10**12) for _ in range(rng.randint(1, 30))]
        b = [rng.randint(-10**6, 10**6) for _ in range(rng.randint(1, 30))]
        n = rng.randint(1, 40)
        ref = [0] * n
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                if i + j < n:
                    ref[i + j] += x * y
        assert mul_trunc(a, b, n) == ref


def test_multiplicativity(tau):
    for m in range(2, 201):
        for n in range(m + 1, 1000 // m + 1):
            if math.gcd(m, n) == 1:
                assert tau[m * n] == tau[m] * tau[n]


def test_prime_square_recursion(tau):
    for p in (2, 3, 5, 7, 11, 13, 17, 19):
        assert tau[p * p] == tau[p] ** 2 - p**11


def test_deligne_bound(tau):
    for p in range(2, 1000):
        if is_prime(p):
            assert tau[p] ** 2 <= 4 * p**11


def test_normalized_ap():
    f = delta_newform(10)
    assert normalized_ap(f, 2) == pytest.approx(-24 / 2**5.5)
    assert normalized_ap(f, 2) == pytest.approx(-0.5303, abs=5e-5)
    # 3^5.5 is about 420.89
    assert normalized_ap(f, 3) == pytest.approx(252 / 3**5.5)
    assert normalized_ap(f, 3) == pytest.approx(0.5987, abs=5e-5)
    with pytest.raises(MissingCoefficient):
        normalized_ap(f, 11)


def test_normalized_ap_zero_and_ramified():
    f = NewformGL2(11, 2, {2: -2, 3: -1, 5: 1, 7: -2, 11: 1, 13: 4, 17: -2, 19: 0}, "11a")
    assert normalized_ap(f, 19) == 0
    with pytest.raises(RamifiedPrime):
        normalized_ap(f, 11)


def test_load_csv(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("level=1,weight=12\n2,-24\n3,252\n5,4830\n")
    f = load_newform(path, "csv")
    assert (f.level, f.weight) == (1, 12)
    ref = delta_qexp(5)
    assert all(f.coeffs[p] == ref[p] for p in (2, 3, 5))
    assert not f.violations


def test_load_csv_with_label(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("level=11,weight=2,label=11.2.a.a\n2,-2\n3,-1\n5,1\n7,-2\n")
    f = load_newform(path)
    assert f.label == "11.2.a.a"


def test_empty_body_is_parse_error(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("level=1,weight=12\n")
    with pytest.raises(ParseError):
        load_newform(path, "csv")


@pytest.mark.parametrize(
    "body,line",
    [
        ("level=1,weight=12\n2,-24\n3;252\n", 3),
        ("level=1,weight=12\n2,-24\nx,252\n", 3),
        ("level=1,weight=12\n4,-1472\n", 2),
        ("level=1,weight=12\n2,-24\n2,-24\n", 3),
        ("weight=12\n2,-24\n", 1),
    ],
)
def test_parse_errors_carry_line(tmp_path, body, line):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(ParseError) as exc:
        load_newform(path, "csv")
    assert exc.value.line == line


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_newform(tmp_path / "nope.csv")


def test_ramanujan_violation_is_a_warning(tmp_path, caplog):
    path = tmp_path / "v.csv"
    path.write_text("level=1,weight=12\n2,-100\n3,252\n")
    with caplog.at_level(logging.WARNING):
        f = load_newform(path, "csv")
    assert [v.p for v in f.violations] == [2]
    # 2^5.5 is about 45.25, so |-100| / 2^5.5 > 2
    assert abs(f.violations[0].normalized) == pytest.approx(100 / 2**5.5)
    assert abs(f.violations[0].normalized) > 2
    assert "Ramanujan" in caplog.text


def test_qexp_roundtrip(tmp_path):
    f = delta_newform(50)
    path = tmp_path / "delta.txt"
    write_qexp(path, f)
    g = load_newform(path, "qexp_text")
    assert g.table == f.table
    assert g.coeffs == f.coeffs
    assert (g.level, g.weight, g.label) == (1, 12, "Delta")


def test_qexp_requires_a1(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("# level=1,weight=12\n1 2\n2 -24\n")
    with pytest.raises(ParseError):
        load_newform(path, "qexp_text")


def test_qexp_level_from_kwargs(tmp_path):
    path = tmp_path / "plain.txt"
    path.write_text("1 1\n2 -24\n3 252\n")
    f = load_newform(path, "qexp_text", level=1, weight=12)
    assert f.coeffs == {2: -24, 3: 252}
    with pytest.raises(ParseError):
        load_newform(path, "qexp_text")
