from fractions import Fraction

import pytest

import oracles
from heavytail import certify
from heavytail.certify import CertificateError, certify_q, certify_range, h_poly, h_tilde


@pytest.mark.parametrize("q", [4, 6, 8, 10])
def test_reference_tables(q):
    cert = certify_q(q)
    assert list(cert.h_tilde_coeffs) == oracles.reference_even_coeffs(q)
    assert cert.passed


@pytest.mark.parametrize("q", [4, 6, 8, 10, 12, 14, 16, 20])
def test_matches_sympy_division(q):
    assert list(h_tilde(q).coeffs) == oracles.h_tilde_sympy(q)


def test_common_factors():
    factors = {q: certify_q(q).common_factor() for q in (4, 6, 8, 10)}
    assert factors == {4: -96, 6: -720, 8: -1680, 10: -5040}


def test_a1_positive_flag():
    assert not certify_q(6).a1_positive
    assert certify_q(8).a1_positive and certify_q(10).a1_positive
    cert = certify_q(8)
    assert cert.discriminant < 0


@pytest.mark.parametrize("q", [4, 12, 30])
def test_h_vanishes_at_known_roots(q):
    h = h_poly(q)
    for r in (0, Fraction(1, 2), 1):
        assert h(r) == 0


@pytest.mark.parametrize("q", [12, 24, 40])
def test_degree_and_parity(q):
    ht = h_tilde(q)
    assert ht.degree == 2 * q - 8
    assert ht.odd_part_zero()


def test_invalid_q():
    for q in (2, 3, 5, 7.0):
        with pytest.raises(CertificateError):
            certify_q(q)
    with pytest.raises(CertificateError):
        certify_range(3)


def test_range_ordering_and_parallel_agree():
    serial = certify_range(30, 1)
    parallel = certify_range(30, 3)
    assert [c.q for c in serial] == list(range(4, 31, 2))
    assert [c.to_record() for c in serial] == [c.to_record() for c in parallel]


def test_record_serialises_rationals_as_strings():
    rec = certify_q(6).to_record()
    assert rec["h_tilde_coeffs"] == ["-10800/1", "-5760/1", "-103680/1"]
    assert rec["verdict"] == "pass"
    assert rec["within_reference_range"]
    assert not certify_q(100).within_reference_range


def test_endpoint_values_exact():
    vals = certify.ratio_endpoint_values(4, 9)
    # r_4^2 / r_2^4 is maximal at the endpoints, where it equals 81
    assert vals[0] == vals[-1] == 81
    assert max(vals) == 81
    assert vals[4] == Fraction(3, 2) ** 2 / Fraction(1, 2) ** 4


def test_structural_failure_is_reported(monkeypatch):
    def broken(q):
        raise RuntimeError("boom")

    monkeypatch.setattr(certify, "h_tilde_division", broken)
    cert = certify_q(8)
    assert cert.verdict == "fail"
    assert "construction failed" in cert.diagnostics[0]
