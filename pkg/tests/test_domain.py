"""Domain layer: builders, canonical order, zero-touching, independence, files."""

import itertools

import pytest

from qvint.domain import (Domain, VectorFq, build_explicit_domain,
                          build_monomial_domain, build_vandermonde_domain,
                          dot, monomial_exponents, parse_vector,
                          read_domain_file, validate_independence,
                          write_domain_file)
from qvint.errors import ParameterError, ResourceCapError
from qvint.field import FieldParams, parse_field_spec

F3 = FieldParams(3)
F4 = FieldParams(2, 2)
F5 = FieldParams(5)


def mod_p_rank(rows, p):
    """Independent rank over GF(p) by integer row reduction."""
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = next(
            (i for i in range(rank, len(rows)) if rows[i][col] % p), None
        )
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = (rows[i][col] * inv) % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


class TestVectors:
    def test_construction_and_indexing(self):
        v = VectorFq((F3.element(1), F3.element(2)))
        assert v.n == 2
        assert v.index_tuple() == (1, 2)
        assert VectorFq.from_index_tuple(F3, (1, 2)) == v

    def test_mixed_fields_rejected(self):
        with pytest.raises(ParameterError):
            VectorFq((F3.element(1), F5.element(1)))
        with pytest.raises(ParameterError):
            VectorFq(())

    def test_add_scale_dot(self):
        a = VectorFq.from_index_tuple(F5, (1, 3))
        b = VectorFq.from_index_tuple(F5, (2, 4))
        assert (a + b).index_tuple() == (3, 2)
        assert a.scale(F5.element(2)).index_tuple() == (2, 1)
        assert dot(a, b).index() == (1 * 2 + 3 * 4) % 5

    def test_dot_needs_matching_shapes(self):
        a = VectorFq.from_index_tuple(F5, (1, 3))
        c = VectorFq.from_index_tuple(F5, (1, 3, 0))
        with pytest.raises(ParameterError):
            dot(a, c)


class TestBuilders:
    def test_vandermonde_rows(self):
        dom = build_vandermonde_domain(F3, 1)
        assert [v.index_tuple() for v in dom.vectors] == [(1, 0), (1, 1), (1, 2)]
        assert dom.n == 2 and dom.size == 3

    def test_vandermonde_shape_per_field(self):
        for q, d in ((3, 2), (5, 3), (7, 4)):
            params = parse_field_spec(str(q))
            dom = build_vandermonde_domain(params, d)
            assert dom.size == q
            assert dom.n == d + 1
            assert dom.zero_touching_count() == 1

    def test_vandermonde_extension_field(self):
        dom = build_vandermonde_domain(F4, 1)
        assert [v.index_tuple() for v in dom.vectors] == [
            (1, 0), (1, 1), (1, 2), (1, 3)
        ]

    def test_vandermonde_bad_degree(self):
        with pytest.raises(ParameterError):
            build_vandermonde_domain(F3, 0)

    def test_monomial_exponent_order(self):
        assert monomial_exponents(2, 2) == (
            (0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)
        )

    def test_monomial_domain_shape(self):
        dom = build_monomial_domain(F3, 2, 2)
        assert dom.size == 9
        assert dom.n == 6
        # every point with a zero coordinate gives a row touching zero
        assert dom.zero_touching_count() == 3 ** 2 - 2 ** 2

    def test_monomial_zero_touching_closed_form(self):
        for q, m, d in ((3, 2, 2), (2, 3, 2), (5, 2, 1)):
            params = parse_field_spec(str(q))
            dom = build_monomial_domain(params, m, d)
            assert dom.size == q ** m
            assert dom.zero_touching_count() == q ** m - (q - 1) ** m

    def test_monomial_constant_coordinate_is_one(self):
        dom = build_monomial_domain(F3, 2, 2)
        for v in dom.vectors:
            assert v.entries[0] == F3.one()

    def test_explicit_domain_dedupes_and_sorts(self):
        a = VectorFq.from_index_tuple(F3, (2, 1))
        b = VectorFq.from_index_tuple(F3, (0, 1))
        dom = build_explicit_domain([a, b, a])
        assert [v.index_tuple() for v in dom.vectors] == [(0, 1), (2, 1)]

    def test_mixed_length_rejected(self):
        a = VectorFq.from_index_tuple(F3, (2, 1))
        c = VectorFq.from_index_tuple(F3, (2, 1, 0))
        with pytest.raises(ParameterError):
            build_explicit_domain([a, c])


class TestIndependence:
    def test_vandermonde_verified(self):
        for q, d in ((3, 1), (5, 3), (7, 3)):
            params = parse_field_spec(str(q))
            dom = build_vandermonde_domain(params, d)
            report = dom.independence()
            assert report.status == "verified"
            assert report.witness is None
            assert report.subset_size == min(dom.n, dom.size)

    def test_monomial_refuted_with_frozen_witness(self):
        dom = build_monomial_domain(F3, 2, 2)
        report = dom.independence()
        assert report.status == "refuted"
        assert tuple(v.index_tuple() for v in report.witness) == (
            (1, 0, 0, 0, 0, 0),
            (1, 0, 1, 0, 0, 1),
            (1, 0, 2, 0, 0, 1),
            (1, 1, 0, 1, 0, 0),
            (1, 1, 1, 1, 1, 1),
            (1, 1, 2, 1, 2, 1),
        )
        # cross-check the witness really is rank deficient, independently
        assert mod_p_rank([v.index_tuple() for v in report.witness], 3) < 6

    def test_rank_matches_independent_reduction(self):
        dom = build_vandermonde_domain(F5, 3)
        for subset in itertools.combinations(dom.vectors, 4):
            expected = mod_p_rank([v.index_tuple() for v in subset], 5)
            assert expected == 4  # Vandermonde minors are invertible

    def test_report_is_cached(self):
        dom = build_vandermonde_domain(F3, 1)
        assert dom.independence() is dom.independence()

    def test_subset_cap(self):
        dom = build_monomial_domain(FieldParams(5), 2, 2)  # C(25, 6) subsets
        with pytest.raises(ResourceCapError):
            validate_independence(dom, max_subsets=1000)

    def test_small_domain_uses_size_not_n(self):
        # fewer vectors than coordinates: subsets of size |V| are checked
        vs = [VectorFq.from_index_tuple(F3, t) for t in ((1, 0, 0), (0, 1, 0))]
        report = validate_independence(build_explicit_domain(vs))
        assert report.status == "verified"
        assert report.subset_size == 2


class TestDomainFiles:
    def test_roundtrip_prime(self, tmp_path):
        dom = build_vandermonde_domain(F5, 2)
        path = tmp_path / "d.txt"
        write_domain_file(dom, path)
        back = read_domain_file(path)
        assert back.params == dom.params
        assert [v.index_tuple() for v in back.vectors] == [
            v.index_tuple() for v in dom.vectors
        ]

    def test_roundtrip_extension_keeps_modulus(self, tmp_path):
        dom = build_vandermonde_domain(F4, 2)
        path = tmp_path / "d.txt"
        write_domain_file(dom, path)
        text = path.read_text()
        assert text.splitlines()[0] == "q=4 n=3 modulus=1,1,1"
        back = read_domain_file(path)
        assert back.params.modulus == (1, 1, 1)
        assert [v.index_tuple() for v in back.vectors] == [
            v.index_tuple() for v in dom.vectors
        ]

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("n=2\n1,0\n")
        with pytest.raises(ParameterError):
            read_domain_file(path)

    def test_rejects_wrong_length_vector(self, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("q=3 n=2\n1,0,2\n")
        with pytest.raises(ParameterError):
            read_domain_file(path)

    def test_vector_cap(self, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("q=3 n=1\n" + "\n".join(str(i % 3) for i in range(10)) + "\n")
        with pytest.raises(ResourceCapError):
            read_domain_file(path, max_vectors=5)

    def test_parse_vector_tokens(self):
        v = parse_vector(F4, "1:0, 0:1")
        assert v.index_tuple() == (1, 2)
        with pytest.raises(ParameterError):
            parse_vector(F4, "1:0:0,0")
        with pytest.raises(ParameterError):
            parse_vector(F3, "x,1")


class TestStats:
    def test_stats_snapshot(self):
        dom = build_vandermonde_domain(F5, 3)
        stats = dom.stats()
        assert stats.field_order == 5
        assert stats.length == 4
        assert stats.size == 5
        assert stats.zero_touching == 1
        assert stats.label == "vandermonde(q=5, d=3)"
