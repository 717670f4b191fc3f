import json
import pathlib

import pytest

from conftest import long_run
from utk.embedding import is_induced_subtree
from utk.search import (
    SearchLimits,
    SearchReport,
    check_depth_conjecture,
    find_min_universal,
    find_min_universal_chain,
    is_universal,
)
from utk.shapes import (
    caterpillar,
    complete_tree,
    enumerate_shapes,
    join,
    make_leaf,
    parse_code,
)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def catalog_fixture(name: str) -> tuple[str, ...]:
    text = (FIXTURES / name).read_text()
    return tuple(line for line in text.splitlines() if line)


@pytest.fixture(scope="module")
def chain8():
    return find_min_universal_chain(8)


class TestIsUniversal:
    def test_b3_is_4_universal(self):
        assert is_universal(complete_tree(3), 4)

    def test_caterpillars_fail(self):
        for n in range(4, 8):
            assert not is_universal(caterpillar(n), n)

    def test_n1(self):
        assert is_universal(make_leaf(), 1)
        assert is_universal(caterpillar(3), 1)

    def test_every_catalog_shape_is_universal(self):
        for n in range(4, 9):
            for code in catalog_fixture(f"universal_catalog_n{n:02d}.codes"):
                assert is_universal(parse_code(code), n)

    def test_white_shape_never_redleaf_universal(self):
        assert not is_universal(complete_tree(3), 2, redleaf=True)

    def test_arity_check(self):
        with pytest.raises(ValueError):
            is_universal(caterpillar(3, arity=3), 3)


class TestBinarySearch:
    def test_u_values_to_8(self, chain8):
        assert [r.u_value for r in chain8] == [1, 2, 3, 5, 6, 9, 10, 14]

    def test_catalog_counts_to_8(self, chain8):
        assert [len(r.minimal_shapes) for r in chain8] == [1, 1, 1, 2, 1, 6, 1, 8]

    def test_catalogs_match_figure_transcriptions(self, chain8):
        for n in range(4, 9):
            expected = catalog_fixture(f"universal_catalog_n{n:02d}.codes")
            assert chain8[n - 1].minimal_shapes == expected

    def test_soundness_reverification(self, chain8):
        # Independent route: every reported shape passes the embedding-based
        # universality check.
        for report in chain8:
            for code in report.minimal_shapes:
                assert is_universal(parse_code(code), report.n)

    def test_completeness_small_scale(self, chain8):
        # Brute force without any engine: scan ALL shapes of sizes n..u(n)
        # with the embedding path.
        for n in range(1, 8):
            found_at = None
            winners = []
            for m in range(n, chain8[n - 1].u_value + 1):
                winners = [
                    s.code
                    for s in enumerate_shapes(m)
                    if all(is_induced_subtree(p, s) for p in enumerate_shapes(n))
                ]
                if winners:
                    found_at = m
                    break
            assert found_at == chain8[n - 1].u_value
            assert tuple(sorted(winners)) == chain8[n - 1].minimal_shapes

    def test_u_strictly_increasing(self, chain8):
        values = [r.u_value for r in chain8]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_universality_upward_closed(self, chain8):
        for code in chain8[5].minimal_shapes:
            bigger = join([parse_code(code), make_leaf()])
            assert is_universal(bigger, 6)

    def test_report_shapes_have_right_size(self, chain8):
        for report in chain8:
            for code in report.minimal_shapes:
                assert parse_code(code).white_leaves == report.u_value

    def test_find_min_universal_returns_last_level(self):
        report = find_min_universal(5)
        assert (report.n, report.u_value) == (5, 6)
        assert report.minimal_shapes == catalog_fixture("universal_catalog_n05.codes")

    def test_workers_do_not_change_report(self):
        seq = find_min_universal(7, workers=1)
        par = find_min_universal(7, workers=2)
        assert seq.u_value == par.u_value
        assert seq.minimal_shapes == par.minimal_shapes
        assert seq.candidates_examined == par.candidates_examined

    def test_report_serializes(self, chain8):
        blob = json.dumps(chain8[7].to_dict())
        data = json.loads(blob)
        assert data["n"] == 8 and data["u_value"] == 14
        assert data["authoritative"] is True


class TestEngineBitsets:
    def test_white_bits_agree_with_embedding(self):
        # Direct validation of the engine's pattern bitsets: for every host
        # of size <= 7, bit p is set exactly when pattern p embeds.
        from utk.search import _BinaryEngine

        engine = _BinaryEngine(4, redleaf=False)
        for m in range(1, 8):
            engine.ensure_white_layer(m)
        patterns = [s for k in range(1, 5) for s in enumerate_shapes(k)]
        for m in range(1, 8):
            for idx, bits in enumerate(engine.white_bits[m]):
                host = parse_code(engine.white_code(m, idx))
                for pid, pattern in enumerate(patterns):
                    assert bool(bits >> pid & 1) == is_induced_subtree(pattern, host)

    def test_red_bits_agree_with_embedding(self):
        from utk.search import _BinaryEngine

        engine = _BinaryEngine(3, redleaf=True)
        for m in range(0, 6):
            engine.ensure_red_layer(m)
        for m in range(1, 7):
            engine.ensure_white_layer(m)
        patterns = [s for k in range(1, 4) for s in enumerate_shapes(k)]
        patterns += [s for k in range(0, 4) for s in enumerate_shapes(k, redleaf=True)]
        for m in range(0, 6):
            for idx, bits in enumerate(engine.red_bits[m]):
                host = parse_code(engine.red_code(m, idx))
                for pid, pattern in enumerate(patterns):
                    assert bool(bits >> pid & 1) == is_induced_subtree(pattern, host), (
                        host.code, pattern.code,
                    )


class TestRedleafSearch:
    def test_small_values(self):
        chain = find_min_universal_chain(4, redleaf=True)
        assert [r.u_value for r in chain] == [1, 3, 5, 9]

    def test_matches_embedding_route(self):
        # Independent brute force over redleaf candidates.
        chain = find_min_universal_chain(3, redleaf=True)
        for report in chain:
            n = report.n
            m = n
            while True:
                winners = [
                    s.code
                    for s in enumerate_shapes(m, redleaf=True)
                    if is_universal(s, n, redleaf=True)
                ]
                if winners:
                    break
                m += 1
            assert m == report.u_value
            assert tuple(sorted(winners)) == report.minimal_shapes

    def test_soundness(self):
        report = find_min_universal(4, redleaf=True)
        for code in report.minimal_shapes:
            assert is_universal(parse_code(code), 4, redleaf=True)

    def test_redleaf_dominates_white(self):
        # A redleaf-universal shape restricted to white patterns is still
        # universal, so the redleaf minimum can never be smaller.
        white = find_min_universal_chain(4)
        red = find_min_universal_chain(4, redleaf=True)
        for w, r in zip(white, red):
            assert w.u_value <= r.u_value

    def test_workers_do_not_change_redleaf_report(self):
        seq = find_min_universal(4, redleaf=True, workers=1)
        par = find_min_universal(4, redleaf=True, workers=2)
        assert seq.minimal_shapes == par.minimal_shapes
        assert seq.candidates_examined == par.candidates_examined


class TestDarySearch:
    def test_4ary_4_has_two_minimal_shapes(self):
        report = find_min_universal(4, d=4)
        assert len(report.minimal_shapes) == 2
        assert report.u_value == 7
        assert report.minimal_shapes == catalog_fixture("universal_catalog_d4_n4.codes")

    def test_4ary_soundness(self):
        report = find_min_universal(4, d=4)
        for code in report.minimal_shapes:
            assert is_universal(parse_code(code, arity=4), 4, d=4)

    def test_3ary_chain(self):
        chain = find_min_universal_chain(4, d=3)
        assert [r.u_value for r in chain][:2] == [1, 2]
        for report in chain:
            for code in report.minimal_shapes:
                assert is_universal(parse_code(code, arity=3), report.n, d=3)


class TestLimits:
    def test_candidate_limit_yields_partial_report(self):
        report = find_min_universal(8, limits=SearchLimits(max_candidates=50))
        assert not report.authoritative
        assert report.u_value is None
        assert report.minimal_shapes == ()
        assert "candidate limit" in report.limit_reason

    def test_generous_limit_is_authoritative(self):
        report = find_min_universal(5, limits=SearchLimits(max_candidates=10_000))
        assert report.authoritative
        assert report.u_value == 6


class TestDepthConjecture:
    def test_holds_up_to_8(self, chain8):
        for report in chain8:
            assert check_depth_conjecture(report)

    def test_rejects_partial_reports(self):
        partial = SearchReport(
            n=4, d=2, redleaf=False, u_value=None, minimal_shapes=(),
            candidates_examined=0, wall_time=0.0, authoritative=False,
            limit_reason="test",
        )
        with pytest.raises(ValueError):
            check_depth_conjecture(partial)

    def test_depth_agrees_with_height_on_paths(self):
        report = SearchReport(
            n=6, d=2, redleaf=False, u_value=6,
            minimal_shapes=(caterpillar(6).code,), candidates_examined=1,
            wall_time=0.0,
        )
        # C_6 has height 5 = n - 1, so the (synthetic) conjecture check holds.
        assert check_depth_conjecture(report)


class TestTwelveBound:
    def test_frozen_witness_is_12_universal(self):
        code = (FIXTURES / "witness_12_universal.code").read_text().strip()
        witness = parse_code(code)
        assert witness.white_leaves <= 28
        assert is_universal(witness, 12)


@long_run
class TestLongRun:
    def test_u_values_and_catalogs_to_11(self):
        chain = find_min_universal_chain(11)
        assert [r.u_value for r in chain] == [1, 2, 3, 5, 6, 9, 10, 14, 16, 19, 21]
        assert [len(r.minimal_shapes) for r in chain][8:] == [8, 2, 1]
        for n in (9, 10, 11):
            expected = catalog_fixture(f"universal_catalog_n{n:02d}.codes")
            assert chain[n - 1].minimal_shapes == expected
        for report in chain:
            assert check_depth_conjecture(report)
