"""Packed-file prefix learning and HTML script extraction."""

from __future__ import annotations

import pytest

from astrack.fingerprint import fingerprint_source
from astrack.html import ScriptOrigin, extract_scripts
from astrack.webpack import PrefixPatternSet, is_webpack, learn_webpack_patterns


def test_learn_patterns_from_skeletons(webpack_fps, table):
    patterns = learn_webpack_patterns(webpack_fps, min_support=2)
    assert patterns.patterns, "skeletons share a long structural header"
    assert all(len(p) >= 8 for p in patterns.patterns)
    # closure property: every training file matches
    for fp in webpack_fps:
        assert is_webpack(fp, patterns)


def test_full_support_yields_shared_header(webpack_fps):
    patterns = learn_webpack_patterns(webpack_fps, min_support=4)
    assert len(patterns.patterns) == 1
    (p,) = patterns.patterns
    for fp in webpack_fps:
        assert fp.root_chain[:len(p)] == p


def test_unseen_packed_file_matches(webpack_fps, table, fixtures_dir):
    patterns = learn_webpack_patterns(webpack_fps, min_support=2)
    packed = fingerprint_source(
        (fixtures_dir / "packed_mixed.js").read_text(), table, "packed")
    assert is_webpack(packed, patterns)


def test_plain_file_does_not_match(webpack_fps, table):
    patterns = learn_webpack_patterns(webpack_fps, min_support=2)
    plain = fingerprint_source("var x = 1;", table)
    assert not is_webpack(plain, patterns)


def test_unrelated_files_no_common_prefix(table):
    a = fingerprint_source("var x = 1;", table)
    b = fingerprint_source("function f() { while (x) { g(); } }", table)
    patterns = learn_webpack_patterns([a, b], min_support=2)
    assert patterns.patterns == frozenset()
    assert not is_webpack(a, patterns)


def test_learn_validation(table):
    fp = fingerprint_source("var x = 1;", table)
    with pytest.raises(ValueError):
        learn_webpack_patterns([fp], min_support=2)
    with pytest.raises(ValueError):
        learn_webpack_patterns([fp, fp], min_support=1)
    with pytest.raises(ValueError):
        learn_webpack_patterns([fp, fp], min_support=2, min_length=4)


def test_pattern_set_invariants():
    with pytest.raises(ValueError):
        PrefixPatternSet(frozenset({(1, 2, 3)}), min_length=8)
    with pytest.raises(ValueError):
        PrefixPatternSet(
            frozenset({tuple(range(8)), tuple(range(9))}), min_length=8)


# -- HTML ---------------------------------------------------------------------


def test_single_inline_script():
    scripts = extract_scripts("<html><script>var x=1;</script></html>")
    assert len(scripts) == 1
    assert scripts[0].origin is ScriptOrigin.INLINE
    assert "var x=1;" in scripts[0].text


def test_json_script_excluded():
    scripts = extract_scripts(
        '<script type="application/json">{"a": 1}</script>')
    assert scripts == []


def test_fixture_page_counts(fixtures_dir):
    scripts = extract_scripts((fixtures_dir / "page.html").read_text())
    inline = [s for s in scripts if s.origin is ScriptOrigin.INLINE]
    external = [s for s in scripts if s.origin is ScriptOrigin.EXTERNAL_REF]
    assert len(inline) == 2
    assert len(external) == 1
    assert external[0].text == "https://cdn.example/vendor.js"
    for script in inline:
        fingerprint_source(script.text)  # must be parseable JS


def test_module_scripts_and_case_insensitive_type():
    scripts = extract_scripts(
        '<SCRIPT TYPE="Module">import x from "m";</SCRIPT>'
        '<script type="TEXT/JAVASCRIPT">f();</script>')
    assert len(scripts) == 2


def test_malformed_html_best_effort():
    scripts = extract_scripts(
        "<div><script>var ok = 1;</script><p <broken <script>var two = 2;")
    texts = [s.text for s in scripts if s.origin is ScriptOrigin.INLINE]
    assert any("ok" in t for t in texts)


def test_external_with_nonexec_type_skipped():
    scripts = extract_scripts(
        '<script src="x.js" type="application/json"></script>')
    assert scripts == []
