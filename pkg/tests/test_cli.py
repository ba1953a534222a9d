import io

import pytest

from pcfilters import fspec
from pcfilters.cli import run


def _run(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def _write(tmp_path, text):
    p = tmp_path / "case.fspec"
    p.write_text(text, encoding="utf-8")
    return str(p)


HEIS = """
[monoid]
factors = (3,1)
order = direct

[group]
preset = heisenberg 3

[filter]
default = 1
at 0 = G
at 1 = G
at 2 = Z
"""


def test_validate_bundled():
    code, text = _run("validate", "z60")
    assert code == 0
    assert "valid: true" in text


def test_hasse_dot():
    code, text = _run("hasse", "z60")
    assert code == 0
    assert text.startswith("digraph")
    assert text.count("[label=") == 9
    assert text.count("->") == 13


def test_hasse_dot_file(tmp_path):
    dot = tmp_path / "l.dot"
    code, text = _run("hasse", "z60", "--dot", str(dot))
    assert code == 0
    assert dot.read_text().count("->") == 13


def test_lie_table_backend():
    code, text = _run("lie", "gl27")
    assert code == 0
    assert "e1: [6]" in text and "e2: [6]" in text


def test_bijection():
    code, text = _run("bijection", "heis3")
    assert code == 0
    assert "bijective: true" in text


def test_inert_exit_code():
    code, text = _run("inert", "inert_boundary")
    assert code == 1
    assert "inert_free: false" in text


def test_written_file(tmp_path):
    code, text = _run("validate", _write(tmp_path, HEIS))
    assert code == 0 and "valid: true" in text


def test_invalid_filter_exit_code(tmp_path):
    code, text = _run("validate", _write(tmp_path, HEIS.replace("at 2 = Z", "at 2 = G")))
    assert code == 1
    assert "valid: false" in text


def test_index_out_of_monoid_location(tmp_path):
    path = _write(tmp_path, HEIS.replace("at 2 = Z", "at 7 = Z"))
    with pytest.raises(fspec.IndexOutOfMonoid) as err:
        fspec.load(path)
    assert err.value.line == 13
    assert err.value.column == 4
    code, text = _run("validate", path)
    assert code == 2
    assert "IndexOutOfMonoid" in text


def test_unresolved_name(tmp_path):
    with pytest.raises(fspec.UnresolvedName):
        fspec.load(_write(tmp_path, HEIS.replace("at 2 = Z", "at 2 = W")))


def test_empty_file(tmp_path):
    with pytest.raises(fspec.FspecSyntaxError):
        fspec.load(_write(tmp_path, ""))
    assert _run("validate", _write(tmp_path, ""))[0] == 2


def test_unknown_section(tmp_path):
    with pytest.raises(fspec.FspecSyntaxError):
        fspec.load(_write(tmp_path, "[nonsense]\n" + HEIS))


def test_report_file(tmp_path):
    rep = tmp_path / "r.txt"
    code, _ = _run("boundary", "heis3", "--report", str(rep))
    assert code == 0
    assert "exit: 0" in rep.read_text()
