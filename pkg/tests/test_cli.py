import json

import pytest

from toricwonder import ParseError
from toricwonder.cli import main, parse_file

DOUBLED_SQUARE = """\
# doubled square
name = doubled-square
rank = 2
char = [2, 0] ; 0
char = [0, 2] ; 0
char = [1, 1] ; 0
char = [1, -1] ; 0
"""

TWO_LINES = """\
rank = 2
char = [1, 1] ; 0
char = [1, -1] ; 0
"""


@pytest.fixture()
def doubled_square_file(tmp_path):
    path = tmp_path / "doubled_square.arr"
    path.write_text(DOUBLED_SQUARE)
    return str(path)


@pytest.fixture()
def two_lines_file(tmp_path):
    path = tmp_path / "two_lines.arr"
    path.write_text(TWO_LINES)
    return str(path)


class TestParseFile:
    def test_doubled_square_normalizes_to_six(self, doubled_square_file):
        arr, name = parse_file(doubled_square_file)
        assert name == "doubled-square"
        assert len(arr.characters) == 6

    def test_two_lines(self, two_lines_file):
        arr, _ = parse_file(two_lines_file)
        assert [c.vector for c in arr.characters] == [(1, 1), (1, -1)]

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.arr"
        path.write_text("")
        with pytest.raises(ParseError):
            parse_file(str(path))

    def test_bad_line_number(self, tmp_path):
        path = tmp_path / "bad.arr"
        path.write_text("rank = 2\nchar = [1, 1]\n")
        with pytest.raises(ParseError, match="line 2"):
            parse_file(str(path))

    def test_no_normalize_rejects(self, doubled_square_file):
        with pytest.raises(ParseError, match=r"\[2, 0\]"):
            parse_file(doubled_square_file, no_normalize=True)


class TestCommands:
    def test_points(self, doubled_square_file, capsys):
        assert main(["points", doubled_square_file]) == 0
        out = capsys.readouterr().out
        assert "points (4):" in out
        assert "(0, 0)" in out and "(1/2, 1/2)" in out
        assert "(0, 1/2)" in out and "(1/2, 0)" in out

    def test_divisor_empty(self, two_lines_file, capsys):
        # L0, L1 are the two hypersurfaces in canonical order
        assert main(["divisor", two_lines_file, "--set", "L0,L1"]) == 0
        out = capsys.readouterr().out
        assert "EMPTY (not nested)" in out

    def test_divisor_nested(self, two_lines_file, capsys):
        assert main(["divisor", two_lines_file, "--set", "L0,L2"]) == 0
        assert "dim 0" in capsys.readouterr().out

    def test_charts_verify(self, two_lines_file, capsys):
        assert main(["charts", two_lines_file, "--verify", "--seed", "42"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out

    def test_layers_and_irreducible(self, two_lines_file, capsys):
        assert main(["layers", two_lines_file]) == 0
        out = capsys.readouterr().out
        assert "hasse edges" in out
        assert main(["irreducible", two_lines_file]) == 0
        out = capsys.readouterr().out
        assert out.count("[member]") == 4

    def test_nested_max(self, two_lines_file, capsys):
        assert main(["nested", two_lines_file, "--max"]) == 0
        out = capsys.readouterr().out
        assert "maximal nested sets (4):" in out

    def test_curve(self, two_lines_file, capsys):
        code = main(
            ["curve", two_lines_file, "--point", "L2", "--jets", "1,1;1,0"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "limit chart" in out

    def test_unknown_command(self, two_lines_file, capsys):
        assert main(["frobnicate", two_lines_file]) == 1

    def test_domain_error_exit_one(self, two_lines_file, capsys):
        assert main(["divisor", two_lines_file, "--set", "L99"]) == 1

    def test_missing_file(self, capsys):
        assert main(["points", "/nonexistent.arr"]) == 1


class TestDeterminism:
    def test_byte_identical(self, doubled_square_file, capsys):
        main(["charts", doubled_square_file, "--verify", "--seed", "7", "--samples", "20"])
        first = capsys.readouterr().out
        main(["charts", doubled_square_file, "--verify", "--seed", "7", "--samples", "20"])
        second = capsys.readouterr().out
        assert first == second

    def test_json_mode(self, two_lines_file, capsys):
        assert main(["points", two_lines_file, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["command"] == "points"
        assert len(doc["points"]) == 2
        assert len(doc["header"]["layers"]) == 4
