import json
import subprocess
import sys

import pytest

from lieforest.butcher import get_tableau
from lieforest.cli import main
from lieforest.series import Series


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def lines(out):
    return out.rstrip("\n").split("\n")


@pytest.fixture
def tableau_file(tmp_path):
    def write(name):
        p = tmp_path / f"{name}.json"
        p.write_text(get_tableau(name).to_json())
        return str(p)

    return write


class TestTrees:
    def test_three_nodes(self, capsys):
        code, out, _ = run(capsys, "trees", "--nodes", "3")
        assert code == 0
        assert set(lines(out)) == {"[[[]]]", "[[][]]"}

    def test_count(self, capsys):
        assert run(capsys, "trees", "--nodes", "4", "--nonplanar", "--count")[1] == "4\n"
        assert run(capsys, "trees", "--nodes", "6", "--count")[1] == "42\n"

    def test_single(self, capsys):
        assert run(capsys, "trees", "--nodes", "1")[1] == "[]\n"

    def test_latex(self, capsys):
        assert lines(run(capsys, "trees", "--nodes", "2", "--latex")[1]) == [r"\aabb"]

    @pytest.mark.parametrize("n", ["0", "11", "x"])
    def test_bad_nodes(self, capsys, n):
        with pytest.raises(SystemExit) as e:
            main(["trees", "--nodes", n])
        assert e.value.code == 2


class TestProducts:
    def test_graft(self, capsys):
        assert run(capsys, "graft", "[]", "[]")[1] == "1\t[[]]\n"

    def test_gl(self, capsys):
        assert lines(run(capsys, "gl", "[]", "[]")[1]) == ["1\t[] []", "1\t[[]]"]

    def test_gl_json(self, capsys):
        out = run(capsys, "gl", "[]", "[]", "--output", "json")[1]
        assert json.loads(out) == {"2": [{"coeff": "1", "forest": "[] []"}, {"coeff": "1", "forest": "[[]]"}]}

    def test_coproduct(self, capsys):
        assert set(lines(run(capsys, "coproduct", "[]")[1])) == {"1\t1\t[]", "1\t[]\t1"}

    def test_dual_coproduct(self, capsys):
        out = lines(run(capsys, "dual-coproduct", "[[]]")[1])
        assert "1\t[]\t[]" in out

    def test_parse_error(self, capsys):
        code, out, err = run(capsys, "graft", "[[]", "[]")
        assert code == 2 and out == ""
        assert "position 3" in err


class TestExp:
    def test_star(self, capsys):
        assert lines(run(capsys, "exp", "--star", "--order", "2")[1]) == [
            "1\t1", "1\t[]", "1/2\t[] []", "1/2\t[[]]",
        ]

    def test_concat(self, capsys):
        assert lines(run(capsys, "exp", "--order", "2")[1]) == ["1\t1", "1\t[]", "1/2\t[] []"]

    def test_phi(self, capsys):
        assert lines(run(capsys, "exp", "--phi", "--order", "2")[1]) == [
            "1\t1", "1/2\t[]", "1/6\t[] []", "1/6\t[[]]",
        ]

    def test_exclusive(self, capsys):
        assert run(capsys, "exp", "--phi", "--star", "--order", "2")[0] == 2

    @pytest.mark.parametrize("flag", [[], ["--star"], ["--phi"]])
    def test_lines_round_trip(self, capsys, flag):
        out = run(capsys, "exp", *flag, "--order", "5")[1]
        s = Series.from_text(out, truncation=5)
        assert s.to_text() + "\n" == out


class TestOrderConditions:
    def test_text(self, capsys):
        out = lines(run(capsys, "order-conditions", "--order", "2")[1])
        assert out == ["[]\tbe=1\tΣ_{i} b_i = 1", "[[]]\tbAe=1/2\tΣ_{ij} b_i a_{ij} = 1/2"]

    def test_json(self, capsys):
        recs = json.loads(run(capsys, "order-conditions", "--order", "4", "--format", "json")[1])
        assert len(recs) == 8
        assert set(recs[0]) == {"tree", "compact", "componentwise", "rhs"}

    def test_five(self, capsys):
        assert len(lines(run(capsys, "order-conditions", "--order", "5")[1])) == 17

    def test_latex(self, capsys):
        out = lines(run(capsys, "order-conditions", "--order", "3", "--format", "latex")[1])
        assert out[0].startswith(r"\begin{tabular}") and out[-1].endswith(r"\end{tabular}")
        assert len(out) == 2 + 4 + 1


class TestCheck:
    def test_rk4_order_four(self, capsys, tableau_file):
        code, out, _ = run(capsys, "check", "--tableau", tableau_file("rk4"), "--order", "4", "--method", "rk")
        assert code == 0 and out == "rk4: method rk, order 4\n"

    def test_rk4_order_five(self, capsys, tableau_file):
        code, out, _ = run(capsys, "check", "--tableau", tableau_file("rk4"), "--order", "5")
        assert code == 1
        first, second = lines(out)
        assert first == "rk4: method rk, order 4"
        tree = second.split("\t")[0].removeprefix("violated: ")
        assert tree.count("[") == 5

    def test_euler_rkmk(self, capsys, tableau_file):
        assert run(capsys, "check", "--tableau", tableau_file("euler"), "--order", "1", "--method", "rkmk")[0] == 0

    def test_builtin_postlie(self, capsys):
        code, out, _ = run(capsys, "check", "--builtin", "rk4", "--order", "3", "--method", "rk-postlie")
        assert code == 1 and out.startswith("rk4: method rk-postlie, order 2\n")

    def test_malformed_file(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"name": "x", "s": 2, "a": [["0"]], "b": ["1"]}')
        assert run(capsys, "check", "--tableau", str(p), "--order", "1")[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "check", "--tableau", str(tmp_path / "none.json"), "--order", "1")[0] == 2

    def test_tableau_command(self, capsys):
        out = run(capsys, "tableau", "rk4")[1]
        assert json.loads(out)["b"] == ["1/6", "1/3", "1/3", "1/6"]


def test_byte_deterministic_subprocess():
    cmd = [sys.executable, "-m", "lieforest", "exp", "--star", "--order", "4"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first.startswith(b"1\t1\n")
