from fractions import Fraction as F

import pytest

import laminal as L
from laminal.cli import main


@pytest.fixture()
def ex1_file(tmp_path, ex1):
    path = tmp_path / "ex1.model"
    path.write_text(L.format_model(ex1))
    return str(path)


@pytest.fixture()
def ex2_file(tmp_path, ex2):
    path = tmp_path / "ex2.model"
    path.write_text(L.format_model(ex2))
    return str(path)


@pytest.fixture()
def one_theta_file(tmp_path):
    m = L.build_model(("t",), ("1", "2"), [[F(1, 2), F(1, 2)]], "flat2")
    path = tmp_path / "flat.model"
    path.write_text(L.format_model(m))
    return str(path)


class TestAnalyze:
    def test_example1_report(self, ex1_file, capsys):
        assert main(["analyze", ex1_file]) == 0
        out = capsys.readouterr().out
        idx = out.index("minimal ancillaries")
        tail = out[idx:out.index("laminal ancillary")]
        for text in ("1,2,3,4,5,6,7", "1,2,3,4,5,6|7", "1,2,3,4,7|5,6",
                     "1,2,3,4|5,6,7", "1,2,3,4|5,6|7"):
            assert text in tail
        assert "count: 25" in out
        assert "atoms: {7}; {5,6}; {1,2,3,4}" in out

    def test_one_theta_unrestricted(self, one_theta_file, capsys):
        assert main(["analyze", one_theta_file, "--no-within-mss"]) == 0
        out = capsys.readouterr().out
        assert "count: 2" in out
        assert "1|2" in out  # laminal is the discrete partition

    def test_one_theta_within_mss_sees_only_the_trivial(self, one_theta_file, capsys):
        assert main(["analyze", one_theta_file]) == 0
        out = capsys.readouterr().out
        assert "count: 1" in out

    def test_cap_exit_code(self, tmp_path, capsys):
        n = 14
        total = n * (n + 1) // 2
        rows = [[F(i + 1, total) for i in range(n)],
                [F(n - i, total) for i in range(n)]]
        m = L.build_model(("a", "b"), tuple(str(i + 1) for i in range(n)), rows,
                          "wide")
        path = tmp_path / "wide.model"
        path.write_text(L.format_model(m))
        assert main(["analyze", str(path)]) == 3

    def test_parse_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.model"
        path.write_text("model bad\nthetas a\nsamples 1 2\na 1/2 1/3\n")
        assert main(["analyze", str(path)]) == 2
        assert main(["analyze", str(tmp_path / "missing.model")]) == 2

    def test_large_model_with_small_mss_analyzes_within(self, tmp_path, ex1, capsys):
        # 14 points: the first seven halve the two-maximal example, the rest
        # are exchangeable padding that collapses into one sufficiency class,
        # so the restricted lattice stays enumerable while n = 14 does not.
        rows = [
            [v / 2 for v in row] + [F(1, 14)] * 7
            for row in ex1.probs
        ]
        m = L.build_model(("theta1", "theta2"),
                          tuple(str(i + 1) for i in range(14)), rows, "wide14")
        path = tmp_path / "wide14.model"
        path.write_text(L.format_model(m))
        assert main(["analyze", str(path), "--no-within-mss"]) == 3
        capsys.readouterr()
        assert main(["analyze", str(path)]) == 0
        out = capsys.readouterr().out
        assert "1,2,3,4|5,6|7,8,9,10,11,12,13,14" in out  # laminal analogue
        assert "reweight" in out  # witness section populated


class TestEvidence:
    def test_sc_on_example1(self, ex1_file, capsys):
        assert main(["evidence", ex1_file, "--observed", "5",
                     "--function", "sc"]) == 0
        out = capsys.readouterr().out
        assert "{5,6}" in out
        assert "1/3" in out and "2/3" in out
        assert "PASS" in out

    def test_ms_on_example2(self, ex2_file, capsys):
        assert main(["evidence", ex2_file, "--observed", "1",
                     "--function", "ms"]) == 0
        out = capsys.readouterr().out
        assert "{1}" in out and "{4}" in out
        assert "5/12" in out

    def test_unknown_observed_label(self, ex1_file, capsys):
        assert main(["evidence", ex1_file, "--observed", "9"]) == 2


class TestCompare:
    def test_self_comparison_is_identity(self, ex1_file, capsys):
        assert main(["compare", ex1_file, ex1_file, "--observed1", "5",
                     "--observed2", "5", "--relation", "sc"]) == 0
        out = capsys.readouterr().out
        assert "EQUIVALENT" in out and "NOT-EQUIVALENT" not in out
        assert "identity relabeling" in out

    def test_observed_5_vs_6_not_s_equivalent(self, ex1_file, capsys):
        assert main(["compare", ex1_file, ex1_file, "--observed1", "5",
                     "--observed2", "6", "--relation", "s"]) == 0
        out = capsys.readouterr().out
        assert "NOT-EQUIVALENT" in out
        assert "obstruction" in out

    def test_theta_mismatch_exits_2(self, ex1_file, tmp_path, capsys):
        other = L.build_model(("p", "q"), ("1", "2"),
                              [[F(1, 2), F(1, 2)], [F(1, 4), F(3, 4)]], "other")
        path = tmp_path / "other.model"
        path.write_text(L.format_model(other))
        assert main(["compare", ex1_file, str(path), "--observed1", "1",
                     "--observed2", "1", "--relation", "s"]) == 2


class TestReproduce:
    def test_example2_passes(self, capsys):
        assert main(["reproduce", "example2"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") >= 2 and "FAIL" not in out

    def test_example3_csv_values(self, tmp_path, capsys):
        assert main(["reproduce", "example3", "--out", str(tmp_path)]) == 0
        csv_text = (tmp_path / "figure1.csv").read_text()
        assert csv_text.splitlines()[0] == \
            "statistic,block,scenario,p_theta1,p_theta2,likelihood_ratio,decimal_lr"
        assert '"1,3,5,6",reweighted,479/1250,403/1000,1916/2015' in csv_text
        assert '"2,4",reweighted,217/2500,67/1000,434/335' in csv_text
        assert 'L,"1,2,3,4",reweighted,1/5,1/5,1,1' in csv_text

    def test_non_default_epsilon_still_passes(self, capsys):
        assert main(["reproduce", "all", "--epsilon", "3/400"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out

    def test_epsilon_out_of_range_exits_2(self, capsys):
        assert main(["reproduce", "example1", "--epsilon", "1/32"]) == 2

    def test_determinism_across_runs(self, tmp_path, capsys):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["reproduce", "all", "--epsilon", "1/100",
                     "--out", str(out1)]) == 0
        assert main(["reproduce", "all", "--epsilon", "1/100",
                     "--out", str(out2)]) == 0
        assert (out1 / "report.txt").read_bytes() == (out2 / "report.txt").read_bytes()
        assert (out1 / "figure1.csv").read_bytes() == (out2 / "figure1.csv").read_bytes()


class TestAudit:
    def test_sc_audit_passes(self, capsys):
        assert main(["audit", "--relation", "sc", "--corpus-seed", "3",
                     "--corpus-size", "6"]) == 0
        out = capsys.readouterr().out
        assert "equivalence relation on this corpus: yes" in out

    def test_s_audit_passes(self, capsys):
        assert main(["audit", "--relation", "s", "--corpus-seed", "3",
                     "--corpus-size", "6"]) == 0

    def test_classical_audit_finds_the_violation(self, capsys):
        assert main(["audit", "--relation", "c", "--corpus-seed", "3",
                     "--corpus-size", "4"]) == 0
        out = capsys.readouterr().out
        assert "equivalence relation on this corpus: NO" in out
        assert "violation witnesses found" in out

    def test_audit_report_is_deterministic(self, capsys):
        args = ["audit", "--relation", "sc", "--corpus-seed", "9",
                "--corpus-size", "5"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        assert capsys.readouterr().out == first
