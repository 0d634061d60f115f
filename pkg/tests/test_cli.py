import json

import pytest

from spherelp.cli import main
from spherelp.serialize import trunc3


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBoundCommand:
    def test_m2_value(self, capsys):
        code, out, _ = run(capsys, "bound", "--n", "7", "--ell", "-1",
                           "--s", "0.3333333333", "--k", "2", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert abs(doc["bound"]["value"] - 56) < 1e-4  # s given to 10 digits only
        assert doc["bound"]["checks"]["f2k_positive_definite"]

    def test_auto_degree_selection(self, capsys):
        code, out, _ = run(capsys, "bound", "--n", "4", "--ell", "-0.95",
                           "--s", "0.0", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["bound"]["k"] == 1
        assert abs(doc["bound"]["value"] - 7.8) < 1e-12

    def test_missing_s_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["bound", "--n", "7", "--ell", "-1"])
        assert exc.value.code == 2

    def test_precondition_exit_code(self, capsys):
        code, _, err = run(capsys, "bound", "--n", "4", "--ell", "-0.3",
                           "--s", "0.5", "--k", "2")
        assert code == 2
        assert "error" in err

    def test_dump_certificate_includes_family(self, capsys):
        code, out, _ = run(capsys, "bound", "--n", "5", "--ell", "-0.85", "--s", "0.7",
                           "--k", "4", "--format", "json", "--dump-certificate")
        assert code == 0
        doc = json.loads(out)
        fam = doc["family_1l"]
        assert fam["kind"] == "signed_1l"
        assert set(fam) >= {"n", "kind", "params", "a", "b", "c", "r", "eta", "zeros"}
        assert len(doc["polynomial"]["gegenbauer_coeffs"]) == 9

    def test_precision_flag_validated(self, capsys):
        code, _, err = run(capsys, "bound", "--n", "7", "--ell", "-1",
                           "--s", "0.33", "--k", "2", "--precision", "10")
        assert code == 2
        assert "precision" in err


class TestTableCommand:
    def test_small_block_matches_reference_cells(self, capsys, tmp_path):
        side = tmp_path / "cells.json"
        code, out, _ = run(capsys, "table", "--n-min", "3", "--n-max", "3",
                           "--k-min", "1", "--k-max", "2",
                           "--json-sidecar", str(side))
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "row,2,1"
        ell_row = lines[1].split(",")
        root_row = lines[2].split(",")
        assert ell_row[0] == "ell_star(3)"
        assert abs(float(ell_row[2]) - (-0.577)) <= 0.002
        assert abs(float(ell_row[1]) - (-0.787)) <= 0.002
        assert abs(float(root_row[2]) - (-0.5)) <= 0.001
        assert abs(float(root_row[1]) - (-0.754)) <= 0.001
        doc = json.loads(side.read_text())
        cell = doc["cells"]["3"]["1"]["ell_star"]
        assert cell["bisected"] and cell["value"] < cell["ceiling"]

    def test_deterministic_output(self, capsys):
        a = run(capsys, "table", "--n-min", "4", "--n-max", "4",
                "--k-min", "1", "--k-max", "1", "--format", "json")
        b = run(capsys, "table", "--n-min", "4", "--n-max", "4",
                "--k-min", "1", "--k-max", "1", "--format", "json")
        assert a == b


class TestFigureCommand:
    def test_columns_and_blanks(self, capsys):
        code, out, _ = run(capsys, "figure", "--n", "4", "--ell", "-0.95",
                           "--s-min", "-0.5", "--s-max", "0.35", "--points", "18")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "s,L1,L3,L5,L7,L2,L4,L6,L8"
        rows = [l.split(",") for l in lines[1:]]
        # leftmost point: odd degree-1 defined, subinterval degree-2 not yet
        assert rows[0][1] != "" and rows[0][5] == ""
        # near s = 0.3: inside the degree-4 window, degree-2 expired
        near = min(rows, key=lambda r: abs(float(r[0]) - 0.3))
        assert near[6] != "" and near[5] == ""

    def test_json_carries_crossovers(self, capsys):
        code, out, _ = run(capsys, "figure", "--n", "4", "--ell", "-0.95",
                           "--s-min", "-0.3", "--s-max", "0.1", "--points", "5",
                           "--format", "json")
        assert code == 0
        doc = json.loads(out)
        xs = {c["k"]: c["s"] for c in doc["crossovers"]}
        assert abs(xs[1] - 0.017857) < 1e-4
        assert abs(xs[2] - 0.4195) < 2e-3


class TestEnergyCommand:
    def test_m2_nodes(self, capsys):
        code, out, _ = run(capsys, "energy", "--n", "7", "--M", "56", "--ell", "-1",
                           "--potential", "riesz:1", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        nodes = doc["energy"]["nodes"]
        assert abs(nodes[0] + 1) < 1e-12
        assert abs(nodes[1] + 1 / 3) < 1e-9
        assert abs(nodes[2] - 1 / 3) < 1e-9
        assert doc["energy"]["status"] == "ok"

    def test_constant_potential_pair_count(self, capsys, tmp_path):
        table = tmp_path / "const.dat"
        table.write_text("-1 1 0\n0 1 0\n1 1 0\n")
        code, out, _ = run(capsys, "energy", "--n", "7", "--M", "56", "--ell", "-1",
                           "--potential", f"file:{table}", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["energy"]["value"] - (56 * 56 - 56)) < 1e-6
        assert doc["energy"]["hprime_approximated"] is False

    def test_ladder_csv(self, capsys):
        code, out, _ = run(capsys, "energy", "--n", "7", "--M", "56", "--ell", "-1",
                           "--potential", "riesz:1", "--M-ladder", "40,56")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "M,k,s,bound"
        assert len(lines) == 3

    def test_out_of_range_exit_code(self, capsys):
        code, _, err = run(capsys, "energy", "--n", "7", "--M", "80", "--ell", "-1",
                           "--potential", "riesz:1")
        assert code == 2
        assert "achievable" in err


class TestKreinCommand:
    def test_single_check_pass_and_fail(self, capsys):
        code, out, _ = run(capsys, "krein", "--n", "4", "--k", "7", "--ell", "-0.95")
        assert code == 0 and "pass" in out
        code, out, _ = run(capsys, "krein", "--n", "4", "--k", "8", "--ell", "-0.95")
        assert code == 0 and "fail" in out

    def test_sweep_matches_reference_value(self, capsys):
        code, out, _ = run(capsys, "krein", "--n", "6", "--k", "5", "--sweep",
                           "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["ell_star"]["value_trunc3"] - (-0.853)) <= 0.002

    def test_scan_reports_points(self, capsys):
        code, out, _ = run(capsys, "krein", "--n", "3", "--k", "1", "--scan", "5",
                           "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["all_pass"] and len(doc["points"]) == 5


class TestSerializeHelpers:
    def test_trunc3_truncates_toward_zero(self):
        assert trunc3(-0.7236) == -0.723
        assert trunc3(0.7239) == 0.723
        assert trunc3(-0.5) == -0.5
        # representation fuzz around exact thousandths is absorbed
        import mpmath as mp

        assert trunc3(mp.mpf("-0.4") + mp.mpf("1e-30")) == -0.4
        assert trunc3(mp.mpf("-0.4") - mp.mpf("1e-30")) == -0.4
