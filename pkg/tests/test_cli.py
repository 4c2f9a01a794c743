import json
import subprocess
import sys

import pytest

from poset_forge.cli import main


@pytest.fixture
def run(capsys, data_dir, monkeypatch):
    monkeypatch.chdir(data_dir)

    def _run(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def run_json(run, *argv):
    code, out, _ = run(*argv, "--json")
    assert code == 0
    return json.loads(out)


class TestPoset:
    def test_homology_circle(self, run):
        assert run("poset", "homology", "crown4.poset") == (0, "H_0 = Z\nH_1 = Z\n", "")

    def test_homology_json(self, run):
        data = run_json(run, "poset", "homology", "sphere.poset")
        assert [(h["degree"], h["free_rank"], h["torsion"]) for h in data["homology"]] == [(0, 1, []), (1, 0, []), (2, 1, [])]

    def test_info(self, run):
        code, out, _ = run("poset", "info", "sphere.poset")
        assert code == 0 and "automorphisms: 8" in out and "components: 1" in out

    def test_cohomology_order(self, run):
        code, out, _ = run("poset", "cohomology", "sphere.poset", "--degree", "2", "--field", "5")
        assert code == 0 and "order: 4" in out

    def test_cohomology_of_coboundary(self, run):
        code, out, _ = run("poset", "cohomology", "sphere.poset", "--degree", "2", "--field", "5", "--cochain", "sphere_cobound.cocycle")
        assert code == 0 and "cochain class: trivial" in out

    def test_semigroup(self, run):
        code, out, _ = run("poset", "semigroup", "chain2.poset")
        assert code == 0 and out.splitlines()[-1] == "0 1 2 3 4"


class TestDeform:
    def test_trivial(self, run):
        assert run("deform", "trivial", "sphere.poset", "sphere_gen.cocycle", "--field", "5")[1] == "trivial: no\n"
        assert run("deform", "trivial", "sphere.poset", "sphere_cobound.cocycle", "--field", "5")[1].startswith("trivial: yes")

    def test_iso(self, run):
        # g and g^3 are swapped by an orientation-reversing automorphism
        assert "isomorphic: yes" in run("deform", "iso", "sphere_gen.cocycle", "sphere_cube.cocycle", "--field", "5")[1]
        assert "isomorphic: no" in run("deform", "iso", "sphere_gen.cocycle", "sphere_sq.cocycle", "--field", "5")[1]

    def test_build_then_recognize(self, run, tmp_path):
        table = run_json(run, "deform", "build", "sphere.poset", "sphere_gen.cocycle", "--field", "5")
        assert table["dimension"] == 18
        path = tmp_path / "table.json"
        path.write_text(json.dumps(table))
        code, out, _ = run("deform", "recognize", str(path), "--field", "5")
        assert code == 0 and "recognized" in out.lower()

    def test_not_a_cocycle(self, run, tmp_path):
        path = tmp_path / "bad.cocycle"
        path.write_text("a a b : 2\n")
        code, out, err = run("deform", "build", "chain3.poset", str(path), "--field", "5")
        assert code == 1 and out == "" and err.startswith("error:") and err.count("\n") == 1


class TestThin:
    def test_classify(self, run):
        code, out, _ = run("thin", "classify", "chain2.poset", "--field", "5")
        assert code == 0 and out.startswith("5 classes over F_5")

    def test_classify_json_count(self, run):
        assert run_json(run, "thin", "classify", "a3.poset", "--field", "5")["count"] == 13

    def test_iso(self, run):
        code, out, _ = run("thin", "iso", "a3_defining.rep", "a3_scaled.rep")
        assert code == 0 and out.startswith("isomorphic: yes")

    def test_tensor(self, run):
        data = run_json(run, "thin", "tensor", "a3_ab.rep", "a3_ac.rep")
        assert data["dimension_vector"] == [0, 1, 0]

    def test_access(self, run):
        code, out, _ = run("thin", "access", "sphere_defining.rep")
        assert code == 0 and len(out.splitlines()) == 6

    def test_sublattice(self, run):
        code, out, _ = run("thin", "sublattice", "chain3.poset", "c")
        assert code == 0 and out.startswith("4 submodules of P(c), distributive: yes")


class TestMatrix:
    def test_canon_json(self, run):
        data = run_json(run, "matrix", "canon", "worked44.mat", "--field", "Q")
        assert sorted(map(tuple, data["tree_arrows"])) == [(3, 1), (3, 4), (4, 2)]
        assert data["C"][0][1] == "39/667"

    def test_orbit(self, run):
        assert len(run_json(run, "matrix", "orbit", "worked44.mat")["invariant"]) == 8

    def test_conj(self, run):
        assert run("matrix", "conj", "worked44.mat", "worked44.mat")[1].startswith("conjugate: yes")


class TestK0:
    def test_chain(self, run):
        code, out, _ = run("k0", "table", "chain3.poset")
        assert code == 0 and out.splitlines()[1] == "a | a a a"

    def test_crown_rejected(self, run):
        code, out, err = run("k0", "table", "crown4.poset")
        assert code == 1 and err == "error: c and d have no meet (maximal lower bounds: a, b)\n"


class TestExitCodes:
    @pytest.mark.parametrize("argv", [[], ["poset"], ["poset", "bogus"], ["poset", "cohomology", "sphere.poset", "--degree", "2"]])
    def test_usage(self, run, argv):
        code, out, err = run(*argv)
        assert code == 2 and "usage:" in err

    def test_missing_file(self, run):
        code, _, err = run("poset", "homology", "nonexistent.poset")
        assert code == 1 and "cannot read" in err

    def test_cycle_detected(self, run, tmp_path):
        path = tmp_path / "cyc.poset"
        path.write_text("elements: a b\ncovers: a<b b<a\n")
        assert run("poset", "info", str(path))[0] == 1


@pytest.mark.parametrize("argv", [
    ["poset", "info", "sphere.poset"],
    ["thin", "classify", "crown4.poset", "--field", "3"],
    ["matrix", "canon", "worked44.mat"],
    ["poset", "semigroup", "a3.poset"],
])
def test_json_is_deterministic(run, argv):
    first = run(*argv, "--json")
    assert first[0] == 0
    json.loads(first[1])
    assert run(*argv, "--json") == first


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "poset_forge", "poset", "homology", "crown4.poset"],
                          cwd=data_dir, capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "H_0 = Z\nH_1 = Z\n"
