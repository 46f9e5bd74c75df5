import json
import os
import subprocess
import sys

from finsite.cli import main

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")
sys.path.insert(0, FIXTURE_DIR)
import regenerate  # noqa: E402


def fx(name):
    return os.path.join(FIXTURE_DIR, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_fixture_files_are_current():
    for name, data in regenerate.build().items():
        with open(fx(name)) as fh:
            assert fh.read() == regenerate.dump(data), name


def test_every_fixture_validates_except_the_broken_one(capsys):
    names = sorted(n for n in os.listdir(FIXTURE_DIR) if n.endswith(".json"))
    code, report, _ = run(capsys, "validate", *map(fx, names))
    assert code == 1 and report["verdict"] == "fails"
    bad = [os.path.basename(f["path"]) for f in report["files"] if f["verdict"] != "holds"]
    assert bad == ["broken_compose.json"]


def test_broken_composition_is_reported(capsys):
    code, report, _ = run(capsys, "validate", fx("broken_compose.json"))
    assert code == 1
    (entry,) = report["files"]
    assert entry["kind"] == "category"
    assert {"kind": "not-composable", "at": ["t", "t"]} in entry["issues"]


def test_stack_check_on_empty_fibration(capsys):
    code, report, _ = run(capsys, "check", "--what", "stack", "--site", fx("two_singleton_cover.json"),
                          "--indexed", fx("empty_fibration.json"))
    assert code == 0
    assert report == {"command": "check", "verdict": "holds", "what": "stack", "witness": None}


def test_sheaf_check_reports_a_witness(capsys):
    code, report, _ = run(capsys, "check", "--what", "sheaf", "--site", fx("two_singleton_cover.json"),
                          "--presheaf", fx("representable_0.json"))
    assert code == 1 and report["witness"][0] == "1"


def test_compare_topologies_finds_the_diagonal_gap(capsys):
    code, report, _ = run(capsys, "compare-topologies", "--relsite", fx("diagonal_cover_relsite.json"))
    assert code == 1
    assert report["equal"] is False
    assert report["gaps"] == [[["1", "*"], [["t", "alpha", "*"]], "missing"]]
    assert report["literal_is_topology"] is False


def test_ring_spectrum_of_z6(capsys, tmp_path):
    out = tmp_path / "sheaf.json"
    code, report, _ = run(capsys, "spectrum", "--kind", "ring", "--in", fx("z6.json"), "--out", str(out))
    assert code == 0
    assert len(report["points"]) == 2 and report["stalk_sizes"] == [2, 3]
    assert all(report["checks"].values())
    assert json.loads(out.read_text()) == report["sheaf"]


def test_mv_spectrum_of_l3(capsys):
    code, report, _ = run(capsys, "spectrum", "--kind", "mv", "--in", fx("l3.json"))
    assert code == 0 and report["stalk_sizes"] == [3]
    assert report["checks"]["distance_identity"]


def test_sheafify_methods_agree(capsys):
    code, report, _ = run(capsys, "sheafify", "--site", fx("two_singleton_cover.json"),
                          "--presheaf", fx("representable_0.json"), "--cross-check")
    assert code == 0
    assert report["cross_check"] == {"locale": True, "adjunction": True}
    assert report["is_sheaf"] and not report["unit_iso"]


def test_pseudo_colimit_of_fibre_arrow(capsys):
    code, report, _ = run(capsys, "colimit", "--kind", "pseudo", "--indexed", fx("fibre_arrow.json"))
    assert code == 0 and set(report["functor"]) == {"(0,x)", "(0,x')", "(1,*)"}


def test_small_bound_gives_undecided(capsys, monkeypatch):
    monkeypatch.setenv("FINSITE_BOUND", "descent=1")
    code, report, _ = run(capsys, "check", "--what", "stack", "--site", fx("two_singleton_cover.json"),
                          "--presheaf", fx("representable_0.json"))
    assert code == 2 and report["verdict"] == "undecided"


def test_missing_file_is_an_input_error(capsys, tmp_path):
    code, report, _ = run(capsys, "validate", str(tmp_path / "absent.json"))
    assert code == 3 and report["verdict"] == "error"
    code, report, _ = run(capsys, "spectrum", "--kind", "ring", "--in", str(tmp_path / "absent.json"))
    assert code == 3


def test_malformed_json_is_an_input_error(capsys, tmp_path):
    p = tmp_path / "junk.json"
    p.write_text("{not json")
    code, report, _ = run(capsys, "validate", str(p))
    assert code == 3


def test_mismatched_presheaf_and_site(capsys):
    code, report, _ = run(capsys, "sheafify", "--site", fx("sierpinski_site.json"),
                          "--presheaf", fx("representable_0.json"))
    assert code == 3 and "different base" in report["error"]


def test_reruns_are_byte_identical(capsys):
    argv = ["compare-topologies", "--relsite", fx("diagonal_cover_relsite.json")]
    _, _, first = run(capsys, *argv)
    _, _, second = run(capsys, *argv)
    assert first == second


def test_console_entry_point_runs():
    r = subprocess.run([sys.executable, "-m", "finsite.cli", "spectrum", "--kind", "ring",
                        "--in", fx("z5.json")], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["points"] == ["{0}"]
    assert "spectrum: holds" in r.stderr
