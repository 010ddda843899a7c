import json
import os
from dataclasses import replace

import pytest

from mpres import io as mio
from mpres.cli import main
from mpres.corpus import torus_7, triangle
from mpres.resolution import identity_stage, verify_resolution
from mpres.tower import tower_stage_from_resolution, verify_tower_stage


@pytest.fixture()
def corpus_dir(tmp_path):
    mio.save_complex(torus_7(), str(tmp_path / "torus7.json"))
    mio.save_complex(triangle(), str(tmp_path / "triangle.json"))
    return tmp_path


def test_homology_rank_text(corpus_dir, capsys):
    code = main(["homology", "--prime", "2", "--dim", "1",
                 str(corpus_dir / "torus7.json")])
    assert code == 0
    assert capsys.readouterr().out.strip() == "rank 2"


def test_homology_all_ranks_json(corpus_dir, capsys):
    code = main(["homology", "--prime", "3",
                 str(corpus_dir / "torus7.json"), "--report", "json"])
    assert code == 0
    assert json.loads(capsys.readouterr().out) == {
        "betti": [1, 2, 1], "prime": 3}


def test_homology_dim_out_of_range(corpus_dir, capsys):
    code = main(["homology", "--prime", "2", "--dim", "5",
                 str(corpus_dir / "torus7.json")])
    assert code == 0
    assert capsys.readouterr().out.strip() == "rank 0"


def test_composite_prime_rejected(corpus_dir, capsys):
    code = main(["cover", "--prime", "4", str(corpus_dir / "torus7.json")])
    assert code == 1
    assert "4 is not prime" in capsys.readouterr().err


def test_missing_input_is_exit_one(corpus_dir, capsys):
    code = main(["homology", "--prime", "2",
                 str(corpus_dir / "absent.json")])
    assert code == 1
    assert "no such file" in capsys.readouterr().err


def test_usage_error_is_exit_one(corpus_dir):
    with pytest.raises(SystemExit) as exc:
        main(["resolve", str(corpus_dir / "triangle.json")])
    assert exc.value.code == 1


def test_cover_writes_directory(corpus_dir, capsys):
    out = str(corpus_dir / "cov")
    code = main(["cover", "--prime", "2",
                 str(corpus_dir / "torus7.json"), "-o", out])
    assert code == 0
    for name in ("base.json", "total.json", "cover.json", "report.json"):
        assert os.path.exists(os.path.join(out, name))
    report = json.loads(capsys.readouterr().out)
    assert all(c["status"] == "pass" for c in report["checks"])


def test_resolve_and_verify(corpus_dir, capsys):
    out = str(corpus_dir / "res")
    code = main(["resolve", "--prime", "2",
                 str(corpus_dir / "triangle.json"), "-o", out])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["checks"]) == 10
    assert all(c["status"] == "pass" for c in report["checks"])

    assert main(["verify", out]) == 0
    capsys.readouterr()


def test_verify_failing_stage_is_exit_two(corpus_dir, capsys):
    bad = identity_stage(triangle(), 2)
    bad = replace(bad, report=verify_resolution(bad))
    out = str(corpus_dir / "bad")
    mio.save_resolution_stage(bad, out)
    code = main(["verify", out, "--report", "text"])
    assert code == 2
    text = capsys.readouterr().out
    assert "FAIL boundary_preimage_iso (0, 1, 2)" in text


def test_verify_failing_tower_stage(corpus_dir, capsys):
    stage = tower_stage_from_resolution(identity_stage(triangle(), 2))
    stage = replace(stage, report=verify_tower_stage(stage))
    out = str(corpus_dir / "badtower")
    mio.save_tower_stage(stage, out)
    code = main(["verify", out])
    assert code == 2
    report = json.loads(capsys.readouterr().out)
    failing = [c for c in report["checks"] if c["status"] == "fail"]
    assert [c["simplex"] for c in failing] == ["(0, 1, 2)"]


def test_tower_command_and_verify(corpus_dir, capsys):
    out = str(corpus_dir / "tw")
    code = main(["tower", "--prime", "2", "--depth", "1",
                 str(corpus_dir / "triangle.json"), "-o", out])
    assert code == 0
    assert os.path.exists(os.path.join(out, "manifest.json"))
    capsys.readouterr()
    assert main(["verify", out]) == 0
    capsys.readouterr()


def test_pullback_command(corpus_dir, capsys):
    res = str(corpus_dir / "res_for_pb")
    main(["resolve", "--prime", "2", str(corpus_dir / "triangle.json"),
          "-o", res])
    capsys.readouterr()
    out = str(corpus_dir / "pb")
    code = main(["pullback", os.path.join(res, "orbit_map.json"),
                 os.path.join(res, "orbit_map.json"), "-o", out])
    assert code == 0
    product = mio.load_complex(os.path.join(out, "product.json"))
    left = mio.load_map(os.path.join(out, "to_left.json"))
    assert left.domain == product
    assert capsys.readouterr().out.startswith("pullback: 16 vertices")


def test_subdivide_command(corpus_dir, capsys):
    out = str(corpus_dir / "bary")
    code = main(["subdivide", str(corpus_dir / "triangle.json"), "-o", out])
    assert code == 0
    sub = mio.load_subdivision(out)
    assert sub.complex.n_vertices == 7
    capsys.readouterr()


def test_verify_random_suite(corpus_dir, capsys):
    code = main(["verify", "--random", "--count", "2", "--seed", "5",
                 "--prime", "2"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    # five checks per generated complex, one prime requested
    assert len(report["checks"]) == 10
    assert all(c["status"] == "pass" for c in report["checks"])


def test_verify_unrecognized_directory(corpus_dir, capsys):
    code = main(["verify", str(corpus_dir)])
    assert code == 1
    assert "holds nothing recognizable" in capsys.readouterr().err
