import hashlib
import json

import pytest

from fatnielsen import cli
from fatnielsen.errors import StuckNotAtBasepoint
from fatnielsen.factor import Certificate, random_mapping_class

TWIST = '{"genus": 1, "images": {"a": "a", "b": "b a"}}'


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_factor_twist_and_verify(files, tmp_path):
    out = tmp_path / "c.jsonl"
    assert run("factor", files("t.json", TWIST), "--out", out) == cli.EXIT_OK
    cert = Certificate.loads(out.read_text())
    assert [(r.slide.position, r.slide.direction.value) for r in cert.trace.slides] == [(2, "R")]
    assert run("verify", out) == cli.EXIT_OK


def test_factor_exit_codes(files, capsys):
    assert run("factor", files("s.json", '{"genus": 1, "images": {"a": "b", "b": "a"}}')) == cli.EXIT_BOUNDARY
    assert run("factor", files("i.json", '{"genus": 1, "images": {"a": "a", "b": ""}}')) == cli.EXIT_IDENTITY
    assert run("factor", files("p.json", '{"genus": 1, "images": {"a": "a"}}')) == cli.EXIT_PARSE
    assert run("factor", files("j.json", "{")) == cli.EXIT_PARSE
    assert run("factor", "/nonexistent/x.json") == cli.EXIT_IO
    assert run("factor", files("t.json", TWIST), "--genus", 2) == cli.EXIT_USAGE
    long = random_mapping_class(2, 25, seed=1).to_json()
    assert run("factor", files("l.json", long), "--max-steps", 1) == cli.EXIT_STEP_LIMIT
    capsys.readouterr()


def test_stuck_maps_to_its_exit_code(files, monkeypatch):
    def stuck(*args, **kwargs):
        raise StuckNotAtBasepoint("images do not generate")
    monkeypatch.setattr(cli, "factor", stuck)
    assert run("factor", files("t.json", TWIST)) == cli.EXIT_STUCK


def test_identity_gives_empty_certificate(files, capsys):
    assert run("factor", files("i.json", '{"genus": 2, "images": {"a1": "a1", "a2": "a2", "b1": "b1", "b2": "b2"}}')) == 0
    cert = Certificate.loads(capsys.readouterr().out)
    assert cert.trace.slides == []


def test_verify_exit_codes(files, tmp_path, capsys):
    out = tmp_path / "c.jsonl"
    run("factor", files("t.json", TWIST), "--out", out)
    lines = out.read_text().splitlines()
    assert run("verify", files("trunc.jsonl", "\n".join(lines[:3]) + "\n")) == cli.EXIT_PARSE
    # flip the slide and re-sign so only the replay can catch it
    rec = json.loads(lines[3])
    rec["dir"] = "L"
    body = "".join(x + "\n" for x in lines[:3] + [json.dumps(rec, sort_keys=True)])
    signed = body + json.dumps({"digest": "sha256:" + hashlib.sha256(body.encode()).hexdigest()}) + "\n"
    assert run("verify", files("tampered.jsonl", signed)) == cli.EXIT_VERIFY_FAILED
    unsigned = out.read_text().replace('"dir": "R"', '"dir": "L"')
    assert run("verify", files("unsigned.jsonl", unsigned)) == cli.EXIT_PARSE
    capsys.readouterr()


@pytest.mark.parametrize("strategy", ["exhaustive", "guided"])
def test_generate_factor_verify_loop(tmp_path, strategy, capsys):
    for seed in range(5):
        auto, cert = tmp_path / f"a{seed}.json", tmp_path / f"c{seed}.jsonl"
        assert run("generate", "--genus", 2, "--walk-length", 15, "--seed", seed, "--out", auto) == 0
        assert run("factor", auto, "--strategy", strategy, "--out", cert) == 0
        assert run("verify", cert) == 0
    capsys.readouterr()


def test_census(capsys):
    assert run("census", "--genus", 1) == 0
    one = json.loads(capsys.readouterr().out)
    assert (one["pairings"], one["one_boundary_cycle"]) == (3, 1)
    assert run("census", "--genus", 2) == 0
    two = json.loads(capsys.readouterr().out)
    assert two["tracers_agree"] and two["one_boundary_cycle"] == two["one_boundary_cycle_fatgraph"] == 21
    assert sum(two["by_genus"].values()) == 105
    assert run("census", "--genus", 4, "--limit", 1000) == cli.EXIT_RESOURCE
    assert run("census") == cli.EXIT_USAGE


def test_bench_identity_and_genus_one(capsys):
    assert run("bench", "--genus", 1, "--walk-lengths", "0,6", "--count", 5, "--seed", 2) == 0
    report = json.loads(capsys.readouterr().out)
    zero, six = report["results"]
    assert zero["exhaustive"]["max_steps"] == zero["guided"]["max_steps"] == 0
    assert six["guided"]["median_steps"] >= 1


def test_bench_jobs_do_not_change_output(capsys):
    args = ("bench", "--genus", 2, "--walk-lengths", "4,8", "--count", 4, "--seed", 9)
    run(*args)
    serial = capsys.readouterr().out
    run(*args, "--jobs", 2)
    assert capsys.readouterr().out == serial


def test_bench_timings_flag(capsys):
    run("bench", "--genus", 1, "--walk-lengths", "3", "--count", 2, "--timings")
    report = json.loads(capsys.readouterr().out)
    assert "median_seconds" in report["results"][0]["guided"]


def test_render_diagram_and_certificate(files, tmp_path, capsys):
    diagram = files("d.json", '{"genus": 1, "pairs": [[1, 3], [2, 4]], "labels": ["b a", "a", "A B", "A"]}')
    assert run("render", diagram, "--format", "ascii") == 0
    assert "1: b a" in capsys.readouterr().out
    cert = tmp_path / "c.jsonl"
    run("factor", files("t.json", TWIST), "--out", cert)
    assert run("render", cert, "--out", tmp_path / "c.svg") == 0
    assert (tmp_path / "c.svg").read_text().count("<line") == 2
    assert run("render", files("bad.json", '{"genus": 1}')) == cli.EXIT_PARSE


def test_custom_basepoint(files, tmp_path, capsys):
    base = files("base.txt", "2\na2 b2 A2 B2 a1 b1 A1 B1\n")
    auto, cert = tmp_path / "a.json", tmp_path / "c.jsonl"
    assert run("generate", "--basepoint", base, "--walk-length", 10, "--seed", 3, "--out", auto) == 0
    assert run("factor", auto, "--basepoint", base, "--out", cert) == 0
    assert run("verify", cert) == 0
    assert run("factor", auto, "--basepoint", files("bad.txt", "2\na2 a2\n")) == cli.EXIT_PARSE
    assert run("factor", auto, "--basepoint", base, "--genus", 3) == cli.EXIT_USAGE
    capsys.readouterr()


def test_missing_command_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == cli.EXIT_USAGE
