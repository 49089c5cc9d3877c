import io
import json

import pytest

from gmvsolve import cli
from gmvsolve.ff import PrimeField
from gmvsolve.gmv import GmvSystem, initialize
from gmvsolve.solver import build_plan, precompute


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out)
    return code, out.getvalue()


def test_gen_banner_table_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code, text = run(["gen", "--p", "1523", "--n", "7", "--seed", "1", "--out", str(a)])
    assert code == 0
    assert text.splitlines()[0] == "System initialized: n=7, p has 11 bits"
    assert "f2   (3,1,0,0,0,0,1)" in text
    run(["gen", "--p", "1523", "--n", "7", "--seed", "1", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert GmvSystem.from_json(a.read_text()).n == 7


def test_small_n_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["gen", "--n", "3", "--seed", "1"], io.StringIO())
    assert exc.value.code == 2


def test_precompute_then_solve_with_cache(tmp_path):
    sysf, cache, rep = tmp_path / "s.json", tmp_path / "c.txt", tmp_path / "r.json"
    run(["gen", "--p", "1523", "--n", "7", "--seed", "2", "--out", str(sysf)])
    code, text = run(["precompute", "--system", str(sysf), "--cache", str(cache)])
    assert code == 0
    assert text.splitlines()[1].startswith("packing sparse resultants done in ")
    assert text.splitlines()[1].endswith(" seconds")
    code, text = run(["solve", "--system", str(sysf), "--cache", str(cache), "--t", "3,4,5", "--out", str(rep)])
    assert code == 0
    lines = text.splitlines()
    assert "packing" not in text
    assert lines.count("g2 has 381 terms") == 3
    report = json.loads(rep.read_text())
    assert [r["t"] for r in report["reports"]] == ["3", "4", "5"]
    for block in report["reports"]:
        assert f"Roots of univariate polynomial of degree {block['deg_u']} for t={block['t']}:" in lines
        roots = [int(r) for r in block["roots"]]
        assert roots == sorted(roots)
        for r in roots:
            assert f"x7 = {r}" in lines
        assert f"solution found in {block['timings']['total']:.3f} seconds" in lines


def test_corrupt_cache_exit_code(tmp_path):
    sysf, cache = tmp_path / "s.json", tmp_path / "c.txt"
    run(["gen", "--p", "1523", "--n", "6", "--seed", "2", "--out", str(sysf)])
    run(["precompute", "--system", str(sysf), "--cache", str(cache)])
    cache.write_text(cache.read_text().replace("[f1]", "[f1]\n"))
    code, _ = run(["solve", "--system", str(sysf), "--cache", str(cache)])
    assert code == 9


def test_random_t_and_no_roots_line():
    code, text = run(["solve", "--p", "1523", "--n", "7", "--seed", "1", "--t", "5"])
    assert code == 0 and "no roots" in text
    code, text = run(["solve", "--p", "101", "--n", "5", "--seed", "1", "--random-t", "4"])
    assert code == 0 and text.count("g2 has") == 4


def test_check_pass_and_negative_control():
    for seed in (0, 1, 3):
        code, text = run(["check", "--p", "101", "--n", "5", "--seed", str(seed)])
        assert code == 0 and text.startswith("PASS")
    code, _ = run(["check", "--p", "8380417", "--n", "5", "--seed", "1"])
    assert code == 8
    # seed 2 has a vanishing x1^3 coefficient at p = 101
    code, _ = run(["check", "--p", "101", "--n", "5", "--seed", "2"])
    assert code == 7
    sys_ = cli.generate(PrimeField(101), 5, 0)
    state = precompute(initialize(sys_), build_plan(5, "balanced"))
    state.g3 = state.g3 + 1
    ok, got, oracle = cli.run_check(sys_, state)
    assert not ok


def test_explicit_plan_flag(tmp_path):
    plan = tmp_path / "plan.json"
    plan.write_text("[[2, [3, 4]], [5, 6]]")
    code, text = run(["solve", "--p", "1523", "--n", "7", "--seed", "1", "--plan", f"explicit:{plan}"])
    code2, text2 = run(["solve", "--p", "1523", "--n", "7", "--seed", "1", "--plan", "chain"])
    assert code == code2 == 0
    roots = [ln for ln in text.splitlines() if ln.startswith("x7")]
    assert roots == [ln for ln in text2.splitlines() if ln.startswith("x7")]


def test_bench_csv():
    code, text = run(["bench", "--n", "5-6", "--p", "1523"])
    rows = text.strip().splitlines()
    assert code == 0
    assert rows[0] == "n,p_bits,plan,part1_s,part2_s,deg_u,g2_terms,peak_terms"
    assert [r.split(",")[0] for r in rows[1:]] == ["5", "6"]
    assert rows[1].split(",")[5] == "93"


def test_input_source_is_exclusive(tmp_path):
    with pytest.raises(SystemExit):
        cli.main(["solve"], io.StringIO())
    with pytest.raises(ValueError):
        cli.RunConfig(command="solve", system_path="x", n=5, seed=1)
    with pytest.raises(ValueError):
        cli.RunConfig(command="solve", n=5, seed=1, threads=0)
