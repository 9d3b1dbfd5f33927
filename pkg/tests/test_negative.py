import pytest

from archlang.cli import main

from negative_cases import CASES


def run_case(case, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "neg.arc").write_text(case.source)
    argv = [case.command, "neg.arc"]
    if case.root:
        argv += ["--root", case.root]
    if case.stimuli is not None:
        (tmp_path / "neg.stim").write_text(case.stimuli)
        argv += ["--stimuli", "neg.stim", "--max-steps", "50"]
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err.splitlines()


@pytest.mark.parametrize("case", CASES, ids=[c.code for c in CASES])
def test_negative_fixture(case, tmp_path, monkeypatch, capsys):
    code, out, err = run_case(case, tmp_path, monkeypatch, capsys)
    assert code == case.exit_code
    assert f"error {case.code} neg.arc:{case.line}:{case.column} " in "\n".join(err) + "\n"
    if case.exit_code == 1:
        assert out == ""


def test_every_declared_code_has_a_fixture():
    expected = {f"E02{n:02d}" for n in range(1, 17)} | {"E0220", "E0221"}
    expected |= {f"E030{n}" for n in range(1, 9)}
    assert expected <= {c.code for c in CASES}
