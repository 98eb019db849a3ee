import setup_check


def test_smoke_run_passes(capsys):
    assert setup_check.check_smoke()
    assert "min p2 = 11/3" in capsys.readouterr().out


def test_environment_check_passes():
    assert setup_check.main() == 0
