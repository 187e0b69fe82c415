import shutil
import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = sorted((Path(__file__).parent.parent / "demos").glob("*.py"))


@pytest.mark.slow
@pytest.mark.parametrize("script", DEMOS, ids=[p.name for p in DEMOS])
def test_demo_runs(script):
    res = subprocess.run([sys.executable, str(script)], capture_output=True, text=True, timeout=600)
    assert res.returncode == 0, res.stderr
    assert res.stdout.strip()


@pytest.mark.slow
@pytest.mark.skipif(shutil.which("wienercert") is None, reason="console script not installed")
def test_cli_tour():
    script = Path(__file__).parent.parent / "demos" / "07_cli_tour.sh"
    res = subprocess.run(["sh", str(script)], capture_output=True, text=True, timeout=600)
    assert res.returncode == 0, res.stderr
    assert "exit 0" in res.stdout and "exit 1" in res.stdout
