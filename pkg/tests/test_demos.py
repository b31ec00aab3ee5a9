import runpy
from pathlib import Path

import pytest

DEMOS = sorted((Path(__file__).parent.parent / 'demos').glob('*.py'))


@pytest.mark.parametrize('path', DEMOS, ids=[p.name for p in DEMOS])
def test_demo_runs(path, capsys):
    runpy.run_path(str(path), run_name='__main__')
    assert capsys.readouterr().out
