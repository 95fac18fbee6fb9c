import json
import os

import pytest

from symverif.cli import EXIT_USAGE, main
from symverif.corpus import CORPUS_DIR

BAD_ACTION = """
vars:
    var x: Int

action bump:
    group: cyclic 2
    vars: x
    act g: x -> x + 1
"""


def corpus_file(name):
    return os.path.join(CORPUS_DIR, name + '.sym')


def run_json(capsys, *argv):
    code = main(list(argv) + ['--json'])
    data = json.loads(capsys.readouterr().out)
    assert data['exit_code'] == code
    return code, data


def test_verify(capsys):
    code, data = run_json(capsys, 'verify', corpus_file('car_translation'))
    assert code == 0
    assert data['command'] == 'verify'
    assert data['verdict']['status'] == 'valid'
    assert data['assignments'] == 5
    assert data['totals']['obligations'] == len(data['obligations'])


def test_verify_text(capsys):
    code = main(['verify', corpus_file('car_translation'), '--quiet'])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith('car_translation: VALID')
    assert 'CONS-1' in out


def test_check_action(capsys, tmp_path):
    fn = tmp_path / 'bump.sym'
    fn.write_text(BAD_ACTION)
    code, data = run_json(capsys, 'check-action', str(fn), 'bump')
    assert code == 1
    assert data['status'] == 'invalid'
    assert data['relation'] == 'g^2 = e'
    assert data['variable'] == 'x'

    code, data = run_json(capsys, 'check-action', corpus_file('d4_car'), 'turn')
    assert code == 0
    assert data['certificate']


def test_enumerate(capsys):
    groups = corpus_file('groups')
    code, data = run_json(capsys, 'enumerate', groups, 'D4')
    assert code == 0
    assert data['size'] == 8
    assert data['generator_orders'] == {'r': 4, 's': 2}
    assert data['associative']

    code, data = run_json(capsys, 'enumerate', groups, 'Z', '--bound', '16')
    assert code == 2
    assert data['status'] == 'unknown'


def test_fuzz(capsys):
    code, data = run_json(capsys, 'fuzz', corpus_file('aac_buggy'), '-n', '30',
                          '--seed', '3')
    assert code == 1
    assert data['failures']


def test_synth(capsys):
    code, data = run_json(capsys, 'synth', corpus_file('synth_car_x'))
    assert code == 0
    assert data['status'] == 'valid'


def test_bench(capsys):
    code, data = run_json(capsys, 'bench', 'car_translation')
    assert code == 0
    assert data['mismatches'] == []
    assert data['rows'][0]['verdict'] == 'valid'


def test_input_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(['frobnicate'])
    assert info.value.code == EXIT_USAGE
    assert main(['verify', str(tmp_path / 'missing.sym'), '--json']) == EXIT_USAGE
    assert main(['enumerate', corpus_file('groups'), 'D5', '--json']) == EXIT_USAGE

    fn = tmp_path / 'broken.sym'
    fn.write_text('vars:\n    var x: Int\nprogram:\n    x := := 1\n')
    assert main(['verify', str(fn), '--json']) == EXIT_USAGE

    config = tmp_path / 'config.json'
    config.write_text(json.dumps({'smt_timeuot': 3}))
    assert main(['enumerate', corpus_file('groups'), 'D4', '--json',
                 '--config', str(config)]) == EXIT_USAGE


if __name__ == '__main__':
    pytest.main([__file__])
