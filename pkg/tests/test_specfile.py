import os

import pytest

from symverif import corpus
from symverif.corpus import CORPUS_DIR
from symverif.errors import ProgramSyntaxError
from symverif.specfile import load_spec, parse_spec, split_sections

SWAP = """
vars:
    var x, y, max: Int

program:
    max := x > y ? x : y

action swap:
    group: cyclic 2
    vars: x, y
    act g: x -> alpha_y; y -> x

action result:
    group: trivial
    vars: max

triple:
    pre: swap
    post: result
    hom: e_star
"""


def syntax_error(text, filename='spec.sym'):
    with pytest.raises(ProgramSyntaxError) as info:
        parse_spec(text, filename).triple()
    return info.value


def test_sections():
    sections = split_sections(SWAP)
    assert [s.kind for s in sections] == ['vars', 'program', 'action',
                                          'action', 'triple']
    assert sections[2].name == 'swap'
    assert sections[2].get('group') == 'cyclic 2'
    assert sections[2].line_of('act') == 11
    assert sections[4].get('hom') == 'e_star'


def test_read_triple():
    spec = parse_spec(SWAP, 'max.sym')
    triple = spec.triple()
    sig = spec.signature
    assert triple.name == 'max'
    assert list(spec.actions) == ['swap', 'result']
    assert triple.pre.maps['g']['x'] == sig.alpha('y')
    assert triple.pre.maps['g']['y'] == sig.alpha('x')
    assert triple.post.vars == ['max']
    assert triple.hom.is_trivial
    assert triple.n_assignments == 1


def test_annotations():
    spec = load_spec(os.path.join(CORPUS_DIR, 'gravity.sym'))
    triple = spec.triple()
    note = triple.annotations['body.0']
    assert note.action is spec.actions['swap']
    assert note.hom is None
    assert note.inverse is None


def test_builtin_and_product_actions():
    text = """
vars:
    var x, y: Real

action fx:
    group: cyclic 2
    vars: x
    act g: x -> -x

action fy:
    group: cyclic 2
    vars: y
    act g: y -> -y

action both:
    product: fx x fy

action either:
    product: fx * fy

hom first:
    source: both
    target: fx
    builtin: proj1
"""
    spec = parse_spec(text)
    assert spec.actions['both'].group.generators == ['g_1', 'g_2']
    assert spec.actions['both'].group.enumerate().size == 4
    assert spec.actions['either'].group.try_enumerate(64) is None
    assert spec.homs['first'].name == 'first'
    assert not spec.has_triple


def test_header_errors():
    err = syntax_error('vars:\n    var x: Int\nbogus:\n', 'bad.sym')
    assert err.line == 3
    assert str(err).startswith('bad.sym:3:')

    err = syntax_error('    var x: Int\n')
    assert err.line == 1


def test_section_rules():
    err = syntax_error('vars:\n    var x: Int\nvars:\n    var y: Int\n')
    assert err.line == 3
    assert 'twice' in err.msg

    err = syntax_error('action a:\n    group: trivial\n'
                       'triple:\n    pre: a\n    post: a\n')
    assert 'program' in err.msg

    with pytest.raises(ProgramSyntaxError):
        parse_spec('vars:\n    var x: Int\nprogram:\n    x := 1\n')


def test_program_errors_point_into_the_file():
    err = syntax_error('vars:\n    var x: Int\n\nprogram:\n    x := y\n'
                       'triple:\n    pre: a\n    post: a\n')
    assert err.line == 5

    text = SWAP.replace('act g: x -> alpha_y', 'act g: x -> z')
    err = syntax_error(text)
    assert err.line == 11

    text = SWAP.replace('post: result', 'post: nothing')
    err = syntax_error(text)
    assert 'nothing' in err.msg


def test_action_errors():
    text = SWAP.replace('group: cyclic 2', 'group: klein 4')
    assert 'klein' in syntax_error(text).msg
    text = SWAP.replace('vars: x, y', 'vars: x, w')
    assert 'w' in syntax_error(text).msg
    text = SWAP.replace('act g:', 'act h:')
    assert 'generator' in syntax_error(text).msg


def test_synth_task():
    spec = load_spec(os.path.join(CORPUS_DIR, 'synth_car_x.sym'))
    task = spec.synth_task()
    assert task['assign'].kind == 'assign'
    assert task['assign'].var == 'x'
    assert task['depth'] == 3
    assert task['post'].name in spec.actions
    with pytest.raises(ProgramSyntaxError):
        spec.triple()


def test_generated_benchmarks():
    voting = parse_spec(corpus.voting_program(20), 'voting20.sym').triple()
    assert voting.n_assignments == 43
    assert voting.pre.group.name == 'S20'
    car = parse_spec(corpus.dihedral_program(8), 'd8_car.sym').triple()
    assert car.pre.group.name == 'D8'
    assert car.signature.domain('theta').modulus == 360
    # 7 does not divide 360: headings count sevenths of a turn
    car = parse_spec(corpus.dihedral_program(7)).triple()
    assert car.signature.domain('theta').modulus == 7
    with pytest.raises(ValueError):
        corpus.voting_program(1)
    with pytest.raises(ValueError):
        corpus.dihedral_program(2)


def test_benchmark_lookup():
    names = corpus.benchmark_names()
    assert 'max' in names and 'car_translation' in names
    for name in corpus.EXPECTED:
        assert corpus.benchmark_text(name)
    assert 'symmetric 5' in corpus.benchmark_text('voting5')
    with pytest.raises(KeyError):
        corpus.benchmark_text('nope')


def test_group_size():
    groups = load_spec(os.path.join(CORPUS_DIR, 'groups.sym')).actions
    assert corpus.group_size(groups['Z'].group) == 'inf'
    assert corpus.group_size(groups['D4'].group) == 8
    assert corpus.group_size(groups['D1024'].group, max_elems=64) == '-'


def test_format_table():
    rows = [dict(program='Car', verdict='valid', assignments=5,
                 group_size='inf', seconds=0.5),
            dict(program='Lorenz System', verdict='unknown', assignments=4,
                 group_size=2, seconds=12.25, fuzz='10/10')]
    lines = corpus.format_table(rows).splitlines()
    assert lines[0].split() == ['program', 'verdict', 'assignments',
                                'pre-group', 'seconds', 'fuzz']
    assert set(lines[1]) == set('- ')
    assert lines[3].startswith('Lorenz System')
    assert lines[3].endswith('10/10')


if __name__ == '__main__':
    pytest.main([__file__])
