import os
from fractions import Fraction

import pytest
import sympy

from symverif.corpus import CORPUS_DIR
from symverif.errors import NoCandidate, SynthTimeout
from symverif.expr import Signature, evaluate
from symverif.groups.actions import GroupAction
from symverif.groups.presentation import GroupPresentation
from symverif.lang.parser import parse_program
from symverif.specfile import load_spec
from symverif.synth import make_grammar, synthesize_pre


def task(name):
    return load_spec(os.path.join(CORPUS_DIR, name + '.sym')).synth_task()


def test_car_step_precondition():
    t = task('synth_car_x')
    result = synthesize_pre(t['assign'], t['post'], t['signature'],
                            depth=t.get('depth'))
    sig = t['signature']
    m = result.pre.maps['r']
    assert sympy.expand(m['x'] - sig.alpha('x')) == 1
    assert sympy.expand(m['y'] - sig.alpha('y')) == 1
    assert m['v'] == sig.alpha('v')
    assert result.verdict.is_valid
    assert result.hom.images['r'] == t['post'].group.generator('r')
    assert result.to_dict()['verdict'] == 'valid'
    assert result.stats['candidates'] > 0


def test_force_precondition():
    t = task('synth_gravity_f')
    result = synthesize_pre(t['assign'], t['post'], t['signature'])
    sig = t['signature']
    m = result.pre.maps['g']
    for u, v in (('x1', 'x2'), ('m1', 'm2'), ('v1', 'v2')):
        assert m[u] == sig.alpha(v)
        assert m[v] == sig.alpha(u)
    assert result.verdict.is_valid
    assert 'g' in result.inverses


SHIFT = {'x': ('x', 1), 'y': ('y', 1)}
SWAP = {'x1': ('x2', 0), 'x2': ('x1', 0), 'v1': ('v2', 0), 'v2': ('v1', 0),
        'm1': ('m2', 0), 'm2': ('m1', 0)}

# expected generator maps: variable -> (source variable, offset), or a
# negated source as ('-', source)
WEAKEST = [
    ('synth_car_y', 'r', dict(SHIFT, v=('v', 0))),
    ('synth_car_v', 'r', dict(SHIFT, v=('v', 0))),
    ('synth_car_phi', 'r', dict(SHIFT, phi=('phi', 0))),
    ('synth_car_theta', 'r', dict(SHIFT, theta=('theta', 0), v=('v', 0))),
    ('synth_d4_x', 'r', {'x': ('-', 'y'), 'y': ('x', 0)}),
    ('synth_d4_x', 's', {'x': ('x', 0), 'y': ('-', 'y')}),
    ('synth_d4_y', 'r', {'x': ('-', 'y'), 'y': ('x', 0)}),
    ('synth_lorenz_z', 'g', {'x': ('-', 'x'), 'y': ('-', 'y'),
                             'z': ('z', 0)}),
    ('synth_gravity_v1', 'g', dict(SWAP, F1=('-', 'F1'))),
    ('synth_gravity_x1', 'g', dict(SWAP, F1=('-', 'F1'))),
    ('synth_gravity_x2', 'g', dict(SWAP, F1=('-', 'F1'))),
]


@pytest.mark.parametrize('name,generator,expected', WEAKEST)
def test_weakest_preconditions(name, generator, expected):
    t = task(name)
    result = synthesize_pre(t['assign'], t['post'], t['signature'],
                            depth=t.get('depth'))
    sig = t['signature']
    m = result.pre.maps[generator]
    for v, (a, b) in expected.items():
        want = -sig.alpha(b) if a == '-' else sig.alpha(a) + b
        assert sympy.expand(m[v] - want) == 0, (v, m[v])
    assert result.verdict.is_valid


def test_heading_turns_with_the_car():
    t = task('synth_d4_x')
    result = synthesize_pre(t['assign'], t['post'], t['signature'])
    sig = t['signature']
    theta = sig.alpha('theta')
    turned = result.pre.maps['r']['theta']
    assert evaluate(turned, {theta: Fraction(300)}) == 30
    mirrored = result.pre.maps['s']['theta']
    assert evaluate(mirrored, {theta: Fraction(90)}) == 270


def test_grammar():
    t = task('synth_car_x')
    grammar = make_grammar(t['assign'], t['post'], 2, t['signature'])
    assert 'cos' in grammar.unary
    assert grammar.depth == 2


def test_no_candidate():
    decls, assign = parse_program('var x: Real\nx := x * x')
    sig = Signature((d.name, d.domain) for d in decls)
    shift = GroupAction(GroupPresentation('Z', ['r']), sig,
                        {'r': {'x': sig.alpha('x') + 1}}, name='shift')
    with pytest.raises((NoCandidate, SynthTimeout)):
        synthesize_pre(assign, shift, sig, depth=1, timeout=30)


if __name__ == '__main__':
    pytest.main([__file__])
