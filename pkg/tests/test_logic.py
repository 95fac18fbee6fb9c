import pytest
import sympy

from symverif import corpus
from symverif.errors import DomainMismatch, NotAnAction
from symverif.expr import Signature
from symverif.groups import presentation
from symverif.groups.actions import GroupAction, free_product, trivial_action
from symverif.groups.homomorphisms import builtin_hom, hom_free_product
from symverif.groups.presentation import GroupPresentation, cyclic_group
from symverif.lang.parser import parse_program
from symverif.logic.fuzz import fuzz_soundness, random_word
from symverif.logic.post import (injectivity_check, invert_assignment,
                                 post_transform)
from symverif.logic.rules import check_triple_for_assignment, verify
from symverif.logic.triples import SymmetryTriple, Verdict
from symverif.smt.obligations import ProofContext
from symverif.smt.solver import find_solver

# the large dihedral cars are exercised by the benchmark command
CORPUS = [name for name in corpus.EXPECTED
          if name not in ('d512_car', 'd1024_car')]


def parse(text):
    decls, command = parse_program(text)
    return Signature((d.name, d.domain) for d in decls), command


def check_verdict(verdict, expected):
    if verdict.status == 'unknown' and verdict.reason in ('timeout',
                                                           'undecided') \
            and find_solver() is None:
        pytest.skip('undecided without an SMT solver: {0}'.format(verdict))
    assert verdict.status == expected, str(verdict)


@pytest.mark.parametrize('name', ['car_translation', 'car_translation2',
                                  'd4_car', 'd6_car', 'lorenz', 'gravity',
                                  'aac', 'abc', 'abc2'])
def test_corpus_valid_without_solver(name, monkeypatch):
    monkeypatch.setattr('symverif.smt.obligations.find_solver',
                        lambda solver=None: None)
    verdict = verify(corpus.load_benchmark(name).triple())
    assert verdict.is_valid, str(verdict)


@pytest.mark.parametrize('name', CORPUS)
def test_corpus_verdicts(name):
    triple = corpus.load_benchmark(name).triple()
    verdict = verify(triple)
    check_verdict(verdict, corpus.EXPECTED[name])
    if verdict.is_valid:
        assert verdict.trace.rules()[0] in ('CONS-1', 'FREE-PROD')
    else:
        assert verdict.message


def test_car_translation_trace():
    triple = corpus.load_benchmark('car_translation').triple()
    verdict = verify(triple)
    assert verdict.is_valid, str(verdict)
    trace = verdict.trace
    assert trace.count('ASSGN') == 5
    assert trace.count('FOR') == 1
    assert trace.count('LIFT') == 1
    assert trace.count('SEM-ASSGN') == 0
    assert verdict.exit_code == 0
    assert verdict.to_dict()['trace']['rule'] == 'CONS-1'
    assert 'ASSGN [body.0]' in trace.format()


def test_voting_does_not_enumerate_permutations(monkeypatch):
    seen = []
    enumerate_group = presentation.enumerate_group

    def recording(group, max_elems):
        seen.append(group.name)
        return enumerate_group(group, max_elems)

    monkeypatch.setattr(presentation, 'enumerate_group', recording)
    triple = corpus.load_benchmark('voting20').triple()
    assert triple.n_assignments == 43
    verdict = verify(triple)
    assert 'S20' not in seen
    check_verdict(verdict, 'valid')


def test_post_of_affine_assignments(rng):
    sig, _ = parse('var x, y: Real')
    ax, ay = sig.alpha('x'), sig.alpha('y')
    shift = GroupAction(GroupPresentation('Z', ['r']), sig,
                        {'r': {'x': ax + 1, 'y': ay + 1}}, name='shift')
    eq = builtin_hom('eq', shift.group)
    for _ in range(8):
        c, b, k = [int(v) for v in rng.randint(-5, 6, size=3)]
        c = c or 3
        _, assign = parse('var x, y: Real\nx := {0} * x + {1} * y + {2}'
                          .format(c, b, k))
        ctx = ProofContext()
        post = post_transform(shift, assign, sig, ctx)
        assert sympy.expand(post.maps['r']['x'] - ax) == c + b
        assert post.maps['r']['y'] == ay + 1
        verdict = check_triple_for_assignment(shift, assign, post, eq, sig, ctx)
        assert verdict.is_valid, str(verdict)


def test_post_action_is_checked():
    sig, assign = parse('var x: Real\nx := x + 1')
    ax = sig.alpha('x')
    flip = GroupAction(cyclic_group(2), sig, {'g': {'x': -ax}}, name='flip')
    post = post_transform(flip, assign, sig, ProofContext())
    assert sympy.expand(post.maps['g']['x'] - (2 - ax)) == 0
    assert post.certificate.kind == 'action'
    # a wrong inverse gives maps that are not an action of Z2
    with pytest.raises(NotAnAction) as info:
        post_transform(flip, assign, sig, ProofContext(), fhat=2 * ax)
    assert info.value.relation == 'g^2 = e'


def test_inverses():
    sig, assign = parse('var x, y: Real\nvar t: IntMod 360\nx := 2 * x - y')
    ax, ay = sig.alpha('x'), sig.alpha('y')
    assert sympy.expand(invert_assignment(assign.expr, 'x', sig) -
                        (ax + ay) / 2) == 0
    _, turn = parse('var t: IntMod 360\nt := t + 90')
    fhat = invert_assignment(turn.expr, 't', sig)
    assert fhat.subs(sig.alpha('t'), 0) == 270
    _, square = parse('var x, y: Real\nx := x * x')
    assert not injectivity_check(square.expr, 'x', sig)
    _, forget = parse('var x, y: Real\nx := y')
    assert not injectivity_check(forget.expr, 'x', sig)


def test_assignment_breaking_symmetry():
    sig, assign = parse('var x, y, d: Int\nd := x - y')
    a = sig.alpha
    swap = GroupAction(cyclic_group(2), sig.restrict(['x', 'y']),
                       {'g': {'x': a('y'), 'y': a('x')}}, name='swap')
    keep = trivial_action(presentation.trivial_group(), sig.restrict(['d']))
    verdict = check_triple_for_assignment(
        swap, assign, keep, builtin_hom('e_star', swap.group), sig)
    assert verdict.status == 'invalid'
    assert verdict.exit_code == 1
    assert verdict.counterexample is not None


def test_free_product_split():
    sig, program = parse('var x, y: Real\nx := 2 * x;\ny := 2 - y')
    fx = GroupAction(cyclic_group(2), sig.restrict(['x']),
                     {'g': {'x': -sig.alpha('x')}}, name='fx')
    fy = GroupAction(cyclic_group(2), sig.restrict(['y']),
                     {'g': {'y': 2 - sig.alpha('y')}}, name='fy')
    both = free_product(fx, fy)
    hom = hom_free_product(builtin_hom('eq', fx.group),
                           builtin_hom('eq', fy.group))
    triple = SymmetryTriple(both, program, both, hom, sig, name='split')
    verdict = verify(triple)
    assert verdict.is_valid, str(verdict)
    assert verdict.trace.rules()[0] == 'FREE-PROD'
    assert verdict.trace.count('CONS-1') == 2


def test_triple_shape_errors():
    sig, program = parse('var x: Int\nx := x + 1')
    a = GroupAction(cyclic_group(2), sig, {}, name='a')
    b = GroupAction(cyclic_group(3), sig, {}, name='b')
    with pytest.raises(DomainMismatch):
        SymmetryTriple(a, program, b, builtin_hom('eq', a.group), sig)
    with pytest.raises(KeyError):
        SymmetryTriple(a, program, a, builtin_hom('eq', a.group), sig,
                       annotations={'body.3': None})


def test_verdicts():
    assert Verdict.unknown('timeout').exit_code == 2
    assert Verdict.invalid('broken').to_dict() == {'status': 'invalid',
                                                   'message': 'broken'}
    with pytest.raises(ValueError):
        Verdict('maybe')


def test_fuzz_valid_triples():
    for name in ('car_translation', 'lorenz', 'd4_car', 'voting2'):
        triple = corpus.load_benchmark(name).triple()
        report = fuzz_soundness(triple, 20, seed=3)
        assert report.ok, str(report)
        assert report.passed + report.skipped == 20


def test_fuzz_finds_broken_flow():
    triple = corpus.load_benchmark('aac_buggy').triple()
    report = fuzz_soundness(triple, 30, seed=3)
    assert not report.ok
    assert report.first_failure['var'] in ('x', 'y', 'z')


def test_random_word(rng):
    group = cyclic_group(4)
    for _ in range(20):
        w = random_word(group, rng, 5)
        assert len(w) <= 5
    assert random_word(presentation.trivial_group(), rng, 5).is_identity


if __name__ == '__main__':
    pytest.main([__file__])
