from fractions import Fraction

import pytest
import sympy
from sympy import Mod

from symverif.corpus import CORPUS_DIR
from symverif.errors import (BoundExceeded, DomainMismatch, NoInverse,
                             NotAHomomorphism, NotAnAction, NotEntailed,
                             ShapeMismatch, VarsNotSubset)
from symverif.expr import INT, REAL, Signature, evaluate, int_mod
from symverif.groups.actions import (GroupAction, check_action, direct_product,
                                     empty_action, free_product, trivial_action)
from symverif.groups.homomorphisms import (Homomorphism, builtin_hom, entails,
                                           hom_check, hom_compose, hom_power,
                                           hom_product, try_entails)
from symverif.groups.presentation import (GroupPresentation, cyclic_group,
                                          dihedral_group, format_word,
                                          free_abelian_group, symmetric_group,
                                          trivial_group, word_letters)
from symverif.smt.obligations import ProofContext
from symverif.specfile import load_spec

XY = Signature([('x', REAL), ('y', REAL)])
ax, ay = XY.alpha('x'), XY.alpha('y')


def quarter_turn(group=None):
    group = group or dihedral_group(4)
    return GroupAction(group, XY, {'r': {'x': -ay, 'y': ax},
                                   's': {'y': -ay}}, name='turn')


def test_words():
    D4 = dihedral_group(4)
    w = D4.word('(r*s)^2*r^-1')
    assert word_letters(w) == [('r', 1), ('s', 1), ('r', 1), ('s', 1),
                               ('r', -1)]
    assert format_word(D4.identity) == 'e'
    assert format_word(D4.word('r^2*s')) == 'r^2*s'
    assert D4.word('e') == D4.identity
    with pytest.raises(KeyError):
        D4.word('t')
    assert str(D4.relations[2]) == 'r*s = s*r^-1'
    # words of the group itself pass through unchanged
    assert D4.word(D4.generator('r')) == D4.generator('r')
    assert D4.word(w) == w


def test_parenthesised_words():
    D4 = dihedral_group(4)
    assert D4.word('(r*s)^2') == D4.word('r*s*r*s')
    assert D4.word('((r^2)*s)^-1') == D4.word('s^-1*r^-2')
    S3 = symmetric_group(3)
    assert S3.generators == ['t1', 't2']
    assert str(S3.relations[2]) == 't1*t2*t1*t2*t1*t2 = e'
    assert S3.enumerate().size == 6


def test_enumerate_small_groups(rng):
    assert symmetric_group(2).enumerate().size == 2
    assert symmetric_group(4).enumerate().size == 24
    assert cyclic_group(5).enumerate().size == 5
    assert trivial_group().enumerate().size == 1

    table = dihedral_group(4).enumerate()
    assert table.size == 8
    assert table.generator_order('r') == 4
    assert table.generator_order('s') == 2
    assert table.index_of(dihedral_group(4).word('(r*s)^2')) == 0
    assert table.check_associativity(rng)
    # element 0 is the identity and every element has an inverse
    assert all(table.mult[i, table.inv[i]] == 0 for i in range(table.size))


def test_enumerate_large_dihedral(rng):
    groups = load_spec(CORPUS_DIR + '/groups.sym').actions
    table = groups['D1024'].group.enumerate(4096)
    assert table.size == 2048
    assert table.generator_order('r') == 1024
    assert table.check_associativity(rng)


def test_standard_tables_match_coset_enumeration():
    for fast in (dihedral_group(6), cyclic_group(5)):
        slow = GroupPresentation(fast.name, fast.generators,
                                 [str(r) for r in fast.relations])
        assert fast.family is not None and slow.family is None
        a, b = fast.enumerate(), slow.enumerate()
        assert a.size == b.size
        # the same words multiply to the same elements
        phi = [b.index_of(w) for w in a.elements]
        assert sorted(phi) == list(range(b.size))
        for i in range(a.size):
            for j in range(a.size):
                assert phi[a.mult[i, j]] == b.mult[phi[i], phi[j]]
        for name in fast.generators:
            assert a.generator_order(name) == b.generator_order(name)


def test_enumerate_infinite():
    free = GroupPresentation('F', ['g'])
    assert free.is_free
    with pytest.raises(BoundExceeded):
        free.enumerate()
    assert free.try_enumerate() is None
    assert free_abelian_group(['a', 'b']).try_enumerate(16) is None
    with pytest.raises(BoundExceeded):
        dihedral_group(32).enumerate(16)


def test_check_action():
    cert = check_action(quarter_turn())
    assert len(cert.entries) > 0

    bad = GroupAction(cyclic_group(2), XY, {'g': {'x': ax + 1}}, name='bad')
    with pytest.raises(NotAnAction) as info:
        check_action(bad)
    assert info.value.relation == 'g^2 = e'
    assert info.value.variable == 'x'


def test_inverse_of_permuting_maps():
    turn = quarter_turn()
    inv = turn.inverse_map('r')
    assert (inv['x'], inv['y']) == (ay, -ax)


def test_modular_maps_compose():
    T = Signature([('theta', int_mod(360))])
    t = T.alpha('theta')
    turn = GroupAction(dihedral_group(4), T, {'r': {'theta': t + 90},
                                             's': {'theta': -t}},
                       name='heading')
    assert turn.word_map('s^2')['theta'] == t
    assert turn.word_map('r^4')['theta'] == t
    check_action(turn)


def test_inverse_by_enumeration_respects_bound():
    X = Signature([('x', int_mod(7))])
    a = X.alpha('x')
    doubling = GroupAction(cyclic_group(3), X, {'g': {'x': Mod(2 * a, 7)}},
                           name='doubling')
    check_action(doubling, ProofContext(dict(max_elems=2)))
    assert doubling.max_elems == 2
    with pytest.raises(NoInverse):
        doubling.inverse_map('g')
    doubling.max_elems = 4096
    inv = doubling.inverse_map('g')
    assert evaluate(inv['x'], {a: Fraction(1)}) == 4


def test_action_construction():
    with pytest.raises(ValueError):
        GroupAction(cyclic_group(2), XY, {'g': {'x': sympy.Symbol('alpha_z')}})
    with pytest.raises(KeyError):
        GroupAction(cyclic_group(2), XY, {'h': {'x': -ax}})
    turn = quarter_turn()
    assert 'x -> -alpha_y' in str(turn)
    e = trivial_action(cyclic_group(3), XY)
    assert all(e.maps['g'][v] == XY.alpha(v) for v in XY)
    assert empty_action(trivial_group()).vars == []


def test_apply_concrete_and_symbolic():
    turn = quarter_turn()
    D4 = turn.group
    state = {'x': Fraction(1), 'y': Fraction(2)}
    out = turn.apply(D4.word('r'), state)
    assert (out['x'], out['y']) == (-2, 1)
    out = turn.apply(D4.word('r^-1'), state)
    assert (out['x'], out['y']) == (2, -1)
    sym = turn.apply(D4.word('r^2'), XY.fresh_state())
    assert (sym['x'], sym['y']) == (-ax, -ay)


def test_lift_restrict():
    turn = quarter_turn()
    big = XY.merge(Signature([('z', INT)]))
    lifted = turn.lift(big)
    assert lifted.vars == ['x', 'y', 'z']
    assert lifted.maps['r']['z'] == big.alpha('z')
    assert lifted.restrict(['x', 'y']).same_as(turn)
    # the lifted action follows the order of the full signature
    first = Signature([('z', INT)]).merge(XY)
    lifted = turn.lift(first)
    assert lifted.vars == first.names == ['z', 'x', 'y']
    assert lifted.same_as(turn.lift(big))


def test_products():
    ctx = ProofContext()
    flip_x = GroupAction(cyclic_group(2), Signature([('x', REAL)]),
                         {'g': {'x': -ax}}, name='fx')
    flip_y = GroupAction(cyclic_group(2), Signature([('y', REAL)]),
                         {'g': {'y': -ay}}, name='fy')
    prod = direct_product(flip_x, flip_y, ctx)
    assert prod.group.generators == ['g_1', 'g_2']
    assert prod.vars == ['x', 'y']
    check_action(prod, ctx)
    assert prod.group.enumerate().size == 4
    free = free_product(flip_x, flip_y)
    assert free.group.try_enumerate(64) is None


def test_hom_check():
    D4 = dihedral_group(4)
    assert hom_check(builtin_hom('eq', D4)) is not None
    assert hom_check(builtin_hom('e_star', D4)) is not None
    flip = Homomorphism(D4, D4, {'r': 'r^-1', 's': 's'}, name='flip')
    cert = hom_check(flip)
    assert len(cert.entries) == 3
    with pytest.raises(NotAHomomorphism):
        hom_check(Homomorphism(D4, D4, {'r': 's', 's': 'r'}, name='swap'))


def test_builtin_homs():
    D4, Z2 = dihedral_group(4), cyclic_group(2)
    assert builtin_hom('eq', D4).is_identity
    assert builtin_hom('e_star', D4).is_trivial
    assert builtin_hom('e_minus', trivial_group(), D4).is_trivial
    with pytest.raises(DomainMismatch):
        builtin_hom('eq', D4, Z2)
    with pytest.raises(ShapeMismatch):
        builtin_hom('proj1', D4)
    with pytest.raises(ValueError):
        builtin_hom('nope', D4)
    gh = free_abelian_group(['g', 'h'])
    assert builtin_hom('inclusion', Z2, gh).images['g'] == gh.generator('g')
    with pytest.raises(ShapeMismatch):
        builtin_hom('inclusion', D4, gh)

    sq = hom_power(Homomorphism(D4, D4, {'r': 'r^-1', 's': 's'}, name='f'), 2)
    assert sq.is_identity
    both = hom_product(builtin_hom('eq', D4), builtin_hom('e_star', D4))
    assert both.target.generators == ['r', 's']
    rho = hom_compose(builtin_hom('e_star', D4), builtin_hom('eq', D4))
    assert rho.is_trivial


def test_entailment_projections():
    ctx = ProofContext()
    fx = GroupAction(cyclic_group(2), Signature([('x', REAL)]),
                     {'g': {'x': -ax}}, name='fx')
    fy = GroupAction(cyclic_group(2), Signature([('y', REAL)]),
                     {'g': {'y': -ay}}, name='fy')
    prod = direct_product(fx, fy, ctx)
    assert entails(prod, fx, builtin_hom('proj1', prod.group), ctx)
    assert entails(prod, fy, builtin_hom('proj2', prod.group), ctx)
    # the first factor leaves y alone
    status, err = try_entails(prod, fy, builtin_hom('proj1', prod.group), ctx)
    assert status == 'invalid'
    assert err.variable == 'y'


def test_entailment_from_trivial_and_lift():
    ctx = ProofContext()
    turn = quarter_turn()
    E = trivial_group()
    nothing = trivial_action(E, XY)
    assert entails(nothing, trivial_action(turn.group, Signature([])),
                   builtin_hom('e_minus', E, turn.group), ctx) is not None

    big = XY.merge(Signature([('z', INT)]))
    lifted = turn.lift(big)
    assert entails(lifted, turn, builtin_hom('eq', turn.group), ctx)
    with pytest.raises(VarsNotSubset):
        entails(turn, lifted, builtin_hom('eq', turn.group), ctx)


def test_entailment_through_squares():
    ctx = ProofContext()
    X = Signature([('x', INT)])
    a = X.alpha('x')
    by_two = GroupAction(GroupPresentation('Z', ['g']), X, {'g': {'x': a + 2}},
                         name='two')
    by_one = GroupAction(GroupPresentation('Z1', ['h']), X, {'h': {'x': a + 1}},
                         name='one')
    hom = Homomorphism(by_two.group, by_one.group, {'g': 'h^2'}, name='double')
    assert entails(by_two, by_one, hom, ctx)
    wrong = Homomorphism(by_two.group, by_one.group, {'g': 'h^3'}, name='triple')
    status, err = try_entails(by_two, by_one, wrong, ctx)
    assert status == 'invalid'
    assert isinstance(err, NotEntailed)


if __name__ == '__main__':
    pytest.main([__file__])
