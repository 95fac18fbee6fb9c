import os
from fractions import Fraction

import pytest
import sympy
from sympy import Piecewise, cos, sin

from symverif.corpus import CORPUS_DIR
from symverif.expr import PI, REAL, Signature, int_mod
from symverif.groups.actions import GroupAction
from symverif.groups.presentation import cyclic_group
from symverif.lang.parser import parse_program
from symverif.smt.encoding import encode_sem_assign, find_hom
from symverif.smt.obligations import Obligation, ProofContext
from symverif.smt.smtlib import emit_script, smt_term
from symverif.smt.solver import parse_model, run_solver
from symverif.specfile import load_spec

x, y = sympy.symbols('alpha_x alpha_y', real=True)


def test_golden_max_script():
    spec = load_spec(os.path.join(CORPUS_DIR, 'max.sym'))
    triple = spec.triple()
    ob = encode_sem_assign(triple.pre, triple.program, triple.post, triple.hom,
                           triple.signature)
    with open(os.path.join(CORPUS_DIR, 'max.smt2')) as f:
        golden = f.read()
    assert emit_script(ob) == golden


def test_terms():
    n = sympy.Symbol('alpha_n', integer=True)
    assert smt_term(x + 1) in ('(+ 1.0 alpha_x)', '(+ alpha_x 1.0)')
    assert smt_term(n * 2) == '(* 2 alpha_n)'
    assert smt_term(x / 2) == '(/ alpha_x 2.0)'
    # integer subterms in real context are coerced
    assert '(to_real alpha_n)' in smt_term(sympy.Eq(x, n, evaluate=False))


def test_comparisons_print_in_one_orientation():
    assert smt_term(x < y) == smt_term(y > x) == '(> alpha_y alpha_x)'
    assert smt_term(x <= y) == '(>= alpha_y alpha_x)'
    lhs = Piecewise((x, x > y), (y, True))
    rhs = Piecewise((x, y < x), (y, True))
    assert smt_term(lhs) == smt_term(rhs)
    assert smt_term(sympy.Max(x, y)) == smt_term(sympy.Max(y, x))


def test_trig_scripts():
    ob = Obligation('expr_equality',
                    sympy.Eq(cos(x), sin(x + PI / 2), evaluate=False))
    script = emit_script(ob)
    assert '(set-logic QF_UFNIRA)' in script
    assert '(declare-fun sym_cos (Real) Real)' in script
    assert '(declare-const sym_pi Real)' in script
    assert 'forall' not in script
    script = emit_script(ob, trig_axioms=True)
    assert '(set-logic UFNIRA)' in script
    assert 'forall' in script
    assert script.rstrip().endswith('(check-sat)')


def test_domain_constraints_in_script():
    t = sympy.Symbol('alpha_t', integer=True, nonnegative=True)
    ob = Obligation('expr_equality', sympy.Eq(t, t, evaluate=False),
                    universals={t: int_mod(360)})
    script = emit_script(ob)
    assert '(declare-const alpha_t Int)' in script
    assert '(>= alpha_t 0)' in script and '(> 360 alpha_t)' in script


def test_parse_model():
    text = ('(\n  (define-fun alpha_x () Real\n    (/ 1.0 2.0))\n'
            '  (define-fun alpha_n () Int\n    (- 3))\n'
            '  (define-fun sym_sin ((x!0 Real)) Real\n    0.0)\n)')
    model = parse_model(text)
    assert model == {'alpha_x': Fraction(1, 2), 'alpha_n': Fraction(-3)}
    assert parse_model('') == {}


def test_local_discharge():
    ctx = ProofContext()
    sig = Signature([('x', REAL), ('y', REAL)])
    result = ctx.equal(x + y, y + x, sig.symbol_domains)
    assert result.status == 'valid' and result.method == 'local'
    result = ctx.equal(x + y, x - y, sig.symbol_domains)
    assert result.status == 'invalid' and result.method == 'sampling'
    assert result.model is not None
    assert len(ctx.records) == 2
    assert ctx.records[1].to_dict()['status'] == 'invalid'


def test_discharge_all_does_not_depend_on_jobs():
    obligations = [
        Obligation('expr_equality', sympy.Eq(x + k, x + 1, evaluate=False),
                   universals={x: REAL})
        for k in range(6)]
    outcomes = []
    for jobs in (1, 4):
        ctx = ProofContext(dict(jobs=jobs))
        results = ctx.discharge_all(obligations)
        assert [r.obligation for r in results] == obligations
        assert [r.obligation for r in ctx.records] == obligations
        outcomes.append([(r.status, r.model) for r in results])
    assert outcomes[0] == outcomes[1]
    assert [s for s, _ in outcomes[0]] == ['invalid', 'valid'] + ['invalid'] * 4


def test_find_hom():
    ctx = ProofContext()
    decls, assign = parse_program('var x, y, d: Int\nd := x - y')
    sig = Signature((dcl.name, dcl.domain) for dcl in decls)
    a = sig.alpha
    swap = GroupAction(cyclic_group(2), sig.restrict(['x', 'y']),
                       {'g': {'x': a('y'), 'y': a('x')}}, name='swap')
    negate = GroupAction(cyclic_group(2), sig.restrict(['d']),
                         {'g': {'d': -a('d')}}, name='negate')
    hom, results = find_hom(swap, assign, negate, sig, ctx)
    assert hom.images['g'] == negate.group.generator('g')
    assert results[('g', 0)].status == 'invalid'
    assert results[('g', 1)].status == 'valid'

    ob = encode_sem_assign(swap, assign, negate, signature=sig)
    assert ctx.discharge(ob).status == 'valid'


def test_solver_run(solver):
    unsat = '(declare-const a Int)\n(assert (> a a))\n(check-sat)\n'
    assert run_solver(unsat, solver, 10).status == 'unsat'
    sat = '(declare-const a Int)\n(assert (= (* 2 a) 6))\n(check-sat)\n'
    result = run_solver(sat, solver, 10)
    assert result.status == 'sat'
    assert result.model == {'a': Fraction(3)}


def test_solver_discharge(solver):
    ctx = ProofContext(dict(case_split_atoms=0))
    lhs = Piecewise((x, x > 0), (-x, True))
    rhs = Piecewise((x, x >= 0), (-x, True))
    ob = Obligation('expr_equality', sympy.Eq(lhs, rhs, evaluate=False))
    result = ctx.discharge(ob)
    assert result.status == 'valid'
    assert result.method == 'solver'


if __name__ == '__main__':
    pytest.main([__file__])
