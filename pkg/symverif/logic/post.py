#!/usr/bin/env python
"""
Inversion of assignments and the strongest post action of an injective
assignment.

For ``x := f`` with an inverse ``f_hat`` (``f_hat(f(alpha), ...) == alpha``
on x) the post action of an action a is::

    g . sigma = run(a_g(sigma[x -> f_hat(sigma)]))

i.e. undo the assignment, act, and redo it.
"""
import logging
from collections import OrderedDict

import mpmath
import sympy
from sympy import Mod, Piecewise

from symverif.errors import (InverseUnverified, NoInverse, NoInverseFound,
                             SolverTimeout, Unverifiable)
from symverif.expr import gamma, simplify, substitute, wrap_domain
from symverif.groups.actions import GroupAction, check_action
from symverif.smt.obligations import Obligation, get_context

LOGGER = logging.getLogger(__name__)


def _iv_bounds(domain):
    if domain.kind == 'Bool':
        return 0, 1
    if domain.kind == 'IntMod':
        return 0, domain.modulus - 1
    if domain.kind == 'RealOpen01':
        return 0, 1
    return None


def _iv_eval(e, env):
    """Interval enclosure of `e`, or None for unsupported terms"""
    if e in env:
        return env[e]
    if e.is_Rational:
        return mpmath.iv.mpf(e.p) / e.q
    args = [_iv_eval(a, env) for a in e.args]
    if any(a is None for a in args):
        return None
    if e.is_Add:
        return sum(args[1:], args[0])
    if e.is_Mul:
        out = args[0]
        for a in args[1:]:
            out = out * a
        return out
    if e.is_Pow and e.exp.is_Integer:
        return args[0] ** int(e.exp)
    if isinstance(e, sympy.sin):
        return mpmath.iv.sin(args[0])
    if isinstance(e, sympy.cos):
        return mpmath.iv.cos(args[0])
    return None


def _excludes_zero(coeff, symbol_domains):
    """Sign of `coeff` is fixed over the domains of its symbols"""
    # open unit intervals are reparametrised by u / (1 + u) with u > 0 so
    # that the assumption system can decide the sign of the numerator
    sub = {}
    for s in coeff.free_symbols:
        d = symbol_domains.get(s)
        if d is not None and d.kind == 'RealOpen01':
            u = sympy.Symbol('u_' + s.name, positive=True)
            sub[s] = u / (1 + u)
    num, den = sympy.together(coeff.xreplace(sub)).as_numer_denom()
    num, den = sympy.expand(num), sympy.expand(den)
    if (num.is_positive or num.is_negative) and \
            (den.is_positive or den.is_negative):
        return True

    env = {}
    for s in coeff.free_symbols:
        d = symbol_domains.get(s)
        bounds = _iv_bounds(d) if d is not None else None
        if bounds is None:
            return False
        env[s] = mpmath.iv.mpf(list(bounds))
    value = _iv_eval(coeff, env)
    return value is not None and (value.a > 0 or value.b < 0)


def _nonzero(coeff, signature, context, meta):
    coeff = simplify(coeff, signature.moduli)
    if coeff.is_Number:
        return coeff != 0
    if _excludes_zero(coeff, signature.symbol_domains):
        return True
    ob = Obligation('injectivity', sympy.Ne(coeff, 0),
                    symbol_domains=signature.symbol_domains, meta=meta)
    result = get_context(context).discharge(ob)
    if result.status == 'timeout':
        raise SolverTimeout('Timeout on {0}'.format(ob.describe()))
    return result.valid


def _affine_inverse(f, alpha, signature, context, meta):
    """(alpha - b) / c for f == c * alpha + b with c free of alpha"""
    if alpha not in f.free_symbols:
        return None
    moduli = signature.moduli
    rest = f.xreplace({alpha: sympy.Integer(0)})
    if rest.has(sympy.zoo, sympy.nan):
        return None
    coeff = simplify(f.xreplace({alpha: sympy.Integer(1)}) - rest, moduli)
    if alpha in coeff.free_symbols or coeff.has(sympy.zoo, sympy.nan):
        return None
    if simplify(f - coeff * alpha - rest, moduli) != 0:
        return None
    if not _nonzero(coeff, signature, context, meta):
        return None
    return simplify((alpha - rest) / coeff, moduli)


def _piecewise_inverse(f, alpha, signature, context, meta):
    """Branchwise inverse of a piecewise term whose guards do not read alpha"""
    if not isinstance(f, Piecewise):
        return None
    pieces = []
    for e, c in f.args:
        if c is not sympy.true and alpha in c.free_symbols:
            return None
        inv = _affine_inverse(e, alpha, signature, context, meta)
        if inv is None:
            return None
        pieces.append((inv, c))
    return Piecewise(*pieces)


def _modular_inverse(f, alpha, modulus):
    """Mod(c * (alpha - b), n) for f == c * alpha + b (mod n), c = +-1"""
    p = f.args[0] if isinstance(f, Mod) and f.args[1] == modulus else f
    p = sympy.expand(p)
    c = p.coeff(alpha)
    b = sympy.expand(p - c * alpha)
    if c not in (1, -1) or alpha in b.free_symbols:
        return None
    return Mod(c * (alpha - b), modulus)


def _check_inverse(f, fhat, var, signature, context, meta):
    alpha = signature.alpha(var)
    value = wrap_domain(f, signature.domain(var))
    composed = substitute(fhat, {alpha: value})
    if simplify(composed - alpha, signature.moduli) == 0:
        return 'simplify'
    result = get_context(context).equal(composed, alpha,
                                        signature.symbol_domains,
                                        kind='inverse_identity', meta=meta)
    if not result.valid:
        raise InverseUnverified('Cannot prove {0} inverts the assignment to `{1}`'
                                .format(fhat, var))
    return result.method


def invert_assignment(expr, var, signature, context=None, inverse=None):
    """
    Inverse of the assignment ``var := expr`` with respect to `var`

    Parameters
    ----------
    expr : ProgramExpr
        Right hand side.
    var : str
        Assigned variable.
    signature : Signature
        All program variables.
    context : ProofContext, optional
    inverse : ProgramExpr, optional
        User supplied inverse, in which `var` denotes the value after the
        assignment.

    Returns
    -------
    sympy.Expr
        ``f_hat`` over the logical variables, ``alpha_<var>`` standing for
        the assigned value.

    Raises
    ------
    NoInverseFound
        The expression is neither affine, piecewise affine nor modular
        affine in `var` and no inverse was given.
    InverseUnverified
        The candidate inverse could not be proved.
    """
    alpha = signature.alpha(var)
    domain = signature.domain(var)
    fresh = signature.fresh_state()
    f = gamma(expr, fresh)
    meta = dict(var=var)
    if inverse is not None:
        fhat = gamma(inverse, fresh)
    elif domain.kind == 'IntMod':
        fhat = _modular_inverse(f, alpha, domain.modulus)
    else:
        fhat = _affine_inverse(simplify(f, signature.moduli), alpha, signature,
                               context, meta)
        if fhat is None:
            fhat = _piecewise_inverse(f, alpha, signature, context, meta)
    if fhat is None:
        raise NoInverseFound('No inverse of `{0} := {1}`'.format(var, expr))
    method = _check_inverse(f, fhat, var, signature, context, meta)
    LOGGER.debug('Inverse of %s := %s is %s (%s)', var, expr, fhat, method)
    return fhat


def injectivity_check(expr, var, signature, context=None):
    """
    True when ``var := expr`` is injective in `var` (an inverse was found
    and proved). Undecided and timed out cases count as not injective.
    """
    try:
        invert_assignment(expr, var, signature, context)
    except (NoInverseFound, InverseUnverified, SolverTimeout, Unverifiable):
        return False
    return True


def leaves_untouched(m, assign, alpha, signature):
    reads = set(assign.expr.variables()) | set([assign.var])
    if any(m[u] != signature.alpha(u) for u in reads if u in m):
        return False
    return all(alpha not in m[v].free_symbols
               for v in m if v != assign.var)


def post_transform(action, assign, signature=None, context=None, inverse=None,
                   fhat=None):
    """
    Strongest post action of an injective assignment

    Parameters
    ----------
    action : GroupAction
        Action holding before the assignment; lifted to `signature`.
    assign : Assign
    signature : Signature, optional
        All program variables (defaults to the action's).
    inverse : ProgramExpr, optional
        User supplied inverse.
    fhat : sympy.Expr, optional
        Already computed inverse.

    Returns
    -------
    GroupAction
        Action of the same group on the same variables.
    """
    signature = signature or action.signature
    if action.vars != signature.names:
        action = action.lift(signature)
    x = assign.var
    if fhat is None:
        fhat = invert_assignment(assign.expr, x, signature, context, inverse)
    alpha = signature.alpha(x)
    domain = signature.domain(x)
    moduli = signature.moduli
    maps = OrderedDict()
    for g in action.group.generators:
        m = action.map_of(g)
        if leaves_untouched(m, assign, alpha, signature):
            maps[g] = m
            continue
        rho = OrderedDict()
        for v, e in m.items():
            rho[v] = simplify(substitute(e, {alpha: fhat}), moduli) \
                if alpha in e.free_symbols else e
        new = OrderedDict(rho)
        new[x] = simplify(wrap_domain(gamma(assign.expr, rho), domain), moduli)
        maps[g] = new
    out = GroupAction(action.group, signature, maps,
                      name='post({0}, {1})'.format(action.name, x),
                      faithful=action.faithful)
    try:
        check_action(out, get_context(context))
    except (NoInverse, SolverTimeout, Unverifiable) as e:
        # only a refuted relation is an error here
        LOGGER.debug('Post action %s not re-checked: %s', out.name, e)
    return out
