#!/usr/bin/env python
"""
Parser of the program text.

Example::

    param T: Real
    param dt: RealOpen01
    var x, y, v, phi, theta, t: Real

    for (t := 0; t < T; t := t + dt) {
        x := v * cos(theta) * dt + x;
        y := v * sin(theta) * dt + y
    }

Statements may be separated by ``;``; ``#`` starts a comment. Guards of
``if`` and ``while`` must be variables; expressions support the usual
arithmetic, comparison and boolean operators, ``c ? a : b`` and the
operations ``sin``, ``cos``, ``tan``, ``abs``, ``pow3``, ``mod`` and ``ite``.
"""
import logging
from collections import OrderedDict
from fractions import Fraction

import pyparsing as pp

from symverif.errors import (NonVariableGuard, ProgramSyntaxError,
                             UndeclaredVariable)
from symverif.expr import get_domain
from symverif.lang.syntax import (Apply, Assign, For, If, Num, Pi, Skip,
                                  Var, VarDecl, While, iter_statements,
                                  modified_vars, sequence)

LOGGER = logging.getLogger(__name__)

pp.ParserElement.enable_packrat()

KEYWORDS = ('skip', 'if', 'then', 'else', 'while', 'do', 'for', 'var',
            'param', 'true', 'false', 'pi')

DOMAIN_NAMES = ('Int', 'Bool', 'IntMod', 'Real', 'RealOpen01')

UNARY_OPS = {'-': 'neg', '!': 'not', 'not': 'not'}
BINARY_OPS = {
    '*': 'mul', '/': 'div', '%': 'mod', '+': 'add', '-': 'sub',
    '<': 'lt', '<=': 'le', '>': 'gt', '>=': 'ge', '==': 'eq', '!=': 'ne',
    '&&': 'and', 'and': 'and', '||': 'or', 'or': 'or',
}


def _location(s, loc):
    return pp.lineno(loc, s), pp.col(loc, s)


def _unary(tokens):
    t = tokens[0]
    expr = t[-1]
    for op in reversed(t[:-1]):
        expr = Apply(UNARY_OPS[op], [expr])
    return expr


def _binary(tokens):
    t = tokens[0]
    expr = t[0]
    for i in range(1, len(t), 2):
        expr = Apply(BINARY_OPS[t[i]], [expr, t[i + 1]])
    return expr


def _ternary(tokens):
    t = list(tokens[0])
    # right associative: c1 ? a1 : c2 ? a2 : b
    expr = t[-1]
    for i in range(len(t) - 5, -1, -4):
        expr = Apply('ite', [t[i], t[i + 2], expr])
    return expr


def _call(s, loc, tokens):
    name, args = tokens[0], list(tokens[1:])
    try:
        return Apply(name, args)
    except KeyError:
        raise pp.ParseFatalException(s, loc, 'Unknown operation `{0}`'
                                     .format(name))
    except ValueError as e:
        raise pp.ParseFatalException(s, loc, str(e))


def _variable(s, loc, tokens):
    return Var(tokens[0], _location(s, loc))


def _number(tokens):
    return Num(Fraction(tokens[0]))


def _guard(s, loc, tokens):
    expr = tokens[0]
    if expr.kind != 'var':
        line, col = _location(s, loc)
        raise NonVariableGuard('Guard `{0}` is not a variable'.format(expr),
                               line, col)
    return expr.name


def _assign(s, loc, tokens):
    a = Assign(tokens[0], tokens[1])
    a.loc = _location(s, loc)
    return a


def _for(s, loc, tokens):
    (c0, zero, c1, bound, c2, c3, step, body) = tokens
    if not (c0 == c1 == c2 == c3) or zero.value != 0:
        line, col = _location(s, loc)
        raise ProgramSyntaxError('Loops must have the form `for (t := 0; t < T; '
                                 't := t + dt)`', line, col)
    try:
        return For(c0, bound, step, body)
    except ValueError as e:
        line, col = _location(s, loc)
        raise ProgramSyntaxError(str(e), line, col)


def _declaration(tokens):
    role = 'parameter' if tokens[0] == 'param' else 'program'
    names = list(tokens[1])
    domain = tokens[2]
    modulus = tokens[3] if len(tokens) > 3 else None
    return [VarDecl(n, get_domain(domain, modulus), role) for n in names]


def _grammar():
    LPAR, RPAR, LBRACE, RBRACE, SEMI, COLON, COMMA = map(pp.Suppress, '(){};:,')
    DEFINE = pp.Suppress(':=')
    keyword = pp.MatchFirst([pp.Keyword(k) for k in KEYWORDS])
    name = pp.Combine(~keyword + pp.Word(pp.alphas + '_', pp.alphanums + '_'))
    integer = pp.Regex(r'\d+').set_parse_action(lambda t: int(t[0]))

    expr = pp.Forward()
    number = pp.Regex(r'\d+(\.\d+)?').set_parse_action(_number)
    constant = (pp.Keyword('pi').set_parse_action(lambda: Pi()) |
                pp.Keyword('true').set_parse_action(lambda: Num(1)) |
                pp.Keyword('false').set_parse_action(lambda: Num(0)))
    call = (name + LPAR + pp.Optional(pp.delimited_list(expr)) + RPAR
            ).set_parse_action(_call)
    variable = name.copy().set_parse_action(_variable)
    atom = number | constant | call | variable | (LPAR + expr + RPAR)
    expr <<= pp.infix_notation(atom, [
        (pp.Literal('-') | pp.Literal('!') | pp.Keyword('not'), 1, pp.OpAssoc.RIGHT, _unary),
        (pp.one_of('* / %'), 2, pp.OpAssoc.LEFT, _binary),
        (pp.one_of('+ -'), 2, pp.OpAssoc.LEFT, _binary),
        (pp.one_of('<= >= < > == !='), 2, pp.OpAssoc.LEFT, _binary),
        (pp.Literal('&&') | pp.Keyword('and'), 2, pp.OpAssoc.LEFT, _binary),
        (pp.Literal('||') | pp.Keyword('or'), 2, pp.OpAssoc.LEFT, _binary),
        (('?', ':'), 3, pp.OpAssoc.RIGHT, _ternary),
    ])

    stmt = pp.Forward()
    stmts = pp.ZeroOrMore(stmt + pp.ZeroOrMore(SEMI))
    block = (LBRACE + stmts + RBRACE).set_parse_action(
        lambda t: sequence(list(t)))
    guard = expr.copy().set_parse_action(_guard)

    skip = pp.Keyword('skip').set_parse_action(lambda: Skip())
    assign = (name + DEFINE + expr).set_parse_action(_assign)
    if_ = (pp.Suppress(pp.Keyword('if')) + guard + pp.Suppress(pp.Keyword('then'))
           + block + pp.Optional(pp.Suppress(pp.Keyword('else')) + block)
           ).set_parse_action(lambda t: If(*t))
    while_ = (pp.Suppress(pp.Keyword('while')) + guard +
              pp.Suppress(pp.Keyword('do')) + block
              ).set_parse_action(lambda t: While(*t))
    for_ = (pp.Suppress(pp.Keyword('for')) + LPAR + name + DEFINE + number +
            SEMI + name + pp.Suppress('<') + name + SEMI + name + DEFINE +
            name + pp.Suppress('+') + name + RPAR + block
            ).set_parse_action(_for)
    stmt <<= skip | if_ | while_ | for_ | assign

    domain = pp.one_of(' '.join(DOMAIN_NAMES), as_keyword=True) + \
        pp.Optional(integer)
    decl = ((pp.Keyword('var') | pp.Keyword('param')) +
            pp.Group(pp.delimited_list(name)) + COLON + domain +
            pp.Optional(SEMI)).set_parse_action(_declaration)
    program = (pp.Group(pp.ZeroOrMore(decl)) + pp.Group(stmts)) + pp.StringEnd()
    expr_only = expr + pp.StringEnd()
    return program, expr_only


PROGRAM, EXPRESSION = _grammar()

COMMENT = pp.python_style_comment.copy().set_parse_action(pp.replace_with(''))


def _syntax_error(e, filename, line_offset):
    return ProgramSyntaxError(e.msg, e.lineno + line_offset, e.col, filename)


def _check_declarations(command, decls, filename, line_offset):
    declared = OrderedDict()
    for d in decls:
        if d.name in declared:
            raise ProgramSyntaxError('Variable `{0}` declared twice'
                                     .format(d.name), filename=filename)
        declared[d.name] = d

    def fail(name, loc):
        line, col = loc if loc is not None else (None, None)
        if line is not None:
            line += line_offset
        raise UndeclaredVariable('Undeclared variable `{0}`'.format(name),
                                 line, col, filename)

    def check_expr(e):
        if e.kind == 'var' and e.name not in declared:
            fail(e.name, e.loc)
        for a in getattr(e, 'args', ()):
            check_expr(a)

    for _, s in iter_statements(command):
        loc = getattr(s, 'loc', None)
        if s.kind == 'assign':
            if s.var not in declared:
                fail(s.var, loc)
            if declared[s.var].role == 'parameter':
                raise ProgramSyntaxError('Parameter `{0}` is assigned'
                                         .format(s.var), filename=filename)
            check_expr(s.expr)
        elif s.kind in ('if', 'while'):
            if s.guard not in declared:
                fail(s.guard, loc)
        elif s.kind == 'for':
            for v in (s.counter, s.bound, s.step):
                if v not in declared:
                    fail(v, loc)
            assigned = modified_vars(s.body)
            for v in (s.bound, s.step):
                if v in assigned:
                    raise ProgramSyntaxError(
                        'Loop bound/step `{0}` is assigned in the body'
                        .format(v), filename=filename)


def parse_program(text, decls=None, filename=None, line_offset=0):
    """
    Parse program text

    Parameters
    ----------
    text : str
        Declarations (``var``/``param`` lines) followed by statements.
    decls : list of VarDecl, optional
        Declarations given outside the text (e.g. by a spec file); they
        are merged with the ones in the text.
    filename : str, optional
        Used in error messages.
    line_offset : int
        Added to line numbers in error messages.

    Returns
    -------
    decls : list of VarDecl
    command : Command

    Raises
    ------
    ProgramSyntaxError, UndeclaredVariable, NonVariableGuard
    """
    try:
        result = PROGRAM.parse_string(COMMENT.transform_string(text),
                                      parse_all=True)
    except pp.ParseBaseException as e:
        raise _syntax_error(e, filename, line_offset)
    except ProgramSyntaxError as e:
        if e.line is not None:
            e.line += line_offset
        e.filename = filename
        e.args = (e.location() + e.msg,)
        raise
    text_decls = [d for group in result[0] for d in
                  (group if isinstance(group, list) else [group])]
    all_decls = list(decls or []) + text_decls
    command = sequence(list(result[1]))
    _check_declarations(command, all_decls, filename, line_offset)
    LOGGER.debug('Parsed program with %d declarations', len(all_decls))
    return all_decls, command


def parse_expression(text):
    """Parse a single expression"""
    try:
        return EXPRESSION.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as e:
        raise ProgramSyntaxError('Bad expression `{0}`: {1}'.format(text, e.msg),
                                 e.lineno, e.col)
