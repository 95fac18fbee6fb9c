#!/usr/bin/env python
"""
Abstract syntax of the imperative language.

Expressions are ``Num``, ``Var``, ``Pi`` and ``Apply`` nodes; every node
has a ``kind`` attribute ('num', 'var', 'pi', 'apply') which is what the
symbolic translation in ``symverif.expr`` dispatches on. Commands are
``Skip``, ``Assign``, ``Seq``, ``If``, ``For`` and ``While``.

Statements are addressed by dotted paths: an index into a sequence,
``body`` for loop bodies and ``then``/``else`` for branches (e.g.
``body.2`` is the third statement of a top level loop body).
"""
from fractions import Fraction

from symverif.expr import get_domain, get_op

BINARY_SYMBOLS = {
    'add': '+', 'sub': '-', 'mul': '*', 'div': '/', 'mod': '%',
    'lt': '<', 'le': '<=', 'gt': '>', 'ge': '>=', 'eq': '==', 'ne': '!=',
    'and': '&&', 'or': '||',
}


class ProgramExpr(object):
    kind = None

    def key(self):
        raise NotImplementedError

    def variables(self):
        return set()

    def __eq__(self, other):
        return isinstance(other, ProgramExpr) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return '{0}({1})'.format(type(self).__name__, self)


class Num(ProgramExpr):
    kind = 'num'

    def __init__(self, value):
        self.value = Fraction(value)

    def key(self):
        return ('num', self.value)

    def __str__(self):
        return str(self.value)


class Pi(ProgramExpr):
    kind = 'pi'

    def key(self):
        return ('pi',)

    def __str__(self):
        return 'pi'


class Var(ProgramExpr):
    kind = 'var'

    def __init__(self, name, loc=None):
        self.name = name
        # (line, col) in the source text, for error messages
        self.loc = loc

    def key(self):
        return ('var', self.name)

    def variables(self):
        return set([self.name])

    def __str__(self):
        return self.name


def _wrap(a):
    if a.kind == 'apply' and get_op(a.op).kind != 'opaque':
        return '({0})'.format(a)
    return str(a)


class Apply(ProgramExpr):
    kind = 'apply'

    def __init__(self, op, args):
        symbol = get_op(op)
        args = tuple(args)
        if len(args) != symbol.arity:
            raise ValueError('`{0}` takes {1} arguments, got {2}'
                             .format(op, symbol.arity, len(args)))
        self.op = op
        self.args = args

    def key(self):
        return ('apply', self.op) + tuple(a.key() for a in self.args)

    def variables(self):
        out = set()
        for a in self.args:
            out |= a.variables()
        return out

    def __str__(self):
        args = [_wrap(a) for a in self.args]
        if self.op in BINARY_SYMBOLS:
            return '{0} {1} {2}'.format(args[0], BINARY_SYMBOLS[self.op], args[1])
        if self.op == 'neg':
            return '-{0}'.format(args[0])
        if self.op == 'not':
            return '!{0}'.format(args[0])
        if self.op == 'ite':
            return '{0} ? {1} : {2}'.format(*args)
        return '{0}({1})'.format(self.op, ', '.join(str(a) for a in self.args))


class VarDecl(object):
    """
    Declaration of a program variable

    Parameters
    ----------
    name : str
    domain : Domain
    role : str
        'program' or 'parameter' (never assigned).
    """

    def __init__(self, name, domain, role='program'):
        if role not in ('program', 'parameter'):
            raise ValueError('Unknown variable role `{0}`'.format(role))
        self.name = name
        self.domain = domain
        self.role = role

    @classmethod
    def from_text(cls, name, domain_name, modulus=None, role='program'):
        return cls(name, get_domain(domain_name, modulus), role)

    def __eq__(self, other):
        return (isinstance(other, VarDecl) and
                (self.name, self.domain, self.role) ==
                (other.name, other.domain, other.role))

    def __repr__(self):
        return 'VarDecl({0}: {1}, {2})'.format(self.name, self.domain.name,
                                               self.role)


class Command(object):
    kind = None

    def children(self):
        """``(path step, child command)`` pairs"""
        return []

    def __eq__(self, other):
        return isinstance(other, Command) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return '{0}(...)'.format(type(self).__name__)


class Skip(Command):
    kind = 'skip'

    def key(self):
        return ('skip',)

    def __repr__(self):
        return 'Skip()'


class Assign(Command):
    kind = 'assign'

    def __init__(self, var, expr):
        self.var = var
        self.expr = expr

    def key(self):
        return ('assign', self.var, self.expr.key())

    def __repr__(self):
        return 'Assign({0} := {1})'.format(self.var, self.expr)


class Seq(Command):
    kind = 'seq'

    def __init__(self, commands):
        flat = []
        for c in commands:
            if isinstance(c, Seq):
                flat.extend(c.commands)
            else:
                flat.append(c)
        self.commands = flat

    def children(self):
        return [(str(i), c) for i, c in enumerate(self.commands)]

    def key(self):
        return ('seq',) + tuple(c.key() for c in self.commands)


class If(Command):
    kind = 'if'

    def __init__(self, guard, then, orelse=None):
        self.guard = guard
        self.then = then
        self.orelse = orelse if orelse is not None else Skip()

    def children(self):
        return [('then', self.then), ('else', self.orelse)]

    def key(self):
        return ('if', self.guard, self.then.key(), self.orelse.key())


class For(Command):
    """``for (counter := 0; counter < bound; counter := counter + step) body``"""
    kind = 'for'

    def __init__(self, counter, bound, step, body):
        if len(set([counter, bound, step])) != 3:
            raise ValueError('Loop counter, bound and step must be distinct')
        self.counter = counter
        self.bound = bound
        self.step = step
        self.body = body

    def children(self):
        return [('body', self.body)]

    def key(self):
        return ('for', self.counter, self.bound, self.step, self.body.key())


class While(Command):
    kind = 'while'

    def __init__(self, guard, body):
        self.guard = guard
        self.body = body

    def children(self):
        return [('body', self.body)]

    def key(self):
        return ('while', self.guard, self.body.key())


def sequence(commands):
    commands = list(commands)
    if not commands:
        return Skip()
    if len(commands) == 1:
        return commands[0]
    return Seq(commands)


def modified_vars(c):
    """Variables assigned anywhere in `c` (a ``For`` also assigns its counter)"""
    if c.kind == 'assign':
        return frozenset([c.var])
    out = set()
    if c.kind == 'for':
        out.add(c.counter)
    for _, child in c.children():
        out |= modified_vars(child)
    return frozenset(out)


def used_vars(c):
    """Variables read or written by `c`"""
    if c.kind == 'assign':
        return set([c.var]) | c.expr.variables()
    out = set()
    if c.kind in ('if', 'while'):
        out.add(c.guard)
    elif c.kind == 'for':
        out.update([c.counter, c.bound, c.step])
    for _, child in c.children():
        out |= used_vars(child)
    return out


def iter_statements(c, path=''):
    """Pre-order ``(path, command)`` pairs"""
    yield path, c
    for step, child in c.children():
        yield from iter_statements(child, step if not path else
                                   '{0}.{1}'.format(path, step))


def statement_at(c, path):
    for p, s in iter_statements(c):
        if p == path:
            return s
    raise KeyError('No statement at path `{0}`'.format(path))


def count_assignments(c):
    return sum(1 for _, s in iter_statements(c) if s.kind == 'assign')


def format_command(c, indent=0):
    """Program text of a command"""
    pad = '  ' * indent
    if c.kind == 'skip':
        return pad + 'skip'
    if c.kind == 'assign':
        return '{0}{1} := {2}'.format(pad, c.var, c.expr)
    if c.kind == 'seq':
        return ';\n'.join(format_command(s, indent) for s in c.commands)
    if c.kind == 'if':
        return '{0}if {1} then {{\n{2}\n{0}}} else {{\n{3}\n{0}}}'.format(
            pad, c.guard, format_command(c.then, indent + 1),
            format_command(c.orelse, indent + 1))
    if c.kind == 'while':
        return '{0}while {1} do {{\n{2}\n{0}}}'.format(
            pad, c.guard, format_command(c.body, indent + 1))
    return ('{0}for ({1} := 0; {1} < {2}; {1} := {1} + {3}) {{\n{4}\n{0}}}'
            .format(pad, c.counter, c.bound, c.step,
                    format_command(c.body, indent + 1)))
