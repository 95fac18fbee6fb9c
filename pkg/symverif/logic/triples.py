#!/usr/bin/env python
"""
Symmetry triples, proof traces and verdicts.
"""
import logging
from collections import OrderedDict

from symverif.errors import DomainMismatch
from symverif.lang.syntax import count_assignments, iter_statements

LOGGER = logging.getLogger(__name__)

RULES = ('SKIP', 'ASSGN', 'SEM-ASSGN', 'SEQ', 'IF', 'FOR', 'WHILE', 'CONST',
         'LIFT', 'ID', 'DIR-PROD', 'FREE-PROD', 'CONS-1', 'CONS-2')

EXIT_CODES = {'valid': 0, 'invalid': 1, 'unknown': 2}


class Annotation(object):
    """
    Intermediate assertion attached to a statement path

    Parameters
    ----------
    action : GroupAction, optional
        Post action of the statement.
    hom : Homomorphism, optional
        From the group of the action holding before the statement to the
        group of `action`.
    inverse : ProgramExpr, optional
        Inverse of an assignment expression; the assigned variable
        stands for its new value.
    """

    def __init__(self, action=None, hom=None, inverse=None):
        self.action = action
        self.hom = hom
        self.inverse = inverse

    def __repr__(self):
        return 'Annotation({0}, {1}, {2})'.format(
            getattr(self.action, 'name', None), getattr(self.hom, 'name', None),
            self.inverse)


class SymmetryTriple(object):
    """
    ``(G, pre) program (H, post)`` related by ``hom``

    Parameters
    ----------
    pre, post : GroupAction
    program : Command
    hom : Homomorphism
        From ``pre.group`` to ``post.group``.
    signature : Signature
        Domains of all program variables.
    annotations : dict, optional
        Map from statement paths to ``Annotation``.
    name : str, optional
    """

    def __init__(self, pre, program, post, hom, signature, annotations=None,
                 name=None):
        if hom.source != pre.group:
            raise DomainMismatch('Homomorphism {0} starts at {1}, the pre group '
                                 'is {2}'.format(hom.name, hom.source.name,
                                                 pre.group.name))
        if hom.target != post.group:
            raise DomainMismatch('Homomorphism {0} ends at {1}, the post group '
                                 'is {2}'.format(hom.name, hom.target.name,
                                                 post.group.name))
        self.pre = pre
        self.program = program
        self.post = post
        self.hom = hom
        self.signature = signature
        self.annotations = OrderedDict(annotations or {})
        self.name = name or 'triple'
        paths = set(p for p, _ in iter_statements(program))
        unknown = set(self.annotations).difference(paths)
        if unknown:
            raise KeyError('Annotations at unknown statement paths: {0}'
                           .format(', '.join(sorted(unknown))))

    @property
    def n_assignments(self):
        return count_assignments(self.program)

    def __repr__(self):
        return 'SymmetryTriple({0})'.format(self.name)


class ProofNode(object):
    """
    One rule application

    Parameters
    ----------
    rule : str
        One of `RULES`.
    path : str
        Statement path the rule was applied at.
    detail : str
        Human readable premise summary.
    """

    def __init__(self, rule, path='', detail='', results=None, children=None,
                 certificate=None):
        if rule not in RULES:
            raise ValueError('Unknown rule `{0}`'.format(rule))
        self.rule = rule
        self.path = path
        self.detail = detail
        self.results = list(results or [])
        self.children = list(children or [])
        self.certificate = certificate

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_dict(self):
        out = OrderedDict([('rule', self.rule), ('path', self.path),
                           ('detail', self.detail)])
        if self.results:
            out['obligations'] = [r.to_dict() for r in self.results]
        if self.certificate is not None:
            out['certificate'] = self.certificate.to_dict()
        if self.children:
            out['children'] = [c.to_dict() for c in self.children]
        return out

    def __repr__(self):
        return 'ProofNode({0} at {1!r})'.format(self.rule, self.path)


class ProofTrace(object):
    def __init__(self, root):
        self.root = root

    def nodes(self):
        return list(self.root.walk())

    def count(self, rule):
        return sum(1 for n in self.root.walk() if n.rule == rule)

    def rules(self):
        return [n.rule for n in self.root.walk()]

    def format(self):
        lines = []

        def visit(node, depth):
            lines.append('{0}{1}{2}{3}'.format(
                '  ' * depth, node.rule,
                ' [{0}]'.format(node.path) if node.path else '',
                ': ' + node.detail if node.detail else ''))
            for c in node.children:
                visit(c, depth + 1)
        visit(self.root, 0)
        return '\n'.join(lines)

    def to_dict(self):
        return self.root.to_dict()


class Verdict(object):
    """
    Result of a verification

    status is 'valid' (with a proof trace), 'invalid' (with the failing
    obligation and a counterexample) or 'unknown' (with a reason:
    'timeout', 'unsupported-construct', 'missing-annotation' or
    'undecided').
    """

    def __init__(self, status, trace=None, reason=None, obligation=None,
                 counterexample=None, message=''):
        if status not in EXIT_CODES:
            raise ValueError('Unknown verdict `{0}`'.format(status))
        self.status = status
        self.trace = trace
        self.reason = reason
        self.obligation = obligation
        self.counterexample = counterexample
        self.message = message

    @classmethod
    def valid(cls, trace):
        return cls('valid', trace=trace)

    @classmethod
    def invalid(cls, message, obligation=None, counterexample=None, trace=None):
        return cls('invalid', trace=trace, obligation=obligation,
                   counterexample=counterexample, message=message)

    @classmethod
    def unknown(cls, reason, message='', trace=None):
        return cls('unknown', trace=trace, reason=reason, message=message)

    @property
    def exit_code(self):
        return EXIT_CODES[self.status]

    @property
    def is_valid(self):
        return self.status == 'valid'

    def to_dict(self):
        out = OrderedDict([('status', self.status)])
        if self.reason:
            out['reason'] = self.reason
        if self.message:
            out['message'] = self.message
        if self.obligation is not None:
            out['obligation'] = self.obligation.describe()
        if self.counterexample is not None:
            out['counterexample'] = OrderedDict(
                (str(k), v) for k, v in self.counterexample.items())
        if self.trace is not None:
            out['trace'] = self.trace.to_dict()
        return out

    def __str__(self):
        text = self.status.upper()
        if self.reason:
            text += ' ({0})'.format(self.reason)
        if self.message:
            text += ': ' + self.message
        return text

    def __repr__(self):
        return 'Verdict({0})'.format(self)
