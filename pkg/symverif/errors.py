#!/usr/bin/env python
"""
Exceptions raised by the symverif modules.

All errors derive from ``SymverifError``, itself a ``ValueError``, so
callers that only care about bad input can keep catching ``ValueError``.
"""


class SymverifError(ValueError):
    pass


# expressions and programs

class UnknownVariable(SymverifError):
    def __init__(self, name):
        super().__init__('Unknown variable `{0}`'.format(name))
        self.name = name


class UnboundVar(SymverifError):
    def __init__(self, name):
        super().__init__('Logical variable `{0}` is not bound'.format(name))
        self.name = name


class DivByZero(SymverifError):
    pass


class ProgramSyntaxError(SymverifError):
    """Syntax error in program or spec-file text"""

    def __init__(self, msg, line=None, col=None, filename=None):
        self.msg = msg
        self.line = line
        self.col = col
        self.filename = filename
        super().__init__(self.location() + msg)

    def location(self):
        parts = [str(p) for p in (self.filename, self.line, self.col)
                 if p is not None]
        return ':'.join(parts) + ': ' if parts else ''


class UndeclaredVariable(ProgramSyntaxError):
    pass


class NonVariableGuard(ProgramSyntaxError):
    pass


class FuelExhausted(SymverifError):
    pass


# groups and actions

class BoundExceeded(SymverifError):
    def __init__(self, group_name, bound):
        super().__init__('Group `{0}` has more than {1} elements (or is '
                         'infinite)'.format(group_name, bound))
        self.group_name = group_name
        self.bound = bound


class NotAnAction(SymverifError):
    def __init__(self, relation, variable, lhs, rhs):
        super().__init__('Relation {0} fails on variable `{1}`: {2} != {3}'
                         .format(relation, variable, lhs, rhs))
        self.relation = relation
        self.variable = variable
        self.lhs = lhs
        self.rhs = rhs


class NoInverse(SymverifError):
    pass


class NonCommutingActions(SymverifError):
    def __init__(self, g, h, variable):
        super().__init__('Generators `{0}` and `{1}` do not commute on `{2}`'
                         .format(g, h, variable))
        self.generators = (g, h)
        self.variable = variable


class NotAHomomorphism(SymverifError):
    def __init__(self, relation, image):
        super().__init__('Relation {0} maps to {1}, which is not the identity'
                         .format(relation, image))
        self.relation = relation
        self.image = image


class Unverifiable(SymverifError):
    pass


class DomainMismatch(SymverifError):
    pass


class ShapeMismatch(SymverifError):
    pass


class VarsNotSubset(SymverifError):
    def __init__(self, missing):
        super().__init__('Variables {0} are not acted on by the entailing '
                         'action'.format(sorted(missing)))
        self.missing = missing


class NotEntailed(SymverifError):
    def __init__(self, generator, variable, counterexample=None):
        super().__init__('Entailment fails at generator `{0}`, variable `{1}`'
                         .format(generator, variable))
        self.generator = generator
        self.variable = variable
        self.counterexample = counterexample


# logic

class NoInverseFound(SymverifError):
    pass


class InverseUnverified(SymverifError):
    pass


# smt

class SolverTimeout(SymverifError):
    pass


class SolverError(SymverifError):
    pass


class NoWitness(SymverifError):
    def __init__(self, generator):
        super().__init__('No post-group element witnesses generator `{0}`'
                         .format(generator))
        self.generator = generator


class MultipleWitnesses(SymverifError):
    def __init__(self, generator, witnesses):
        super().__init__('Generator `{0}` is witnessed by {1}; the post action '
                         'is declared faithful'.format(generator, witnesses))
        self.generator = generator
        self.witnesses = witnesses


# synthesis

class SynthTimeout(SymverifError):
    pass


class NoCandidate(SymverifError):
    pass
