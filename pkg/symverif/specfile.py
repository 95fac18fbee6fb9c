#!/usr/bin/env python
"""
Reader of ``.sym`` files: declarations, a program, named actions and
homomorphisms, and one triple to verify or one synthesis target.

Example::

    # car moving in the plane, translated along the diagonal
    vars:
        param T: Real
        param dt: RealOpen01
        var x, y, v, theta, t: Real

    program:
        for (t := 0; t < T; t := t + dt) {
            x := v * cos(theta) * dt + x;
            y := v * sin(theta) * dt + y
        }

    action shift:
        generators: c
        vars: x, y
        act c: x -> x + 1; y -> y + 1

    triple:
        pre: shift
        post: shift
        hom: eq

Section headers start in the first column and end with ``:``; their
entries are indented ``key: value`` lines. Actions either list
``generators`` (and ``relations``, separated by ``;``) or name a built-in
``group`` (``dihedral N``, ``cyclic N``, ``symmetric N``, ``free_abelian
r, s``, ``free r, s`` or ``trivial``), or combine two actions with
``product: a x b`` (direct) or ``product: a * b`` (free). Generator maps
are ``act g: v -> expression`` entries, several separated by ``;``;
expressions use the program syntax, a variable (or ``alpha_<var>``)
standing for its value before the action.

Homomorphisms give ``source`` and ``target`` actions and either a
``builtin`` kind (eq, e_star, e_minus, proj1, proj2, inclusion) or one
``map g: word`` entry per generator. Annotations attach an action, a
homomorphism or an assignment inverse to a statement path::

    annotations:
        body.0: action swap, hom eq
        body.3: inverse x - v * dt

A ``synth`` section gives an ``assign`` statement, a ``post`` action and
optionally a ``depth`` and a ``timeout``. A file without a program may
hold actions only.
"""
import logging
import os
from collections import OrderedDict

import pyparsing as pp

from symverif.errors import ProgramSyntaxError, UnknownVariable
from symverif.expr import Signature, gamma, wrap_domain
from symverif.groups.actions import GroupAction, direct_product, free_product
from symverif.groups.homomorphisms import BUILTIN_HOMS, Homomorphism, builtin_hom
from symverif.groups.presentation import (GroupPresentation, cyclic_group,
                                          dihedral_group, free_abelian_group,
                                          symmetric_group, trivial_group)
from symverif.lang.parser import parse_expression, parse_program
from symverif.logic.triples import Annotation, SymmetryTriple
from symverif.smt.obligations import get_context

LOGGER = logging.getLogger(__name__)

SECTIONS = ('vars', 'program', 'action', 'hom', 'triple', 'annotations',
            'synth')

# sections that may appear once
SINGLE = ('vars', 'program', 'triple', 'annotations', 'synth')

BUILTIN_GROUPS = ('dihedral', 'cyclic', 'symmetric', 'free_abelian', 'free',
                  'trivial')

NAME = pp.Word(pp.alphas + '_', pp.alphanums + '_')
HEADER = (pp.one_of(' '.join(SECTIONS), as_keyword=True)('section') +
          pp.Optional(NAME)('name') + pp.Suppress(':') + pp.StringEnd())
ENTRY = (pp.Word(pp.alphanums + '._')('key') + pp.Optional(NAME)('subject') +
         pp.Suppress(':') + pp.rest_of_line('value'))
NAMES = pp.delimited_list(NAME) + pp.StringEnd()
MAP_ITEM = NAME('var') + pp.Suppress('->') + pp.Regex(r'[^;]+')('expr')
MAPS = pp.delimited_list(pp.Group(MAP_ITEM), delim=';') + pp.StringEnd()
PRODUCT = NAME('left') + pp.one_of('x *')('kind') + NAME('right') + pp.StringEnd()
ANNOTATION = (pp.Optional(pp.Keyword('action') + NAME('action')) +
              pp.Optional(pp.Suppress(',')) +
              pp.Optional(pp.Keyword('hom') + NAME('hom')) +
              pp.Optional(pp.Suppress(',')) +
              pp.Optional(pp.Keyword('inverse') + pp.rest_of_line('inverse')) +
              pp.StringEnd())


class Section(object):
    """A header line and its entries"""

    def __init__(self, kind, name, line):
        self.kind = kind
        self.name = name
        self.line = line
        # (key, subject, value, line)
        self.entries = []
        # raw body lines, for the vars and program sections
        self.body = []

    def get(self, key, default=None):
        for k, _, v, _ in self.entries:
            if k == key:
                return v
        return default

    def line_of(self, key):
        for k, _, _, line in self.entries:
            if k == key:
                return line
        return self.line

    def items(self, key):
        return [(s, v, line) for k, s, v, line in self.entries if k == key]

    def __repr__(self):
        return 'Section({0} {1})'.format(self.kind, self.name or '')


def _strip_comment(line):
    return line.split('#', 1)[0].rstrip()


def split_sections(text, filename=None):
    """
    Split spec file text into sections

    Returns
    -------
    list of Section
    """
    sections = []
    current = None
    for i, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            if current is not None:
                current.body.append((i, ''))
            continue
        if not line[0].isspace():
            try:
                r = HEADER.parse_string(line.strip())
            except pp.ParseBaseException as e:
                raise ProgramSyntaxError('Bad section header `{0}`'.format(
                    line.strip()), i, e.col, filename)
            current = Section(r['section'], r.get('name'), i)
            sections.append(current)
            continue
        if current is None:
            raise ProgramSyntaxError('Indented line outside of a section', i, 1,
                                     filename)
        current.body.append((i, raw))
        if current.kind in ('vars', 'program'):
            continue
        try:
            r = ENTRY.parse_string(line.strip())
        except pp.ParseBaseException as e:
            raise ProgramSyntaxError('Expected `key: value`, got `{0}`'.format(
                line.strip()), i, e.col, filename)
        current.entries.append((r['key'], r.get('subject'),
                                r['value'].strip(), i))
    return sections


def _body_text(section):
    """Body of a vars/program section with its line offset"""
    lines = section.body
    if not lines:
        return '', section.line
    return '\n'.join(text for _, text in lines), lines[0][0] - 1


class SpecFile(object):
    """
    A parsed ``.sym`` file

    Parameters
    ----------
    text : str
        Contents of the file.
    filename : str, optional
        Used in error messages; its stem names the triple.
    context : ProofContext, optional
        Used to certify direct products of overlapping actions.
    """

    def __init__(self, text, filename=None, context=None):
        self.filename = filename
        self.name = (os.path.splitext(os.path.basename(filename))[0]
                     if filename else 'spec')
        self.context = get_context(context)
        self.sections = split_sections(text, filename)
        self._check_sections()
        self.decls, self.signature = self._declarations()
        self.program = self._program()
        self.actions = OrderedDict()
        for s in self._all('action'):
            self.actions[s.name] = self._action(s)
        self.homs = OrderedDict()
        for s in self._all('hom'):
            self.homs[s.name] = self._hom(s)
        LOGGER.debug('Read %s: %d actions, %d homomorphisms', self.name,
                     len(self.actions), len(self.homs))

    # helpers

    def error(self, msg, line=None, col=None):
        return ProgramSyntaxError(msg, line, col, self.filename)

    def _all(self, kind):
        return [s for s in self.sections if s.kind == kind]

    def _one(self, kind):
        found = self._all(kind)
        return found[0] if found else None

    def _check_sections(self):
        for kind in SINGLE:
            found = self._all(kind)
            if len(found) > 1:
                raise self.error('Section `{0}` given twice'.format(kind),
                                 found[1].line)
        for kind in ('action', 'hom'):
            seen = set()
            for s in self._all(kind):
                if not s.name:
                    raise self.error('Section `{0}` needs a name'.format(kind),
                                     s.line)
                if s.name in seen:
                    raise self.error('{0} `{1}` defined twice'.format(
                        kind.capitalize(), s.name), s.line)
                seen.add(s.name)
        targets = len(self._all('triple')) + len(self._all('synth'))
        if targets > 1 or (targets == 0 and self._one('program') is not None):
            raise self.error('A spec file needs exactly one `triple` or '
                             '`synth` section, found {0}'.format(targets))
        if self._one('triple') is not None and self._one('program') is None:
            raise self.error('A triple needs a `program` section')

    def _declarations(self):
        section = self._one('vars')
        if section is None:
            return [], Signature([])
        text, offset = _body_text(section)
        decls, command = parse_program(text, filename=self.filename,
                                       line_offset=offset)
        if command.kind != 'skip':
            raise self.error('Only declarations are allowed in `vars`',
                             section.line)
        return decls, Signature((d.name, d.domain) for d in decls)

    def _program(self):
        section = self._one('program')
        if section is None:
            return None
        text, offset = _body_text(section)
        _, command = parse_program(text, self.decls, self.filename, offset)
        return command

    def _names(self, text, line):
        try:
            return list(NAMES.parse_string(text))
        except pp.ParseBaseException as e:
            raise self.error('Expected a list of names, got `{0}`'.format(text),
                             line, e.col)

    def action(self, name, line=None):
        try:
            return self.actions[name]
        except KeyError:
            raise self.error('Unknown action `{0}`'.format(name), line)

    def hom(self, name, source, target, line=None):
        """A named homomorphism or a built-in one between the given groups"""
        if name in self.homs:
            return self.homs[name]
        if name in BUILTIN_HOMS:
            return builtin_hom(name, source, target)
        raise self.error('Unknown homomorphism `{0}`'.format(name), line)

    # actions

    def _group(self, s):
        builtin = s.get('group')
        if builtin is not None:
            words = builtin.replace(',', ' ').split()
            kind, args = words[0], words[1:]
            line = s.line_of('group')
            if kind not in BUILTIN_GROUPS:
                raise self.error('Unknown group `{0}`'.format(kind), line)
            if kind == 'trivial':
                return trivial_group()
            if kind in ('free', 'free_abelian'):
                if not args:
                    raise self.error('`{0}` needs generator names'.format(kind),
                                     line)
                if kind == 'free':
                    return GroupPresentation('F{0}'.format(len(args)), args)
                return free_abelian_group(args)
            try:
                n = int(args[0])
            except (IndexError, ValueError):
                raise self.error('`{0}` needs an order'.format(kind), line)
            if kind == 'dihedral':
                return dihedral_group(n)
            if kind == 'cyclic':
                return cyclic_group(n)
            return symmetric_group(n)
        gens = s.get('generators')
        if gens is None:
            raise self.error('Action `{0}` needs `generators`, `group` or '
                             '`product`'.format(s.name), s.line)
        relations = [r.strip() for r in s.get('relations', '').split(';')
                     if r.strip()]
        try:
            return GroupPresentation('G_' + s.name,
                                     self._names(gens, s.line_of('generators')),
                                     relations)
        except (ValueError, KeyError) as e:
            raise self.error('Bad presentation of `{0}`: {1}'.format(s.name, e),
                             s.line_of('relations'))

    def _map(self, text, state, line):
        try:
            items = MAPS.parse_string(text)
        except pp.ParseBaseException as e:
            raise self.error('Expected `var -> expression; ...`, got `{0}`'
                             .format(text), line, e.col)
        out = OrderedDict()
        for item in items:
            if item['var'] not in state:
                raise self.error('Variable `{0}` is not acted on'.format(
                    item['var']), line)
            try:
                exp = parse_expression(item['expr'].strip())
                out[item['var']] = wrap_domain(
                    gamma(exp, state), self.signature.domain(item['var']))
            except ProgramSyntaxError as e:
                raise self.error(e.msg, line, e.col)
            except UnknownVariable as e:
                raise self.error('Unknown name in `{0}`: {1}'.format(
                    item['expr'].strip(), e), line)
        return out

    def _action(self, s):
        product = s.get('product')
        if product is not None:
            line = s.line_of('product')
            try:
                r = PRODUCT.parse_string(product)
            except pp.ParseBaseException as e:
                raise self.error('Expected `a x b` or `a * b`', line, e.col)
            left = self.action(r['left'], line)
            right = self.action(r['right'], line)
            if r['kind'] == 'x':
                return direct_product(left, right, self.context, name=s.name)
            return free_product(left, right, name=s.name)

        group = self._group(s)
        names = self._names(s.get('vars', ''), s.line_of('vars')) \
            if s.get('vars') else []
        for v in names:
            if v not in self.signature:
                raise self.error('Undeclared variable `{0}` in action `{1}`'
                                 .format(v, s.name), s.line_of('vars'))
        signature = self.signature.restrict(names)
        state = OrderedDict()
        for v in names:
            state[v] = signature.alpha(v)
            state['alpha_' + v] = signature.alpha(v)
        maps = OrderedDict((g, OrderedDict()) for g in group.generators)
        for g, text, line in s.items('act'):
            if g not in maps:
                raise self.error('`{0}` is not a generator of action `{1}`'
                                 .format(g, s.name), line)
            maps[g].update(self._map(text, state, line))
        faithful = s.get('faithful', 'false').lower() in ('true', 'yes', '1')
        try:
            return GroupAction(group, signature, maps, name=s.name,
                               faithful=faithful)
        except (KeyError, ValueError) as e:
            raise self.error(str(e), s.line)

    # homomorphisms

    def _hom(self, s):
        source = self.action(s.get('source'), s.line_of('source')).group
        target = self.action(s.get('target'), s.line_of('target')).group
        kind = s.get('builtin')
        if kind is not None:
            if kind not in BUILTIN_HOMS:
                raise self.error('Unknown built-in homomorphism `{0}`'.format(
                    kind), s.line_of('builtin'))
            hom = builtin_hom(kind, source, target)
        else:
            images = OrderedDict((g, word) for g, word, _ in s.items('map'))
            try:
                hom = Homomorphism(source, target, images, name=s.name)
            except (KeyError, ValueError) as e:
                raise self.error('Bad homomorphism `{0}`: {1}'.format(s.name, e),
                                 s.line)
        hom.name = s.name
        return hom

    # targets

    def _annotations(self, pre):
        section = self._one('annotations')
        out = OrderedDict()
        if section is None:
            return out
        for path, subject, value, line in section.entries:
            if subject:
                raise self.error('Unexpected `{0}` after path `{1}`'.format(
                    subject, path), line)
            try:
                r = ANNOTATION.parse_string(value)
            except pp.ParseBaseException as e:
                raise self.error('Bad annotation `{0}`'.format(value), line,
                                 e.col)
            action = hom = inverse = None
            if r.get('action'):
                action = self.action(r['action'], line)
            if r.get('hom'):
                name = r['hom']
                if name == 'eq' and name not in self.homs:
                    hom = None
                else:
                    hom = self.hom(name, pre.group,
                                   action.group if action is not None
                                   else pre.group, line)
            if r.get('inverse'):
                inverse = parse_expression(r['inverse'].strip())
            out[path] = Annotation(action, hom, inverse)
        return out

    @property
    def has_triple(self):
        return self._one('triple') is not None

    def triple(self):
        """
        Returns
        -------
        SymmetryTriple
        """
        s = self._one('triple')
        if s is None:
            raise self.error('No `triple` section')
        pre = self.action(s.get('pre'), s.line_of('pre'))
        post = self.action(s.get('post'), s.line_of('post'))
        hom = self.hom(s.get('hom', 'eq'), pre.group, post.group,
                       s.line_of('hom'))
        try:
            return SymmetryTriple(pre, self.program, post, hom, self.signature,
                                  self._annotations(pre), name=self.name)
        except KeyError as e:
            raise self.error(str(e.args[0]), self._one('annotations').line)

    def synth_task(self):
        """
        Returns
        -------
        dict
            ``assign``, ``post``, ``signature`` and the optional ``depth``
            and ``timeout``.
        """
        s = self._one('synth')
        if s is None:
            raise self.error('No `synth` section')
        line = s.line_of('assign')
        _, command = parse_program(s.get('assign', ''), self.decls,
                                   self.filename, line - 1)
        if command.kind != 'assign':
            raise self.error('`assign` must be a single assignment', line)
        task = OrderedDict([('assign', command),
                            ('post', self.action(s.get('post'),
                                                 s.line_of('post'))),
                            ('signature', self.signature)])
        if s.get('depth') is not None:
            task['depth'] = int(s.get('depth'))
        if s.get('timeout') is not None:
            task['timeout'] = float(s.get('timeout'))
        return task


def parse_spec(text, filename=None, context=None):
    return SpecFile(text, filename, context)


def load_spec(fn, context=None):
    """Read a ``.sym`` file"""
    with open(fn, encoding='utf-8') as f:
        text = f.read()
    return SpecFile(text, fn, context)
