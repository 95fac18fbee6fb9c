#!/usr/bin/env python
"""
Finitely presented groups.

A presentation is a list of generator names and a list of relations
``lhs = rhs`` between words over the generators. Words are elements of a
sympy ``FreeGroup``. Finite groups are enumerated with sympy's coset
enumeration into a ``FiniteGroupTable``.
"""
import logging
from collections import OrderedDict, deque

import numpy as np
import pyparsing as pp
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import FreeGroupElement, free_group
from sympy.combinatorics.coset_table import coset_enumeration_r

from symverif.errors import BoundExceeded, ProgramSyntaxError

LOGGER = logging.getLogger(__name__)

IDENTITY_NAMES = ('e', '1')

# cosets defined by the enumeration per element of the bound
COSET_FACTOR = 8


def _word_grammar():
    integer = pp.Regex(r'-?\d+').set_parse_action(lambda t: int(t[0]))
    ident = pp.Word(pp.alphas + '_', pp.alphanums + '_')
    word = pp.Forward()
    atom = ident | (pp.Suppress('(') + word + pp.Suppress(')'))
    factor = pp.Group(atom + pp.Optional(pp.Suppress('^') + integer,
                                         default=1))
    word <<= pp.Group(factor + pp.ZeroOrMore(pp.Suppress('*') + factor))
    return word


WORD = _word_grammar()


def word_letters(word):
    """Runs ``(generator name, exponent)`` of a free group word"""
    return [(str(sym), int(exp)) for sym, exp in word.array_form]


def format_word(word):
    """Readable form of a word, ``e`` for the identity"""
    if word.is_identity:
        return 'e'
    parts = []
    for name, exp in word_letters(word):
        parts.append(name if exp == 1 else '{0}^{1}'.format(name, exp))
    return '*'.join(parts)


class Relation(object):
    """A relation ``lhs = rhs`` between two words"""

    def __init__(self, lhs, rhs):
        self.lhs = lhs
        self.rhs = rhs

    @property
    def relator(self):
        return self.lhs * self.rhs ** -1

    def __str__(self):
        return '{0} = {1}'.format(format_word(self.lhs), format_word(self.rhs))

    __repr__ = __str__


class GroupPresentation(object):
    """
    A finitely presented group ``<generators | relations>``

    Parameters
    ----------
    name : str
        Name used in reports and spec files.
    generators : list of str
        Generator names.
    relations : list
        Relations given as strings (``"r^4 = e"``, ``"r*s = s*r^-1"``, or a
        single word meaning ``word = e``) or as pairs of words.
    components : tuple, optional
        ``(kind, left, right, left_names, right_names)`` for products
        built with ``direct_product_presentation`` and
        ``free_product_presentation``.
    family : tuple, optional
        ``('cyclic', n)`` or ``('dihedral', n)`` for the standard
        presentations, whose tables are built without coset enumeration.
    """

    def __init__(self, name, generators, relations=(), components=None,
                 family=None):
        generators = list(generators)
        if len(set(generators)) != len(generators):
            raise ValueError('Repeated generator in presentation `{0}`'
                             .format(name))
        for g in generators:
            if g in IDENTITY_NAMES:
                raise ValueError('`{0}` cannot be a generator name'.format(g))
        self.name = name
        self.generators = generators
        self.free_group = free_group(','.join(generators))[0]
        self.gens = OrderedDict(zip(generators, self.free_group.generators))
        self.relations = [self._relation(r) for r in relations]
        self.components = components
        self.family = family
        self._tables = {}
        self._exceeded = 0
        self._fp_group = None

    def _relation(self, r):
        if isinstance(r, Relation):
            return Relation(self.translate(r.lhs), self.translate(r.rhs))
        if isinstance(r, str):
            if '=' in r:
                lhs, rhs = r.split('=', 1)
            else:
                lhs, rhs = r, 'e'
            return Relation(self.word(lhs), self.word(rhs))
        lhs, rhs = r
        return Relation(self.word(lhs), self.word(rhs))

    @property
    def identity(self):
        return self.free_group.identity

    @property
    def relators(self):
        return [r.relator for r in self.relations]

    @property
    def is_trivial_presentation(self):
        return not self.generators

    @property
    def is_free(self):
        return not any(not r.is_identity for r in self.relators)

    def generator(self, name):
        try:
            return self.gens[name]
        except KeyError:
            raise KeyError('`{0}` is not a generator of {1}'
                           .format(name, self.name))

    def word(self, spec):
        """
        Build a word of this group's free group

        Parameters
        ----------
        spec : str, list or FreeGroupElement
            Text such as ``"r^2*s^-1"`` or ``"(r*s)^2"``, a list of
            ``(generator, exponent)`` pairs, or a word (possibly of
            another free group, translated by generator names).
        """
        if isinstance(spec, str):
            text = spec.strip()
            if text in IDENTITY_NAMES or text == '':
                return self.identity
            try:
                tree = WORD.parse_string(text, parse_all=True)[0]
            except pp.ParseException as e:
                raise ProgramSyntaxError('Bad word `{0}`: {1}'.format(text, e.msg),
                                         col=e.col)
            return self._from_tree(tree)
        if isinstance(spec, FreeGroupElement):
            return self.translate(spec)
        if isinstance(spec, (list, tuple)):
            w = self.identity
            for name, exp in spec:
                w = w * self.generator(name) ** int(exp)
            return w
        return self.translate(spec)

    def _from_tree(self, tree):
        w = self.identity
        for atom, exp in tree:
            if isinstance(atom, str):
                base = (self.identity if atom in IDENTITY_NAMES
                        else self.generator(atom))
            else:
                base = self._from_tree(atom)
            w = w * base ** exp
        return w

    def translate(self, word, names=None):
        """Rewrite a word of another free group, renaming generators"""
        if word.group == self.free_group:
            return word
        names = names or {}
        return self.word([(names.get(g, g), e) for g, e in word_letters(word)])

    def renamed(self, names, name=None):
        """Copy with generators renamed according to `names`"""
        gens = [names.get(g, g) for g in self.generators]
        out = GroupPresentation(name or self.name, gens, family=self.family)
        out.relations = [Relation(out.translate(r.lhs, names),
                                  out.translate(r.rhs, names))
                         for r in self.relations]
        return out

    @property
    def fp_group(self):
        if self._fp_group is None:
            self._fp_group = FpGroup(self.free_group, [
                r for r in self.relators if not r.is_identity])
        return self._fp_group

    def key(self):
        rels = frozenset(tuple(word_letters(r))
                         for r in self.relators if not r.is_identity)
        return tuple(self.generators), rels

    def __eq__(self, other):
        return isinstance(other, GroupPresentation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return '{0} = <{1} | {2}>'.format(
            self.name, ', '.join(self.generators),
            ', '.join(str(r) for r in self.relations))

    def __repr__(self):
        return 'GroupPresentation({0})'.format(self.name)

    def enumerate(self, max_elems=4096):
        """
        Enumerate the elements of a finite group

        Parameters
        ----------
        max_elems : int
            Largest group order accepted.

        Returns
        -------
        FiniteGroupTable

        Raises
        ------
        BoundExceeded
            The group has more than `max_elems` elements or is infinite.
        """
        if max_elems in self._tables:
            return self._tables[max_elems]
        for table in self._tables.values():
            if table.size <= max_elems:
                return table
        if max_elems <= self._exceeded:
            raise BoundExceeded(self.name, max_elems)
        try:
            table = enumerate_group(self, max_elems)
        except BoundExceeded:
            self._exceeded = max(self._exceeded, max_elems)
            raise
        self._tables[max_elems] = table
        return table

    def try_enumerate(self, max_elems=4096):
        """``enumerate`` returning None instead of raising BoundExceeded"""
        try:
            return self.enumerate(max_elems)
        except BoundExceeded:
            return None


class FiniteGroupTable(object):
    """
    Multiplication table of an enumerated finite group

    Element ``i`` is represented by the word ``elements[i]``; element 0
    is the identity. ``mult[a, b]`` is the index of ``a*b``.

    Parameters
    ----------
    presentation : GroupPresentation
        The enumerated group.
    elements : list
        Normal form words (shortlex least for the generator order).
    mult : np.ndarray
        Multiplication table.
    perms : dict
        Map from ``(generator, sign)`` to the permutation of element
        indices induced by right multiplication with that letter.
    """

    def __init__(self, presentation, elements, mult, perms):
        self.presentation = presentation
        self.elements = elements
        self.mult = mult
        self.perms = perms
        self.inv = np.argmax(mult == 0, axis=1)
        self.identity = 0

    @property
    def size(self):
        return len(self.elements)

    def __len__(self):
        return self.size

    def index_of(self, word):
        """Index of the element represented by `word`"""
        i = 0
        for name, exp in word_letters(self.presentation.translate(word)):
            perm = self.perms[(name, 1 if exp > 0 else -1)]
            for _ in range(abs(exp)):
                i = perm[i]
        return int(i)

    def is_identity(self, word):
        return self.index_of(word) == 0

    def order(self, i):
        k, j = 1, i
        while j != 0:
            j = self.mult[j, i]
            k += 1
        return k

    def generator_order(self, name):
        return self.order(self.index_of(self.presentation.generator(name)))

    def check_associativity(self, rng=None, exhaustive_limit=64, samples=4096):
        """Sanity check of the table, exhaustive for small groups"""
        n = self.size
        mult = self.mult
        if n <= exhaustive_limit:
            idx = np.arange(n)
            lhs = mult[mult[:, :, None], idx[None, None, :]]
            rhs = mult[idx[:, None, None], mult[None, :, :]]
            return bool(np.all(lhs == rhs))
        rng = rng or np.random.RandomState(0)
        a, b, c = rng.randint(0, n, size=(3, samples))
        return bool(np.all(mult[mult[a, b], c] == mult[a, mult[b, c]]))

    def __repr__(self):
        return 'FiniteGroupTable({0}, {1} elements)'.format(
            self.presentation.name, self.size)


def _trivial_table(presentation):
    return FiniteGroupTable(presentation, [presentation.identity],
                            np.zeros((1, 1), dtype=np.int64), {})


def _power_word(presentation, name, k, n):
    """Shortest power of a generator of order n representing ``name^k``"""
    k %= n
    if 2 * k > n:
        k -= n
    return presentation.generator(name) ** k


def _family_table(presentation, max_elems):
    """Tables of cyclic and dihedral groups from their normal forms"""
    kind, n = presentation.family
    if kind == 'cyclic':
        size = n
    else:
        size = 2 * n
    if size > max_elems:
        raise BoundExceeded(presentation.name, max_elems)
    idx = np.arange(size, dtype=np.int64)
    if kind == 'cyclic':
        g = presentation.generators[0]
        elements = [_power_word(presentation, g, k, n) for k in range(n)]
        mult = (idx[:, None] + idx[None, :]) % n
        columns = {g: 1 % n}
    else:
        # element k + n*j is r^k * s^j
        r, s = presentation.generators
        k, j = idx % n, idx // n
        sign = 1 - 2 * j
        mult = ((k[:, None] + sign[:, None] * k[None, :]) % n
                + n * ((j[:, None] + j[None, :]) % 2))
        elements = [_power_word(presentation, r, a, n) for a in range(n)]
        elements += [w * presentation.generator(s) for w in elements]
        columns = {r: 1 % n, s: n}
    inv = np.argmax(mult == 0, axis=1)
    perms = {}
    for name, col in columns.items():
        perms[(name, 1)] = mult[:, col]
        perms[(name, -1)] = mult[:, inv[col]]
    LOGGER.debug('Built %s table: %d elements', presentation.name, size)
    return FiniteGroupTable(presentation, elements, mult, perms)


def enumerate_group(presentation, max_elems):
    """Coset enumeration over the trivial subgroup (see ``enumerate``)"""
    if presentation.is_trivial_presentation:
        return _trivial_table(presentation)
    if presentation.family is not None:
        return _family_table(presentation, max_elems)
    used = set()
    for r in presentation.relators:
        used.update(g for g, _ in word_letters(r))
    if not used.issuperset(presentation.generators):
        # a generator free of relations generates an infinite quotient
        raise BoundExceeded(presentation.name, max_elems)

    try:
        C = coset_enumeration_r(presentation.fp_group, [],
                                max_cosets=COSET_FACTOR * max_elems + 64)
    except ValueError:
        raise BoundExceeded(presentation.name, max_elems)
    C.compress()
    C.standardize()
    if not C.is_complete() or len(C.table) > max_elems:
        raise BoundExceeded(presentation.name, max_elems)

    table = np.array(C.table, dtype=np.int64)
    n = table.shape[0]
    letters = []
    for name in presentation.generators:
        letters.extend([(name, 1), (name, -1)])
    perms = dict((letter, table[:, col]) for col, letter in enumerate(letters))

    # breadth first search from the trivial coset gives shortlex normal forms
    elements = [None] * n
    elem_perm = [None] * n
    elements[0] = presentation.identity
    elem_perm[0] = np.arange(n)
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for col, (name, sign) in enumerate(letters):
            d = int(table[c, col])
            if elements[d] is None:
                elements[d] = elements[c] * presentation.generator(name) ** sign
                elem_perm[d] = perms[(name, sign)][elem_perm[c]]
                queue.append(d)

    mult = np.array(elem_perm).T
    LOGGER.debug('Enumerated %s: %d elements', presentation.name, n)
    return FiniteGroupTable(presentation, elements, mult, perms)


def trivial_group(name='E'):
    return GroupPresentation(name, [])


def _rename_apart(left, right):
    common = set(left.generators) & set(right.generators)
    lnames = dict((g, g + '_1') for g in common)
    rnames = dict((g, g + '_2') for g in common)
    return lnames, rnames


def direct_product_presentation(left, right, name=None):
    """
    ``left x right``: the generators of both factors (renamed apart when
    their names collide), the relations of both and the commutators of
    every pair of generators from different factors.
    """
    lnames, rnames = _rename_apart(left, right)
    L = left.renamed(lnames)
    R = right.renamed(rnames)
    gens = L.generators + R.generators
    out = GroupPresentation(name or '{0}x{1}'.format(left.name, right.name),
                            gens, components=('direct', left, right,
                                              lnames, rnames))
    out.relations = [out._relation(r) for r in L.relations + R.relations]
    for g in L.generators:
        for h in R.generators:
            out.relations.append(Relation(out.word([(g, 1), (h, 1)]),
                                          out.word([(h, 1), (g, 1)])))
    return out


def free_product_presentation(left, right, name=None):
    """``left * right``: generators renamed apart, relations of both"""
    lnames, rnames = _rename_apart(left, right)
    L = left.renamed(lnames)
    R = right.renamed(rnames)
    out = GroupPresentation(name or '{0}*{1}'.format(left.name, right.name),
                            L.generators + R.generators,
                            components=('free', left, right, lnames, rnames))
    out.relations = [out._relation(r) for r in L.relations + R.relations]
    return out


def component_names(presentation, side):
    """Generator names of the `side` (0 or 1) factor inside a product"""
    kind, left, right, lnames, rnames = presentation.components
    factor, names = (left, lnames) if side == 0 else (right, rnames)
    return OrderedDict((names.get(g, g), g) for g in factor.generators)


def cyclic_group(n, name=None, generator='g'):
    return GroupPresentation(name or 'Z{0}'.format(n), [generator],
                             ['{0}^{1} = e'.format(generator, n)],
                             family=('cyclic', n))


def dihedral_group(n, name=None, rotation='r', reflection='s'):
    """``<r, s | r^n = e, s^2 = e, r*s = s*r^-1>`` of order 2n"""
    return GroupPresentation(
        name or 'D{0}'.format(n), [rotation, reflection],
        ['{0}^{1} = e'.format(rotation, n), '{0}^2 = e'.format(reflection),
         '{0}*{1} = {1}*{0}^-1'.format(rotation, reflection)],
        family=('dihedral', n))


def symmetric_group(n, name=None, prefix='t'):
    """Coxeter presentation of S_n by the adjacent transpositions"""
    gens = ['{0}{1}'.format(prefix, i) for i in range(1, n)]
    rels = ['{0}^2 = e'.format(g) for g in gens]
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if j == i + 1:
                rels.append('({0}*{1})^3 = e'.format(gens[i], gens[j]))
            else:
                rels.append('{0}*{1} = {1}*{0}'.format(gens[i], gens[j]))
    return GroupPresentation(name or 'S{0}'.format(n), gens, rels)


def free_abelian_group(generators, name=None):
    """``Z^k`` with commuting free generators"""
    rels = []
    for i in range(len(generators)):
        for j in range(i + 1, len(generators)):
            rels.append('{0}*{1} = {1}*{0}'.format(generators[i], generators[j]))
    return GroupPresentation(name or 'Z{0}'.format(len(generators)),
                             generators, rels)
