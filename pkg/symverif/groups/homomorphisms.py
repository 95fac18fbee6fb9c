#!/usr/bin/env python
"""
Homomorphisms between finitely presented groups and the entailment
relation between group actions.
"""
import logging
from collections import OrderedDict

import sympy

from symverif.errors import (BoundExceeded, DomainMismatch, NotAHomomorphism,
                             NotEntailed, ShapeMismatch, SolverTimeout,
                             Unverifiable, VarsNotSubset)
from symverif.groups.actions import ValidityCertificate, _raise_for
from symverif.groups.presentation import (component_names,
                                          direct_product_presentation,
                                          format_word,
                                          free_product_presentation,
                                          trivial_group, word_letters)
from symverif.smt.obligations import Obligation, get_context

LOGGER = logging.getLogger(__name__)

BUILTIN_HOMS = ('eq', 'e_star', 'e_minus', 'proj1', 'proj2', 'inclusion')


class Homomorphism(object):
    """
    A map between presentations given by the images of the generators

    Parameters
    ----------
    source, target : GroupPresentation
        Domain and codomain.
    images : dict
        Map from source generator names to target words (text or words).
        Missing generators map to the identity.
    name : str, optional
        Name used in reports.
    """

    def __init__(self, source, target, images, name=None):
        self.source = source
        self.target = target
        self.name = name or 'phi'
        unknown = set(images).difference(source.generators)
        if unknown:
            raise KeyError('Unknown generators {0} in homomorphism {1}'
                           .format(sorted(unknown), self.name))
        self.images = OrderedDict(
            (g, target.word(images.get(g, 'e'))) for g in source.generators)
        self.certificate = None

    def image(self, word):
        """Image of a source word (freely reduced)"""
        out = self.target.identity
        for g, exp in word_letters(self.source.translate(word)):
            out = out * self.images[g] ** exp
        return out

    @property
    def is_identity(self):
        """``eq``: an endomorphism fixing every generator"""
        return (self.source == self.target and
                all(self.images[g] == self.target.generator(g)
                    for g in self.source.generators))

    @property
    def is_trivial(self):
        """``e*``: every generator maps to the identity"""
        return all(w.is_identity for w in self.images.values())

    def __str__(self):
        return '{0}: {1} -> {2} ({3})'.format(
            self.name, self.source.name, self.target.name,
            ', '.join('{0} -> {1}'.format(g, format_word(w))
                      for g, w in self.images.items()) or 'empty')

    def __repr__(self):
        return 'Homomorphism({0})'.format(self.name)


def _is_relator_conjugate(word, target):
    for r in target.relators:
        if r.is_identity:
            continue
        for candidate in (r, r ** -1):
            if len(candidate) == len(word) and candidate.is_cyclic_conjugate(word):
                return True
    return False


def hom_check(hom, max_elems=4096):
    """
    Prove that the images of the generators satisfy every source relation

    Each relator is mapped into the target. Images that reduce freely to
    the identity, or that are cyclic conjugates of a target relator, are
    accepted directly. Otherwise the target group is enumerated (up to
    `max_elems` elements) and the image is looked up in the table; for
    groups too large to enumerate the rewriting system of the target
    presentation is tried.

    Returns
    -------
    ValidityCertificate

    Raises
    ------
    NotAHomomorphism
        A relator maps to a non-identity element.
    Unverifiable
        No procedure could decide a relator.
    """
    cert = ValidityCertificate('homomorphism', hom.name)
    table = None
    for rel in hom.source.relations:
        img = hom.image(rel.relator)
        if img.is_identity:
            cert.add(str(rel), 'free-reduction')
            continue
        if _is_relator_conjugate(img, hom.target):
            cert.add(str(rel), 'relator')
            continue
        if table is None:
            table = hom.target.try_enumerate(max_elems) or False
        if table:
            if table.index_of(img) != 0:
                raise NotAHomomorphism(str(rel), format_word(img))
            cert.add(str(rel), 'table')
            continue
        if hom.target.fp_group.reduce(img).is_identity:
            cert.add(str(rel), 'rewriting')
            continue
        raise Unverifiable('Cannot decide whether {0} maps relation {1} to '
                           'the identity'.format(hom.name, rel))
    hom.certificate = cert
    return cert


def hom_compose(outer, inner, name=None):
    """``outer o inner``: apply `inner` first"""
    if inner.target != outer.source:
        raise DomainMismatch('Cannot compose {0} after {1}: {2} != {3}'.format(
            outer.name, inner.name, inner.target.name, outer.source.name))
    images = dict((g, outer.image(w)) for g, w in inner.images.items())
    return Homomorphism(inner.source, outer.target, images,
                        name=name or '{0}.{1}'.format(outer.name, inner.name))


def hom_product(first, second, name=None):
    """
    ``g -> (first(g), second(g))`` into the direct product of the targets
    """
    if first.source != second.source:
        raise DomainMismatch('Product of homomorphisms with sources {0} and {1}'
                             .format(first.source.name, second.source.name))
    target = direct_product_presentation(first.target, second.target)
    _, _, _, lnames, rnames = target.components
    images = {}
    for g in first.source.generators:
        images[g] = (target.translate(first.images[g], lnames) *
                     target.translate(second.images[g], rnames))
    return Homomorphism(first.source, target, images,
                        name=name or '{0}x{1}'.format(first.name, second.name))


def hom_free_product(first, second, name=None):
    """``first * second`` between free products, factor by factor"""
    source = free_product_presentation(first.source, second.source)
    target = free_product_presentation(first.target, second.target)
    _, _, _, sl, sr = source.components
    _, _, _, tl, tr = target.components
    images = {}
    for hom, snames, tnames in ((first, sl, tl), (second, sr, tr)):
        for g, w in hom.images.items():
            images[snames.get(g, g)] = target.translate(w, tnames)
    return Homomorphism(source, target, images,
                        name=name or '{0}*{1}'.format(first.name, second.name))


def hom_power(hom, n):
    """The n-fold composite of an endomorphism (``eq`` for n = 0)"""
    if hom.source != hom.target:
        raise DomainMismatch('{0} is not an endomorphism'.format(hom.name))
    if n < 0:
        raise ValueError('Negative power of a homomorphism')
    result = builtin_hom('eq', hom.source)
    for _ in range(n):
        result = hom_compose(hom, result)
    result.name = '{0}^{1}'.format(hom.name, n)
    return result


def builtin_hom(kind, source, target=None, images=None):
    """
    The built-in homomorphisms

    Parameters
    ----------
    kind : str
        'eq' (identity), 'e_star' (onto the trivial group), 'e_minus'
        (from the trivial group), 'proj1'/'proj2' (projections of a
        direct product) or 'inclusion' (generators mapped by name unless
        `images` are given).
    source : GroupPresentation
    target : GroupPresentation, optional
    """
    if kind == 'eq':
        if target is not None and target != source:
            raise DomainMismatch('eq needs equal source and target')
        return Homomorphism(source, source,
                            dict((g, g) for g in source.generators), name='eq')
    elif kind == 'e_star':
        target = target if target is not None else trivial_group()
        if target.generators:
            raise DomainMismatch('e_star maps onto the trivial group')
        return Homomorphism(source, target, {}, name='e_star')
    elif kind == 'e_minus':
        if source.generators:
            raise DomainMismatch('e_minus maps from the trivial group')
        if target is None:
            raise ValueError('e_minus needs a target group')
        return Homomorphism(source, target, {}, name='e_minus')
    elif kind in ('proj1', 'proj2'):
        if source.components is None or source.components[0] != 'direct':
            raise ShapeMismatch('{0} needs a direct product source, got {1}'
                                .format(kind, source.name))
        side = 0 if kind == 'proj1' else 1
        factor = source.components[1 + side]
        if target is not None and target != factor:
            raise DomainMismatch('{0} maps onto {1}'.format(kind, factor.name))
        names = component_names(source, side)
        return Homomorphism(source, factor, dict(names.items()), name=kind)
    elif kind == 'inclusion':
        if target is None:
            raise ValueError('inclusion needs a target group')
        if images is None:
            missing = set(source.generators).difference(target.generators)
            if missing:
                raise ShapeMismatch('Generators {0} of {1} are not in {2}'
                                    .format(sorted(missing), source.name,
                                            target.name))
            images = dict((g, g) for g in source.generators)
        return Homomorphism(source, target, images, name='inclusion')
    raise ValueError('Unknown homomorphism `{0}`'.format(kind))


def entails(pre, post, hom, context=None, max_elems=4096):
    """
    Prove ``(G, a) ->_hom (H, b)``: every generator g of G acts on the
    variables of b exactly as ``hom(g)`` does under b.

    Returns
    -------
    ValidityCertificate

    Raises
    ------
    VarsNotSubset
        b acts on variables a does not act on.
    DomainMismatch
        The homomorphism does not go from G to H.
    NotEntailed
        A generator acts differently; carries the counterexample.
    """
    context = get_context(context)
    missing = set(post.vars).difference(pre.vars)
    if missing:
        raise VarsNotSubset(missing)
    if hom.source != pre.group or hom.target != post.group:
        raise DomainMismatch('{0} does not map {1} to {2}'.format(
            hom.name, pre.group.name, post.group.name))
    if hom.certificate is None:
        hom_check(hom, max_elems)

    cert = ValidityCertificate('entailment', '{0} -> {1}'.format(pre.name,
                                                                 post.name))
    domains = pre.symbol_domains
    obligations = []
    for g in pre.group.generators:
        a_map = pre.map_of(g)
        b_map = post.word_map(hom.images[g])
        for v in post.vars:
            if a_map[v] == b_map[v]:
                cert.add(g, 'syntactic', var=v)
                continue
            obligations.append(Obligation(
                'entailment', sympy.Eq(a_map[v], b_map[v], evaluate=False),
                symbol_domains=domains, meta=dict(generator=g, var=v)))
    for ob, result in zip(obligations, context.discharge_all(obligations)):
        g, v = ob.meta['generator'], ob.meta['var']
        if not result.valid:
            _raise_for(result, NotEntailed(g, v, result.model))
        cert.add(g, result.method, var=v)
    return cert


def try_entails(pre, post, hom, context=None, max_elems=4096):
    """``entails`` returning (status, certificate or exception)"""
    try:
        return 'valid', entails(pre, post, hom, context, max_elems)
    except NotEntailed as e:
        return 'invalid', e
    except (Unverifiable, BoundExceeded, SolverTimeout) as e:
        return 'unknown', e
