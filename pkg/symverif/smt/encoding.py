#!/usr/bin/env python
"""
Semantic obligations of assignments.

For an assignment ``v := exp``, a pre action a on all variables and a
post action b, the obligation states that for every pre generator g there
is a post element h with

    b_h(run(sigma)) == run(a_g(sigma))

on the variables b acts on, where ``run`` is the assignment applied to a
symbolic state. With a homomorphism the element is fixed to ``hom(g)``;
without one the post group is enumerated and the obligation becomes a
disjunction over its elements.
"""
import logging
from collections import OrderedDict

import sympy

from symverif.errors import MultipleWitnesses, NoWitness
from symverif.expr import gamma, wrap_domain
from symverif.groups.homomorphisms import Homomorphism, hom_check
from symverif.smt.obligations import Obligation

LOGGER = logging.getLogger(__name__)


def run_assignment(assign, state, signature):
    """The symbolic state after ``assign`` (IntMod values wrapped)"""
    out = OrderedDict(state)
    value = gamma(assign.expr, state)
    out[assign.var] = wrap_domain(value, signature.domain(assign.var))
    return out


def _lifted(action, signature):
    if action.vars == signature.names:
        return action
    return action.lift(signature)


def _conjuncts(after_acted, after_plain, post, word):
    image = post.apply_map(post.word_map(word), after_plain)
    eqs = []
    for u in post.vars:
        if after_acted[u] == image[u]:
            continue
        eqs.append(sympy.Eq(after_acted[u], image[u], evaluate=False))
    return sympy.And(*eqs)


def _generator_states(pre, assign, signature):
    fresh = signature.fresh_state()
    plain = run_assignment(assign, fresh, signature)
    for g in pre.group.generators:
        acted = pre.apply_map(pre.map_of(g), fresh)
        yield g, run_assignment(assign, acted, signature), plain


def encode_sem_assign(pre, assign, post, hom=None, signature=None,
                      max_elems=4096, meta=None):
    """
    Obligation certifying the triple ``pre {assign} post`` for one assignment

    Parameters
    ----------
    pre : GroupAction
        Pre action (lifted to `signature` if needed).
    assign : Assign
        The assignment.
    post : GroupAction
        Post action; its variables must be in `signature`.
    hom : Homomorphism, optional
        Fixes the post element of each generator. Without it the post
        group must be enumerable.
    signature : Signature
        All program variables.
    max_elems : int
        Bound for the enumeration of the post group.

    Returns
    -------
    Obligation

    Raises
    ------
    BoundExceeded
        No homomorphism and the post group is not enumerable.
    """
    signature = signature or pre.signature.merge(post.signature)
    pre = _lifted(pre, signature)
    words = None
    if hom is None:
        words = post.group.enumerate(max_elems).elements
    parts = []
    for g, acted, plain in _generator_states(pre, assign, signature):
        if hom is not None:
            parts.append(_conjuncts(acted, plain, post, hom.images[g]))
        else:
            parts.append(sympy.Or(*[_conjuncts(acted, plain, post, w)
                                    for w in words]))
    meta = dict(meta or {})
    meta.setdefault('var', assign.var)
    return Obligation('sem_assign', sympy.And(*parts),
                      symbol_domains=signature.symbol_domains, meta=meta)


def witness_obligations(pre, assign, post, signature, table, meta=None):
    """One obligation per (pre generator, post element) pair"""
    pre = _lifted(pre, signature)
    obligations = OrderedDict()
    for g, acted, plain in _generator_states(pre, assign, signature):
        for j, w in enumerate(table.elements):
            m = dict(meta or {})
            m.update(generator=g, element=j, var=assign.var)
            obligations[(g, j)] = Obligation(
                'sem_assign', _conjuncts(acted, plain, post, w),
                symbol_domains=signature.symbol_domains, meta=m)
    return obligations


def extract_hom(pre_group, post, table, results, max_elems=4096):
    """
    Homomorphism sending each pre generator to its witnessing post element

    Parameters
    ----------
    pre_group : GroupPresentation
    post : GroupAction
    table : FiniteGroupTable
        Enumeration of the post group.
    results : dict
        Map from ``(generator, element index)`` to ObligationResult.

    Raises
    ------
    NoWitness
        No element works for a generator.
    MultipleWitnesses
        Several elements work although the post action is faithful.
    """
    images = OrderedDict()
    for g in pre_group.generators:
        witnesses = [j for j in range(table.size)
                     if results[(g, j)].valid]
        if not witnesses:
            raise NoWitness(g)
        if len(witnesses) > 1:
            if post.faithful:
                raise MultipleWitnesses(g, [str(table.elements[j])
                                            for j in witnesses])
            LOGGER.warning('Generator %s has %d witnesses; using the shortest',
                           g, len(witnesses))
        images[g] = table.elements[witnesses[0]]
    hom = Homomorphism(pre_group, post.group, images, name='tau')
    hom_check(hom, max_elems)
    return hom


def find_hom(pre, assign, post, signature, context, max_elems=4096, meta=None):
    """Discharge the per-pair obligations and extract the homomorphism"""
    table = post.group.enumerate(max_elems)
    obligations = witness_obligations(pre, assign, post, signature, table, meta)
    keys = list(obligations)
    outcome = context.discharge_all([obligations[k] for k in keys])
    results = OrderedDict(zip(keys, outcome))
    return extract_hom(pre.group, post, table, results, max_elems), results
