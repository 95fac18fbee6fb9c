#!/usr/bin/env python
"""
Syntax directed proof search for symmetry triples.

The pre action is lifted to all program variables and pushed through the
program statement by statement, together with the homomorphism from the
pre group to the group of the current action:

* assignments that leave every variable they read untouched keep the
  action (CONST), injective assignments map it to its POST action
  (ASSGN), and the others are certified by a semantic obligation, either
  against an annotation, against the current action, or against a
  homomorphism extracted from the enumerated group (SEM-ASSGN);
* branches and loops require the action to fix their guard (and loop
  counter, bound and step) and the body to return to the same action;
* the derived post action is finally related to the declared one by an
  entailment (CONS-1).

Actions produced by POST are compared with the declared actions after
every assignment, so chains that return to a known action continue with
it.
"""
import logging

from symverif.errors import (BoundExceeded, InverseUnverified,
                             MultipleWitnesses, NoInverseFound, NoWitness,
                             NotAHomomorphism, NotAnAction, SolverTimeout,
                             SymverifError, Unverifiable)
from symverif.groups.actions import GroupAction, check_action, trivial_action
from symverif.groups.homomorphisms import (Homomorphism, builtin_hom, hom_check,
                                           hom_compose, try_entails)
from symverif.groups.presentation import (component_names, trivial_group,
                                          word_letters)
from symverif.logic.fuzz import fuzz_soundness
from symverif.logic.post import (invert_assignment, leaves_untouched,
                                  post_transform)
from symverif.logic.triples import ProofNode, ProofTrace, SymmetryTriple, Verdict
from symverif.smt.encoding import encode_sem_assign, find_hom
from symverif.smt.obligations import get_context

LOGGER = logging.getLogger(__name__)


class _Stop(Exception):
    """Ends the proof search with a verdict"""

    def __init__(self, verdict):
        super().__init__(str(verdict))
        self.verdict = verdict


def _join(path, step):
    return step if not path else '{0}.{1}'.format(path, step)


def _stop_for(result, message):
    if result.invalid:
        return _Stop(Verdict.invalid(message, result.obligation, result.model))
    reason = 'timeout' if result.status == 'timeout' else 'undecided'
    return _Stop(Verdict.unknown(reason, message))


class Verifier(object):
    """
    Proof search for one triple

    Parameters
    ----------
    triple : SymmetryTriple
    context : ProofContext, optional
        Shared configuration and record of discharged obligations.
    config : dict, optional
        Used when no context is given.
    """

    def __init__(self, triple, context=None, config=None):
        self.triple = triple
        self.context = get_context(context, config)
        self.config = self.context.config
        self.signature = triple.signature
        self.max_elems = self.config['max_elems']
        self.references = [self.lift(triple.pre)]
        if triple.post.vars == self.signature.names:
            self.references.append(triple.post)
        for ann in triple.annotations.values():
            if ann.action is not None:
                self.references.append(self.lift(ann.action))

    def lift(self, action):
        if action.vars == self.signature.names:
            return action
        return action.lift(self.signature)

    def snap(self, action):
        """A declared action equal to `action`, if any"""
        for ref in self.references:
            if ref.group == action.group and action.same_as(ref):
                return ref
        return action

    # homomorphisms

    def same_hom(self, h1, h2):
        if h1 is h2:
            return True
        if h1.source != h2.source or h1.target != h2.target:
            return False
        table = None
        for g in h1.source.generators:
            a, b = h1.images[g], h2.images[g]
            if a == b or (a * b ** -1).is_identity:
                continue
            if table is None:
                table = h1.target.try_enumerate(self.max_elems) or False
            if not table or table.index_of(a) != table.index_of(b):
                return False
        return True

    def then(self, step, hom):
        """``step o hom``"""
        if step.is_identity:
            return hom
        if hom.is_identity:
            return step
        return hom_compose(step, hom)

    def loop_power(self, hom, path):
        """Power of the loop body homomorphism for an unknown iteration count"""
        if hom.is_identity:
            return hom
        if self.same_hom(hom_compose(hom, hom), hom):
            return hom
        raise _Stop(Verdict.unknown(
            'unsupported-construct',
            'Loop at `{0}` has body homomorphism {1}, which is not '
            'idempotent'.format(path or 'program', hom)))

    # premises

    def fixes(self, action, names, path, rule):
        """``(G, a) ->e* (E, e_names)``: the action leaves `names` unchanged"""
        post = trivial_action(trivial_group(), self.signature.restrict(names))
        e_star = builtin_hom('e_star', action.group, post.group)
        status, out = try_entails(action, post, e_star, self.context,
                                  self.max_elems)
        if status != 'valid':
            raise _Stop(Verdict.unknown(
                'undecided', '{0} at `{1}`: the action does not fix {2} ({3})'
                .format(rule, path or 'program', ', '.join(names), out)))
        return out

    # rules

    def command(self, c, path, action, hom):
        """Rule application for `c`; returns (action, hom, node)"""
        method = getattr(self, 'rule_' + c.kind)
        return method(c, path, action, hom)

    def rule_skip(self, c, path, action, hom):
        return action, hom, ProofNode('SKIP', path)

    def rule_seq(self, c, path, action, hom):
        children = []
        for step, s in c.children():
            action, hom, node = self.command(s, _join(path, step), action, hom)
            children.append(node)
        return action, hom, ProofNode('SEQ', path, children=children)

    def rule_assign(self, c, path, action, hom):
        ann = self.triple.annotations.get(path)
        if ann is not None and ann.action is not None:
            return self.annotated_assign(c, path, action, hom, ann)
        inverse = ann.inverse if ann is not None else None
        try:
            fhat = invert_assignment(c.expr, c.var, self.signature,
                                     self.context, inverse)
        except (NoInverseFound, InverseUnverified, SolverTimeout,
                Unverifiable) as e:
            LOGGER.debug('%s: %s', path, e)
            fhat = None
        if fhat is not None:
            try:
                post = post_transform(action, c, self.signature, self.context,
                                      fhat=fhat)
            except NotAnAction as e:
                raise _Stop(Verdict.unknown(
                    'undecided', 'Post action of `{0} := {1}` at `{2}`: {3}'
                    .format(c.var, c.expr, path or 'program', e)))
            post = self.snap(post)
            LOGGER.debug('ASSGN at %s: %s', path, post.name)
            node = ProofNode('ASSGN', path, '{0} := {1} inverted by {2}; post {3}'
                             .format(c.var, c.expr, fhat, post.name))
            return post, hom, node
        alpha = self.signature.alpha(c.var)
        if all(leaves_untouched(action.map_of(g), c, alpha, self.signature)
               for g in action.group.generators):
            return action, hom, ProofNode(
                'CONST', path, '{0} := {1} reads and writes only fixed '
                'variables'.format(c.var, c.expr))
        return self.sem_assign(c, path, action, hom)

    def annotated_assign(self, c, path, action, hom, ann):
        post = ann.action
        step = ann.hom
        if step is None:
            if post.group != action.group:
                raise _Stop(Verdict.unknown(
                    'missing-annotation', 'Annotation at `{0}` needs a '
                    'homomorphism from {1}'.format(path, action.group.name)))
            step = builtin_hom('eq', action.group)
        if step.source != action.group or step.target != post.group:
            raise _Stop(Verdict.unknown(
                'unsupported-construct', 'Annotation homomorphism {0} at `{1}` '
                'does not start at {2}'.format(step.name, path,
                                               action.group.name)))
        meta = dict(rule='SEM-ASSGN', path=path)
        ob = encode_sem_assign(action, c, post, step, self.signature,
                               self.max_elems, meta)
        result = self.context.discharge(ob)
        if not result.valid:
            raise _stop_for(result, 'Annotated assignment to `{0}` at `{1}` '
                            'fails'.format(c.var, path))
        node = ProofNode('SEM-ASSGN', path, 'annotation {0} via {1}'.format(
            post.name, step.name), results=[result])

        lifted = self.lift(post)
        if lifted is not post:
            rest = [v for v in self.signature if v not in post.vars]
            node = self.direct_product(c, path, action, rest, node)
        return lifted, self.then(step, hom), node

    def direct_product(self, c, path, action, rest, node):
        """
        Extend a partial annotation to all variables: the remaining
        variables are untouched (ID) and combine with the annotation
        (DIR-PROD); the product projects onto the lifted annotation.
        """
        untouched = c.var not in rest and all(
            action.map_of(g)[v] == self.signature.alpha(v)
            for g in action.group.generators for v in rest)
        if untouched:
            child = ProofNode('ID', path, 'identity on {0}'.format(
                ', '.join(rest) or 'no variables'))
        else:
            post = trivial_action(trivial_group(), self.signature.restrict(rest))
            e_star = builtin_hom('e_star', action.group, post.group)
            ob = encode_sem_assign(action, c, post, e_star, self.signature,
                                   self.max_elems, dict(rule='ID', path=path))
            result = self.context.discharge(ob)
            if not result.valid:
                raise _stop_for(result, 'Variables outside the annotation at '
                                '`{0}` are not preserved'.format(path))
            child = ProofNode('ID', path, 'preserved: {0}'.format(
                ', '.join(rest)), results=[result])
        return ProofNode('DIR-PROD', path, 'annotation lifted to all variables',
                         children=[node, child])

    def sem_assign(self, c, path, action, hom):
        meta = dict(rule='SEM-ASSGN', path=path)
        eq = builtin_hom('eq', action.group)
        ob = encode_sem_assign(action, c, action, eq, self.signature,
                               self.max_elems, meta)
        result = self.context.discharge(ob)
        if result.valid:
            return action, hom, ProofNode(
                'SEM-ASSGN', path, '{0} := {1} preserves {2}'.format(
                    c.var, c.expr, action.name), results=[result])
        if result.status == 'timeout':
            raise _stop_for(result, 'Timeout on the assignment at `{0}`'
                            .format(path))
        message = 'Assignment `{0} := {1}` at `{2}` breaks the symmetry'.format(
            c.var, c.expr, path)
        if action.group.try_enumerate(self.max_elems) is None:
            if result.invalid:
                raise _Stop(Verdict(
                    'unknown', reason='missing-annotation',
                    obligation=result.obligation, counterexample=result.model,
                    message=message + '; annotate it, the group '
                    '{0} is not enumerable'.format(action.group.name)))
            raise _stop_for(result, message)
        try:
            tau, results = find_hom(action, c, action, self.signature,
                                    self.context, self.max_elems, meta)
        except NoWitness:
            raise _stop_for(result, message)
        except (MultipleWitnesses, NotAHomomorphism, Unverifiable) as e:
            raise _Stop(Verdict.unknown('undecided', '{0}: {1}'.format(
                message, e)))
        node = ProofNode('SEM-ASSGN', path, 'witnessed by {0}'.format(tau),
                         results=[r for r in results.values() if r.valid])
        return action, self.then(tau, hom), node

    def rule_if(self, c, path, action, hom):
        cert = self.fixes(action, [c.guard], path, 'IF')
        a1, h1, n1 = self.command(c.then, _join(path, 'then'), action, hom)
        a2, h2, n2 = self.command(c.orelse, _join(path, 'else'), action, hom)
        if not (a1 is a2 or (a1.group == a2.group and a1.same_as(a2))) \
                or not self.same_hom(h1, h2):
            raise _Stop(Verdict.unknown(
                'unsupported-construct', 'Branches of the conditional at `{0}` '
                'end in different actions'.format(path or 'program')))
        node = ProofNode('IF', path, 'guard {0} fixed'.format(c.guard),
                         children=[n1, n2], certificate=cert)
        return a1, h1, node

    def loop_body(self, c, path, action):
        eq = builtin_hom('eq', action.group)
        a1, h1, node = self.command(c.body, _join(path, 'body'), action, eq)
        if not (a1 is action or (a1.group == action.group
                                 and a1.same_as(action))):
            raise _Stop(Verdict.unknown(
                'unsupported-construct', 'Body of the loop at `{0}` does not '
                'return to {1}'.format(path or 'program', action.name)))
        return h1, node

    def rule_for(self, c, path, action, hom):
        cert = self.fixes(action, [c.counter, c.bound, c.step], path, 'FOR')
        h1, body = self.loop_body(c, path, action)
        power = self.loop_power(h1, path)
        node = ProofNode('FOR', path, 'body preserves {0} via {1}'.format(
            action.name, power.name), children=[body], certificate=cert)
        return action, self.then(power, hom), node

    def rule_while(self, c, path, action, hom):
        cert = self.fixes(action, [c.guard], path, 'WHILE')
        h1, body = self.loop_body(c, path, action)
        if not h1.is_identity:
            raise _Stop(Verdict.unknown(
                'unsupported-construct', 'Body of the while loop at `{0}` '
                'needs the homomorphism eq, got {1}'.format(path or 'program',
                                                            h1)))
        node = ProofNode('WHILE', path, 'body preserves {0}'.format(action.name),
                         children=[body], certificate=cert)
        return action, hom, node

    def consequence(self, action, hom):
        """CONS-1 from the derived post action to the declared one"""
        post, declared = self.triple.post, self.triple.hom
        if action.group == post.group and self.same_hom(hom, declared):
            tau = builtin_hom('eq', post.group)
        elif hom.is_identity:
            tau = declared
        elif declared.is_trivial:
            tau = builtin_hom('e_star', action.group, post.group)
        else:
            raise _Stop(Verdict.unknown(
                'unsupported-construct', 'Derived homomorphism {0} cannot be '
                'related to {1}'.format(hom, declared)))
        if not self.same_hom(self.then(tau, hom), declared):
            raise _Stop(Verdict.unknown(
                'unsupported-construct', '{0} composed with {1} is not {2}'
                .format(tau.name, hom.name, declared.name)))
        status, out = try_entails(action, post, tau, self.context,
                                  self.max_elems)
        if status == 'invalid':
            raise _Stop(Verdict.invalid(
                'Derived post action {0} does not entail {1}: {2}'.format(
                    action.name, post.name, out),
                counterexample=out.counterexample))
        if status != 'valid':
            raise _Stop(Verdict.unknown(
                'timeout' if isinstance(out, SolverTimeout) else 'undecided',
                str(out)))
        return tau, out

    # free products

    def split_free_product(self):
        """Component triples when pre, post and hom split as free products"""
        t = self.triple
        if t.annotations:
            return None
        comps = (t.pre.group.components, t.post.group.components)
        if any(c is None or c[0] != 'free' for c in comps):
            return None
        parts = []
        for side in (0, 1):
            source = t.pre.group.components[1 + side]
            target = t.post.group.components[1 + side]
            snames = component_names(t.pre.group, side)
            tnames = component_names(t.post.group, side)
            back = dict((new, old) for new, old in tnames.items())
            images = {}
            for new, old in snames.items():
                img = t.hom.images[new]
                letters = set(g for g, _ in word_letters(img))
                if not letters.issubset(tnames):
                    return None
                images[old] = target.translate(img, back)
            hom = Homomorphism(source, target, images,
                               name='{0}_{1}'.format(t.hom.name, side + 1))
            pre = _component_action(t.pre, source, snames)
            post = _component_action(t.post, target, tnames)
            parts.append(SymmetryTriple(pre, t.program, post, hom,
                                        self.signature,
                                        name='{0}_{1}'.format(t.name, side + 1)))
        return parts

    def free_product_rule(self, parts):
        children = []
        for part in parts:
            verdict = Verifier(part, self.context).run()
            if not verdict.is_valid:
                return verdict
            children.append(verdict.trace.root)
        root = ProofNode('FREE-PROD', '', 'components {0} and {1}'.format(
            parts[0].pre.group.name, parts[1].pre.group.name),
            children=children)
        return Verdict.valid(ProofTrace(root))

    # driver

    def refute(self, verdict):
        """
        Run the triple on random states after a failed obligation that no
        rule can recover from; a concrete discrepancy makes it Invalid
        """
        report = fuzz_soundness(self.triple, config=self.config)
        failure = report.first_failure
        if failure is None:
            return verdict
        return Verdict.invalid(
            '{0}; running the program confirms it: `{1}` is {2} after '
            'acting with {3} first and {4} otherwise'.format(
                verdict.message, failure['var'], failure['acted_first'],
                failure['word'], failure['run_first']),
            verdict.obligation, verdict.counterexample)

    def certify(self):
        t = self.triple
        for action in (t.pre, t.post):
            if action.certificate is None:
                check_action(action, self.context)
        if t.hom.certificate is None:
            hom_check(t.hom, self.max_elems)

    def run(self):
        """
        Returns
        -------
        Verdict
        """
        t = self.triple
        try:
            self.certify()
        except (NotAnAction, NotAHomomorphism) as e:
            return Verdict.invalid(str(e))
        except SolverTimeout as e:
            return Verdict.unknown('timeout', str(e))
        except (Unverifiable, BoundExceeded) as e:
            return Verdict.unknown('undecided', str(e))

        parts = self.split_free_product()
        if parts is not None:
            return self.free_product_rule(parts)

        start = self.lift(t.pre)
        lift = ProofNode('LIFT', '', '{0} lifted to {1}'.format(
            t.pre.name, ', '.join(self.signature.names)))
        try:
            action, hom, body = self.command(
                t.program, '', start, builtin_hom('eq', start.group))
            tau, cert = self.consequence(action, hom)
        except _Stop as s:
            verdict = s.verdict
            if verdict.reason == 'missing-annotation' and \
                    verdict.obligation is not None:
                verdict = self.refute(verdict)
            LOGGER.info('%s: %s', t.name, verdict)
            return verdict
        except SymverifError as e:
            LOGGER.info('%s: %s', t.name, e)
            return Verdict.unknown('unsupported-construct', str(e))
        root = ProofNode('CONS-1', '', '{0} entails {1} via {2}'.format(
            action.name, t.post.name, tau.name), children=[lift, body],
            certificate=cert)
        LOGGER.info('%s: VALID (%d rule applications)', t.name,
                    len(list(root.walk())))
        return Verdict.valid(ProofTrace(root))


def _component_action(action, group, names):
    maps = dict((old, action.maps[new]) for new, old in names.items())
    out = GroupAction(group, action.signature, maps, name='{0}|{1}'.format(
        action.name, group.name), faithful=action.faithful)
    out.certificate = action.certificate
    return out


def verify(triple, config=None, context=None):
    """
    Certify a symmetry triple

    Parameters
    ----------
    triple : SymmetryTriple
    config : dict, optional
        Configuration overrides.
    context : ProofContext, optional
        Reused when given (its configuration wins over `config`).

    Returns
    -------
    Verdict
        Domain errors are reported as verdicts, never raised.
    """
    return Verifier(triple, context, config).run()


def check_triple_for_assignment(pre, assign, post, hom, signature=None,
                                context=None, config=None):
    """
    Certify ``pre {assign} post`` for a single assignment

    The semantic obligation against the declared post action is tried
    first; when it is not decided the rule engine runs on the triple.
    """
    context = get_context(context, config)
    signature = signature or pre.signature.merge(post.signature)
    meta = dict(rule='SEM-ASSGN', path='')
    ob = encode_sem_assign(pre, assign, post, hom, signature,
                           context.config['max_elems'], meta)
    result = context.discharge(ob)
    if result.valid:
        node = ProofNode('SEM-ASSGN', '', '{0} := {1} against {2}'.format(
            assign.var, assign.expr, post.name), results=[result])
        return Verdict.valid(ProofTrace(node))
    if result.invalid:
        return Verdict.invalid('Assignment to `{0}` breaks the symmetry'
                               .format(assign.var), ob, result.model)
    triple = SymmetryTriple(pre, assign, post, hom, signature,
                            name='assign_{0}'.format(assign.var))
    return verify(triple, context=context)
