"""
Symmetry triples and the rules certifying them
"""
from .triples import (Annotation, ProofNode, ProofTrace, RULES, SymmetryTriple,
                      Verdict)
from .post import injectivity_check, invert_assignment, post_transform
from .rules import Verifier, check_triple_for_assignment, verify
from .fuzz import FuzzReport, fuzz_soundness, random_word
