"""
Finitely presented groups, their actions on program states and the
homomorphisms between them
"""
from .presentation import (GroupPresentation, FiniteGroupTable, Relation,
                           cyclic_group, dihedral_group,
                           direct_product_presentation, format_word,
                           free_abelian_group, free_product_presentation,
                           symmetric_group, trivial_group, word_letters)
from .actions import (GroupAction, ValidityCertificate, check_action,
                      direct_product, free_product, trivial_action)
from .homomorphisms import (BUILTIN_HOMS, Homomorphism, builtin_hom, entails,
                            hom_check, hom_compose, hom_free_product,
                            hom_power, hom_product, try_entails)
