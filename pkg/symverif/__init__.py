#!/usr/bin/env python
"""
The top level of the package exposes the verifier, the synthesizer and
the spec file reader
"""

import pkg_resources

from symverif.logic import SymmetryTriple, Verdict, fuzz_soundness, verify
from symverif.specfile import load_spec, parse_spec
from symverif.synth import synthesize_pre
from symverif.corpus import load_benchmark, run_corpus
from symverif.utils.generic import load_config

# define a version variable
try:
    __version__ = pkg_resources.get_distribution("symverif").version
except pkg_resources.DistributionNotFound:
    # running from a source checkout
    __version__ = '0.1.0'

# Package defaults of the verifier configuration
DEFAULT_CONFIG = pkg_resources.resource_filename("symverif", 'assets/default_config.json')

# The benchmark programs (.sym files)
CORPUS_DIR = pkg_resources.resource_filename("symverif", 'assets/corpus')
