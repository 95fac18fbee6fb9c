#!/usr/bin/env python

from .generic import (dump_json, get_config, load_config, load_json, make_rng,
                      timed, to_jsonable)
