"""Certified checks on QP^inf: skeleta, back-and-forth extensions, homogeneity."""

import json

from . import _qpinf
from ._qpinf import QpinfError

__all__ = ["QpinfError", "run", "replay", "normalize", "level", "nbhd_base", "skeleton_tail_level",
           "closure_member", "gamma", "golomb_closure_contains"]


def run(command, **fields):
    """Run one command; fields mirror RunConfig. Returns (records, exit_code)."""
    records, code = _qpinf.run(json.dumps(dict(fields, command=command)))
    return [json.loads(r) for r in records], code


def replay(records):
    out, code = _qpinf.replay([json.dumps(r) for r in records])
    return [json.loads(r) for r in out], code


def normalize(coords):
    return json.loads(_qpinf.normalize(json.dumps([str(c) for c in coords])))


def level(point):
    return _qpinf.level(json.dumps(point))


def nbhd_base(point, k):
    return json.loads(_qpinf.nbhd_base(json.dumps(point), k))


def skeleton_tail_level(open_):
    return _qpinf.skeleton_tail_level(json.dumps(open_))


def closure_member(point, open_):
    return _qpinf.closure_member(json.dumps(point), json.dumps(open_))


gamma = _qpinf.gamma
golomb_closure_contains = _qpinf.golomb_closure_contains
