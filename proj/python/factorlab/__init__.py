"""Factorizations of almost simple classical groups.

Orders of classical groups and table shapes, the bundled factorization
DB, and TIER-A / TIER-B verification of its rows. Generator files are
the JSON documents described in docs/schema/genfile.schema.json; they may
be passed as dicts, JSON text or paths.
"""

import json
import os

from . import _factorlab
from ._factorlab import Error, classical_order, normalize_shape, ppd, shape_order

__all__ = [
    "Error",
    "check_triple",
    "classical_generators",
    "classical_order",
    "group_order",
    "normalize_shape",
    "ppd",
    "records",
    "shape_order",
    "sweep",
    "verify",
]


def _genfile_text(g):
    if isinstance(g, dict):
        return json.dumps(g)
    if isinstance(g, (str, os.PathLike)) and os.path.exists(g):
        with open(g) as f:
            return f.read()
    return g


def _cap(max_order):
    return None if max_order is None else str(max_order)


def records(table=None, row=None):
    """Records of the DB as dicts, optionally restricted to a table and row."""
    out = json.loads(_factorlab._db_json())["records"]
    return [r for r in out if (table is None or r["table"] == table) and (row is None or r["row"] == row)]


def verify(id, bindings, tier="A", seed=0, max_order=None, residual=False, timing=False):
    """Verify one case and return its report as a dict."""
    return json.loads(_factorlab._verify_json(id, dict(bindings), tier, seed, _cap(max_order), residual, timing))


def sweep(tier="A", table=None, row=None, sub=None, seed=0, max_order=None, residual=False, jobs=1):
    """Sweep the DB; returns (reports, summary line)."""
    text, summary = _factorlab._sweep_json(tier, table, row, sub, seed, _cap(max_order), residual, jobs)
    return json.loads(text), summary


def classical_generators(family, n, q):
    """Generator file (as a dict) of a classical group."""
    return json.loads(_factorlab._classical_genfile(family, n, q))


def group_order(genfile, seed=0):
    """Order of the group generated by a generator file."""
    return _factorlab._group_order(_genfile_text(genfile), seed)


def check_triple(G, H, K, seed=0):
    """Test whether G = HK for generator files G, H, K."""
    return json.loads(_factorlab._check_triple_json(_genfile_text(G), _genfile_text(H), _genfile_text(K), seed))
