"""Popularity of matchings: verify, certify, construct, cross-validate.

Thin wrapper over the compiled module ``_popmatch``.  Structured reports are
produced by the C++ core as JSON strings (one schema shared with the CLI);
the helpers here decode them into plain dicts.
"""

import json as _json

try:
    from ._popmatch import (
        Error,
        Instance,
        Matching,
        add_last_resorts,
        certify_json,
        crosscheck_json,
        delta,
        enumerate_matchings,
        find_popular,
        gale_shapley,
        instance_digest,
        parse_instance,
        parse_matching,
        random_instance,
        serialize_instance,
        serialize_matching,
        verify_json,
    )
except ImportError:  # in-tree builds put _popmatch on sys.path directly
    from _popmatch import (
        Error,
        Instance,
        Matching,
        add_last_resorts,
        certify_json,
        crosscheck_json,
        delta,
        enumerate_matchings,
        find_popular,
        gale_shapley,
        instance_digest,
        parse_instance,
        parse_matching,
        random_instance,
        serialize_instance,
        serialize_matching,
        verify_json,
    )

__all__ = [
    "Error",
    "Instance",
    "Matching",
    "add_last_resorts",
    "certify",
    "certify_json",
    "crosscheck",
    "crosscheck_json",
    "delta",
    "enumerate_matchings",
    "find_popular",
    "gale_shapley",
    "instance_digest",
    "load_instance",
    "parse_instance",
    "parse_matching",
    "random_instance",
    "serialize_instance",
    "serialize_matching",
    "verify",
    "verify_json",
]


def load_instance(text):
    """Parse instance text and augment one-sided variants with last resorts."""
    inst = parse_instance(text)
    if inst.variant in ("ha", "hat"):
        inst = add_last_resorts(inst)
    return inst


def verify(instance, matching, methods=("all",), guard_edges=24):
    """Judge one matching; returns the verify report as a dict.

    ``methods`` is an iterable drawn from ``structural``, ``optimization``,
    ``bruteforce`` and ``all``.
    """
    if isinstance(methods, str):
        methods = (methods,)
    return _json.loads(verify_json(instance, matching, list(methods), guard_edges))


def certify(instance, matching):
    """Dual certificate (popular) or witness + beating rival (not), as a dict."""
    return _json.loads(certify_json(instance, matching))


def crosscheck(instance, guard_edges=24):
    """Three-method agreement sweep over every candidate matching, as a dict."""
    return _json.loads(crosscheck_json(instance, guard_edges))
