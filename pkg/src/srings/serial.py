"""Text formats for S-rings, permutation groups and reports.

S-ring file: header line `p=<p> n=<n>`, then one line per class of
space-separated element indices (little-endian base-p), classes sorted by
least element, class of 0 first.

Permutation group file: header `deg=<degree>`, one generator per line as a
space-separated image sequence.
"""

from __future__ import annotations

import json

from . import perms
from .errors import InputError
from .gfp import GroupContext
from .perms import PermGroup
from .sring import SRing, make_sring, sring_from_classes


def serialize_sring(ring: SRing) -> str:
    lines = [f"p={ring.ctx.p} n={ring.ctx.n}"]
    for cls in ring.classes:
        lines.append(" ".join(str(i) for i in cls))
    return "\n".join(lines) + "\n"


def parse_sring(text: str) -> SRing:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty S-ring file")
    header = lines[0].split()
    try:
        fields = dict(part.split("=") for part in header)
        p, n = int(fields["p"]), int(fields["n"])
    except (ValueError, KeyError):
        raise InputError(f"bad header line: {lines[0]!r}; expected 'p=<p> n=<n>'")
    ctx = GroupContext(p, n)
    classes = []
    for ln_no, line in enumerate(lines[1:], start=2):
        try:
            classes.append([int(tok) for tok in line.split()])
        except ValueError:
            raise InputError(f"line {ln_no}: non-integer element")
    return make_sring(ctx, classes)


def serialize_permgroup(group: PermGroup) -> str:
    lines = [f"deg={group.degree}"]
    for g in group.generators:
        lines.append(" ".join(str(i) for i in g))
    return "\n".join(lines) + "\n"


def parse_permgroup(text: str) -> PermGroup:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("deg="):
        raise InputError("permutation group file must start with 'deg=<degree>'")
    try:
        degree = int(lines[0][4:])
    except ValueError:
        raise InputError(f"bad degree in header: {lines[0]!r}")
    gens = []
    for ln_no, line in enumerate(lines[1:], start=2):
        try:
            img = [int(tok) for tok in line.split()]
        except ValueError:
            raise InputError(f"line {ln_no}: non-integer image")
        gens.append(perms.check_perm(img, degree))
    return PermGroup(gens, degree=degree)


def report_text(pairs: list[tuple[str, object]]) -> str:
    return "\n".join(f"{k}: {v}" for k, v in pairs) + "\n"


def report_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
