"""Command-line front end.

Inputs are DSC JSON (``{"events": [...], "dep": {...}}``), package
manifests (``{"packages": [...]}``) or built-in fixtures written as
``fixture:<name>``.  Exit codes: 0 success, 1 validation failure, 2 size cap
exceeded, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from itertools import product as cartesian
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

from . import fixtures
from .antimatroid import Antimatroid, phi, psi
from .category import (
    coequalizer_search,
    coproduct,
    double_event,
    equalizer,
    product,
    pullback,
)
from .completion import bruns_lakser, is_dsnc, merkle_dsnc, merkle_hashes
from .core import (
    DEFAULT_CAP,
    Dsc,
    PreDsc,
    complete_masks,
    from_json,
    rdp,
    to_json,
    validate_dsc,
)
from .errors import ContractError, DomainError, ResolutionError, SizeCapError, ValidationError
from .lattice import covers, element_label, find_forbidden_sublattice, is_distributive, is_upper_semimodular, to_dot
from .morphisms import DscMorphism, describe
from .versions import version_relation

EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_IO = 0, 1, 2, 3


# -- manifests -----------------------------------------------------------------------


def parse_version(text: str) -> tuple[int, ...]:
    parts = text.strip().split(".")
    try:
        nums = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"bad version {text!r}") from None
    return nums + (0,) * (3 - len(nums))


def version_matches(spec: str, version: str) -> bool:
    """Exact versions, or ``^X.Y.Z``: same major and at least X.Y.Z."""
    spec = spec.strip()
    v = parse_version(version)
    if spec.startswith("^"):
        want = parse_version(spec[1:])
        return v[0] == want[0] and v[1:] >= want[1:]
    return v == parse_version(spec)


def _requirement_spec(req: Mapping) -> str:
    for key in ("version", "spec", "version_spec"):
        if key in req:
            return str(req[key])
    raise ValueError(f"requirement {req!r} has no version spec")


def manifest_to_predsc(manifest: Mapping) -> PreDsc:
    """One event ``name-version`` per package, depsets closed transitively.

    Each requirement contributes its matching versions as alternatives; the
    depsets of a package are the cross product over its requirements.  A
    closure pass then adds, for every member of a depset, one of that
    member's own depsets, until nothing changes.  Cycles survive the pass as
    events inside their own depsets and are left to validation.
    """
    pkgs = manifest.get("packages")
    if not isinstance(pkgs, list):
        raise ValueError("manifest needs a 'packages' list")
    by_name: dict[str, list[tuple[str, str]]] = {}
    labels = []
    for p in pkgs:
        name, version = str(p["name"]), str(p["version"])
        label = f"{name}-{version}"
        if label in labels:
            raise ValueError(f"duplicate package {label}")
        labels.append(label)
        by_name.setdefault(name, []).append((version, label))
    dep0: dict[str, set[frozenset]] = {}
    for p in pkgs:
        label = f"{p['name']}-{p['version']}"
        choices = []
        for req in p.get("dependencies", []):
            spec = _requirement_spec(req)
            found = [lab for v, lab in by_name.get(str(req["name"]), []) if version_matches(spec, v)]
            if not found:
                raise ResolutionError(f"{label} requires {req['name']} {spec}, which no package provides")
            choices.append(sorted(found))
        dep0[label] = _hull({frozenset(c) for c in cartesian(*choices)})
    dep = dep0
    for _ in range(len(labels) + 1):
        nxt = {}
        for e in labels:
            fam = set()
            for D in dep0[e]:
                members = sorted(D)
                for picks in cartesian(*(sorted(dep[x], key=sorted) for x in members)):
                    fam.add(D.union(*picks))
            nxt[e] = _hull(fam)
        if nxt == dep:
            break
        dep = nxt
    return PreDsc({e: [sorted(D) for D in fam] for e, fam in dep.items()}, labels)


def _hull(fam: set[frozenset]) -> set[frozenset]:
    return {X for X in fam if not any(Y < X for Y in fam)}


# -- input loading -----------------------------------------------------------------------


def _read_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_structure(ref: Any, base: Optional[Path] = None, validate: bool = True) -> PreDsc:
    """A DSC from a path, ``fixture:<name>``, or an already-parsed JSON object."""
    if isinstance(ref, str):
        if ref.startswith("fixture:"):
            name = ref[len("fixture:"):]
            if name not in fixtures.ALL:
                raise ValueError(f"unknown fixture {name!r}; known: {', '.join(fixtures.ALL)}")
            return fixtures.ALL[name]()
        path = Path(ref)
        if base is not None and not path.is_absolute():
            path = base / path
        obj = _read_json(str(path))
    else:
        obj = ref
    if isinstance(obj, Mapping) and "packages" in obj:
        p = manifest_to_predsc(obj)
        return Dsc.from_predsc(p) if validate else p
    if isinstance(obj, Mapping) and "feasible" in obj:
        return psi(Antimatroid.from_json(obj))
    return from_json(obj, validate=validate)


def load_morphism(ref: str) -> DscMorphism:
    obj = _read_json(ref)
    base = Path(ref).parent
    src = load_structure(obj["source"], base)
    tgt = load_structure(obj["target"], base)
    return DscMorphism(src, tgt, obj["map"])


# -- output helpers --------------------------------------------------------------------------


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _construction_json(res) -> dict:
    return {"object": to_json(res.object), "legs": [leg.to_json() for leg in res.legs]}


# -- verbs -----------------------------------------------------------------------------------


def cmd_validate(args) -> int:
    p = load_structure(args.input, validate=False)
    report = validate_dsc(p)
    if args.json:
        _emit(_dumps({"ok": report.ok, **report.to_json()}))
    elif report.ok:
        _emit(f"valid DSC with {len(p)} events")
        if args.emit:
            _emit(_dumps(to_json(p)))
    else:
        _emit(report.summary())
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_rdp(args) -> int:
    d = load_structure(args.input)
    l = rdp(d, args.cap)
    if args.dot:
        _emit(to_dot(l, name="rdp"))
    elif args.json:
        edges = sorted([element_label(a), element_label(b)] for a, b in covers(l))
        _emit(_dumps({"elements": [sorted(x) for x in l.elements], "covers": edges}))
    else:
        _emit(f"{len(l)} elements, {len(covers(l))} covering pairs")
        _emit("elements: " + " ".join(element_label(x) for x in l.elements))
        _emit(f"distributive: {'yes' if is_distributive(l) else 'no'}")
        _emit(f"upper semimodular: {'yes' if is_upper_semimodular(l) else 'no'}")
        n5 = find_forbidden_sublattice(l, "N5")
        if n5:
            _emit("pentagon: " + " ".join(element_label(x) for x in n5))
    return EXIT_OK


def cmd_antimatroid(args) -> int:
    d = load_structure(args.input)
    a = phi(d, args.cap)
    back = psi(a)
    if args.json:
        _emit(a.dumps())
    else:
        _emit(f"{len(a)} feasible sets: " + " ".join(element_label(F) for F in a.feasible))
        _emit("round trip: " + ("identical" if back == d else "DIFFERENT"))
    return EXIT_OK if back == d else EXIT_INVALID


def cmd_bl(args) -> int:
    d = load_structure(args.input)
    view = bruns_lakser(rdp(d, args.cap))
    if args.dot:
        _emit(to_dot(view.base, name="bl"))
    elif args.json:
        _emit(
            _dumps(
                {
                    "elements": [element_label(S) for S in view.base.elements],
                    "embedding": {element_label(x): element_label(S) for x, S in view.embedding.items()},
                }
            )
        )
    else:
        _emit(f"{len(view)} elements")
        _emit("join-irreducibles: " + " ".join(element_label(j) for j in view.irreducibles.elements))
        _emit("top: " + element_label(view.base.top))
        for x, S in view.embedding.items():
            _emit(f"  {element_label(x)} -> {element_label(S)}")
    return EXIT_OK


def cmd_merkle(args) -> int:
    d = load_structure(args.input)
    dsnc = d if is_dsnc(d) else merkle_dsnc(d, args.cap)
    store = merkle_hashes(dsnc)
    _emit(store.to_dot() if args.dot else store.dumps())
    return EXIT_OK


def cmd_morphism(args) -> int:
    f = load_morphism(args.map)
    if args.json:
        _emit(_dumps({"classification": f.classification(), "witnesses": f.witnesses()}))
    else:
        _emit(describe(f))
    return EXIT_OK


def cmd_product(args) -> int:
    res = product(load_structure(args.left), load_structure(args.right))
    _emit(_dumps(_construction_json(res)))
    return EXIT_OK


def cmd_coproduct(args) -> int:
    res = coproduct(load_structure(args.left), load_structure(args.right))
    _emit(_dumps(_construction_json(res)))
    return EXIT_OK


def cmd_equalizer(args) -> int:
    res = equalizer(load_morphism(args.first), load_morphism(args.second))
    _emit(_dumps(_construction_json(res)))
    return EXIT_OK


def cmd_pullback(args) -> int:
    res = pullback(load_morphism(args.first), load_morphism(args.second))
    _emit(_dumps(_construction_json(res)))
    return EXIT_OK


def cmd_coequalizer(args) -> int:
    report = coequalizer_search(load_morphism(args.first), load_morphism(args.second))
    if args.json:
        out = {"exists": report.exists, "candidates": [
            {"partition": [sorted(b) for b in c.partition], "object": to_json(c.object), "refuted_by": c.refuted_by}
            for c in report.candidates
        ]}
        if report.result:
            out["coequalizer"] = _construction_json(report.result)
        _emit(_dumps(out))
    else:
        _emit(report.summary())
    return EXIT_OK


def cmd_double(args) -> int:
    res = double_event(load_structure(args.input), args.event)
    _emit(_dumps(_construction_json(res)))
    return EXIT_OK


def cmd_versions(args) -> int:
    d = load_structure(args.input)
    rel = version_relation(d)
    if args.json:
        _emit(_dumps({"edges": rel.edges(), "classes": [sorted(c) for c in rel.classes()]}))
    else:
        for a, b in rel.edges():
            _emit(f"{a} ◂ {b}")
        for c in rel.classes():
            if len(c) > 1:
                _emit("equivalent: " + " ".join(sorted(c)))
    return EXIT_OK


def cmd_fuzz(args) -> int:
    from .core import reachability_chain
    from .lattice import is_diamond_free_semimodular
    from .sampling import random_dsc

    rng = random.Random(args.seed)
    failures = []
    for k in range(args.count):
        d = random_dsc(rng.randint(1, args.size), rng)
        l = rdp(d)
        checks = {
            "round trip": psi(phi(d)) == d,
            "diamond-free semimodular": is_diamond_free_semimodular(l),
            "dsnc iff distributive": is_dsnc(d) == is_distributive(l),
            "complete sets reachable": all(
                reachability_chain(d, d.unmask(m)) is not None for m in complete_masks(d)
            ),
        }
        for name, ok in checks.items():
            if not ok:
                failures.append((k, name, to_json(d)))
    if args.json:
        _emit(_dumps({"count": args.count, "seed": args.seed, "failures": failures}))
    else:
        _emit(f"{args.count} random DSCs, seed {args.seed}: {len(failures)} failures")
        for k, name, obj in failures:
            _emit(f"  #{k} {name}: {_dumps(obj)}")
    return EXIT_OK if not failures else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--dot", action="store_true", help="Graphviz output where supported")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest ground set to enumerate")
    common.add_argument("--seed", type=int, default=0, help="random seed for fuzz")

    parser = argparse.ArgumentParser(prog="depchoice", description="Dependency structures with choice.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("validate", cmd_validate, "check the DSC axioms")
    sp.add_argument("input")
    sp.add_argument("--emit", action="store_true", help="print canonical DSC JSON when valid")
    for name, fn, text in (
        ("rdp", cmd_rdp, "lattice of complete sets"),
        ("antimatroid", cmd_antimatroid, "feasible sets and the round trip back"),
        ("bl", cmd_bl, "Bruns-Lakser completion of rdp"),
        ("merkle", cmd_merkle, "Merkle hashes of the split DSNC"),
        ("versions", cmd_versions, "higher-version relation"),
    ):
        verb(name, fn, text).add_argument("input")
    verb("morphism", cmd_morphism, "classify a map file").add_argument("map")
    for name, fn in (("product", cmd_product), ("coproduct", cmd_coproduct)):
        sp = verb(name, fn, f"categorical {name}")
        sp.add_argument("left")
        sp.add_argument("right")
    for name, fn in (("equalizer", cmd_equalizer), ("pullback", cmd_pullback), ("coequalizer", cmd_coequalizer)):
        sp = verb(name, fn, f"{name} of two map files")
        sp.add_argument("first")
        sp.add_argument("second")
    sp = verb("double", cmd_double, "split one event into two copies")
    sp.add_argument("input")
    sp.add_argument("event")
    sp = verb("fuzz", cmd_fuzz, "check invariants on random DSCs")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--size", type=int, default=6)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which would read as a size-cap failure
        return EXIT_IO if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValidationError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ResolutionError, ContractError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
