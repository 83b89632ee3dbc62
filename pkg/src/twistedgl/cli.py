"""Command line entry point: ``twistedgl <command> [options]``.

Exit codes: 0 verified, 1 a checked property failed, 2 usage or input error.
Every command prints one JSON document (or CSV with ``--emit csv``) on stdout.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import random
import sys
from dataclasses import dataclass, field

from . import amalgam, automorphisms, gl2_laurent, twisted
from .field import FieldSpec, field_of_order
from .matrix import Mat
from .parsing import ParseError, parse_matrix, parse_range
from .ring import Ring, format_elem

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    spec: FieldSpec
    flavor: str = "poly"
    n: int = 2
    seed: int = 0
    out: str = None
    emit: str = "json"
    options: dict = field(default_factory=dict)

    @property
    def ring(self) -> Ring:
        return Ring(self.spec, self.flavor)


def _field_from_args(args) -> FieldSpec:
    if args.p is not None:
        modulus = None
        if args.modulus:
            modulus = [int(c) for c in args.modulus.split(",")]
        return FieldSpec(args.p, args.e, modulus)
    return field_of_order(args.q)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _write(cfg: RunConfig, text: str, stream):
    stream.write(text if text.endswith("\n") else text + "\n")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _mat_hash(m: Mat) -> str:
    return hashlib.sha256(json.dumps(m.to_json(), sort_keys=True).encode()).hexdigest()[:16]


# -- helpers for GL2 over the Laurent ring -----------------------------------

def _parse_type(text: str, spec: FieldSpec, phi0: str, frob: int) -> gl2_laurent.AutType:
    """``alpha:beta,eps,i`` with field codes, or ``I,eps,i`` for h = 1."""
    parts = [x.strip() for x in text.split(",")]
    if len(parts) != 3:
        raise UsageError(f"--type expects h,eps,i; got {text!r}")
    h = (1, 1) if parts[0] in ("I", "1") else tuple(int(x) for x in parts[0].split(":"))
    try:
        eps, i = int(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--type expects integers for eps and i; got {text!r}") from None
    if len(h) != 2 or not all(0 < c < spec.q for c in h):
        raise UsageError(f"h must be two nonzero field codes alpha:beta below q = {spec.q}")
    if eps not in (1, -1) or i not in (0, 1):
        raise UsageError("eps must be +1 or -1 and i must be 0 or 1")
    if phi0 not in ("rho", "rho-eps"):
        raise UsageError(f"--phi0 must be rho or rho-eps; got {phi0!r}")
    return gl2_laurent.AutType(h, eps, i, (frob % spec.e, 1 if phi0 == "rho-eps" else 0))


# -- commands ----------------------------------------------------------------

def cmd_certify(cfg: RunConfig, stream=sys.stdout) -> int:
    o = cfg.options
    case = o["case"]
    indices = parse_range(o["indices"])
    R = cfg.ring
    if case == "h0":
        cert = twisted.certify_h0(cfg.n, R, o.get("s_q") or cfg.spec.q, indices)
    elif case in twisted.GENERIC_CASES:
        if cfg.flavor != "laurent":
            raise UsageError(f"case {case} is for GL2 over the Laurent ring; pass --flavor laurent")
        t = _parse_type(o.get("type") or "I,-1,0", cfg.spec, o.get("phi0") or ("rho-eps" if case == "unipotent-swap" else "rho"), o.get("frob", 0))
        phi = gl2_laurent.build_realized_aut(R, t)
        cert = twisted.certify_separation(phi, case, indices)
    elif case in twisted.CASES:
        phi = automorphisms_instance(case, R, cfg.n, o.get("frob", 0))
        cert = twisted.certify_separation(phi, case, indices, q=o.get("s_q"))
    else:
        raise UsageError(f"unknown case tag {case!r}; expected one of "
                         f"{', '.join(twisted.CASES + twisted.GENERIC_CASES + ('h0',))}")
    data = cert.to_json()
    if cfg.emit == "csv":
        rows = [(m, d, format_elem(tr)) for m, d, tr in zip(cert.indices, cert.s_degrees, cert.traces)]
        _write(cfg, _csv(rows, ["m", "s_degree", "trace"]), stream)
    else:
        _write(cfg, _dump(data), stream)
    return EXIT_OK if cert.separated else EXIT_FAIL


def automorphisms_instance(case, R, n, frob):
    if n < 3 and case.startswith("iota-h"):
        raise UsageError("the h cases need --n 3 or more")
    return twisted.case_instance(case, R, n, frob)


def cmd_nagao(cfg: RunConfig, stream=sys.stdout) -> int:
    R = cfg.ring
    if R.laurent:
        raise UsageError("nagao works over the polynomial ring")
    g = parse_matrix(cfg.options["mat"], R)
    if g.n != 2:
        raise UsageError("nagao needs a 2 x 2 matrix")
    group = cfg.options.get("group", "GL2")
    w = amalgam.nagao_decompose(g, group)
    prod = w.product()
    ok = prod == g and w.is_weakly_reduced()
    data = {"word": w.to_json(), "tags": w.tags, "length": w.length,
            "input_hash": _mat_hash(g), "round_trip_hash": _mat_hash(prod),
            "round_trip": prod == g, "weakly_reduced": w.is_weakly_reduced()}
    if cfg.emit == "csv":
        rows = [(i, t, repr(m)) for i, (t, m) in enumerate(w.factors)]
        _write(cfg, _csv(rows, ["position", "factor", "matrix"]), stream)
    else:
        _write(cfg, _dump(data), stream)
    return EXIT_OK if ok else EXIT_FAIL


def _load_word(path, spec):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    try:
        return amalgam.AmalgamWord.from_json(data, spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: malformed word ({exc})") from None


def write_sample_words(directory: str, spec: amalgam.AmalgamSpec, seed: int, k: int = 2, m: int = 4):
    """Random ``z``, ``x``, ``w`` satisfying the length hypotheses."""
    import os
    rng = random.Random(seed)
    z = amalgam.random_word(spec, rng, k, first=(k + 1) % 2)
    x = amalgam.random_word(spec, rng, m, first=1)
    w = amalgam.random_word(spec, rng, k, first=0)
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, word in (("z", z), ("x", x), ("w", w)):
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w") as fh:
            json.dump(word.to_json(), fh, sort_keys=True)
        paths.append(path)
    return paths


def cmd_length(cfg: RunConfig, stream=sys.stdout) -> int:
    R = cfg.ring
    spec = amalgam.nagao_spec(R)
    o = cfg.options
    if o.get("write_sample"):
        paths = write_sample_words(o["write_sample"], spec, cfg.seed)
        _write(cfg, _dump({"written": paths}), stream)
        return EXIT_OK
    if not o.get("words") or len(o["words"]) != 3:
        raise UsageError("length needs --words z.json x.json w.json")
    z, x, w = (_load_word(p, spec) for p in o["words"])
    verdict, length = amalgam.lemma_length_parity(z, x, w)
    data = {"verdict": verdict, "length": length, "m": x.length, "k": z.length}
    _write(cfg, _dump(data), stream)
    if verdict == "violation":
        return EXIT_FAIL
    if verdict == "hypothesis":
        return EXIT_USAGE
    return EXIT_OK


def cmd_autos(cfg: RunConfig, stream=sys.stdout) -> int:
    R = cfg.ring
    chars = automorphisms.valid_characters(R, cfg.n)
    report = {"n": cfg.n, "characters": [c.to_json() for c in chars]}
    bad = []
    for c in chars:
        ok, witness = automorphisms.homothety_injective(c, cfg.n)
        if not ok:
            bad.append(c.to_json())
    if cfg.n >= 3:
        group = cfg.options.get("group", "GL")
        units = [R.elem((c,)) for c in range(2, R.spec.q)]
        if R.laurent:
            units.append(R.t())
        reps = automorphisms.transversal_enumerate(group, cfg.n, R, units, chars)
        report["transversal"] = [repr(phi) for phi in reps]
        report["transversal_size"] = len(reps)
    report["violations"] = bad
    if cfg.emit == "csv":
        rows = [(i, s) for i, s in enumerate(report.get("transversal", []))]
        _write(cfg, _csv(rows, ["index", "automorphism"]), stream)
    else:
        _write(cfg, _dump(report), stream)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_out_table(cfg: RunConfig, stream=sys.stdout) -> int:
    spec = cfg.spec
    G = gl2_laurent.gamma_group_build(spec)
    axioms = G.check_axioms()
    R = Ring(spec, "laurent")
    family = gl2_laurent.realized_family(R)
    image = gl2_laurent.realized_image(R, family)
    realized = sorted(G.index[t] for t in image["types"])
    expected = (spec.q - 1) ** 2 * 8 * spec.e
    ok = all(axioms.values()) and len(G) == expected and image["injective"]
    if cfg.emit == "csv":
        rows = [(i, j, G.table[i][j]) for i in range(len(G)) for j in range(len(G))]
        _write(cfg, _csv(rows, ["a", "b", "a*b"]), stream)
    else:
        data = G.to_json()
        data.update({"axioms": axioms, "expected_order": expected,
                     "realized": realized, "realized_count": len(realized),
                     "realized_injective": image["injective"]})
        _write(cfg, json.dumps(data, sort_keys=True), stream)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_orbit(cfg: RunConfig, stream=sys.stdout) -> int:
    o = cfg.options
    case = o["case"]
    if case not in twisted.CASES:
        raise UsageError(f"unknown case tag {case!r}")
    R = cfg.ring
    n = max(cfg.n, 3) if case.startswith("iota-h") else cfg.n
    phi = automorphisms_instance(case, R, n, o.get("frob", 0))
    indices = parse_range(o["indices"])
    elems = twisted.case_witnesses(case, R, n, indices)
    gens = twisted.default_generators(R, n)
    hits = twisted.balls_disjoint(phi, elems, gens, o.get("radius", 2))
    data = {"case": case, "indices": indices, "radius": o.get("radius", 2),
            "collisions": [[indices[i], indices[j]] for i, j in hits]}
    _write(cfg, _dump(data), stream)
    return EXIT_FAIL if hits else EXIT_OK


def cmd_fix_check(cfg: RunConfig, stream=sys.stdout) -> int:
    o = cfg.options
    R = Ring(cfg.spec, "laurent")
    t = _parse_type(o["type"], cfg.spec, o["phi0"], o.get("frob", 0))
    if t.eps != -1:
        raise UsageError("fix-check needs a type with eps = -1")
    phi = gl2_laurent.build_realized_aut(R, t)
    report = gl2_laurent.fixed_subgroup_check(phi, o.get("K", 6), o.get("samples", 200), cfg.seed, R)
    if cfg.emit == "csv":
        rows = sorted(report["checks"].items())
        _write(cfg, _csv(rows, ["check", "ok"]), stream)
    else:
        _write(cfg, _dump(report), stream)
    return EXIT_OK if report["ok"] else EXIT_FAIL


COMMANDS = {
    "certify": cmd_certify,
    "nagao": cmd_nagao,
    "length": cmd_length,
    "autos": cmd_autos,
    "out-table": cmd_out_table,
    "orbit": cmd_orbit,
    "fix-check": cmd_fix_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=2, help="field order (default modulus)")
    common.add_argument("--p", type=int, help="characteristic; overrides --q")
    common.add_argument("--e", type=int, default=1, help="degree over F_p, with --p")
    common.add_argument("--modulus", help="monic modulus coefficients c0,c1,..,1 with --p")
    common.add_argument("--flavor", choices=("poly", "laurent"), default="poly")
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write the report to this file")
    common.add_argument("--emit", choices=("json", "csv"), default="json")

    ap = argparse.ArgumentParser(prog="twistedgl", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", parents=[common], help="trace certificate for a case tag")
    c.add_argument("--case", required=True)
    c.add_argument("--indices", default="1..6")
    c.add_argument("--frob", type=int, default=0)
    c.add_argument("--type", help="alpha:beta,eps,i for the GL2 Laurent cases")
    c.add_argument("--phi0", choices=("rho", "rho-eps"))
    c.add_argument("--s-q", dest="s_q", type=int, help="build s from the subfield of this order")

    c = sub.add_parser("nagao", parents=[common], help="Nagao normal form of a 2 x 2 matrix")
    c.add_argument("--mat", required=True, help="e.g. '[[1,0],[t,1]]'")
    c.add_argument("--group", choices=("GL2", "SL2"), default="GL2")

    c = sub.add_parser("length", parents=[common], help="length dichotomy for z x w")
    c.add_argument("--words", nargs=3, metavar=("Z", "X", "W"))
    c.add_argument("--write-sample", dest="write_sample", metavar="DIR",
                   help="write random z.json x.json w.json to DIR and exit")

    c = sub.add_parser("autos", parents=[common], help="valid characters and transversal")
    c.add_argument("--group", choices=("GL", "SL"), default="GL")

    sub.add_parser("out-table", parents=[common], help="multiplication table of the type group")

    c = sub.add_parser("orbit", parents=[common], help="bounded twisted-orbit search")
    c.add_argument("--case", required=True)
    c.add_argument("--indices", default="1..4")
    c.add_argument("--radius", type=int, default=2)
    c.add_argument("--frob", type=int, default=0)

    c = sub.add_parser("fix-check", parents=[common], help="fixed-subgroup report")
    c.add_argument("--type", required=True, help="alpha:beta,eps,i, e.g. I,-1,0")
    c.add_argument("--phi0", choices=("rho", "rho-eps"), default="rho")
    c.add_argument("--frob", type=int, default=0)
    c.add_argument("--K", type=int, default=6)
    c.add_argument("--samples", type=int, default=200)
    return ap


_DEFAULT_N = {"certify": 3, "orbit": 3, "autos": 3}


def config_from_args(args) -> RunConfig:
    spec = _field_from_args(args)
    n = args.n if args.n is not None else _DEFAULT_N.get(args.command, 2)
    skip = {"command", "q", "p", "e", "modulus", "flavor", "n", "seed", "out", "emit"}
    opts = {k: v for k, v in vars(args).items() if k not in skip}
    return RunConfig(spec, args.flavor, n, args.seed, args.out, args.emit, opts)


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg, stream)
    except ParseError as exc:
        print(f"error: input {exc.text!r}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
