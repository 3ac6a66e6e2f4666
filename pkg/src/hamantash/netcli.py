"""JSON files and the ``hamantash`` command line.

Numbers are written with 17 significant digits in plain decimal, so reading
a file back gives the same doubles.  Every file carries ``"version": 1`` and
``"case": "large-angle"`` plus a ``"kind"`` tag; the kind is inferred from
the keys when missing.

Exit codes: 0 success, 1 validation failure, 2 I/O or format error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .assembly import NORTH, SOUTH, SamosaAssembly, classify, validate
from .dtrep import (DTRep, action_angle, chain_areas, holonomy, play_game, prepare,
                    standardize, synth, validate_rep)
from .hyp_core import GeometryError, Isometry, elliptic_data
from .hyp_trig import KinkData
from .net import emit_svg, unfold
from .realize import (EdgeVector, HatParams, IntrinsicParams, VPieceParams, edge_vector,
                      intrinsics, invert, total_area)

VERSION = 1
CASE = "large-angle"
DET_TOL = 1e-12
ANGLE_TOL = 1e-8


class FormatError(ValueError):
    """Malformed input file; exit code 2."""


class ValidationFailed(Exception):
    """Well-formed input that is not a valid object; exit code 1."""

    def __init__(self, lines):
        super().__init__("; ".join(lines))
        self.lines = list(lines)


# -- number policy ----------------------------------------------------------------

def fmt_number(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise FormatError(f"cannot write non-finite number {x}")
    return np.format_float_positional(x, precision=17, unique=False, fractional=False, trim="0")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with the package's number policy."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise FormatError(f"cannot serialize {type(obj).__name__}")


def _header(kind: str, n: int) -> dict:
    return {"version": VERSION, "case": CASE, "kind": kind, "n": n}


def _check_header(d: dict) -> None:
    if not isinstance(d, dict):
        raise FormatError("top level must be a JSON object")
    if d.get("version") != VERSION:
        raise FormatError(f"unsupported version {d.get('version')!r}")
    if d.get("case", CASE) != CASE:
        raise FormatError(f"unsupported case {d.get('case')!r}")


def _floats(v, name: str, length: int | None = None) -> tuple[float, ...]:
    if not isinstance(v, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                                          for x in v):
        raise FormatError(f"{name} must be a list of numbers")
    if length is not None and len(v) != length:
        raise FormatError(f"{name} must have {length} entries, got {len(v)}")
    return tuple(float(x) for x in v)


def _number(d: dict, key: str, where: str) -> float:
    v = d.get(key)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise FormatError(f"{where}: {key} must be a number")
    return float(v)


def infer_kind(d: dict) -> str:
    if "kind" in d:
        return d["kind"]
    if "gens" in d:
        return "rep"
    if "lengths" in d:
        return "edge-vector"
    if "hats" in d:
        return "intrinsics"
    if "curves" in d:
        return "assembly"
    raise FormatError("cannot tell what kind of object the file holds")


# -- assemblies -------------------------------------------------------------------

def assembly_to_dict(a: SamosaAssembly) -> dict:
    d = _header("assembly", a.n)
    d["alpha"] = list(a.alpha)
    d["curves"] = [{"beta": a.beta[k], "ell": a.ell[k], "phi": a.phi[k],
                    "phi_prime": a.phi_prime[k], "hem_phi": a.hem_phi[k],
                    "hem_phi_prime": a.hem_phi_prime[k]} for k in range(a.n - 3)]
    return d


def assembly_from_dict(d: dict) -> SamosaAssembly:
    _check_header(d)
    n = d.get("n")
    if not isinstance(n, int) or n < 4:
        raise FormatError("n must be an integer >= 4")
    alpha = _floats(d.get("alpha"), "alpha", n)
    curves = d.get("curves")
    if not isinstance(curves, list) or len(curves) != n - 3:
        raise FormatError(f"curves must list n - 3 = {n - 3} entries")
    cols = {k: [] for k in ("beta", "ell", "phi", "phi_prime", "hem_phi", "hem_phi_prime")}
    for i, cv in enumerate(curves):
        if not isinstance(cv, dict):
            raise FormatError(f"curve {i} must be an object")
        for k in ("beta", "ell", "phi", "phi_prime"):
            cols[k].append(_number(cv, k, f"curve {i}"))
        for k in ("hem_phi", "hem_phi_prime"):
            if cv.get(k) not in (NORTH, SOUTH):
                raise FormatError(f"curve {i}: {k} must be 'north' or 'south'")
            cols[k].append(cv[k])
    return SamosaAssembly(alpha, **cols)


# -- representations ------------------------------------------------------------

def rep_to_dict(rep: DTRep) -> dict:
    d = _header("rep", rep.n)
    d["alpha"] = list(rep.alpha)
    d["gens"] = [[g.a, g.b, g.c, g.d] for g in rep.gens]
    return d


def _isometry(entries, i: int) -> Isometry:
    a, b, c, dd = _floats(entries, f"gens[{i}]", 4)
    det = a * dd - b * c
    if abs(det - 1.0) > DET_TOL:
        raise ValidationFailed([f"generator {i + 1}: determinant {det!r} is not 1"])
    canon = Isometry.from_matrix([[a, b], [c, dd]])
    if max(abs(x - y) for x, y in zip((canon.a, canon.b, canon.c, canon.d), (a, b, c, dd))) > DET_TOL:
        raise ValidationFailed([f"generator {i + 1}: matrix is not in canonical sign"])
    # kept verbatim so that write-then-read is bit-exact
    return Isometry(a, b, c, dd)


def rep_from_dict(d: dict) -> DTRep:
    """Read a representation; rotation angles are recomputed from the matrices."""
    _check_header(d)
    n = d.get("n")
    if not isinstance(n, int) or n < 3:
        raise FormatError("n must be an integer >= 3")
    alpha = _floats(d.get("alpha"), "alpha", n)
    gens = d.get("gens")
    if not isinstance(gens, list) or len(gens) != n:
        raise FormatError(f"gens must list n = {n} matrices")
    mats = tuple(_isometry(g, i) for i, g in enumerate(gens))
    problems = []
    for i, (g, a) in enumerate(zip(mats, alpha)):
        try:
            ang = elliptic_data(g)[1]
        except GeometryError as exc:
            problems.append(f"generator {i + 1}: {exc}")
            continue
        if abs((ang - a + math.pi) % (2 * math.pi) - math.pi) > ANGLE_TOL:
            problems.append(f"generator {i + 1}: rotation angle {ang:.17g} disagrees with alpha {a:.17g}")
    if problems:
        raise ValidationFailed(problems)
    return DTRep(mats, alpha)


# -- intrinsic data and edge vectors ---------------------------------------------

def intrinsics_to_dict(p: IntrinsicParams) -> dict:
    d = _header("intrinsics", p.n)
    d["alpha"] = list(p.alpha)
    d["curves"] = [{"c": cv.c, "kappa": cv.kappa} for cv in p.curves]
    d["hats"] = [{"lam_p": h.lam_p, "lam_q": h.lam_q, "delta_p": h.delta_p, "delta_q": h.delta_q}
                 for h in p.hats]
    d["pieces"] = [{"case": pc.case, "blocked": list(pc.blocked),
                    "edges": {k: pc.edges[k] for k in sorted(pc.edges)}} for pc in p.pieces]
    return d


def intrinsics_from_dict(d: dict) -> IntrinsicParams:
    _check_header(d)
    n = d.get("n")
    if not isinstance(n, int) or n < 4:
        raise FormatError("n must be an integer >= 4")
    alpha = _floats(d.get("alpha"), "alpha", n)
    curves, hats, pieces = d.get("curves"), d.get("hats"), d.get("pieces")
    if not isinstance(curves, list) or len(curves) != n - 3:
        raise FormatError(f"curves must list n - 3 = {n - 3} entries")
    if not isinstance(hats, list) or len(hats) != 2:
        raise FormatError("hats must list two entries")
    if not isinstance(pieces, list) or len(pieces) != n - 4:
        raise FormatError(f"pieces must list n - 4 = {n - 4} entries")
    kinks = tuple(KinkData(_number(c, "c", f"curve {i}"), _number(c, "kappa", f"curve {i}"))
                  for i, c in enumerate(curves))
    hat = tuple(HatParams(*(_number(h, k, f"hat {i}") for k in ("lam_p", "lam_q", "delta_p", "delta_q")))
                for i, h in enumerate(hats))
    out = []
    for i, pc in enumerate(pieces):
        edges = pc.get("edges") if isinstance(pc, dict) else None
        if not isinstance(edges, dict):
            raise FormatError(f"piece {i}: edges must be an object")
        blocked = tuple(pc.get("blocked", ()))
        if pc.get("case") not in ("V1", "V2") or not set(blocked) <= {"a", "b"}:
            raise FormatError(f"piece {i}: bad case or blocked list")
        vals = {k: _number(edges, k, f"piece {i}") for k in edges}
        piece = VPieceParams(pc["case"], vals, blocked)
        missing = [k for k in piece.edge_names() if k not in vals]
        if missing:
            raise FormatError(f"piece {i}: missing edges {missing}")
        out.append(piece)
    return IntrinsicParams(alpha, kinks, hat, tuple(out))


def edges_to_dict(ev: EdgeVector, n: int) -> dict:
    d = _header("edge-vector", n)
    d["names"] = list(ev.names)
    d["lengths"] = list(ev.lengths)
    return d


def edges_from_dict(d: dict) -> EdgeVector:
    _check_header(d)
    names = d.get("names")
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        raise FormatError("names must be a list of strings")
    return EdgeVector(_floats(d.get("lengths"), "lengths", len(names)), tuple(names))


# -- files ---------------------------------------------------------------------------

def read_json(path) -> dict:
    try:
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
        return json.loads(text)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not JSON: {exc}") from exc


def load(path, kind: str):
    d = read_json(path)
    _check_header(d)
    got = infer_kind(d)
    if got != kind:
        raise FormatError(f"{path} holds a {got}, expected a {kind}")
    reader = {"assembly": assembly_from_dict, "rep": rep_from_dict,
              "intrinsics": intrinsics_from_dict, "edge-vector": edges_from_dict}[kind]
    try:
        return reader(d)
    except (TypeError, AttributeError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _write(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise FormatError(f"cannot write {out}: {exc}") from exc


def _emit(d: dict, out) -> None:
    _write(dumps(d) + "\n", out)


def _load_valid_assembly(path) -> SamosaAssembly:
    a = load(path, "assembly")
    rep = validate(a)
    if not rep.ok:
        raise ValidationFailed(rep.lines())
    return a


def _load_valid_rep(path) -> DTRep:
    rep = load(path, "rep")
    problems = validate_rep(rep)
    if problems:
        raise ValidationFailed(problems)
    return rep


def parse_eps(text: str) -> tuple[str, ...]:
    """Hemisphere flags as ``"nnsn"`` or ``"north,north,south,north"``."""
    words = [w.strip() for w in text.split(",")] if "," in text else list(text.strip())
    table = {"n": NORTH, "s": SOUTH, NORTH: NORTH, SOUTH: SOUTH}
    try:
        return tuple(table[w.lower()] for w in words)
    except KeyError as exc:
        raise FormatError(f"bad hemisphere flag {exc.args[0]!r}") from None


def _coords_dict(c) -> dict:
    return {"beta": list(c.beta), "gamma": list(c.gamma)}


# -- subcommands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    d = read_json(args.file)
    _check_header(d)
    if infer_kind(d) == "rep":
        rep = load(args.file, "rep")
        problems = validate_rep(rep)
        for line in problems:
            print(line)
        print("valid DT representation" if not problems else "invalid DT representation")
        return 1 if problems else 0
    a = load(args.file, "assembly")
    rep = validate(a)
    for line in rep.lines():
        print(line)
    if not rep.ok:
        print("invalid assembly")
        return 1
    cl = classify(a)
    print(f"valid assembly; hamantash: {cl.is_hamantash}, north: {cl.is_north}, generic: {cl.is_generic}")
    return 0


def cmd_realize(args) -> int:
    _emit(intrinsics_to_dict(intrinsics(_load_valid_assembly(args.file))), args.out)
    return 0


def cmd_invert(args) -> int:
    p = load(args.file, "intrinsics")
    a = invert(p, parse_eps(args.eps))
    _emit(assembly_to_dict(a), args.out)
    return 0


def cmd_holonomy(args) -> int:
    a = _load_valid_assembly(args.file)
    h = holonomy(a)
    d = rep_to_dict(h)
    d["coordinates"] = _coords_dict(action_angle(prepare(h)))
    _emit(d, args.out)
    return 0


def cmd_synth(args) -> int:
    rep = _load_valid_rep(args.file)
    _emit(assembly_to_dict(synth(rep)), args.out)
    return 0


def cmd_game(args) -> int:
    rep = _load_valid_rep(args.file)
    state = play_game(rep)
    std = standardize(rep, state)
    d = {"version": VERSION, "case": CASE, "kind": "game", "n": rep.n,
         "order": [i + 1 for i in state.order()],
         "moves": [{"removed": [i + 1 for i in mv.removed], "side": mv.side} for mv in state.log],
         "revisions": state.revisions,
         "areas": chain_areas(std),
         "coordinates": _coords_dict(action_angle(prepare(rep)))}
    _emit(d, args.out)
    return 0


def cmd_lengths(args) -> int:
    a = _load_valid_assembly(args.file)
    _emit(edges_to_dict(edge_vector(a), a.n), args.out)
    return 0


def cmd_unfold(args) -> int:
    a = _load_valid_assembly(args.file)
    net = unfold(a)
    svg = emit_svg(net, overlay=not args.no_overlay, markers=not args.no_markers)
    if args.svg:
        _write(svg, args.svg)
    print(f"polygons: {' '.join(p.kind for p in net.polygons)}")
    print(f"glue mismatch: {net.glue_mismatch():.3g}")
    print(f"net area: {net.area():.17g} (assembly area {total_area(a):.17g})")
    return 0


def cmd_sample(args) -> int:
    from .sampling import random_assembly, random_rep

    rng = np.random.default_rng(args.seed)
    if args.what == "assembly":
        _emit(assembly_to_dict(random_assembly(rng, args.n, eps=args.eps)), args.out)
    else:
        _emit(rep_to_dict(random_rep(rng, args.n, braids=args.braids)), args.out)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(args.seed, args.count)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hamantash",
                                 description="Samosa assemblies, their holonomy and their nets.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_out(p):
        p.add_argument("--out", "-o", help="output file (default: stdout)")
        return p

    p = sub.add_parser("validate", help="check an assembly or representation file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)
    p = with_out(sub.add_parser("realize", help="assembly -> intrinsic parameters"))
    p.add_argument("file")
    p.set_defaults(func=cmd_realize)
    p = with_out(sub.add_parser("invert", help="intrinsic parameters -> assembly"))
    p.add_argument("file")
    p.add_argument("--eps", required=True, help="hemispheres of phi_1, phi'_1, ..., e.g. nnsn")
    p.set_defaults(func=cmd_invert)
    p = with_out(sub.add_parser("holonomy", help="assembly -> holonomy representation"))
    p.add_argument("file")
    p.set_defaults(func=cmd_holonomy)
    p = with_out(sub.add_parser("synth", help="representation -> north hamantash assembly"))
    p.add_argument("file")
    p.set_defaults(func=cmd_synth)
    p = with_out(sub.add_parser("game", help="play the pants decomposition game"))
    p.add_argument("file")
    p.set_defaults(func=cmd_game)
    p = with_out(sub.add_parser("lengths", help="assembly -> edge-length vector"))
    p.add_argument("file")
    p.set_defaults(func=cmd_lengths)
    p = sub.add_parser("unfold", help="unfold a hamantash assembly into a net")
    p.add_argument("file")
    p.add_argument("--svg", help="write the net as SVG")
    p.add_argument("--no-overlay", action="store_true", help="omit the triangle chain")
    p.add_argument("--no-markers", action="store_true", help="omit slit markers")
    p.set_defaults(func=cmd_unfold)
    p = with_out(sub.add_parser("sample", help="write a random valid assembly or representation"))
    p.add_argument("what", choices=("assembly", "rep"))
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", default="north", help="'north', 'random' (assemblies only)")
    p.add_argument("--braids", type=int, default=0, help="random Hurwitz moves (reps only)")
    p.set_defaults(func=cmd_sample)
    p = sub.add_parser("selftest", help="run the built-in property checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20, help="samples per check")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationFailed as exc:
        for line in exc.lines:
            print(line, file=sys.stderr)
        return 1
    except GeometryError as exc:
        # includes InvalidRep and NotUnfoldable
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # FormatError and malformed shapes
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
