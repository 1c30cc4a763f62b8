"""Command-line front end: ``relorders <command> -g subgroup.sub ...``.

Subgroup files look like::

    # the subgroup <a t^2, t^4> of F2 x Z
    ambient F 2 Z 1
    gen a | (2)
    gen 1 | (4)

Without a ``Z`` part the ambient group is free and elements are plain words.
Exit codes: 0 success, 1 failed verification, 2 bad input, 3 resource guard.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from typing import Sequence

from . import free_orders
from . import fta as fta_mod
from .automata import Limits, ResourceGuardError, build_stallings, index, membership, to_dot
from .oracle import Ball, verify_decomposition
from .words import Ambient, ParseError, format_element, format_word, parse_element, parse_word

__all__ = ["SubgroupFile", "load_subgroup", "parse_subgroup_text", "parse_dot", "main", "run"]


class ConfigError(ValueError):
    pass


@dataclass
class SubgroupFile:
    ambient: Ambient
    gens: list
    is_fta: bool

    def build(self):
        if self.is_fta:
            return fta_mod.fta_basis(self.gens, self.ambient)
        return build_stallings(self.gens, self.ambient.free_rank)

    def parse(self, text: str):
        if self.is_fta:
            return parse_element(text, self.ambient)
        return parse_word(text, self.ambient.free_rank)


_HEADER = re.compile(r"ambient\s+F\s*(\d+)(?:\s+Z\s*(\d+))?\s*$")


def parse_subgroup_text(text: str) -> SubgroupFile:
    ambient = None
    is_fta = False
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ambient is None:
            match = _HEADER.match(line)
            if match is None:
                raise ConfigError(f"line {lineno}: expected 'ambient F <n> [Z <m>]'")
            is_fta = match.group(2) is not None
            ambient = Ambient(int(match.group(1)), int(match.group(2) or 0))
            continue
        keyword, _, rest = line.partition(" ")
        if keyword != "gen":
            raise ConfigError(f"line {lineno}: expected 'gen <element>'")
        try:
            gens.append(parse_element(rest, ambient) if is_fta else parse_word(rest, ambient.free_rank))
        except ParseError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from exc
    if ambient is None:
        raise ConfigError("missing ambient header")
    return SubgroupFile(ambient, gens, is_fta)


def load_subgroup(path: str) -> SubgroupFile:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_subgroup_text(fh.read())
    except OSError as exc:
        raise ConfigError(str(exc)) from exc


def format_subgroup_file(ambient: Ambient, gens, is_fta: bool) -> str:
    head = f"ambient F {ambient.free_rank}" + (f" Z {ambient.abelian_rank}" if is_fta else "")
    n = ambient.free_rank
    body = [f"gen {format_element(g, n) if is_fta else format_word(g, n)}" for g in gens]
    return "\n".join([head, *body])


# --- DOT ---------------------------------------------------------------------

_DOT_NODE = re.compile(r"^(\w+)\s*(?:\[(.*)\])?\s*;$")
_DOT_EDGE = re.compile(r"^(\w+)\s*->\s*(\w+)\s*(?:\[(.*)\])?\s*;$")
_DOT_ATTR = re.compile(r'(\w+)\s*=\s*("[^"]*"|[\w.]+)')


def parse_dot(text: str) -> tuple[str, dict[str, dict], list[tuple[str, str, dict]]]:
    """Parse the DOT subset emitted by ``to_dot``; raise ValueError otherwise."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    match = re.match(r"^digraph\s+(\w+)\s*\{$", lines[0]) if lines else None
    if match is None or lines[-1] != "}":
        raise ValueError("not a digraph block")
    nodes: dict[str, dict] = {}
    edges = []

    def attrs(s):
        if not s:
            return {}
        found = dict((k, v.strip('"')) for k, v in _DOT_ATTR.findall(s))
        leftover = _DOT_ATTR.sub("", s).replace(",", "").strip()
        if leftover:
            raise ValueError(f"bad attribute list {s!r}")
        return found

    for line in lines[1:-1]:
        if re.match(r"^\w+\s*=\s*[\w.]+;$", line):
            continue
        if m := _DOT_EDGE.match(line):
            edges.append((m.group(1), m.group(2), attrs(m.group(3))))
        elif m := _DOT_NODE.match(line):
            nodes[m.group(1)] = attrs(m.group(2))
        else:
            raise ValueError(f"unparsable DOT line {line!r}")
    for src, dst, _ in edges:
        if src not in nodes or dst not in nodes:
            raise ValueError("edge refers to an undeclared node")
    return match.group(1), nodes, edges


# --- commands -----------------------------------------------------------------


def _int_set(text: str) -> list[int]:
    try:
        return sorted({int(x) for x in re.split(r"[,\s]+", text.strip()) if x})
    except ValueError as exc:
        raise ConfigError(f"bad integer set {text!r}") from exc


def _need(args, name):
    if getattr(args, name) is None:
        raise ConfigError(f"--{name.replace('_', '-')} is required")
    return getattr(args, name)


def _subgroup(args):
    sf = load_subgroup(_need(args, "group"))
    return sf, sf.build()


def _element(args, sf):
    text = _need(args, "element")
    try:
        return sf.parse(text)
    except ParseError as exc:
        raise ConfigError(f"element: {exc}") from exc


def _spectrum_text(orderset) -> str:
    return " ".join(str(k) for k in sorted(orderset))


def cmd_order(args, limits):
    sf, H = _subgroup(args)
    g = _element(args, sf)
    if sf.is_fta:
        return fta_mod.fta_order(H, g)
    u = parse_word(args.coset, sf.ambient.free_rank) if args.coset else parse_word("1")
    return free_orders.order(H, g, u)


def cmd_member(args, limits):
    sf, H = _subgroup(args)
    g = _element(args, sf)
    return fta_mod.fta_membership(H, g) if sf.is_fta else membership(H, g)


def cmd_spectrum(args, limits):
    sf, H = _subgroup(args)
    orderset = fta_mod.fta_spectrum(H, limits) if sf.is_fta else free_orders.spectrum(H, limits=limits)
    return sorted(orderset)


def cmd_smp(args, limits):
    sf, H = _subgroup(args)
    if sf.is_fta:
        return fta_mod.fta_smp(H, args.k, limits)
    if args.k == 0:
        return free_orders.has_order_zero(H)
    return args.k == 1 or bool(free_orders.elements_of_order(H, args.k, limits=limits))


def cmd_tgp(args, limits):
    sf, H = _subgroup(args)
    return fta_mod.has_order_zero_fta(H) if sf.is_fta else free_orders.has_order_zero(H)


def cmd_bound(args, limits):
    sf, H = _subgroup(args)
    return fta_mod.fta_order_bound(H) if sf.is_fta else free_orders.spectrum_bound(H)


def _decomposition_payload(desc, sf):
    n = sf.ambient.free_rank
    fmt = (lambda g: format_element(g, n)) if sf.is_fta else (lambda w: format_word(w, n))
    parts = []
    for part in desc.parts:
        sub = part.subgroup.generators() if sf.is_fta else part.subgroup.basis
        parts.append({"subgroup": [fmt(g) for g in sub], "representative": fmt(part.representative)})
    return {"label": desc.k if sf.is_fta else desc.label, "parts": parts, "text": desc.serialize()}


def cmd_roots(args, limits):
    sf, H = _subgroup(args)
    desc = fta_mod.fta_k_roots(H, args.k, limits) if sf.is_fta else free_orders.k_roots(H, args.k, limits)
    return _decomposition_payload(desc, sf)


def cmd_preorder(args, limits):
    sf, H = _subgroup(args)
    if sf.is_fta:
        desc = fta_mod.fta_elements_of_order(H, args.k, limits)
    else:
        desc = free_orders.elements_of_order(H, args.k, limits=limits)
    return _decomposition_payload(desc, sf)


def cmd_pure(args, limits):
    sf, H = _subgroup(args)
    S = _int_set(args.s_set) if args.s_set else None
    return fta_mod.fta_is_S_pure(H, S, limits) if sf.is_fta else free_orders.is_S_pure(H, S, limits)


def cmd_closure(args, limits):
    sf, H = _subgroup(args)
    S = _int_set(args.s_set) if args.s_set else None
    if sf.is_fta:
        C = fta_mod.fta_pure_closure(H, S, limits)
        return format_subgroup_file(sf.ambient, C.generators(), True)
    C = free_orders.pure_closure(H, S, limits)
    return format_subgroup_file(sf.ambient, C.basis, False)


def cmd_index(args, limits):
    sf, H = _subgroup(args)
    if sf.is_fta:
        if not fta_mod.fta_index_finite(H):
            return "inf"
        L = H.lattice
        det = 1
        for d in L.snf.divisors:
            det *= d
        return index(H.free_part) * det
    idx = index(H)
    return "inf" if idx == float("inf") else idx


def cmd_dot(args, limits):
    sf, H = _subgroup(args)
    free = H.free_part if sf.is_fta else H
    return to_dot(free.automaton, args.name)


def cmd_ko(args, limits):
    O = _int_set(_need(args, "set"))
    try:
        K = free_orders.build_K_O(O)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return format_subgroup_file(Ambient(2), K.basis, False)


def cmd_verify(args, limits):
    sf, H = _subgroup(args)
    report = verify_decomposition(H, args.k, Ball(args.ball, args.box), limits=limits)
    return report


def cmd_basis(args, limits):
    sf, H = _subgroup(args)
    if not sf.is_fta:
        return format_subgroup_file(sf.ambient, H.basis, False)
    return H.serialize()


COMMANDS = {
    "order": (cmd_order, "relative order of an element"),
    "member": (cmd_member, "membership of an element"),
    "spectrum": (cmd_spectrum, "the full order spectrum"),
    "smp": (cmd_smp, "whether some element has order k"),
    "tgp": (cmd_tgp, "whether some element has order 0"),
    "bound": (cmd_bound, "an upper bound on nonzero orders"),
    "roots": (cmd_roots, "describe all k-roots"),
    "preorder": (cmd_preorder, "describe all elements of order k"),
    "pure": (cmd_pure, "whether the subgroup is S-pure"),
    "closure": (cmd_closure, "the S-pure closure"),
    "index": (cmd_index, "index in the ambient group"),
    "dot": (cmd_dot, "Stallings automaton of the free part as DOT"),
    "ko": (cmd_ko, "a subgroup of F2 with prescribed spectrum"),
    "verify": (cmd_verify, "check a preorder description on a ball"),
    "basis": (cmd_basis, "a normalized basis"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-g", "--group", help="subgroup file")
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--max-trails", type=int, default=Limits().max_trails)
    common.add_argument("--max-product-vertices", type=int, default=Limits().max_product_vertices)

    parser = argparse.ArgumentParser(prog="relorders", description="Relative orders in F_n and F_n x Z^m.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("order", "member"):
            p.add_argument("-e", "--element", help="element, e.g. 'a b^-1' or 'a | (1,0)'")
        if name == "order":
            p.add_argument("--coset", help="free case: compute the order in the coset H u")
        if name in ("smp", "roots", "preorder", "verify"):
            p.add_argument("k", type=int)
        if name in ("pure", "closure"):
            p.add_argument("--s-set", help="comma-separated exponents (default: all)")
        if name == "ko":
            p.add_argument("--set", help="comma-separated spectrum containing 0 and 1")
        if name == "dot":
            p.add_argument("--name", default="H")
        if name == "verify":
            p.add_argument("--ball", type=int, default=4, help="free radius of the ball")
            p.add_argument("--box", type=int, default=3, help="bound on vector entries")
    return parser


def _render(result) -> str:
    if isinstance(result, bool):
        return "true" if result else "false"
    if isinstance(result, list):
        return _spectrum_text(result)
    if isinstance(result, dict) and "text" in result:
        return result["text"]
    return str(result).rstrip("\n")


def _jsonable(result):
    if isinstance(result, dict):
        return {k: v for k, v in result.items() if k != "text"}
    if hasattr(result, "counterexamples"):
        return {
            "passed": result.passed,
            "checked": result.checked,
            "counterexamples": result.counterexamples,
            "inconclusive": result.inconclusive,
        }
    return result


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    limits = Limits(max_trails=args.max_trails, max_product_vertices=args.max_product_vertices)
    handler = COMMANDS[args.command][0]
    try:
        result = handler(args, limits)
    except (ConfigError, ParseError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=err)
        return 3
    if args.json:
        print(json.dumps({"command": args.command, "result": _jsonable(result)}, sort_keys=True), file=out)
    else:
        print(_render(result), file=out)
    if hasattr(result, "passed") and not result.passed:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
