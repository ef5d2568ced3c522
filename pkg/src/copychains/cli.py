"""Command-line front end: ``copychains gen | verify | chain``.

Exit codes: 0 PASS, 1 FAIL, 2 usage error, 3 INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import catalogue as cat
from . import suites
from .chains import ChainError, LinOrderDesc
from .generic import GenericOrder
from .qset import RATIONALS

EXIT = {suites.PASS: 0, suites.FAIL: 1, suites.INCONCLUSIVE: 3}
USAGE = 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    structure: str = "D"
    modulus: int = 8
    level: int = 2
    budget: int = 5000
    points: int = 8
    sample: int = 12
    bits: int = 64
    M: str = ""
    uh_max: int = 5
    instances: int = 100
    seed: int = 0
    order: str = "height"
    out: Optional[str] = None
    suites: Tuple[str, ...] = ()

    def validate(self, chain_task: bool = False) -> None:
        for name in ("budget", "points", "sample", "bits", "instances", "modulus", "level"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.order != "height":
            raise ConfigError("only the height ordering of Q is available")
        unknown = set(self.suites) - set(suites.SUITES)
        if unknown:
            raise ConfigError(f"unknown suites: {', '.join(sorted(unknown))}")
        if chain_task:
            desc = LinOrderDesc.parse(self.M)
            # Case II adds one lump class at inf
            need = len(desc.M) + 1 + (not desc.infty_in_M)
            if self.modulus < need:
                raise ConfigError(f"modulus {self.modulus} < {need} needed for M = {self.M!r}")

    def report_header(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d["suites"] = list(self.suites)
        return d


_INT_KEYS = {"modulus", "level", "budget", "points", "sample", "bits", "uh_max", "instances", "seed"}


def load_config_file(path: str) -> dict:
    """key = value lines; '#' starts a comment; keys mirror the long flags."""
    text = Path(path).read_text()
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",), inline_comment_prefixes=("#",))
    parser.optionxform = lambda k: k.strip().replace("-", "_")
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    out = {}
    for k, v in parser["run"].items():
        if k not in RunConfig.__dataclass_fields__:
            raise ConfigError(f"unknown config key {k!r}")
        if k in _INT_KEYS:
            out[k] = int(v)
        elif k == "suites":
            out[k] = tuple(s.strip() for s in v.split(",") if s.strip())
        else:
            out[k] = v.strip().strip('"')
    return out


# -- output -----------------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(out: Optional[str], name: str, text: str, written: List[str]) -> None:
    if out is None:
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / name).write_text(text)
    written.append(str(d / name))


def _structure(cfg: RunConfig, g: Optional[GenericOrder] = None) -> cat.AmbientStructure:
    try:
        return cat.parse_structure(cfg.structure, generic=g or GenericOrder(cfg.modulus))
    except cat.EncodingError as exc:
        raise ConfigError(str(exc)) from exc


def _label(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(str(v) for v in x) + ")"
    return str(x)


# -- commands ---------------------------------------------------------------------


def cmd_gen(cfg: RunConfig) -> Tuple[int, dict]:
    cfg.validate()
    g = GenericOrder(cfg.modulus)
    S = _structure(cfg, g)
    written: List[str] = []
    if S.id == "D":
        pts = [RATIONALS[i] for i in range(cfg.points)]
        g.ensure(*pts)
        P = g.restrict(pts)
        _write(cfg.out, "replay.json", dumps(g.replay_record()), written)
    else:
        els = cat.sample_elements(S, cfg.sample)
        P = cat.sample_poset(S, els).relabel({x: _label(x) for x in els})
    snap = {"structure": S.descriptor(), "poset": P.to_json()}
    _write(cfg.out, "structure.json", dumps(snap), written)
    _write(cfg.out, "hasse.dot", P.to_dot(S.name.replace("_", "")), written)
    return 0, {"status": suites.PASS, "snapshot": snap, "files": written}


def cmd_verify(cfg: RunConfig) -> Tuple[int, dict]:
    cfg.validate(chain_task="cut-tables" in cfg.suites)
    S = _structure(cfg)
    results = {}
    for name in cfg.suites:
        if name == "uh-oracle":
            results[name] = suites.uh_oracle_agreement(cfg.uh_max)
        elif name == "random":
            if S.id != "D":
                results[name] = {"status": suites.INCONCLUSIVE, "reason": "the saturation suite runs on D"}
            else:
                results[name] = suites.random_saturation(cfg.points, cfg.level, cfg.budget, cfg.modulus)
        elif name == "copy":
            results[name] = suites.copy_predicates(S)
        elif name == "p-axioms":
            results[name] = suites.positive_family(S, cfg.instances, cfg.seed)
        elif name == "cut-tables":
            try:
                results[name] = suites.cut_tables(S, LinOrderDesc.parse(cfg.M), cfg.modulus)
            except ChainError as exc:
                results[name] = {"status": suites.FAIL, "reason": str(exc)}
    status = suites.combine([r["status"] for r in results.values()])
    report = {"config": cfg.report_header(), "status": status, "suites": results}
    written: List[str] = []
    _write(cfg.out, "report.json", dumps(report), written)
    return EXIT[status], report


def cmd_chain(cfg: RunConfig) -> Tuple[int, dict]:
    cfg.validate(chain_task=True)
    S = _structure(cfg)
    desc = LinOrderDesc.parse(cfg.M)
    chain = suites.chain_for(S, desc, cfg.modulus)
    grid = suites.default_grid(chain)
    table = suites.cut_tables(S, desc, cfg.modulus, grid)
    emb = suites.embedding_report(chain, cfg.sample, cfg.bits)
    written: List[str] = []

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x0", "side", "row", "verdict", "gap"])
    for r in table["cuts"]:
        w.writerow([r["x0"], r["side"], "" if r["row"] is None else r["row"], r["verdict"], r["gap"]])
    _write(cfg.out, "cuts.csv", buf.getvalue(), written)

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "value"])
    for v in emb["values"]:
        w.writerow([v["index"], v["value"]])
    _write(cfg.out, "embedding.csv", buf.getvalue(), written)

    _write(cfg.out, "lumps.json", dumps(suites.lump_chains(chain)), written)
    _write(cfg.out, "probes.json", dumps({"outcomes": table["probes"], "potential_insertions": table["potential_insertions"]}), written)

    status = table["status"]
    report = {
        "config": cfg.report_header(),
        "status": status,
        "provenance": chain.provenance,
        "cut_tables": {k: v for k, v in table.items() if k != "cuts"},
        "embedding": {k: v for k, v in emb.items() if k != "values"},
        "files": written,
    }
    _write(cfg.out, "report.json", dumps(report), written)
    return EXIT[status], report


# -- argument parsing ---------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("structure_pos", nargs="?", metavar="STRUCTURE", help="A_omega, Q, D, B_omega, C_omega, B_<n>, C_<n>")
    p.add_argument("--structure")
    p.add_argument("--config", help="key = value file; flags given on the command line win")
    p.add_argument("--modulus", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--points", type=int)
    p.add_argument("--sample", type=int)
    p.add_argument("--bits", type=int)
    p.add_argument("--M", dest="M")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="copychains", description="Ultrahomogeneous posets and maximal chains of copies.")
    sub = ap.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gen", help="snapshot of a structure on finitely many points")
    _common(g)
    v = sub.add_parser("verify", help="run verification suites")
    _common(v)
    v.add_argument("--suites", help=f"comma list from {', '.join(suites.SUITES)}")
    v.add_argument("--level", type=int, help="triple-size bound; adds the random suite")
    v.add_argument("--p3", action="store_true", help="add the positive-family suite")
    v.add_argument("--uh-max", dest="uh_max", type=int)
    v.add_argument("--instances", type=int)
    c = sub.add_parser("chain", help="build a chain and write its reports")
    _common(c)
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        values.update(load_config_file(args.config))
    for key in RunConfig.__dataclass_fields__:
        if key in ("suites",):
            continue
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if args.structure_pos:
        values["structure"] = args.structure_pos
    chosen = list(values.get("suites", ()))
    if getattr(args, "suites", None):
        chosen = [s.strip() for s in args.suites.split(",") if s.strip()]
    if getattr(args, "level", None) is not None and "random" not in chosen:
        chosen.append("random")
    if getattr(args, "p3", False) and "p-axioms" not in chosen:
        chosen.append("p-axioms")
    values["suites"] = tuple(chosen)
    return RunConfig(**values)


COMMANDS = {"gen": cmd_gen, "verify": cmd_verify, "chain": cmd_chain}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
        code, report = COMMANDS[args.command](cfg)
    except (ConfigError, ChainError, OSError, ValueError) as exc:
        print(f"copychains: error: {exc}", file=sys.stderr)
        return USAGE
    sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
