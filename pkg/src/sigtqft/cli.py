"""``sig``: command-line access to the signature computations.

Exit codes: 0 success, 1 a contract was violated, 2 usage or input error,
3 a numeric certification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath

from . import dedekind, genus2, harness, modular, polytrace, verlinde
from .errors import (
    CertificationError,
    ContractFailure,
    ExpansionExhausted,
    InsufficientDepth,
    InvalidInput,
    TrackingError,
)
from .numtheory import CFExpansion, as_rational
from .reports import SweepReport, plain, rows_to_csv

EXIT_OK, EXIT_CONTRACT, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class CliConfig:
    precision_bits: int = 128
    threads: int = 1
    output: str = "plain"
    out_path: Path | None = None

    def __post_init__(self):
        if self.precision_bits < 64:
            raise InvalidInput("--precision-bits must be >= 64")
        if self.threads < 1:
            raise InvalidInput("--threads must be >= 1")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", dest="output", choices=("csv", "json", "plain"), default=d("plain"))
    parser.add_argument("--out", dest="out_path", type=Path, default=d(None), help="write output to this file")
    parser.add_argument("--threads", type=int, default=d(None),
                        help="worker processes (default: SIGTQFT_THREADS or the CPU count)")
    parser.add_argument("--precision-bits", type=int, default=d(128))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sig", description="Signatures of SU(2) TQFT Hermitian forms.")
    _common(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, suppress=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    sp = add("genus2", "genus-two signature sigma_2(q/p)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--method", choices=("lattice", "trig", "charpoly", "auto"), default="auto")

    sp = add("general", "sigma_{g,n}(q/p; colors)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--colors", type=_int_list, default=[])

    sp = add("dedekind", "Dedekind sum s(q,p) or the smoothed S(q/p)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--smoothed", action="store_true")

    sp = add("lambda", "Lambda(theta) with a certified error bound")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--rational", help="a/b with b even")
    src.add_argument("--cf", help='partial quotients "a1,a2,...", "0;2,(1,3)" or "ones"')
    sp.add_argument("--eps", type=float, default=1e-8)
    sp.add_argument("--depth", type=int, default=None)

    sp = add("argg", "-(2/pi) arg g(q/2p + i t) continued from i*infinity")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--tmin", type=float, default=1e-4)

    sp = add("sweep", "batch verification sweeps")
    sp.add_argument("which", choices=("conjecture", "identities", "witten"))
    sp.add_argument("--pmax", type=int, required=True)

    sp = add("asymptotics", "sigma2/p^2 along convergents against Lambda")
    sp.add_argument("--cf", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--plot", type=Path, default=None, help="also render a figure to this file")
    sp.add_argument("--no-plot", action="store_true", help="skip the figure written next to --out")

    sp = add("figure", "data behind figures 1-3")
    sp.add_argument("--which", choices=("fig1", "fig2", "fig3"), required=True)
    sp.add_argument("--pmax", type=int, required=True)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--svg", "--plot", dest="plot", type=Path, default=None,
                    help="render the scatter plot to this file (format from the suffix)")
    sp.add_argument("--no-plot", action="store_true", help="skip the figure written next to --out")

    sp = add("bench", "time sigma_2 methods against each other")
    sp.add_argument("--plist", required=True, help='p values or q/p pairs, e.g. "61,1597" or "31/61"')
    sp.add_argument("--methods", default="lattice,trig,charpoly")
    return ap


# -- output ------------------------------------------------------------------------


def _emit(cfg: CliConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out_path is not None:
        cfg.out_path.write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _emit_record(cfg: CliConfig, record: dict, headline) -> None:
    """A single result: ``headline`` in plain mode, else a one-row table."""
    record = {k: plain(v) for k, v in record.items()}
    if cfg.output == "json":
        _emit(cfg, json.dumps(record, indent=2))
    elif cfg.output == "csv":
        _emit(cfg, rows_to_csv([record]))
    else:
        _emit(cfg, str(plain(headline)))


def _emit_report(cfg: CliConfig, rep: SweepReport) -> None:
    if cfg.output == "json":
        _emit(cfg, rep.to_json())
    elif cfg.output == "csv":
        _emit(cfg, rep.to_csv())
    else:
        lines = [json.dumps({"kind": rep.kind, "summary": rep.summary, "meta": rep.to_dict()["meta"]})]
        for it in rep.failures()[:20]:
            lines.append(f"FAIL {it.inputs} residual={it.residual}")
        _emit(cfg, "\n".join(lines))


def _emit_rows(cfg: CliConfig, rows: list[dict], columns: list[str]) -> None:
    if cfg.output == "json":
        _emit(cfg, json.dumps([{c: plain(r.get(c)) for c in columns} for r in rows], indent=2))
    else:
        _emit(cfg, rows_to_csv(rows, columns))


def _real(x, bits: int) -> str:
    digits = max(15, int(bits * 0.30103) - 2)
    return f"{mpmath.nstr(x, digits)}"


# -- commands ----------------------------------------------------------------------


def _cmd_genus2(a, cfg):
    method = genus2.sigma2_method(a.p, a.q) if a.method == "auto" else a.method
    if method == "lattice":
        v = genus2.sigma2_lattice(a.p, a.q)
    elif method == "trig":
        v = genus2.sigma2_trig(a.p, a.q, genus2.TrigEvalConfig(cfg.precision_bits)).value
    else:
        v = polytrace.sigma_g_fast(a.p, a.q, 2)
    _emit_record(cfg, {"p": a.p, "q": a.q, "method": method, "sigma2": v}, v)
    return EXIT_OK


def _cmd_general(a, cfg):
    if a.g >= 1:
        v = polytrace.sigma_gn_fast(a.p, a.q, a.g, a.colors)
    else:
        v = verlinde.signature_oracle(verlinde.FrobeniusAlgebra(a.p, a.q), a.g, a.colors)
    colors = ",".join(map(str, a.colors))
    _emit_record(cfg, {"p": a.p, "q": a.q, "g": a.g, "colors": colors, "sigma": v}, v)
    return EXIT_OK


def _cmd_dedekind(a, cfg):
    if a.smoothed:
        v = dedekind.smoothed_S(a.q, a.p)
        rec = {"p": a.p, "q": a.q, "S": Fraction(v), "formal": a.q < 0}
        _emit_record(cfg, rec, f"{plain(Fraction(v))}{' (formal)' if a.q < 0 else ''}")
    else:
        v = dedekind.dedekind_s(a.q, a.p)
        _emit_record(cfg, {"p": a.p, "q": a.q, "s": v}, v)
    return EXIT_OK


def _cmd_lambda(a, cfg):
    if a.rational is not None:
        theta, label = as_rational(a.rational), a.rational
    else:
        theta, label = CFExpansion.parse(a.cf), a.cf
    value, tail = modular.lambda_eval(theta, a.eps, depth=a.depth)
    rec = {"theta": label, "lambda": _real(value, 53), "error_bound": f"{tail.value:.3e}",
           "n_terms": tail.n_truncated, "precision": "float64"}
    _emit_record(cfg, rec, f"{_real(value, 53)} +- {tail.value:.3e}")
    return EXIT_OK


def _cmd_argg(a, cfg):
    v = modular.arg_g_boundary(a.q, a.p, a.tmin, cfg.precision_bits)
    rec = {"p": a.p, "q": a.q, "tmin": a.tmin, "value": _real(v, cfg.precision_bits), "bits": cfg.precision_bits}
    _emit_record(cfg, rec, _real(v, cfg.precision_bits))
    return EXIT_OK


def _cmd_sweep(a, cfg):
    if a.which == "conjecture":
        rep = harness.conjecture_sweep(a.pmax, cfg.threads)
        hard = rep.meta["hard_contract"]
    elif a.which == "identities":
        rep = harness.identity_sweeps(a.pmax, cfg.threads)
        hard = True
    else:
        rep = harness.witten_check(a.pmax)
        hard = True
    _emit_report(cfg, rep)
    return EXIT_CONTRACT if hard and not rep.ok else EXIT_OK


def _plot_path(a, cfg) -> Path | None:
    """Explicit ``--plot``, else an ``.svg`` beside the ``--out`` file."""
    if a.no_plot:
        return None
    if a.plot is not None:
        return a.plot
    if cfg.out_path is not None:
        path = cfg.out_path.with_suffix(".svg")
        if path == cfg.out_path:
            path = cfg.out_path.with_name(cfg.out_path.stem + "_plot.svg")
        return path
    return None


def _cmd_asymptotics(a, cfg):
    rows = [r.as_dict() for r in harness.asymptotics_run(CFExpansion.parse(a.cf), a.depth)]
    _emit_rows(cfg, rows, harness.ASYMPTOTICS_COLUMNS)
    path = _plot_path(a, cfg)
    if path is not None:
        from . import plotting
        plotting.asymptotics(rows, path)
    return EXIT_OK


def _cmd_figure(a, cfg):
    rows = harness.figure_data(a.which, a.pmax, a.k)
    _emit_rows(cfg, rows, harness.FIGURE_COLUMNS[a.which])
    path = _plot_path(a, cfg)
    if path is not None:
        from . import plotting
        plotting.figure(a.which, rows, path)
    return EXIT_OK


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        if "/" in tok:
            q, p = (int(t) for t in tok.split("/"))
        else:
            p = int(tok)
            q = harness.default_q(p)
        out.append((q, p))
    return out


def _cmd_bench(a, cfg):
    methods = tuple(m for m in a.methods.replace(" ", "").split(",") if m)
    rep = harness.method_bench(_parse_pairs(a.plist), methods)
    if cfg.output == "plain":
        lines = [f"{'q/p':>12} {'method':>9} {'sigma2':>14} {'bits':>6} {'seconds':>9}"]
        for it, secs in zip(rep.items, rep.timing):
            i, v = it.inputs, it.values
            pair = f"{i['q']}/{i['p']}"
            if v["skipped"]:
                lines.append(f"{pair:>12} {i['method']:>9} {'skipped (budget)':>14}")
            else:
                lines.append(f"{pair:>12} {i['method']:>9} {v['sigma2']:>14} {v['peak_bits']:>6} {secs:9.4f}")
        _emit(cfg, "\n".join(lines))
    else:
        _emit_report(cfg, rep)
    return EXIT_OK


COMMANDS = {
    "genus2": _cmd_genus2, "general": _cmd_general, "dedekind": _cmd_dedekind, "lambda": _cmd_lambda,
    "argg": _cmd_argg, "sweep": _cmd_sweep, "asymptotics": _cmd_asymptotics, "figure": _cmd_figure,
    "bench": _cmd_bench,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        threads = args.threads if args.threads is not None else harness.default_threads()
        cfg = CliConfig(args.precision_bits, threads, args.output, args.out_path)
        return COMMANDS[args.command](args, cfg)
    except (InvalidInput, ValueError) as exc:
        print(f"sig: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContractFailure as exc:
        print(f"sig: contract failure: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (CertificationError, TrackingError, InsufficientDepth, ExpansionExhausted) as exc:
        print(f"sig: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
