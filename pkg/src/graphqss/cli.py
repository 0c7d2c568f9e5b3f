"""Command-line front end. Every command prints one JSON report.

Exit codes: 0 success or accept, 1 oracle verification failed, 2 the protocol
refused (denial, abort, failed threshold), 64 usage error, 65 bad input,
74 I/O failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import re
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from . import __version__, gf2
from .errors import DomainError, ResourceError
from .rng import DEFAULT_SEED, SEED_ENV, default_seed, stream

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_REFUSED = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_IO = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2, which means "refused" here
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(",") if t.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty vertex list")
    if len(set(vals)) != len(vals):
        raise argparse.ArgumentTypeError(f"repeated vertex in {text!r}")
    return vals


def _bit(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError(f"expected 0 or 1, got {text!r}")
    return int(text)


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _fraction(text: str) -> float:
    try:
        f = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < f < 1:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 1, got {f}")
    return f


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _quantum_scheme(text: str) -> str:
    if text == "ring4":
        raise argparse.ArgumentTypeError("ring4 has no quantum-channel version (its dealer graph fails the threshold)")
    return text


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graphqss", description="Graph-state secret sharing toolkit.")
    p.add_argument("--version", action="version", version=f"graphqss {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--seed", type=int, default=None,
                        help=f"master seed (default ${SEED_ENV} or {DEFAULT_SEED})")
        sp.add_argument("--output", "-o", default=None, help="write the JSON report here instead of stdout")
        sp.add_argument("--figure", default=None, help="also render a PNG figure to this path")
        sp.add_argument("--deterministic", action="store_true", help="omit the timestamp field")

    def source(sp: argparse.ArgumentParser) -> None:
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--graph", help="graph JSON file, or - for stdin")
        g.add_argument("--scheme", help="nn:N | ring4 | ring5 | tree:FILE")

    sp = sub.add_parser("graph", help="inspect a graph and apply rewrite rules",
                        description="Print a graph, its stabilizers, and optionally one rewrite.")
    source(sp)
    sp.add_argument("--dealer", action="store_true", help="with --scheme: use the dealer-augmented graph")
    op = sp.add_mutually_exclusive_group()
    op.add_argument("--local-complement", type=int, metavar="V")
    op.add_argument("--conjugate", type=int, metavar="V", help="conjugate graph at V")
    op.add_argument("--measure-z", type=int, metavar="V")
    op.add_argument("--measure-y", type=int, metavar="V")
    op.add_argument("--shuffle", type=int, nargs=2, metavar=("I", "J"), help="move vertex I's second label onto J")
    sp.add_argument("--outcome", type=_bit, default=0, help="outcome bit for --measure-z/--measure-y (0 = +1)")
    common(sp)

    sp = sub.add_parser("access", help="which label parities a subset sees and can read",
                        description="Report accessible and dependent parities, local plans, and threshold checks.")
    source(sp)
    sp.add_argument("--subset", type=_int_list, help="comma-separated vertices")
    sp.add_argument("--encoding", type=_int_list, help="secret encoding vector as comma-separated bits")
    sp.add_argument("--threshold", type=int, metavar="K", help="check the K-of-players threshold instead")
    sp.add_argument("--verify-oracle", action="store_true", help="cross-check against brute force (small graphs)")
    common(sp)

    sp = sub.add_parser("cc", help="direct classical sharing of one bit")
    sp.add_argument("--scheme", required=True)
    sp.add_argument("--secret", type=_bit, required=True)
    sp.add_argument("--subset", type=_int_list, required=True)
    common(sp)

    sp = sub.add_parser("cq", help="key distribution with optional intercept-resend attack")
    sp.add_argument("--scheme", type=_quantum_scheme, required=True)
    sp.add_argument("--rounds", type=_positive, default=1000)
    sp.add_argument("--subset", type=_int_list, help="participating players (ring5 only; default all)")
    sp.add_argument("--eve", choices=["none", "intercept-resend"], default="none")
    sp.add_argument("--eve-channels", default="all", help="'all' or comma-separated players")
    sp.add_argument("--check-fraction", type=_fraction, default=0.2)
    sp.add_argument("--workers", type=_positive, default=1)
    sp.add_argument("--summary-only", action="store_true", help="omit per-round records")
    sp.add_argument("--witness", action="store_true", help="add the stabilizer certificate for accepted runs")
    common(sp)

    sp = sub.add_parser("qq", help="share and localize a quantum secret")
    sp.add_argument("--scheme", type=_quantum_scheme, required=True)
    sp.add_argument("--alpha", type=_complex, required=True)
    sp.add_argument("--beta", type=_complex, required=True)
    sp.add_argument("--subset", type=_int_list, required=True)
    sp.add_argument("--target", type=int, required=True)
    sp.add_argument("--mode", choices=["locc", "joint"], default="locc")
    common(sp)

    sp = sub.add_parser("verify", help="check every rewrite rule against the dense simulator")
    sp.add_argument("--graphs", type=_positive, default=500, help="number of random graphs")
    sp.add_argument("--max-n", type=_positive, default=6)
    common(sp)
    return p


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    seed: int


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    seed = args.seed if args.seed is not None else default_seed()
    return RunConfig(args.command, args, seed)


def _load_source(args: argparse.Namespace):
    from .graph_core import LabelVector
    from .io import load_graph
    from .schemes import parse_scheme

    if getattr(args, "graph", None):
        g, labels = load_graph(args.graph)
        return g, labels, None
    spec = parse_scheme(args.scheme)
    g = spec.dealer_graph() if getattr(args, "dealer", False) else spec.graph
    return g, LabelVector.zeros(g.n), spec


def _cmd_graph(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    from .graph_core import (
        LabeledGraphState,
        conjugate_graph,
        local_complement,
        measure_y_rule,
        measure_z_rule,
        shuffle_p1,
    )
    from .io import graph_to_json
    from .pauli import graph_stabilizers

    a = cfg.args
    g, labels, _ = _load_source(a)
    state = LabeledGraphState(g, labels)

    def describe(s: LabeledGraphState) -> dict[str, Any]:
        signs = [
            (l2 ^ gf2.dot(s.labels.first_mask, k.z_mask)) for k, (_, l2) in zip(graph_stabilizers(s.graph), s.labels)
        ]
        return {
            "graph": graph_to_json(s.graph, s.labels),
            "phase_eighths": s.phase,
            "stabilizers": [str(-k if f else k) for k, f in zip(graph_stabilizers(s.graph), signs)],
        }

    out: dict[str, Any] = {"input": describe(state)}
    result = None
    if a.local_complement is not None:
        out["operation"] = f"local complement at {a.local_complement}"
        lc = local_complement(g, a.local_complement)
        out["result"] = {"graph": graph_to_json(lc)}
        shown = lc
    elif a.conjugate is not None:
        cg = conjugate_graph(g, a.conjugate)
        out["operation"] = f"conjugate graph at {a.conjugate}"
        out["result"] = {"graph": graph_to_json(cg)}
        shown = cg
    elif a.measure_z is not None:
        result = measure_z_rule(state, a.measure_z, a.outcome)
        out["operation"] = f"Z measurement at {a.measure_z}, outcome {a.outcome}"
    elif a.measure_y is not None:
        result = measure_y_rule(state, a.measure_y, a.outcome)
        out["operation"] = f"Y measurement at {a.measure_y}, outcome {a.outcome}"
    elif a.shuffle is not None:
        i, j = a.shuffle
        result = shuffle_p1(state, i, j)
        out["operation"] = f"move second label of {i} onto {j}"
    else:
        shown = g
    if result is not None:
        out["result"] = describe(result)
        shown = result.graph
    if a.figure:
        from .plotting import plot_graph

        plot_graph(shown, a.figure, labels=result.labels if result is not None else None)
    return EXIT_OK, out


def _cmd_access(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    from .access import accessible_parities_oracle, analyze, dependent_parities_oracle, verify_threshold

    a = cfg.args
    g, _, spec = _load_source(a)
    if a.encoding is not None:
        if len(a.encoding) != g.n or any(b not in (0, 1) for b in a.encoding):
            raise DomainError(f"encoding needs {g.n} bits")
        encoding = gf2.mask(a.encoding)
    else:
        encoding = spec.encoding if spec is not None else None
    if a.threshold is not None:
        if encoding is None:
            raise DomainError("--threshold needs --encoding or --scheme")
        players = spec.players if spec is not None else None
        rep = verify_threshold(g, encoding, a.threshold, players)
        if a.figure:
            from .plotting import plot_graph

            plot_graph(g, a.figure, title=f"threshold {a.threshold}: {'pass' if rep.passed else 'fail'}")
        return (EXIT_OK if rep.passed else EXIT_REFUSED), {"threshold": rep.to_json()}
    if a.subset is None:
        raise DomainError("access needs --subset or --threshold")
    report = analyze(g, a.subset, encoding)
    out: dict[str, Any] = {"report": report.to_json(g.n)}
    code = EXIT_OK
    if a.verify_oracle:
        acc_ok = gf2.same_span(report.accessible_basis, accessible_parities_oracle(g, a.subset))
        dep_ok = gf2.same_span(report.dependent_basis, dependent_parities_oracle(g, a.subset))
        out["oracle"] = {"accessible_match": acc_ok, "dependent_match": dep_ok}
        if not (acc_ok and dep_ok):
            code = EXIT_VERIFY_FAILED
    if a.figure:
        from .plotting import plot_graph

        plot_graph(g, a.figure, subset=a.subset)
    return code, out


def _cmd_cc(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    from .protocols.cc import cc_run
    from .schemes import parse_scheme

    a = cfg.args
    spec = parse_scheme(a.scheme)
    res = cc_run(spec, a.secret, a.subset, stream(cfg.seed, 0))
    if a.figure:
        from .graph_core import LabelVector
        from .plotting import plot_graph

        plot_graph(spec.graph, a.figure, LabelVector.encoded(spec.labels_for(a.secret)), a.subset,
                   title=f"{spec.name}: {'reconstructed' if res.authorized else 'denied'}")
    return (EXIT_OK if res.success else EXIT_REFUSED), {"scheme": spec.name, "transcript": res.to_json()}


def _cmd_cq(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    from .protocols.cq import EveModel, cq_menu, cq_run, cq_security_witness
    from .schemes import parse_scheme

    a = cfg.args
    spec = parse_scheme(a.scheme)
    menu = cq_menu(spec, a.subset)
    if a.eve == "none":
        eve = EveModel()
    else:
        channels = menu.vertices if a.eve_channels == "all" else _int_list(a.eve_channels)
        eve = EveModel("intercept-resend", tuple(sorted(channels)))
    tr = cq_run(spec, a.rounds, eve, a.check_fraction, cfg.seed, a.subset, a.workers)
    out: dict[str, Any] = {"scheme": spec.name, "transcript": tr.to_json(include_rounds=not a.summary_only)}
    if a.witness and tr.verdict == "accept":
        out["witness"] = cq_security_witness(spec, tr).to_json()
    if a.figure:
        from .plotting import plot_cq

        errs = [int(tr.rounds[i].dealer_bit != tr.rounds[i].players_bit) for i in tr.checked]
        plot_cq([r.sifted for r in tr.rounds], errs, a.figure, title=f"{spec.name}, verdict {tr.verdict}")
    return (EXIT_OK if tr.verdict == "accept" else EXIT_REFUSED), out


def _cmd_qq(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    from .protocols.qq import qq_encode, qq_localize
    from .schemes import parse_scheme

    a = cfg.args
    spec = parse_scheme(a.scheme)
    rng = stream(cfg.seed, 0)
    enc = qq_encode(spec, a.alpha, a.beta, rng)
    res = qq_localize(enc.state, spec, a.subset, a.target, a.mode, (a.alpha, a.beta), rng)
    out = {
        "scheme": spec.name,
        "secret": {"alpha": [a.alpha.real, a.alpha.imag], "beta": [a.beta.real, a.beta.imag]},
        "bell_outcome": list(enc.bell),
        "transcript": res.to_json(),
    }
    if a.figure and res.qubit is not None:
        from .plotting import plot_qubit

        plot_qubit(res.qubit, (a.alpha, a.beta), a.figure, title=f"{spec.name} -> player {a.target}")
    ok = res.authorized and res.fidelity is not None and res.fidelity > 1 - 1e-9
    return (EXIT_OK if ok else EXIT_REFUSED), out


def _cmd_verify(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    from .verify import run_suite

    a = cfg.args
    rep = run_suite(a.graphs, a.max_n, cfg.seed)
    if a.figure:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 3))
        names = list(rep.rules)
        ax.bar(names, [max(rep.rules[k].max_error, 1e-18) for k in names])
        ax.set_yscale("log")
        ax.axhline(1e-10, ls="--", color="tab:red", lw=0.8)
        ax.set_ylabel("max oracle error")
        ax.tick_params(axis="x", labelrotation=20)
        fig.tight_layout()
        fig.savefig(a.figure)
        plt.close(fig)
    return (EXIT_OK if rep.ok else EXIT_VERIFY_FAILED), {"verify": rep.to_json()}


_COMMANDS = {
    "graph": _cmd_graph,
    "access": _cmd_access,
    "cc": _cmd_cc,
    "cq": _cmd_cq,
    "qq": _cmd_qq,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    code, body = _COMMANDS[cfg.command](cfg)
    report: dict[str, Any] = {
        "tool": "graphqss",
        "version": __version__,
        "command": cfg.command,
        "seed": cfg.seed,
        "vertex_indexing": "0-based",
    }
    if not cfg.args.deterministic:
        report["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    report.update(body)
    return code, _dumps(report) + "\n"


_FLAT_LIST = re.compile(r"\[\s*([^\[\]{}]*?)\s*\]", re.S)


def _dumps(obj: Any) -> str:
    """Indented JSON with lists of scalars kept on one line."""
    text = json.dumps(obj, indent=2)
    return _FLAT_LIST.sub(lambda m: "[" + ", ".join(t.strip() for t in m.group(1).split(",") if t.strip()) + "]", text)


def main(argv: Sequence[str] | None = None) -> int:
    from .io import write_text

    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"graphqss: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # malformed seed environment variable
        print(f"graphqss: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, text = run(cfg)
        write_text(cfg.args.output, text)
    except (DomainError, ResourceError) as exc:
        print(f"graphqss: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"graphqss: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
