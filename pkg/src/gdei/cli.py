"""Command-line entry point: ``gdei {generate,train,compare,plot}``.

Exit codes: 0 success, 2 usage or validation error, 3 numerical divergence.
Outputs are written to temporary files and renamed only once every output
of the command is ready, so a failing command leaves nothing behind.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

from . import data, report
from .optim import OptimizerConfig, Variant
from .runner import DivergenceError, RunConfig, StoppingConfig, compare, train

EXIT_OK, EXIT_USAGE, EXIT_DIVERGED = 0, 2, 3

SPEC_HELP = """\
optimizer spec grammar:  NAME[:KEY=VAL,KEY=VAL,...]
  NAME   one of: gd, momentum, nag, adagrad, rmsprop, adam, adamax, amsgrad, nadam, sgdr
  KEYS   alpha (alias lr), beta (alias gamma), beta1, beta2, epsilon (alias eps),
         decay, t0, tmult, eta_min, label
  e.g.   --optimizer gd:alpha=0.05 --optimizer adam:alpha=0.1,label=adam-fast
  the label defaults to the spec string itself
"""

_SPEC_KEYS = {
    "alpha": "alpha", "lr": "alpha",
    "beta": "beta", "gamma": "beta",
    "beta1": "beta1", "beta2": "beta2",
    "epsilon": "epsilon", "eps": "epsilon",
    "t0": "restart_period", "tmult": "restart_mult", "eta_min": "eta_min",
}
_INT_KEYS = {"restart_period", "restart_mult"}


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("GDEI_SEED")
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"GDEI_SEED must be an integer, got {raw!r}") from None


def parse_optimizer_spec(spec: str, default_alpha: float = 0.01) -> tuple[str, OptimizerConfig, float | None]:
    """Parse ``name:key=val,...`` into (label, config, decay-or-None)."""
    name, _, rest = spec.partition(":")
    try:
        variant = Variant.parse(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    kwargs: dict = {"variant": variant, "alpha": default_alpha}
    label, decay = spec, None
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        key = key.strip().lower()
        if not eq:
            raise UsageError(f"bad optimizer option {item!r} in {spec!r}; expected KEY=VAL")
        if key == "label":
            label = val.strip()
            continue
        try:
            if key == "decay":
                decay = float(val)
            elif key in _SPEC_KEYS:
                field = _SPEC_KEYS[key]
                kwargs[field] = int(val) if field in _INT_KEYS else float(val)
            else:
                raise UsageError(f"unknown optimizer option {key!r} in {spec!r}")
        except ValueError:
            raise UsageError(f"bad value for {key!r} in {spec!r}: {val!r}") from None
    try:
        return label, OptimizerConfig(**kwargs), decay
    except ValueError as exc:
        raise UsageError(f"{spec!r}: {exc}") from None


def _file_mode() -> int:
    umask = os.umask(0)
    os.umask(umask)
    return 0o666 & ~umask


def _commit(outputs: dict[Path, str]) -> None:
    staged = []
    mode = _file_mode()
    try:
        for path, text in outputs.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.chmod(tmp, mode)
            staged.append((tmp, path))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, path in staged:
        os.replace(tmp, path)


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}_{suffix}.svg")


def _stopping(args) -> StoppingConfig | None:
    if args.stop_threshold is None and args.stop_patience is None:
        return None
    kw = {}
    if args.stop_threshold is not None:
        kw["threshold"] = args.stop_threshold
    if args.stop_patience is not None:
        kw["patience"] = args.stop_patience
    try:
        return StoppingConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args) -> data.Dataset:
    try:
        return data.load_csv(args.data, args.target)
    except data.DataError as exc:
        raise UsageError(str(exc)) from None


def cmd_generate(args) -> int:
    try:
        cfg = data.GeneratorConfig(
            n=args.n, m=args.m, seed=args.seed,
            noise_sigma=args.noise_sigma, intercept=args.intercept, slope=args.slope,
        )
    except data.DataError as exc:
        raise UsageError(str(exc)) from None
    ds = data.generate_data(cfg)
    _commit({Path(args.output): data.dataset_to_csv(ds)})
    print(f"wrote {ds.n} rows, {ds.m} feature column(s) to {args.output}")
    return EXIT_OK


def cmd_train(args) -> int:
    ds = _load(args)
    _, opt, spec_decay = parse_optimizer_spec(args.optimizer, args.alpha)
    try:
        cfg = RunConfig(
            optimizer=opt,
            n_iterations=args.iters,
            decay_rate=spec_decay if spec_decay is not None else args.decay,
            seed=args.seed,
            stopping=_stopping(args),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        trace = train(ds, cfg)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    out = Path(args.output)
    outputs = {out: report.trace_to_csv(trace)}
    if args.plot:
        limits = args.limit or [len(trace.records)]
        try:
            outputs[_sibling(out, "loss")] = report.plot_loss_curve(trace, limits, log_y=args.log_y)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        outputs[_sibling(out, "efficiency")] = report.plot_efficiency_curve(trace)
    _commit(outputs)
    final_e = trace.final_efficiency
    print(f"final loss: {trace.final_loss!r}")
    print(f"final E_k: {final_e!r}")
    print(f"stopped_at: {trace.stopped_at if trace.stopped_at is not None else 'none'}")
    print(f"iterations: {len(trace.records)}")
    return EXIT_OK


def cmd_compare(args) -> int:
    if not args.optimizer or len(args.optimizer) < 2:
        raise UsageError("compare needs at least two --optimizer specs")
    ds = _load(args)
    labels, configs = [], []
    stopping = _stopping(args)
    for spec in args.optimizer:
        label, opt, spec_decay = parse_optimizer_spec(spec, args.alpha)
        if label in labels:
            raise UsageError(f"duplicate label {label!r}")
        try:
            configs.append(RunConfig(
                optimizer=opt,
                n_iterations=args.iters,
                decay_rate=spec_decay if spec_decay is not None else args.decay,
                seed=args.seed,
                stopping=stopping,
            ))
        except ValueError as exc:
            raise UsageError(f"{spec!r}: {exc}") from None
        labels.append(label)

    rep = compare(ds, configs, labels)
    out = Path(args.output)
    outputs = {out: report.comparison_to_json(rep)}
    if args.plot:
        traces = {lbl: e.trace for lbl, e in rep.entries.items() if e.trace is not None}
        if traces:
            outputs[_sibling(out, "efficiency")] = report.plot_efficiency_overlay(traces)
    _commit(outputs)
    for label in rep.labels():
        s = rep[label].summary
        if s.error:
            print(f"{label}: FAILED ({s.error})")
        else:
            print(f"{label}: final loss {s.final_loss!r}, final E_k {s.final_efficiency!r}, "
                  f"stopped_at {s.stopped_at if s.stopped_at is not None else 'none'}")
    return EXIT_OK


def cmd_plot(args) -> int:
    path = Path(args.trace)
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    try:
        trace = report.trace_from_csv(path.read_text(encoding="utf-8"))
    except report.TraceFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    limits = args.limit or [len(trace.records)]
    try:
        loss_svg = report.plot_loss_curve(trace, limits, log_y=args.log_y)
        eff_svg = report.plot_efficiency_curve(trace)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out_dir = Path(args.out_dir) if args.out_dir else path.parent
    loss_path = out_dir / f"{path.stem}_loss.svg"
    eff_path = out_dir / f"{path.stem}_efficiency.svg"
    _commit({loss_path: loss_svg, eff_path: eff_svg})
    print(f"wrote {loss_path} and {eff_path}")
    return EXIT_OK


def _add_run_options(p: argparse.ArgumentParser, seed: int) -> None:
    p.add_argument("--data", required=True, help="dataset CSV (header row, numeric columns)")
    p.add_argument("--target", default="y", help="target column name (default: y)")
    p.add_argument("--alpha", type=float, default=0.01, help="learning rate when a spec omits alpha")
    p.add_argument("--decay", type=float, default=1.0, help="multiplicative learning-rate decay per iteration")
    p.add_argument("--iters", type=int, default=1000, help="number of iterations")
    p.add_argument("--seed", type=int, default=seed, help="parameter-initialisation seed (env GDEI_SEED)")
    p.add_argument("--stop-threshold", type=float, help="stop once E_k <= this for --stop-patience iterations")
    p.add_argument("--stop-patience", type=int, help="window length for the stopping rule")
    p.add_argument("--plot", action="store_true", help="also write SVG plots next to the output")


def build_parser(seed: int = 42) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdei", description="Gradient descent runs instrumented with the efficiency index E_k."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic linear-regression dataset")
    g.add_argument("--n", type=int, default=1000)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--seed", type=int, default=seed)
    g.add_argument("--noise-sigma", type=float, default=1.0)
    g.add_argument("--intercept", type=float, default=4.0)
    g.add_argument("--slope", type=float, default=3.0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser(
        "train", help="train one optimizer and write its trace CSV",
        epilog=SPEC_HELP, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_run_options(t, seed)
    t.add_argument("--optimizer", default="gd", help="optimizer name or spec (see below)")
    t.add_argument("--limit", type=int, action="append", help="loss-plot panel cut-off (repeatable)")
    t.add_argument("--log-y", action="store_true", help="log-scale loss axis")
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_train)

    c = sub.add_parser(
        "compare", help="train several optimizers on the same data, write a JSON report",
        epilog=SPEC_HELP, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_run_options(c, seed)
    c.add_argument("--optimizer", action="append", help="optimizer spec (repeat, at least twice)")
    c.add_argument("-o", "--output", required=True)
    c.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="render loss and efficiency SVGs from a trace CSV")
    p.add_argument("trace")
    p.add_argument("--limit", type=int, action="append", help="loss-plot panel cut-off (repeatable)")
    p.add_argument("--log-y", action="store_true")
    p.add_argument("--out-dir", help="directory for the SVGs (default: next to the trace)")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"gdei: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.print_usage(sys.stderr)
        print(f"gdei {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
