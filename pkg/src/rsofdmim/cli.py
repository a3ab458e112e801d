"""Command-line interface: simulate, dimming, analyze, bounds-table,
search-params, selftest."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .harness import (ConfigError, emit_bounds_table, load_config, analyze_sweep,
                      records_to_csv, run_dimming_sweep, run_sweep)


def _write(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dict_csv(rows: list[dict]) -> str:
    cols = list(rows[0].keys())
    lines = [",".join(cols)]
    for row in rows:
        lines.append(",".join("%.9g" % v if isinstance(v, float) else str(v)
                              for v in (row[c] for c in cols)))
    return "\n".join(lines) + "\n"


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    records = run_sweep(cfg)
    _write(records_to_csv(records, cfg), args.out)
    return 0


def _cmd_dimming(args) -> int:
    cfg = load_config(args.config)
    etas = [float(v) for v in args.etas.split(",") if v.strip()]
    if not etas:
        raise ConfigError("empty eta grid")
    snr_t = args.snr_t if args.snr_t is not None else cfg.snr_db[0]
    records = run_dimming_sweep(cfg, etas, snr_t)
    _write(records_to_csv(records, cfg), args.out)
    return 0


def _cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    _write(_dict_csv(analyze_sweep(cfg)), args.out)
    return 0


def _cmd_bounds_table(args) -> int:
    cfg = load_config(args.config)
    entries = []
    for item in args.entries.split(","):
        k_str, _, s_str = item.partition(":")
        entries.append((int(k_str), int(s_str)))
    etas = [float(v) for v in args.etas.split(",") if v.strip()]
    rows = emit_bounds_table(entries, i_low=cfg.i_low, i_high=cfg.i_high,
                             etas=etas, n_t=cfg.n_t, g=cfg.g, n=cfg.n)
    _write(_dict_csv(rows), args.out)
    return 0


def _cmd_search_params(args) -> int:
    from .analysis import feasible_params, se_rso
    cfg = load_config(args.config)
    pairs = feasible_params(cfg.qam_m, cfg.k, cfg.g, cfg.n_t, n=cfg.n)
    rows = [{"k": k, "s": s,
             "se": se_rso(cfg.qam_m, k, s, cfg.g, cfg.n_t, n=cfg.n)}
            for k, s in pairs]
    if not rows:
        sys.stdout.write("k,s,se\n")
        return 0
    _write(_dict_csv(rows), args.out)
    return 0


def _cmd_selftest(_args) -> int:
    from . import selftest
    return selftest.run()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsofdmim",
        description="Link simulator and analysis for RS-coded optical "
                    "OFDM with puncturing-based subcarrier index modulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("config", help="flat key = value config file")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.set_defaults(fn=fn)
        return p

    add("simulate", _cmd_simulate, help="Monte Carlo BER sweep over snr_db")
    p_dim = add("dimming", _cmd_dimming, help="throughput across dimming levels")
    p_dim.add_argument("--etas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    p_dim.add_argument("--snr-t", type=float, default=None,
                       help="transmit SNR in dB (default: first snr_db entry)")
    add("analyze", _cmd_analyze, help="closed-form metrics, no simulation")
    p_tab = add("bounds-table", _cmd_bounds_table,
                help="clipping bounds per dimming level")
    p_tab.add_argument("--entries", default="20:3,19:5,18:7,22:0",
                       help="comma list of K:S entries (S=0 for the DCO row)")
    p_tab.add_argument("--etas", default="0.1,0.3,0.5,0.7,0.9")
    add("search-params", _cmd_search_params,
        help="(K, S) pairs matching the baseline spectral efficiency "
             "(config key k is the baseline message length)")
    p_self = sub.add_parser("selftest", help="fast internal consistency checks")
    p_self.set_defaults(fn=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
