"""Command line entry point: ``stcpm {ber,certify,gram,iq}``."""
from __future__ import annotations

import argparse
import csv
import logging
import sys

import numpy as np

from . import analysis
from .correction import apply_corrections, gram_matrix
from .cpm import map_bits_to_symbols, modulate_burst
from .harness import (ConfigError, KNOWN_KEYS, build_config, parse_config_text,
                      records_to_csv, run_ber)
from .iqfile import export_iq

# flag name -> config key
OVERRIDES = {k.replace("_", "-"): k for k in KNOWN_KEYS}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("config", nargs="?", help="key=value experiment file")
    g = p.add_argument_group("config overrides")
    for flag, key in OVERRIDES.items():
        g.add_argument(f"--{flag}", dest=f"cfg_{key}", metavar=key.upper())


def _config(args):
    raw = {}
    if args.config:
        with open(args.config) as f:
            raw = parse_config_text(f.read())
    for key in KNOWN_KEYS:
        value = getattr(args, f"cfg_{key}", None)
        if value is not None:
            raw[key] = value
    return build_config(raw)


def cmd_ber(args) -> int:
    config = _config(args)
    text = records_to_csv(run_ber(config, workers=args.workers))
    if config.out:
        with open(config.out, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_certify(args) -> int:
    config = _config(args)
    cfg, bank = config.cpm, config.bank
    report = analysis.diversity_certify(cfg, bank, args.strategy, args.samples, config.master_seed)
    rows = ["pair_id", "theta", "tail", "d", "d_tilde", "min_singular_value"]
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(rows)
        for row in report.rows:
            w.writerow(row[:-1] + (repr(row[-1]),))
    finally:
        if args.csv:
            out.close()
    print(report.verdict())
    print(f"vandermonde certificate: {analysis.vandermonde_certificate(bank, cfg.T)}")
    defect = analysis.orthogonality_defect(bank, cfg.Ns, cfg.T)
    print(f"orthogonality: max |off-diagonal| / (Lt T) = {defect:.3e} "
          f"({'orthogonal' if defect <= 1e-9 else 'NOT orthogonal'})")
    return 0 if report.certified else 1


def cmd_gram(args) -> int:
    config = _config(args)
    G = gram_matrix(config.bank, config.cpm.Ns, config.cpm.T)
    with np.printoptions(precision=6, suppress=True, linewidth=120):
        print(G)
    return 0


def cmd_iq(args) -> int:
    config = _config(args)
    cfg, bank = config.cpm, config.bank
    if not config.out:
        raise ConfigError("out: an output path is required for iq export")
    rng = np.random.default_rng(config.master_seed)
    prefix = np.ones(config.prefix_len, dtype=int)
    bits = rng.integers(0, 2, config.info_bits_per_burst)
    s = modulate_burst(np.concatenate([prefix, map_bits_to_symbols(bits, cfg.M)]), cfg, bank.Lt)
    if args.antenna:
        if not 1 <= args.antenna <= bank.Lt:
            raise ConfigError(f"antenna: {args.antenna} outside 1..{bank.Lt}")
        s = apply_corrections(s, bank, cfg.T)[args.antenna - 1]
    n = export_iq(s, config.out)
    print(f"wrote {len(s)} samples ({n} bytes) to {config.out}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stcpm", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ber", help="Monte Carlo BER sweep, CSV output")
    _add_common(p)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("certify", help="diversity and orthogonality verdicts")
    _add_common(p)
    p.add_argument("--strategy", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--csv", help="write per-pair rows here instead of stdout")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("gram", help="print the correction Gram matrix")
    _add_common(p)
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("iq", help="export a modulated burst as raw float32 IQ")
    _add_common(p)
    p.add_argument("--antenna", type=int, default=0,
                   help="1-based antenna to export after correction; 0 = plain CPM signal")
    p.set_defaults(func=cmd_iq)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"stcpm {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
