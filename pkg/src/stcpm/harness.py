"""Seeded Monte Carlo BER experiments and their configuration files."""
from __future__ import annotations

import csv
import io
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd

import numpy as np

from .channel import draw_channel, snr_to_noise_var, transmit
from .correction import CorrectionBank, apply_corrections
from .cpm import CpmConfig, map_bits_to_symbols, modulate_burst, symbols_to_bits
from .receiver import build_trellis, dephase_combine, viterbi_batch

log = logging.getLogger(__name__)

CSV_HEADER = ["ebno_db", "lt", "m0", "p", "ber", "bit_errors", "bits", "branch_evals_per_symbol"]
# bursts per work unit; early stopping is decided only at chunk boundaries
CHUNK = 64


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    cpm: CpmConfig
    bank: CorrectionBank
    ebno_grid_db: tuple
    bursts: int = 100
    master_seed: int = 0
    min_bit_errors: int = 200
    out: str | None = None

    def __post_init__(self):
        if not self.ebno_grid_db:
            raise ValueError("Eb/N0 grid is empty")
        if self.bursts < 1:
            raise ValueError("bursts must be >= 1")
        if self.cpm.Lb % self.bank.Lt:
            raise ValueError(f"Lb={self.cpm.Lb} is not divisible by Lt={self.bank.Lt}")
        if self.cpm.Lb <= self.prefix_len:
            raise ValueError("Lb leaves no information symbols after the known prefix")

    @property
    def prefix_len(self) -> int:
        return self.cpm.gamma - 1

    @property
    def info_bits_per_burst(self) -> int:
        return (self.cpm.Lb - self.prefix_len) * self.cpm.bits_per_symbol


@dataclass(frozen=True)
class BerRecord:
    ebno_db: float
    lt: int
    m0: int
    p: int
    bits: int
    bit_errors: int
    branch_evals_per_symbol: int

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else float("nan")

    def csv_row(self) -> list:
        return [repr(float(self.ebno_db)), self.lt, self.m0, self.p, repr(self.ber),
                self.bit_errors, self.bits, self.branch_evals_per_symbol]


def burst_rng(master_seed: int, ebno_index: int, burst_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(ebno_index, burst_index)))


def simulate_bursts(config: ExperimentConfig, ebno_index: int, noise_var: float, bursts) -> tuple:
    """Run a batch of bursts; returns ``(bit_errors, bits, branch_evals_per_symbol)``."""
    cfg, bank = config.cpm, config.bank
    Lt, prefix = bank.Lt, np.ones(config.prefix_len, dtype=int)
    trellis = build_trellis(cfg)
    sent, xs = [], []
    for b in bursts:
        rng = burst_rng(config.master_seed, ebno_index, b)
        bits = rng.integers(0, 2, config.info_bits_per_burst)
        symbols = np.concatenate([prefix, map_bits_to_symbols(bits, cfg.M)])
        s = modulate_burst(symbols, cfg, Lt)
        chan = draw_channel(Lt, rng).with_noise(noise_var)
        r = transmit(apply_corrections(s, bank, cfg.T), chan, rng)
        xs.append(dephase_combine(r, bank, chan, cfg.T).samples)
        sent.append(bits)
    decoded, _, evals = viterbi_batch(np.stack(xs), trellis, prefix, Lt)
    errors = sum(int(np.count_nonzero(symbols_to_bits(d[len(prefix):], cfg.M) != b))
                 for d, b in zip(decoded, sent))
    return errors, len(sent) * config.info_bits_per_burst, evals // cfg.Lb


def _chunk_job(args):
    return simulate_bursts(*args)


def run_ber(config: ExperimentConfig, workers: int = 1) -> list:
    """BER for each Eb/N0 point; counts do not depend on ``workers``."""
    records = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for e, ebno in enumerate(config.ebno_grid_db):
            noise_var = snr_to_noise_var(ebno, config.cpm, config.bank.Lt)
            chunks = [range(a, min(a + CHUNK, config.bursts)) for a in range(0, config.bursts, CHUNK)]
            jobs = [(config, e, noise_var, c) for c in chunks]
            results = pool.map(_chunk_job, jobs) if pool else map(_chunk_job, jobs)
            errors = bits = evals = 0
            for err, n, evals in results:
                errors += err
                bits += n
                if 0 < config.min_bit_errors <= errors:
                    break
            log.info("Eb/N0 %s dB: %d errors in %d bits", ebno, errors, bits)
            records.append(BerRecord(float(ebno), config.bank.Lt, config.cpm.m0, config.cpm.p,
                                     bits, errors, evals))
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
    return records


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.csv_row())
    return buf.getvalue()


def write_csv(records, path) -> None:
    with open(path, "w", newline="") as f:
        f.write(records_to_csv(records))


# --- configuration files ---------------------------------------------------

REQUIRED_KEYS = ("m", "m0", "p", "gamma", "lt")
DEFAULTS = {"alpha": "1", "betas": "", "ns": "16", "lb": "130", "ebno": "10",
            "bursts": "100", "seed": "0", "min_errors": "200", "out": ""}
KNOWN_KEYS = REQUIRED_KEYS + tuple(DEFAULTS)


def parse_config_text(text: str) -> dict:
    """``key=value`` lines into a dict of raw strings; ``#`` starts a comment."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def _number(key, value, kind=int):
    try:
        if kind is int:
            return int(value)
        v = float(value)
        return int(v) if v.is_integer() and "." not in value else v
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r}") from None


def _float_list(key, value) -> tuple:
    try:
        return tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r} as a comma-separated list") from None


def build_config(raw: dict) -> ExperimentConfig:
    """Validate raw key/value strings and assemble an :class:`ExperimentConfig`."""
    if "m0" in raw and "p" in raw:
        m0, p = _number("m0", raw["m0"]), _number("p", raw["p"])
        if gcd(m0, p) != 1:
            raise ConfigError(f"p: m0={m0} and p={p} are not coprime")
    for key in REQUIRED_KEYS:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")
    raw = {**DEFAULTS, **raw}
    lt = _number("lt", raw["lt"])
    try:
        cpm = CpmConfig(M=_number("m", raw["m"]), m0=_number("m0", raw["m0"]),
                        p=_number("p", raw["p"]), gamma=_number("gamma", raw["gamma"]),
                        Ns=_number("ns", raw["ns"]), Lb=_number("lb", raw["lb"]))
    except ValueError as exc:
        raise ConfigError(f"cpm parameters: {exc}") from None
    betas = _float_list("betas", raw["betas"])
    if betas and len(betas) != lt:
        raise ConfigError(f"betas: {len(betas)} values given for lt={lt}")
    try:
        bank = CorrectionBank(lt, _number("alpha", raw["alpha"], float), betas)
    except ValueError as exc:
        raise ConfigError(f"lt: {exc}") from None
    ebno = _float_list("ebno", raw["ebno"])
    if not ebno:
        raise ConfigError("ebno: empty Eb/N0 grid")
    bursts = _number("bursts", raw["bursts"])
    if bursts < 1:
        raise ConfigError("bursts: must be >= 1")
    if cpm.Lb % lt:
        raise ConfigError(f"lb: {cpm.Lb} is not divisible by lt={lt}")
    try:
        return ExperimentConfig(cpm, bank, ebno, bursts, _number("seed", raw["seed"]),
                                _number("min_errors", raw["min_errors"]), raw["out"] or None)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a ``key=value`` experiment file; ``overrides`` replace keys one-for-one."""
    with open(os.fspath(path)) as f:
        raw = parse_config_text(f.read())
    raw.update(overrides or {})
    return build_config(raw)
