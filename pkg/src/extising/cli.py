"""Command-line front end.

Every subcommand writes a delimited table whose leading ``#`` lines record the
package version, the seed and the fully resolved configuration. Those lines,
with the ``# `` prefix stripped, form a valid ``--config`` file that reproduces
the table byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass
from typing import Any, Callable

from . import __version__
from .chain import ChainSpec, CouplingProfile
from .ec3 import estimate_pe
from .errors import ConfigError, ExtIsingError
from .oracle import MAX_QUBITS, compare_to_analytic, fit_gap_exponent
from .perturb import PerturbationValidityWarning, min_gap_with_field
from .spectrum import lambda_values, momentum_indices

log = logging.getLogger("extising")

DEFAULT_SEED = 20100101


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _list(conv: Callable[[str], Any]) -> Callable[[str], list]:
    def parse(text: str) -> list:
        return [conv(v) for v in text.split(",") if v.strip()]
    return parse


def _int_range_list(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


@dataclass(frozen=True)
class Key:
    parse: Callable[[str], Any]
    default: str
    help: str


SCHEMAS: dict[str, dict[str, Key]] = {
    "spectrum": {
        "n": Key(int, "51", "number of qubits N"),
        "gamma": Key(float, "1.0", "transverse field energy scale"),
        "lambda2": Key(float, "0.1", "next-nearest neighbour coupling"),
        "lambda1_min": Key(float, "0.0", "start of the lambda1 sweep"),
        "lambda1_max": Key(float, "1.2", "end of the lambda1 sweep (inclusive)"),
        "lambda1_step": Key(float, "0.01", "lambda1 grid step"),
    },
    "mingap": {
        "n": Key(int, "51", "number of qubits N (odd)"),
        "gamma": Key(float, "1.0", "transverse field energy scale"),
        "h": Key(float, "0.1", "uniform longitudinal field, same units as gamma"),
        "m_values": Key(_int_range_list, "1..14", "neighbour counts, e.g. 1..14 or 1,2,5"),
        "profiles": Key(_list(str.strip), "linear,exponential", "coupling decay profiles"),
    },
    "oracle": {
        "n_values": Key(_int_range_list, "9,11,13", f"chain lengths (<= {MAX_QUBITS})"),
        "gamma": Key(float, "1.0", "transverse field energy scale"),
        "lambda1": Key(float, "0.5", "nearest neighbour coupling"),
        "lambda2": Key(float, "0.0", "next-nearest neighbour coupling"),
        "h_values": Key(_list(float), "0", "uniform longitudinal fields"),
        "boundary": Key(str.strip, "periodic", "periodic or open"),
    },
    "ec3": {
        "n": Key(int, "12", "number of bits N"),
        "k": Key(int, "20", "restricted clauses per instance K"),
        "m_values": Key(_int_range_list, "1..8", "restriction parameters M"),
        "p_values": Key(_list(float), "0.2,0.3,0.4,0.5", "probability of a 1 bit"),
        "runs": Key(int, "100", "Monte Carlo runs per cell"),
        "cyclic": Key(_bool, "true", "measure clause span on the cyclic chain"),
        "pool_size": Key(int, "500", "initial satisfied-clause pool size"),
        "max_doublings": Key(int, "8", "pool doublings before a run counts as an error"),
    },
}


def read_config_file(path: str) -> dict[str, str]:
    """Parse flat ``key = value`` lines; ``#`` starts a comment line."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key] = value
    return out


def resolve(command: str, file_values: dict[str, str], flags: dict[str, str | None]) -> dict[str, str]:
    """Merge defaults, file values and flag overrides into raw strings."""
    schema = SCHEMAS[command]
    raw = {k: v.default for k, v in schema.items()}
    for key, value in file_values.items():
        if key == "seed":
            continue
        if key not in schema:
            raise ConfigError(f"unknown config key {key!r} for '{command}'")
        raw[key] = value
    for key, value in flags.items():
        if value is not None:
            raw[key] = value
    return raw


def parse_values(command: str, raw: dict[str, str]) -> dict[str, Any]:
    out = {}
    for key, spec in SCHEMAS[command].items():
        try:
            out[key] = spec.parse(raw[key])
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from None
    return out


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        if math.isnan(x):
            return ""
        return format(x, ".12g")
    return str(x)


def run_spectrum(cfg: dict[str, Any], seed: int) -> tuple[list[str], list[list[Any]]]:
    n, g, l2 = cfg["n"], cfg["gamma"], cfg["lambda2"]
    lo, hi, step = cfg["lambda1_min"], cfg["lambda1_max"], cfg["lambda1_step"]
    if step <= 0 or hi < lo:
        raise ConfigError("lambda1 sweep needs lambda1_step > 0 and lambda1_max >= lambda1_min")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    ks = momentum_indices(n)
    rows = []
    for idx in range(count):
        l1 = round(lo + idx * step, 12)
        spec = ChainSpec(n, g, CouplingProfile.explicit([l1, l2]))
        lam = lambda_values(spec.profile, n, ks)
        rows.extend([l1, l2, int(k), float(v), g * float(v)] for k, v in zip(ks, lam))
    return ["lambda1", "lambda2", "k", "Lambda_k[Gamma]", "energy[raw]"], rows


def run_mingap(cfg: dict[str, Any], seed: int) -> tuple[list[str], list[list[Any]]]:
    n, g, h = cfg["n"], cfg["gamma"], cfg["h"]
    rows = []
    for prof_name in cfg["profiles"]:
        for m in cfg["m_values"]:
            spec = ChainSpec(n, g, CouplingProfile.of_kind(prof_name, m), h)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PerturbationValidityWarning)
                rep = min_gap_with_field(spec)
            rows.append([
                m, prof_name, rep.moment, rep.gap0 / g, rep.field_correction / g,
                rep.min_gap_total / g, rep.min_gap_total, rep.validity_ratio, rep.verdict,
            ])
    header = ["M", "profile", "moment", "mingap0_over_Gamma", "field_correction_over_Gamma",
              "mingap_over_Gamma", "mingap[raw]", "validity_ratio", "validity"]
    return header, rows


def run_oracle(cfg: dict[str, Any], seed: int) -> tuple[list[str], list[list[Any]]]:
    g, l1, l2, bnd = cfg["gamma"], cfg["lambda1"], cfg["lambda2"], cfg["boundary"]
    hs = cfg["h_values"]
    positive = [h for h in hs if h > 0]
    rows = []
    for n in cfg["n_values"]:
        if n > MAX_QUBITS:
            raise ConfigError(f"n_values: N={n} exceeds the oracle cap {MAX_QUBITS}")
        base = ChainSpec.nearest(n, l1, l2, gamma=g)
        exponent = math.nan
        if len(positive) >= 2:
            exponent = fit_gap_exponent(base, positive, bnd)
        for h in hs:
            cmp = compare_to_analytic(base.with_field(h), bnd)
            rows.append([
                n, l1, l2, h, cmp.gap_oracle, cmp.gap_analytic, cmp.discrepancy,
                cmp.scaled_discrepancy, exponent if h > 0 else math.nan,
            ])
    header = ["N", "lambda1", "lambda2", "h", "gap_oracle[raw]", "gap_analytic[raw]",
              "discrepancy[raw]", "N_discrepancy_over_Gamma", "fit_exponent"]
    return header, rows


def run_ec3(cfg: dict[str, Any], seed: int) -> tuple[list[str], list[list[Any]]]:
    rows = []
    for p in cfg["p_values"]:
        for m in cfg["m_values"]:
            rep = estimate_pe(cfg["n"], m, p, cfg["k"], cfg["runs"], seed,
                              cyclic=cfg["cyclic"], pool_size=cfg["pool_size"],
                              max_doublings=cfg["max_doublings"])
            rows.append([cfg["n"], cfg["k"], m, p, rep.runs, rep.p_e, rep.half_width, seed,
                         rep.shortage_runs, rep.redraws])
    header = ["N", "K", "M", "p", "runs", "p_E", "half_width", "seed", "shortage_runs", "redraws"]
    return header, rows


RUNNERS = {"spectrum": run_spectrum, "mingap": run_mingap, "oracle": run_oracle, "ec3": run_ec3}


def render(command: str, raw: dict[str, str], seed: int, header: list[str],
           rows: list[list[Any]], delimiter: str) -> str:
    buf = io.StringIO()
    buf.write(f"# extising {__version__} {command}\n")
    buf.write(f"# seed = {seed}\n")
    for key in SCHEMAS[command]:
        buf.write(f"# {key} = {raw[key]}\n")
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".extising-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _epilog(command: str) -> str:
    lines = ["config keys (flat 'key = value' file, flags override):"]
    for key, spec in SCHEMAS[command].items():
        lines.append(f"  {key:<14} {spec.help} [default: {spec.default}]")
    lines.append("  seed           64-bit RNG seed (same as --seed)")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extising",
        description="Spectrum, minimum gap, oracle checks and Exact Cover 3 simulation "
                    "for the extended quantum Ising chain.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "single-fermion levels Lambda_k over a lambda1 sweep",
        "mingap": "minimum gap versus neighbour count M with a longitudinal field",
        "oracle": "exact-diagonalisation gaps versus the analytic spectrum",
        "ec3": "error probability p_E for restricted Exact Cover 3 instances",
    }
    for name, schema in SCHEMAS.items():
        sp = sub.add_parser(name, help=helps[name], epilog=_epilog(name),
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.add_argument("--config", help="flat key = value config file")
        sp.add_argument("--seed", type=int, default=None, help="64-bit RNG seed")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "tsv"), default="csv")
        for key, spec in schema.items():
            sp.add_argument("--" + key.replace("_", "-"), dest=key, default=None, help=spec.help)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    command = args.command
    try:
        file_values = read_config_file(args.config) if args.config else {}
        seed = args.seed
        if seed is None:
            seed = int(file_values.get("seed", DEFAULT_SEED))
        if not 0 <= seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed}")
        raw = resolve(command, file_values, {k: getattr(args, k) for k in SCHEMAS[command]})
        cfg = parse_values(command, raw)
        header, rows = RUNNERS[command](cfg, seed)
        text = render(command, raw, seed, header, rows, "," if args.format == "csv" else "\t")
        if args.out:
            write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
    except (ExtIsingError, ValueError, OSError) as exc:
        log.error("%s: %s", command, exc)
        return 2
    return 0
