"""Command-line interface: every metric conversion as a subcommand.

Subcommands: analyze, hist, footprint, mrc, fill, reconstruct, gen, simulate.
Common flags: --format csv|json, --cold include|exclude, --out DIR. Exit
codes: 0 success, 1 usage, 2 invalid input, 3 oracle mismatch. All output is
deterministic: identical inputs and flags give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from array import array
from fractions import Fraction
from pathlib import Path

from ._dispatch import kernels
from .cache import (
    fill_time,
    fill_time_from_inter_miss,
    inter_miss,
    lru_simulate_detail,
    mrc_reuse_time_conversion,
    residence_time,
    steady_state_mrc,
)
from .errors import OracleMismatchError, ParseError, ValidationError
from .footprint import (
    FOOTPRINT_METHODS,
    compute_footprint,
    fp_bruteforce,
    ss_fp_subtractive,
)
from .histogram import (
    COLD_EXCLUDE,
    COLD_INCLUDE,
    bin_log_linear,
    build_histogram,
    check_rt_invariants,
    is_sealed,
)
from .reconstruct import (
    ai_from_pd_rd,
    ai_from_pd_rt,
    ai_from_rd,
    ai_from_rt,
    parse_profiles,
    parse_reuse_sequence,
)
from .trace import (
    GENERATOR_KINDS,
    INFINITE,
    REUSE_DISTANCE,
    REUSE_TIME,
    format_trace,
    generate,
    parse_trace,
    per_datum,
    reuse_distance_sequence,
    reuse_time_sequence,
)


class _UsageError(Exception):
    """Raised instead of argparse's exit so usage problems map to code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _rational(x) -> str:
    """Exact text form: integers plain, other rationals as p/q, inf as inf."""
    if x == INFINITE:
        return "inf"
    f = Fraction(x)
    return str(f)


def _floating(x) -> str:
    if x == INFINITE:
        return "inf"
    return repr(float(x))


def _parse_bins(text: str) -> int:
    name, _, rest = text.partition(":")
    if name != "loglinear":
        raise argparse.ArgumentTypeError(
            f"unknown binning scheme {text!r}; expected loglinear[:SUBBINS]"
        )
    if not rest:
        return 256
    try:
        subbins = int(rest)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"subbin count {rest!r} is not an integer"
        ) from None
    if subbins < 1:
        raise argparse.ArgumentTypeError(
            f"subbin count must be at least 1, got {subbins}"
        )
    return subbins


def _parse_cache_size(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"cache size {text!r} is not a number"
        ) from None


def _read_text(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _load_trace(path: Path):
    return parse_trace(_read_text(path))


def _write(out_dir: Path, name: str, text: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(text)
    print(f"wrote {path}")
    return path


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _histogram_csv(h) -> str:
    lines = [f"#kind={h.kind}", f"#n={h.n}", f"#m={h.m}", "value,count"]
    for value, count in h.sorted_items():
        lines.append(f"{value},{count}")
    lines.append(f"inf,{h.infinite_count}")
    return "\n".join(lines) + "\n"


def _histogram_json(h) -> dict:
    return {
        "kind": h.kind,
        "n": h.n,
        "m": h.m,
        "counts": {str(v): c for v, c in h.sorted_items()},
        "infinite": h.infinite_count,
    }


def _binned_csv(b) -> str:
    lines = [f"#kind={b.kind}", f"#n={b.n}", f"#m={b.m}", "low,high,count"]
    for (low, high), count in zip(b.bounds, b.bin_counts):
        lines.append(f"{low},{high},{count}")
    lines.append(f"inf,inf,{b.infinite_count}")
    return "\n".join(lines) + "\n"


def _binned_json(b) -> dict:
    return {
        "kind": b.kind,
        "n": b.n,
        "m": b.m,
        "bins": [
            {"low": low, "high": high, "count": count}
            for (low, high), count in zip(b.bounds, b.bin_counts)
        ],
        "infinite": b.infinite_count,
    }


def _curve_csv(curve, brute=None) -> str:
    header = "x,window_count,total_wss,fp,fp_float"
    if brute is not None:
        header += ",total_wss_brute"
    lines = [header]
    for x in range(curve.max_window + 1):
        fp = curve.fp(x)
        row = (
            f"{x},{curve.window_count(x)},{curve.totals[x]},"
            f"{_rational(fp)},{_floating(fp)}"
        )
        if brute is not None:
            row += f",{brute.totals[x]}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def _curve_json(curve) -> dict:
    return {
        "n": curve.n,
        "m": curve.m,
        "total_wss": list(curve.totals),
        "fp": [_rational(curve.fp(x)) for x in range(curve.max_window + 1)],
    }


def _steady_csv(curve) -> str:
    lines = [f"#cold={curve.cold}", "x,value,value_float"]
    for x, value in enumerate(curve.values):
        lines.append(f"{x},{_rational(value)},{_floating(value)}")
    return "\n".join(lines) + "\n"


def _steady_json(curve) -> dict:
    return {
        "cold": curve.cold,
        "m": curve.m,
        "values": [_rational(v) for v in curve.values],
    }


def _mrc_csv(curve) -> str:
    lines = ["cache_size,miss_ratio,provenance"]
    for size, ratio in curve.points:
        lines.append(f"{_rational(size)},{_rational(ratio)},{curve.provenance}")
    return "\n".join(lines) + "\n"


def _mrc_json(curve) -> dict:
    return {
        "provenance": curve.provenance,
        "points": [
            [_rational(size), _rational(ratio)] for size, ratio in curve.points
        ],
    }


def _cache_time_rows(fp_curve, conv_mrc, m: int) -> list[dict]:
    rows = []
    for size in range(m):
        rows.append(
            {
                "size": size,
                "fill_time": fill_time(fp_curve, size),
                "fill_estimate": fill_time_from_inter_miss(conv_mrc, size),
                "inter_miss": inter_miss(conv_mrc, size),
                "residence": residence_time(conv_mrc, size),
            }
        )
    return rows


def _cache_times_csv(rows) -> str:
    lines = ["size,fill_time,fill_estimate,inter_miss,residence"]
    for r in rows:
        lines.append(
            f"{r['size']},{_rational(r['fill_time'])},"
            f"{_rational(r['fill_estimate'])},{_rational(r['inter_miss'])},"
            f"{_rational(r['residence'])}"
        )
    return "\n".join(lines) + "\n"


def _cache_times_json(rows) -> list[dict]:
    return [
        {key: (value if key == "size" else _rational(value)) for key, value in r.items()}
        for r in rows
    ]


def cmd_analyze(args) -> int:
    t = _load_trace(args.trace)
    rt = reuse_time_sequence(t)
    rd = reuse_distance_sequence(t)
    h_rt = build_histogram(rt)
    h_rd = build_histogram(rd)
    curve = compute_footprint(t, args.method)
    steady = ss_fp_subtractive(h_rt)
    mrc_diff = steady_state_mrc(h_rt)
    mrc_conv = mrc_reuse_time_conversion(h_rt, curve, args.cold)
    times = _cache_time_rows(curve, mrc_conv, t.m)
    report = check_rt_invariants(t)

    stats_lines = [
        "name,value",
        f"n,{t.n}",
        f"m,{t.m}",
        f"hotness,{_rational(t.hotness())}",
        f"sealed,{str(is_sealed(t)).lower()}",
    ]
    _write(args.out, "stats.csv", "\n".join(stats_lines) + "\n")
    _write(args.out, "hist_rt.csv", _histogram_csv(h_rt))
    _write(args.out, "hist_rd.csv", _histogram_csv(h_rd))
    if args.bins is not None:
        _write(args.out, "hist_rt_binned.csv", _binned_csv(bin_log_linear(h_rt, args.bins)))
        _write(args.out, "hist_rd_binned.csv", _binned_csv(bin_log_linear(h_rd, args.bins)))

    brute = fp_bruteforce(t) if args.oracle else None
    _write(args.out, "footprint.csv", _curve_csv(curve, brute))
    _write(args.out, "steady_state.csv", _steady_csv(steady))
    _write(args.out, "mrc_fp_diff.csv", _mrc_csv(mrc_diff))
    _write(args.out, "mrc_rt_conversion.csv", _mrc_csv(mrc_conv))
    _write(args.out, "cache_times.csv", _cache_times_csv(times))

    combined = {
        "n": t.n,
        "m": t.m,
        "hotness": _rational(t.hotness()),
        "sealed": is_sealed(t),
        "invariants": {
            "finite_reuse_count": report.finite_reuse_count,
            "expected_finite_reuse_count": report.n - report.m,
            "weighted_reuse_sum": report.weighted_reuse_sum,
            "boundary_span_sum": report.boundary_span_sum,
            "sealed_product": report.sealed_product,
            "ok": report.ok,
        },
        "hist_rt": _histogram_json(h_rt),
        "hist_rd": _histogram_json(h_rd),
        "footprint": {"method": args.method, **_curve_json(curve)},
        "steady_state": _steady_json(steady),
        "mrc_fp_diff": _mrc_json(mrc_diff),
        "mrc_rt_conversion": _mrc_json(mrc_conv),
        "cache_times": _cache_times_json(times),
    }

    if args.oracle:
        failures = []
        for method in ("incremental", "additive", "absence"):
            other = compute_footprint(t, method)
            equal = other.totals == brute.totals
            print(f"oracle footprint {method}: {'EQUAL' if equal else 'MISMATCH'}")
            if not equal:
                failures.append(f"footprint {method}")
        ids = array("q", t.accesses)
        lru_raw = kernels.lru_distances(ids, t.n, t.m)
        lru_values = tuple(INFINITE if d == 0 else d for d in lru_raw)
        rd_equal = lru_values == rd.values
        print(f"oracle reuse-distance: {'EQUAL' if rd_equal else 'MISMATCH'}")
        if not rd_equal:
            failures.append("reuse-distance")
        sim = lru_simulate_detail(t)
        sim_curve = sim.curve(include_cold=args.cold == COLD_INCLUDE)
        _write(args.out, "mrc_simulator.csv", _mrc_csv(sim_curve))
        combined["mrc_simulator"] = _mrc_json(sim_curve)
        sim_at = dict(sim_curve.points)
        deviation = max(
            (
                abs(ratio - sim_at[size])
                for size, ratio in mrc_conv.points
                if size in sim_at
            ),
            default=Fraction(0),
        )
        print(
            "oracle reuse-time mrc: max deviation"
            f" {_rational(deviation)} from simulation"
        )
        if failures:
            raise OracleMismatchError(
                f"oracle comparison failed for: {', '.join(failures)}"
            )

    _write(args.out, "analysis.json", _dump_json(combined))
    return 0


def cmd_hist(args) -> int:
    t = _load_trace(args.trace)
    h_rt = build_histogram(reuse_time_sequence(t))
    h_rd = build_histogram(reuse_distance_sequence(t))
    if args.format == "json":
        _write(args.out, "hist_rt.json", _dump_json(_histogram_json(h_rt)))
        _write(args.out, "hist_rd.json", _dump_json(_histogram_json(h_rd)))
        if args.bins is not None:
            _write(
                args.out,
                "hist_rt_binned.json",
                _dump_json(_binned_json(bin_log_linear(h_rt, args.bins))),
            )
            _write(
                args.out,
                "hist_rd_binned.json",
                _dump_json(_binned_json(bin_log_linear(h_rd, args.bins))),
            )
    else:
        _write(args.out, "hist_rt.csv", _histogram_csv(h_rt))
        _write(args.out, "hist_rd.csv", _histogram_csv(h_rd))
        if args.bins is not None:
            _write(
                args.out,
                "hist_rt_binned.csv",
                _binned_csv(bin_log_linear(h_rt, args.bins)),
            )
            _write(
                args.out,
                "hist_rd_binned.csv",
                _binned_csv(bin_log_linear(h_rd, args.bins)),
            )
    return 0


def cmd_footprint(args) -> int:
    t = _load_trace(args.trace)
    curve = compute_footprint(t, args.method, args.wmax)
    brute = None
    if args.oracle:
        brute = fp_bruteforce(t)
        if args.wmax is not None:
            brute = brute.truncated(args.wmax)
        equal = curve.totals == brute.totals
        print(f"oracle footprint {args.method}: {'EQUAL' if equal else 'MISMATCH'}")
        if not equal:
            _write(args.out, "footprint.csv", _curve_csv(curve, brute))
            raise OracleMismatchError(
                f"footprint method {args.method} disagrees with enumeration"
            )
    if args.format == "json":
        payload = {"method": args.method, **_curve_json(curve)}
        _write(args.out, "footprint.json", _dump_json(payload))
    else:
        _write(args.out, "footprint.csv", _curve_csv(curve, brute))
    return 0


def cmd_mrc(args) -> int:
    t = _load_trace(args.trace)
    h_rt = build_histogram(reuse_time_sequence(t))
    curve = compute_footprint(t, args.method)
    mrc_diff = steady_state_mrc(h_rt)
    mrc_conv = mrc_reuse_time_conversion(h_rt, curve, args.cold)
    if args.format == "json":
        _write(args.out, "mrc_fp_diff.json", _dump_json(_mrc_json(mrc_diff)))
        _write(
            args.out, "mrc_rt_conversion.json", _dump_json(_mrc_json(mrc_conv))
        )
    else:
        _write(args.out, "mrc_fp_diff.csv", _mrc_csv(mrc_diff))
        _write(args.out, "mrc_rt_conversion.csv", _mrc_csv(mrc_conv))
    return 0


def cmd_fill(args) -> int:
    t = _load_trace(args.trace)
    curve = compute_footprint(t, args.method)
    if args.size is not None:
        ft = fill_time(curve, args.size)
        if args.format == "json":
            print(
                _dump_json(
                    {"size": _rational(args.size), "fill_time": _rational(ft)}
                ),
                end="",
            )
        else:
            print("size,fill_time,fill_time_float")
            print(f"{_rational(args.size)},{_rational(ft)},{_floating(ft)}")
        return 0
    h_rt = build_histogram(reuse_time_sequence(t))
    mrc_conv = mrc_reuse_time_conversion(h_rt, curve, args.cold)
    rows = _cache_time_rows(curve, mrc_conv, t.m)
    if args.format == "json":
        _write(args.out, "cache_times.json", _dump_json(_cache_times_json(rows)))
    else:
        _write(args.out, "cache_times.csv", _cache_times_csv(rows))
    return 0


def _sniff_reconstruct_input(text: str):
    """Classify a reconstruction input as sequence or profiles, refusing
    histograms."""
    has_kind = False
    data_widths = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key = line[1:].partition("=")[0].strip()
            if key in ("n", "m"):
                raise ValidationError(
                    "histograms are not invertible: different traces can"
                    " share the same reuse histogram, so no trace can be"
                    " rebuilt from one"
                )
            if key == "kind":
                has_kind = True
            continue
        data_widths.add(len(line.split()))
    if not has_kind:
        raise ValidationError(
            "reconstruction input is missing its #kind header"
        )
    if data_widths and max(data_widths) > 1:
        return "profiles"
    return "sequence"


def cmd_reconstruct(args) -> int:
    text = _read_text(args.input)
    shape = _sniff_reconstruct_input(text)
    if shape == "profiles":
        profiles = parse_profiles(text)
        kind = profiles[0].kind if profiles else REUSE_TIME
        if kind == REUSE_TIME:
            t = ai_from_pd_rt(profiles)
        else:
            t = ai_from_pd_rd(profiles)
        if args.verify:
            seq = (
                reuse_time_sequence(t)
                if kind == REUSE_TIME
                else reuse_distance_sequence(t)
            )
            measured = sorted(
                (p.first, p.reuses) for p in per_datum(seq, t)
            )
            given = sorted((p.first, p.reuses) for p in profiles)
            if measured != given:
                raise ValidationError(
                    "round trip failed: re-measured profiles differ from the"
                    " input"
                )
    else:
        seq = parse_reuse_sequence(text)
        t = ai_from_rt(seq) if seq.kind == REUSE_TIME else ai_from_rd(seq)
        if args.verify:
            measured = (
                reuse_time_sequence(t)
                if seq.kind == REUSE_TIME
                else reuse_distance_sequence(t)
            )
            if measured.values != seq.values:
                raise ValidationError(
                    "round trip failed: the re-measured sequence differs from"
                    " the input"
                )
    _write(args.out, "reconstructed.txt", format_trace(t))
    return 0


def cmd_gen(args) -> int:
    t = generate(args.kind, args.m, args.reps)
    _write(args.out, f"{args.kind}_{args.m}_{args.reps}.txt", format_trace(t))
    return 0


def cmd_simulate(args) -> int:
    t = _load_trace(args.trace)
    sim = lru_simulate_detail(t)
    curve = sim.curve(include_cold=args.cold == COLD_INCLUDE)
    if args.format == "json":
        payload = _mrc_json(curve)
        payload["first_miss_times"] = [
            sim.first_miss_time(c) for c in range(sim.m + 1)
        ]
        _write(args.out, "mrc_simulator.json", _dump_json(payload))
    else:
        _write(args.out, "mrc_simulator.csv", _mrc_csv(curve))
    return 0


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("csv", "json"),
        default="csv",
        help="output format (default csv)",
    )
    common.add_argument(
        "--cold",
        choices=(COLD_INCLUDE, COLD_EXCLUDE),
        default=COLD_INCLUDE,
        help="cold-miss policy for probabilities (default include)",
    )
    common.add_argument(
        "--out",
        type=Path,
        default=Path("."),
        help="directory for output files (default current directory)",
    )

    parser = _Parser(
        prog="locmetrics",
        description="Convert memory-access traces between locality metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser(
        "analyze",
        parents=[common],
        help="full report: histograms, footprint, steady state, MRCs, times",
    )
    p.add_argument("trace", type=Path, help="trace file, one access per line")
    p.add_argument(
        "--method",
        choices=FOOTPRINT_METHODS,
        default="incremental",
        help="footprint computation (default incremental)",
    )
    p.add_argument(
        "--bins",
        type=_parse_bins,
        default=None,
        metavar="loglinear[:S]",
        help="also emit log-linear binned histograms with S subbins",
    )
    p.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check formulas against enumeration and simulation",
    )
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser(
        "hist", parents=[common], help="reuse time and distance histograms"
    )
    p.add_argument("trace", type=Path)
    p.add_argument("--bins", type=_parse_bins, default=None, metavar="loglinear[:S]")
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("footprint", parents=[common], help="footprint curve")
    p.add_argument("trace", type=Path)
    p.add_argument(
        "--method", choices=FOOTPRINT_METHODS, default="incremental"
    )
    p.add_argument(
        "--wmax", type=int, default=None, help="largest window length to compute"
    )
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_footprint)

    p = sub.add_parser(
        "mrc", parents=[common], help="miss-ratio curves (both constructions)"
    )
    p.add_argument("trace", type=Path)
    p.add_argument(
        "--method", choices=FOOTPRINT_METHODS, default="incremental"
    )
    p.set_defaults(func=cmd_mrc)

    p = sub.add_parser(
        "fill", parents=[common], help="fill, inter-miss, and residence times"
    )
    p.add_argument("trace", type=Path)
    p.add_argument(
        "--size",
        type=_parse_cache_size,
        default=None,
        help="single cache size to invert (rational like 4/3 allowed)",
    )
    p.add_argument(
        "--method", choices=FOOTPRINT_METHODS, default="incremental"
    )
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser(
        "reconstruct",
        parents=[common],
        help="rebuild a trace from a reuse sequence or per-datum profiles",
    )
    p.add_argument("input", type=Path)
    p.add_argument(
        "--verify",
        action="store_true",
        help="re-measure the rebuilt trace and require an exact round trip",
    )
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser(
        "gen", parents=[common], help="generate a benchmark trace family"
    )
    p.add_argument("kind", choices=GENERATOR_KINDS)
    p.add_argument("m", type=int, help="number of distinct data")
    p.add_argument("reps", type=int, help="number of repetitions")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser(
        "simulate", parents=[common], help="exact LRU miss-ratio curve"
    )
    p.add_argument("trace", type=Path)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except OracleMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
