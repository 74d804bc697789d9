"""Command-line driver: reproducible walk experiments with flat-file output.

Subcommands map onto the library one-to-one: ``spectrum`` serializes the
closed-form eigensystem as JSON, ``evolve`` writes an observable time
series as CSV, ``husimi`` dumps phase-space grids (CSV and optional 16-bit
PGM), ``pr-scan`` produces the participation-ratio matrix over a coin-angle
grid, and ``ehrenfest`` tabulates entanglement-saturation times over
lattice sizes.

Exit codes: 0 success, 2 numerical-invariant failure, 64 usage error.
All numbers are written with 12 significant digits; identical configs give
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .core import CSW, PSW, CoinState, WalkSpec, WalkerCoinState, product_state, site_state
from .observables import evolve_series, fit_power_law, ehrenfest_time
from .phasespace import coherent_state, harper_fiducial, husimi
from .spectral import all_eigenmodes, eigen_residual, split_alpha

EX_OK = 0
EX_NUMERIC = 2
EX_USAGE = 64

RESIDUAL_GATE = 1e-8
HUSIMI_SUM_GATE = 1e-8


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _round12(x) -> float:
    return float(_fmt(x))


def parse_theta(token: str) -> float:
    """Coin angle from a token: 'pi', 'pi/<int>', or a decimal literal."""
    token = token.strip().lower()
    if token == "pi":
        return math.pi
    if token.startswith("pi/"):
        try:
            return math.pi / int(token[3:])
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad theta token {token!r}") from exc
    try:
        return float(token)
    except ValueError as exc:
        raise UsageError(f"bad theta token {token!r}") from exc


def parse_coin(token: str) -> CoinState:
    token = token.strip().lower()
    named = {
        "zero": CoinState.zero,
        "one": CoinState.one,
        "symmetric": CoinState.symmetric,
        "asymmetric": CoinState.asymmetric,
    }
    if token in named:
        return named[token]()
    if token.startswith("amp:"):
        try:
            re0, im0, re1, im1 = (float(v) for v in token[4:].split(","))
        except ValueError as exc:
            raise UsageError(f"bad coin token {token!r}") from exc
        c0, c1 = complex(re0, im0), complex(re1, im1)
        nrm = math.sqrt(abs(c0) ** 2 + abs(c1) ** 2)
        if nrm == 0.0:
            raise UsageError("coin amplitudes cannot all vanish")
        return CoinState(c0 / nrm, c1 / nrm)
    raise UsageError(f"bad coin token {token!r}")


def _initial_state(init_token: str, coin: CoinState, n: int) -> WalkerCoinState:
    token = init_token.strip().lower()
    if token.startswith("site:"):
        try:
            site = int(token[5:])
        except ValueError as exc:
            raise UsageError(f"bad init token {init_token!r}") from exc
        return site_state(n, site, coin)
    if token.startswith("coherent:"):
        try:
            q, p = (int(v) for v in token[9:].split(","))
        except ValueError as exc:
            raise UsageError(f"bad init token {init_token!r}") from exc
        walker = coherent_state(harper_fiducial(n), (q, p))
        return product_state(coin, walker)
    raise UsageError(f"bad init token {init_token!r}")


def _int_list(token: str, what: str) -> list[int]:
    try:
        values = [int(v) for v in token.split(",") if v != ""]
    except ValueError as exc:
        raise UsageError(f"bad {what} list {token!r}") from exc
    if not values:
        raise UsageError(f"empty {what} list")
    return values


def _write_text(path, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _spec(n: int, theta: float, kind: str) -> WalkSpec:
    try:
        return WalkSpec(n, theta, kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    spec = _spec(args.n, parse_theta(args.theta), PSW)
    modes = all_eigenmodes(spec)
    rows = []
    worst = 0.0
    for mode in modes:
        res = eigen_residual(spec, mode)
        worst = max(worst, res)
        rows.append({
            "k": mode.k,
            "lambda_re": _round12(mode.lam.real),
            "lambda_im": _round12(mode.lam.imag),
            "C": _round12(mode.norm_const),
            "residual": _round12(res),
        })
    doc = {
        "n": spec.n_sites,
        "theta": _round12(spec.theta),
        "kind": spec.kind,
        "parity": "odd" if spec.is_odd else "even",
    }
    if not spec.is_odd:
        doc["alpha"] = _round12(split_alpha(spec))
    doc["modes"] = rows
    _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    if worst > RESIDUAL_GATE:
        sys.stderr.write(f"spectrum: residual {worst:.3e} exceeds {RESIDUAL_GATE:.1e}\n")
        return EX_NUMERIC
    return EX_OK


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------

def cmd_evolve(args) -> int:
    if args.t < 0:
        raise UsageError("--t must be nonnegative")
    spec = _spec(args.n, parse_theta(args.theta), args.kind)
    coin = parse_coin(args.coin)
    initial = _initial_state(args.init, coin, spec.n_sites)
    dump_times = _int_list(args.dump_dist, "dump") if args.dump_dist else []
    if any(t < 0 or t > args.t for t in dump_times):
        raise UsageError("dump times must lie in [0, t]")
    if dump_times and args.out is None:
        raise UsageError("--dump-dist requires --out")
    series, dists = evolve_series(spec, initial, args.t, base=args.entropy_base,
                                  dump_times=dump_times)
    lines = [
        f"# kind={spec.kind} n={spec.n_sites} theta={_fmt(spec.theta)}"
        f" init={args.init} coin={args.coin} entropy_base={args.entropy_base}",
        "t,sigma,participation,coin_entropy",
    ]
    for i, t in enumerate(series.t):
        lines.append(",".join([
            str(int(t)), _fmt(series.sigma[i]), _fmt(series.participation[i]),
            _fmt(series.coin_entropy[i]),
        ]))
    _write_text(args.out, "\n".join(lines) + "\n")
    stem, ext = os.path.splitext(args.out) if args.out else ("", "")
    for t in sorted(dists):
        dist = dists[t]
        dlines = [f"# distribution t={t}", "n,p,p_coin0,p_coin1"]
        for n in range(spec.n_sites):
            dlines.append(",".join([
                str(n), _fmt(dist.p[n]), _fmt(dist.p0[n]), _fmt(dist.p1[n]),
            ]))
        _write_text(f"{stem}_dist_t{t}{ext or '.csv'}", "\n".join(dlines) + "\n")
    return EX_OK


# ---------------------------------------------------------------------------
# husimi
# ---------------------------------------------------------------------------

def _write_pgm(path: str, values: np.ndarray):
    # rows = fixed p, columns = q, linearly scaled by the grid maximum
    img = values.T
    peak = float(img.max())
    scaled = np.zeros(img.shape, dtype=">u2")
    if peak > 0.0:
        scaled = np.round(img / peak * 65535.0).astype(">u2")
    header = f"P5\n# scale {_fmt(peak)}\n{img.shape[1]} {img.shape[0]}\n65535\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(scaled.tobytes())


def cmd_husimi(args) -> int:
    spec = _spec(args.n, parse_theta(args.theta), args.kind)
    coin = parse_coin(args.coin)
    state = _initial_state(args.init, coin, spec.n_sites)
    times = sorted(set(_int_list(args.times, "times")))
    if times[0] < 0:
        raise UsageError("times must be nonnegative")
    fid = harper_fiducial(spec.n_sites)
    stem, ext = os.path.splitext(args.out)
    ext = ext or ".csv"
    worst = 0.0
    current = 0
    from .core import evolve  # local alias keeps module import light

    for t in times:
        state = evolve(state, spec, t - current)
        current = t
        grid = husimi(state, fid, time=t)
        total = grid.total()
        worst = max(worst, abs(total - spec.n_sites))
        lines = [
            f"# husimi kind={spec.kind} n={spec.n_sites} theta={_fmt(spec.theta)}"
            f" init={args.init} coin={args.coin} t={t}",
            f"# rows=p cols=q sum={_fmt(total)}",
        ]
        for p in range(spec.n_sites):
            lines.append(",".join(_fmt(grid.values[q, p]) for q in range(spec.n_sites)))
        _write_text(f"{stem}_t{t}{ext}", "\n".join(lines) + "\n")
        if args.pgm:
            _write_pgm(f"{stem}_t{t}.pgm", grid.values)
    if worst > HUSIMI_SUM_GATE:
        sys.stderr.write(
            f"husimi: grid sum deviates from N by {worst:.3e} (> {HUSIMI_SUM_GATE:.1e})\n"
        )
        return EX_NUMERIC
    return EX_OK


# ---------------------------------------------------------------------------
# pr-scan
# ---------------------------------------------------------------------------

def _pr_scan_row(task) -> list:
    n, theta, t_max, kind, coin_parts, site = task
    from .observables import pr_theta_time_scan

    coin = CoinState(complex(*coin_parts[0]), complex(*coin_parts[1]))
    row = pr_theta_time_scan(n, [theta], t_max, kind, coin=coin, site=site)
    return row[0].tolist()


def _theta_grid(token: str) -> np.ndarray:
    try:
        start_s, stop_s, count_s = token.split(":")
        start, stop, count = float(start_s), float(stop_s), int(count_s)
    except ValueError as exc:
        raise UsageError(f"bad theta grid {token!r} (want start:stop:count)") from exc
    if count < 1:
        raise UsageError("theta grid needs at least one point")
    return np.linspace(start, stop, count)


def cmd_pr_scan(args) -> int:
    if args.t_max < 0:
        raise UsageError("--t-max must be nonnegative")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    grid = _theta_grid(args.theta_grid)
    for theta in grid:
        _spec(args.n, float(theta), args.kind)  # validates range up front
    coin = parse_coin(args.coin)
    coin_parts = ((coin.c0.real, coin.c0.imag), (coin.c1.real, coin.c1.imag))
    tasks = [(args.n, float(theta), args.t_max, args.kind, coin_parts, 0)
             for theta in grid]
    jobs = min(args.jobs, len(tasks))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_pr_scan_row, tasks))
    else:
        rows = [_pr_scan_row(t) for t in tasks]
    lines = [
        f"# pr-scan kind={args.kind} n={args.n} t_max={args.t_max} coin={args.coin}",
        "# theta," + ",".join(_fmt(th) for th in grid),
        "# t," + ",".join(str(t) for t in range(args.t_max + 1)),
    ]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _write_text(args.out, "\n".join(lines) + "\n")
    return EX_OK


# ---------------------------------------------------------------------------
# ehrenfest
# ---------------------------------------------------------------------------

def _ehrenfest_entry(task) -> tuple:
    n, theta, kind, coin_parts, tol = task
    coin = CoinState(complex(*coin_parts[0]), complex(*coin_parts[1]))
    spec = WalkSpec(n, theta, kind)
    est = ehrenfest_time(spec, coin0=coin, tol=tol)
    return n, est.value, est.parameters["saturation"]


def cmd_ehrenfest(args) -> int:
    if args.sat_tol <= 0.0:
        raise UsageError("--sat-tol must be positive")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    sizes = _int_list(args.n_list, "N")
    theta = parse_theta(args.theta)
    for n in sizes:
        _spec(n, theta, args.kind)
    coin = parse_coin(args.coin)
    coin_parts = ((coin.c0.real, coin.c0.imag), (coin.c1.real, coin.c1.imag))
    tasks = [(n, theta, args.kind, coin_parts, args.sat_tol) for n in sizes]
    jobs = min(args.jobs, len(tasks))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_ehrenfest_entry, tasks))
    else:
        entries = [_ehrenfest_entry(t) for t in tasks]
    lines = [
        f"# ehrenfest kind={args.kind} theta={_fmt(theta)} coin={args.coin}"
        f" sat_tol={_fmt(args.sat_tol)}",
        "n,t_e,saturation",
    ]
    for n, t_e, sat in entries:
        lines.append(f"{n},{_fmt(t_e)},{_fmt(sat)}")
    if len(entries) >= 2:
        ns = [e[0] for e in entries]
        tes = [max(e[1], 1.0) for e in entries]
        fit = fit_power_law((np.array(ns, float), np.array(tes)), (min(ns), max(ns)))
        lines.append(f"# loglog_slope,{_fmt(fit.exponent)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EX_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="toralwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kind=True):
        p.add_argument("--n", type=int, required=True, help="lattice size N")
        p.add_argument("--theta", default="pi/4", help="coin angle (rad, or pi/<k>)")
        if kind:
            p.add_argument("--kind", choices=[PSW, CSW], default=PSW)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("spectrum", help="closed-form eigensystem as JSON")
    common(p, kind=False)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("evolve", help="observable time series as CSV")
    common(p)
    p.add_argument("--t", type=int, required=True, help="number of steps")
    p.add_argument("--init", default="site:0", help="site:<n> or coherent:<q>,<p>")
    p.add_argument("--coin", default="zero",
                   help="zero|one|symmetric|asymmetric|amp:re0,im0,re1,im1")
    p.add_argument("--dump-dist", default=None,
                   help="comma-separated times at which to dump p_n files")
    p.add_argument("--entropy-base", choices=["two", "natural"], default="two")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("husimi", help="phase-space grids as CSV (and PGM)")
    common(p)
    p.add_argument("--times", required=True, help="comma-separated dump times")
    p.add_argument("--init", default="coherent:0,0")
    p.add_argument("--coin", default="symmetric")
    p.add_argument("--pgm", action="store_true", help="also write 16-bit PGM images")
    p.set_defaults(func=cmd_husimi)

    p = sub.add_parser("pr-scan", help="participation ratio over a theta grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=[PSW, CSW], default=PSW)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--theta-grid", required=True, help="start:stop:count")
    p.add_argument("--coin", default="zero")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_pr_scan)

    p = sub.add_parser("ehrenfest", help="entanglement saturation time vs N")
    p.add_argument("--n-list", required=True, help="comma-separated lattice sizes")
    p.add_argument("--theta", default="pi/4")
    p.add_argument("--kind", choices=[PSW, CSW], default=PSW)
    p.add_argument("--coin", default="symmetric")
    p.add_argument("--sat-tol", type=float, default=1e-3,
                   help="entropy distance from the maximum that counts as saturated")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ehrenfest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"toralwalk: error: {exc}\n")
        return EX_USAGE
    except BrokenPipeError:
        return EX_OK


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
