"""Command-line front end.

Every subcommand writes plain text or CSV to stdout (or to ``--out``), with
floats printed to 12 significant digits. Exit status: 0 on success, 1 when
a computation fails, 2 for an invalid configuration or command line.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .basis import BasisLabel, SubspaceId, in_canonical_set, lex_index, subspace_basis
from .connectivity import default_chain, gap_set, is_nonresonant
from .dynamics import Constant, SineSum, control_from_dict, galerkin_bound, integrator_tolerance, propagate
from .experiment import THRESHOLDS, run_transfer_experiment, exact_gap_control
from .hamiltonian import RotorParams, build_galerkin
from .perturbation import coincidence_classify, gap_separation
from .symmetry import related_map, verify_related
from .synthesis import SynthesisSpec, preset, synthesize

NORMALIZE_SLACK = 1e-6


class ConfigError(Exception):
    """Invalid user input; maps to exit status 2."""


def fmt(x: float) -> str:
    return f"{float(x):.12g}"


def sig6(x: float) -> float:
    return float(f"{float(x):.6g}")


# --------------------------------------------------------------------------
# Config helpers
# --------------------------------------------------------------------------


def load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return cfg


def _params(args, cfg: dict) -> RotorParams:
    raw = dict(cfg.get("params", {}))
    for key in ("A", "C", "delta"):
        if getattr(args, key, None) is not None:
            raw[key] = getattr(args, key)
    try:
        return RotorParams(**{k: float(v) for k, v in raw.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad params: {exc}") from None


def _subspace(value) -> SubspaceId:
    try:
        k, m = value
        return SubspaceId(int(k), int(m))
    except (TypeError, ValueError):
        raise ConfigError(f"subspace must be a [k, m] pair, got {value!r}") from None


def _pick(args, name: str, cfg: dict, key: str, default=None):
    v = getattr(args, name, None)
    if v is not None:
        return v
    return cfg.get(key, default)


def _control(value):
    if isinstance(value, str):
        return named_control(value)
    if not isinstance(value, dict):
        raise ConfigError(f"control must be an object or a preset name, got {value!r}")
    try:
        return control_from_dict(value)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad control: {exc}") from None


def named_control(name: str):
    if name == "zero":
        return Constant(0.0)
    if name == "constant":
        return Constant(1.0)
    if name == "sine":
        return SineSum(0.0, ((1.0, 1.0),))
    try:
        return preset(name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_spectrum(args) -> int:
    params = _params(args, {})
    sid = SubspaceId(args.k, args.m)
    pair = build_galerkin(params, sid, args.n)
    E, B = pair.drift_diag, pair.coupling
    buf = io.StringIO()
    buf.write("j,E,b_diag,b_offdiag,gap\n")
    upper = np.append(E[1:], pair.boundary_energy)
    off = np.append(np.diag(B, 1), pair.boundary_coupling)
    for i, j in enumerate(pair.basis.js):
        buf.write(",".join([str(j), fmt(E[i]), fmt(B[i, i]), fmt(off[i]), fmt(upper[i] - E[i])]) + "\n")
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_graph(args) -> int:
    params = _params(args, {})
    sid = SubspaceId(args.k, args.m)
    pair = build_galerkin(params, sid, args.n)
    chain = default_chain(sid, args.n)
    gaps = gap_set(pair, chain)
    report = is_nonresonant(pair, chain, args.tol)
    js = list(pair.basis.js)
    buf = io.StringIO()
    if args.csv:
        buf.write("kind,j_from,j_to,gap,other_j_from,other_j_to,other_gap\n")
        for (a, b), g in gaps.entries:
            buf.write(f"link,{a.j},{b.j},{fmt(g)},,,\n")
        for c in report.collisions:
            buf.write(
                f"collision,{js[c.link[0]]},{js[c.link[1]]},{fmt(c.link_gap)},"
                f"{js[c.other[0]]},{js[c.other[1]]},{fmt(c.other_gap)}\n"
            )
    else:
        buf.write(f"subspace {sid}  levels j={js[0]}..{js[-1]}\n")
        buf.write("chain: " + " -> ".join(str(j) for j in js) + "\n")
        buf.write(f"{'link':>10}  {'gap':>20}  {'coupling':>20}\n")
        for ((a, b), g), (p, q) in zip(gaps.entries, zip(range(len(js) - 1), range(1, len(js)))):
            buf.write(f"{f'{a.j}-{b.j}':>10}  {fmt(g):>20}  {fmt(pair.coupling[p, q]):>20}\n")
        if report:
            buf.write("collisions: none (chain is non-resonant)\n")
        else:
            buf.write(f"collisions: {len(report.collisions)}\n")
            for c in report.collisions:
                buf.write(
                    f"  link {js[c.link[0]]}-{js[c.link[1]]} gap {fmt(c.link_gap)}"
                    f" == pair {js[c.other[0]]}-{js[c.other[1]]} gap {fmt(c.other_gap)}\n"
                )
    _emit(buf.getvalue(), args.out)
    return 0


def _parse_pair(text: str) -> SubspaceId:
    try:
        k, m = (int(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"expected k,m but got {text!r}") from None
    return SubspaceId(k, m)


def cmd_simtest(args) -> int:
    params = _params(args, {})
    ids = [_parse_pair(p) for p in args.pairs]
    kept = []
    for sid in ids:
        if not in_canonical_set(sid):
            print(f"# {sid} is outside the canonical set (related to a representative); skipped", file=sys.stderr)
        elif sid not in kept:
            kept.append(sid)
    if len(kept) < 2:
        raise ConfigError("need at least two distinct canonical subspaces")
    entries = []
    for sid in kept:
        dim = args.n if args.jmax is None else args.jmax - sid.j_min + 1
        if dim < 2:
            raise ConfigError(f"jmax={args.jmax} leaves fewer than two levels in {sid}")
        entries.append((sid, build_galerkin(params, sid, dim), default_chain(sid, dim)))
    verdict = coincidence_classify(entries)
    js = {sid: list(pair.basis.js) for sid, pair, _ in entries}
    buf = io.StringIO()
    buf.write("subspace,link,other,other_pair,gap,resolution,margin\n")
    for c in verdict.pairs:
        if c.resolution == "no-coincidence" and not args.all:
            continue
        jj = js[c.subspace]
        link = f"{jj[c.link[0]]}-{jj[c.link[1]]}"
        other = "" if c.other_pair is None else f"{js[c.other][c.other_pair[0]]}-{js[c.other][c.other_pair[1]]}"
        margin = "" if math.isnan(c.margin) else fmt(c.margin)
        buf.write(f"\"{c.subspace}\",{link},\"{c.other}\",{other},{fmt(c.gap)},{c.resolution},{margin}\n")
    counts = verdict.counts()
    buf.write("# " + " ".join(f"{k}={v}" for k, v in counts.items()) + "\n")
    for sid, (lo, hi) in verdict.j_ranges.items():
        buf.write(f"# {sid}: j={lo}..{hi}\n")
    sep = gap_separation([p for _, p, _ in entries], args.mu)
    buf.write(f"# gap_separation(mu={fmt(args.mu)})={fmt(sep)}\n")
    buf.write(f"# simultaneous={'yes' if verdict.simultaneous else 'no'}\n")
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_related(args) -> int:
    params = _params(args, {})
    sid = SubspaceId(args.k, args.m)
    if not in_canonical_set(sid):
        raise ConfigError(f"{sid} is not in the canonical set (need m >= 0 and |k| <= m)")
    u = named_control(args.control)
    mp = related_map(params, sid, args.tag)
    residual = verify_related(params, mp, u, args.tfinal, args.n, step=args.step)
    pairs = [build_galerkin(params, sid, args.n)]
    x0 = np.eye(args.n, dtype=complex)[0]
    tol = integrator_tolerance(pairs, u, [x0], args.tfinal, args.step)
    lines = [
        f"source={sid}",
        f"target={mp.target}",
        f"tag={mp.iso_tag}",
        f"phase_rate={fmt(mp.phase_rate)}",
        f"residual={fmt(residual)}",
        f"integrator_tolerance={fmt(tol)}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _synthesis_spec(args, cfg: dict) -> SynthesisSpec:
    sub = cfg.get("subspace", [1, 1])
    if args.k is not None or args.m is not None:
        sub = [args.k if args.k is not None else sub[0], args.m if args.m is not None else sub[1]]
    try:
        return SynthesisSpec(
            subspace=_subspace(sub),
            dim=int(_pick(args, "n", cfg, "dim", 10)),
            mu=float(_pick(args, "mu", cfg, "mu", 1.0)),
            source_index=int(cfg.get("source_index", 0)),
            target_index=int(cfg.get("target_index", 1)),
            epsilon=float(_pick(args, "epsilon", cfg, "epsilon", 1 / 25)),
            angle=float(cfg.get("angle", math.pi / 2)),
            extra_transitions=tuple(tuple(t) for t in cfg.get("extra_transitions", ())),
            frame=cfg.get("frame", "basis"),
            threshold=float(cfg.get("threshold", 1e-4)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad synthesis spec: {exc}") from None


def cmd_synth(args) -> int:
    cfg = load_config(args.config)
    params = _params(args, cfg)
    spec = _synthesis_spec(args, cfg)
    law = synthesize(params, spec)
    doc = {
        "subspace": [spec.subspace.k, spec.subspace.m],
        "dim": spec.dim,
        "predicted_time": sig6(law.predicted_time),
        "control": {
            "type": "sine_sum",
            "shift": sig6(spec.mu),
            "components": [[sig6(c.amplitude), sig6(c.frequency)] for c in law.report],
        },
        "components": [
            {"p": c.p, "q": c.q, "frequency": sig6(c.frequency), "amplitude": sig6(c.amplitude),
             "log_entry": sig6(c.log_entry), "coupling_entry": sig6(c.coupling_entry)}
            for c in law.report
        ],
    }
    text = json.dumps(doc, indent=2) + "\n"
    table = io.StringIO()
    table.write(f"{'p':>3} {'q':>3} {'frequency':>20} {'amplitude':>20} {'log R':>20} {'coupling':>20}\n")
    for c in law.report:
        table.write(
            f"{c.p:>3} {c.q:>3} {fmt(c.frequency):>20} {fmt(c.amplitude):>20}"
            f" {fmt(c.log_entry):>20} {fmt(c.coupling_entry):>20}\n"
        )
    table.write(f"predicted transfer time {fmt(law.predicted_time)}\n")
    if args.out is None:
        sys.stdout.write(text)
        sys.stderr.write(table.getvalue())
    else:
        _emit(text, args.out)
        sys.stdout.write(table.getvalue())
    return 0


def _initial_vectors(cfg: dict, ids: list[SubspaceId], dim: int) -> list[np.ndarray]:
    vecs = {sid: np.zeros(dim, dtype=complex) for sid in ids}
    bases = {sid: subspace_basis(sid, dim) for sid in ids}
    entries = cfg.get("initial")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("initial must be a non-empty list of label amplitudes")
    for e in entries:
        try:
            if isinstance(e, dict):
                j, k, m = e["label"]
                amp = e.get("amplitude", 1.0)
            else:
                j, k, m, *amp = e
                amp = amp if amp else 1.0
            amp = complex(*amp) if isinstance(amp, (list, tuple)) else complex(amp)
            label = BasisLabel(int(j), int(k), int(m))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad initial entry {e!r}: {exc}") from None
        sid = label.subspace
        if sid not in vecs:
            raise ConfigError(f"initial label {label} belongs to {sid}, which is not simulated")
        try:
            vecs[sid][bases[sid].index_of(label)] += amp
        except KeyError:
            raise ConfigError(f"initial label {label} is outside the truncation N={dim}") from None
    out = []
    for sid in ids:
        x = vecs[sid]
        norm = float(np.linalg.norm(x))
        if abs(norm - 1) > NORMALIZE_SLACK:
            raise ConfigError(f"initial state of {sid} has norm {norm!r}; it must be 1")
        if norm != 1.0:
            print(f"warning: initial state of {sid} has norm {norm!r}; normalising", file=sys.stderr)
            x = x / norm
        out.append(x)
    return out


def _run_config(args):
    cfg = load_config(args.config)
    params = _params(args, cfg)
    subs = cfg.get("subspaces")
    if not isinstance(subs, list) or not subs:
        raise ConfigError("subspaces must be a non-empty list of [k, m] pairs")
    ids = [_subspace(s) for s in subs]
    if len(set(ids)) != len(ids):
        raise ConfigError("subspaces are listed twice")
    try:
        dim = int(cfg.get("N", cfg.get("dim")))
    except (TypeError, ValueError):
        raise ConfigError("N must be an integer") from None
    if dim < 1:
        raise ConfigError("N must be positive")
    if "control" not in cfg:
        raise ConfigError("control is required")
    u = _control(cfg["control"])
    t_final = _pick(args, "tfinal", cfg, "t_final")
    step = _pick(args, "step", cfg, "step")
    decimation = cfg.get("decimation", 10)
    try:
        t_final = float(t_final)
        step = None if step is None else float(step)
        decimation = int(decimation)
    except (TypeError, ValueError):
        raise ConfigError("t_final, step and decimation must be numbers") from None
    if not t_final > 0 or (step is not None and not step > 0) or decimation < 1:
        raise ConfigError("t_final and step must be positive, decimation >= 1")
    initial = _initial_vectors(cfg, ids, dim)
    out = _pick(args, "out", cfg.get("outputs", {}) if isinstance(cfg.get("outputs"), dict) else {}, "trajectory")
    return params, ids, dim, u, t_final, step, decimation, initial, out


def cmd_simulate(args) -> int:
    if args.config is None:
        raise ConfigError("simulate needs --config")
    params, ids, dim, u, t_final, step, decimation, initial, out = _run_config(args)
    pairs = [build_galerkin(params, sid, dim) for sid in ids]
    traj = propagate(pairs, u, initial, t_final, step, decimation)
    buf = io.StringIO()
    buf.write("t,subspace,j,k,m,re,im,pop\n")
    for n, t in enumerate(traj.times):
        ts = fmt(t)
        for sid, pair, states in zip(ids, pairs, traj.states):
            s_idx = lex_index(sid)
            for j, c in zip(pair.basis.js, states[n]):
                buf.write(f"{ts},{s_idx},{j},{sid.k},{sid.m},{fmt(c.real)},{fmt(c.imag)},{fmt(abs(c) ** 2)}\n")
    _emit(buf.getvalue(), out)
    return 0


def cmd_bound(args) -> int:
    cfg = load_config(args.config)
    params = _params(args, cfg)
    sub = cfg.get("subspace", [1, 1])
    if args.k is not None or args.m is not None:
        sub = [args.k if args.k is not None else sub[0], args.m if args.m is not None else sub[1]]
    sid = _subspace(sub)
    N = int(_pick(args, "n", cfg, "N", 10))
    N1 = int(_pick(args, "n1", cfg, "N1", 2))
    t = _pick(args, "tfinal", cfg, "t")
    if t is None:
        raise ConfigError("bound needs a time (--tfinal or config key t)")
    u = named_control(args.control) if args.control else _control(cfg.get("control", "published"))
    step = _pick(args, "step", cfg, "step")
    try:
        gb = galerkin_bound(params, sid, N1, N, u, float(t), step=None if step is None else float(step))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    lines = [
        f"N={gb.N}",
        f"N1={gb.N1}",
        f"l1_norm_u={fmt(gb.l1_norm_u)}",
        f"boundary_coupling_abs={fmt(gb.boundary_coupling_abs)}",
        f"sup_term={fmt(gb.sup_term)}",
        f"bound={fmt(gb.bound)}",
        f"grid_points={gb.grid_points}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_reproduce(args) -> int:
    lo, hi = THRESHOLDS["t_window"]
    r = run_transfer_experiment()
    checks = r.checks()
    print("published pulse, peak over [0, 80]:")
    print(f"  t*={fmt(r.t_star)}  |<D_2,psi(t*)>|={fmt(r.fidelity)}")
    print(f"  bystanders (1,-1)={fmt(r.bystanders[0])}  (1,0)={fmt(r.bystanders[1])}")
    print(f"  galerkin bound={fmt(r.bound)}  leakage vs N=20={fmt(r.leakage)}")
    print(f"A1 {'PASS' if checks['A1'] else 'FAIL'}: fidelity >= {THRESHOLDS['fidelity']} with t* in [{lo}, {hi}]")
    print(f"A2 {'PASS' if checks['A2'] else 'FAIL'}: both bystanders > {THRESHOLDS['bystander']} at t*")
    print(f"A3 {'PASS' if checks['A3'] else 'FAIL'}: bound < {THRESHOLDS['bound']:g} and leakage <= bound + {THRESHOLDS['leakage_slack']:g}")
    s = run_transfer_experiment(exact_gap_control(), window=(60.0, 70.0))
    print("synthesized law (unrounded gaps), peak over [60, 70]:")
    print(f"  t*={fmt(s.t_star)}  |<D_2,psi(t*)>|={fmt(s.fidelity)}")
    print(f"  bystanders (1,-1)={fmt(s.bystanders[0])}  (1,0)={fmt(s.bystanders[1])}")
    print(f"  galerkin bound={fmt(s.bound)}  leakage vs N=20={fmt(s.leakage)}")
    return 0 if all(checks.values()) else 1


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--A", type=float, default=None, help="rotational constant A (default 1)")
    p.add_argument("--C", type=float, default=None, help="rotational constant C (default 2)")
    p.add_argument("--delta", type=float, default=None, help="dipole strength (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symrotor", description="Symmetric-rotor controllability toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("spectrum", help="energies and couplings of one truncation (CSV)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="number of levels")
    _add_params(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("graph", help="chain, gap set and collision report")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--csv", action="store_true")
    _add_params(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("simtest", help="simultaneous-controllability verdict for several subspaces")
    p.add_argument("pairs", nargs="+", metavar="k,m")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--jmax", type=int, default=None, help="truncate every subspace at this j instead of --n levels")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--all", action="store_true", help="also list links without a coincidence")
    _add_params(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simtest)

    p = sub.add_parser("related", help="check the related dynamics of a canonical subspace")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tag", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--tfinal", type=float, default=20.0)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--control", default="sine", help="zero, constant, sine or published")
    _add_params(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_related)

    p = sub.add_parser("synth", help="synthesize a resonant transfer law (JSON)")
    p.add_argument("--config")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--epsilon", type=float)
    _add_params(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", help="propagate a JSON run config, write a trajectory CSV")
    p.add_argument("--config")
    p.add_argument("--tfinal", type=float)
    p.add_argument("--step", type=float)
    _add_params(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bound", help="Galerkin truncation error bound")
    p.add_argument("--config")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--n1", type=int)
    p.add_argument("--tfinal", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--control", help="zero, constant, sine or published (default: config, else published)")
    _add_params(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("reproduce-fig2", help="rerun the (1,1) transfer experiment and check it")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - reported as a runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
