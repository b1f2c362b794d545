"""Command-line front end.

Four families of subcommands: `verify` runs one-shot residual suites,
`amp` evaluates scattering and transmission amplitudes (with optional
product-vs-integral comparison), `chain` diagonalizes finite chains and
solves their Bethe equations, and `identity` reruns the two gamma
integral identities.  Records stream to stdout as JSON lines or CSV.

Exit codes: 0 when every residual is inside tolerance, 1 when a check
fails numerically, 2 on usage or domain errors.
"""

import argparse
import csv
import functools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import amplitudes as amp
from . import lax_operators as lax
from . import physics_checks as checks
from . import special_functions as sf
from . import spin_chain
from .errors import DefectBetheError
from .spin_algebra import (ATTRACTIVE, REPULSIVE, ModelParameters, build_rep)

CSV_FIELDS = ["command", "params", "lambda", "re", "im", "err", "residual",
              "product_integral_gap"]


def _json_default(obj):
    # numpy scalars leak into records from quadrature and linalg results
    if isinstance(obj, (np.bool_, np.integer, np.floating)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return str(obj)


def _record(command, params, lam=None, value=None, err=None, residual=None,
            **extra):
    rec = {
        "command": command,
        "params": params,
        "lambda": lam,
        "re": None if value is None else float(np.real(value)),
        "im": None if value is None else float(np.imag(value)),
        "err": None if err is None else float(err),
        "residual": None if residual is None else float(residual),
    }
    rec.update(extra)
    return rec


class Emitter:
    """Streams records as JSON lines (default) or CSV rows."""

    def __init__(self, fmt, stream=None):
        self.fmt = fmt
        self.stream = stream if stream is not None else sys.stdout
        self._writer = None

    def emit(self, rec):
        if self.fmt == "csv":
            if self._writer is None:
                self._writer = csv.DictWriter(self.stream,
                                              fieldnames=CSV_FIELDS,
                                              extrasaction="ignore")
                self._writer.writeheader()
            row = dict(rec)
            row["params"] = json.dumps(row.get("params", {}), sort_keys=True,
                                       default=_json_default)
            self._writer.writerow(row)
        else:
            self.stream.write(json.dumps(rec, sort_keys=True,
                                         default=_json_default) + "\n")
        self.stream.flush()


def _read_config(path):
    """key=value lines; '#' starts a comment; values parsed as floats."""
    cfg = {}
    if path is None:
        return cfg
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line (need key=value): {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            cfg[key] = float(val)
    return cfg


def _tolerance(args, cfg, key, default):
    if args.tol is not None:
        return args.tol
    return cfg.get(f"tol_{key}", default)


def _model(args):
    if args.model == "xxx":
        if args.regime is not None:
            raise DefectBetheError("the isotropic model has no regime")
        return ModelParameters.xxx()
    if args.mu is None:
        raise DefectBetheError("--model xxz requires --mu")
    return ModelParameters.xxz(args.mu, args.regime)


def _parse_sweep(text):
    try:
        lo, hi, steps = text.split(":")
        grid = np.linspace(float(lo), float(hi), int(steps))
    except ValueError as exc:
        raise DefectBetheError(f"bad --sweep {text!r}, want min:max:steps") \
            from exc
    if grid.size < 1:
        raise DefectBetheError("--sweep needs at least one step")
    return grid


def _concurrent_map(fn, items):
    """Evaluate fn over items concurrently, results ordered by index."""
    items = list(items)
    if len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(8, len(items))) as pool:
        return list(pool.map(fn, items))


def _spin_list(args, default):
    return args.spin if args.spin else default


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _regime_data(params, spin, theta=0.0):
    return amp.DefectRegimeData.from_params(params, spin, rapidity=theta)


def _cmd_verify(args, cfg, emitter):
    params = _model(args)
    rng = np.random.default_rng(args.seed)
    base = {"check": args.what, "model": args.model, "mu": args.mu,
            "regime": args.regime, "samples": args.samples,
            "seed": args.seed}
    failed = False

    def report(residual, tol, **extra):
        nonlocal failed
        ok = residual <= tol
        failed = failed or not ok
        p = dict(base)
        p.update(extra)
        p.update({"tol": tol, "passed": ok})
        emitter.emit(_record(f"verify {args.what}", p, residual=residual))

    if args.what == "ybe":
        tol = _tolerance(args, cfg, "ybe", 1e-12)
        pairs = rng.uniform(-2.0, 2.0, size=(args.samples, 2))
        worst = max(lax.ybe_residual(params, l1, l2) for l1, l2 in pairs)
        report(worst, tol)
    elif args.what == "rll":
        tol = _tolerance(args, cfg, "rll", 1e-12)
        for spin in _spin_list(args, [0.5, 1.0, 1.5, 2.0]):
            rep = build_rep(spin, params)
            pairs = rng.uniform(-2.0, 2.0, size=(args.samples, 2))
            worst = max(lax.rll_residual(params, rep, l1, l2)
                        for l1, l2 in pairs)
            report(worst, tol, spin=spin)
    elif args.what == "rtt":
        tol = _tolerance(args, cfg, "rtt", 1e-10)
        default = [1.0, 1.5] if params.is_rational else [1.0]
        for spin in _spin_list(args, default):
            data = _regime_data(params, spin)
            pairs = rng.uniform(-1.5, 1.5, size=(args.samples, 2))
            worst = max(checks.rtt_residual(params, data, l1, l2)
                        for l1, l2 in pairs)
            report(worst, tol, spin=spin,
                   shifted_spin=data.shifted_spin)
    elif args.what in ("unitarity", "crossing"):
        tol = _tolerance(args, cfg, args.what, 1e-9)
        grid = np.linspace(0.15, 2.0, args.samples)
        matrix_fn = checks.matrix_unitarity_residual \
            if args.what == "unitarity" else checks.matrix_crossing_residual
        scalar_fn = checks.scalar_unitarity_residual \
            if args.what == "unitarity" else checks.scalar_crossing_residual
        for spin in _spin_list(args, [0.5, 1.0, 1.5]):
            data = _regime_data(params, spin)
            worst = max(scalar_fn(params, data, x) for x in grid)
            realizable = data.regime != ATTRACTIVE \
                and data.shifted_spin >= 0.25
            if realizable:
                rep = amp.shifted_spin_rep(params, data)
                tfn = functools.partial(amp.transmission_matrix, params,
                                        data, rep)
                worst = max(worst, max(matrix_fn(tfn, x) for x in grid))
            report(worst, tol, spin=spin, matrix_checked=realizable)
    elif args.what == "casimir":
        tol = _tolerance(args, cfg, "casimir", 1e-12)
        grid = np.linspace(0.0, 1.8, args.samples)
        for spin in _spin_list(args, [0.5, 1.0, 1.5, 2.0]):
            rep = build_rep(spin, params)
            worst = max(checks.m_matrix_casimir_identity(params, rep, x)
                        for x in grid)
            report(worst, tol, spin=spin)
    elif args.what == "defect-spectrum":
        for spin in _spin_list(args, [0.5, 1.0, 1.5, 2.0]):
            rep = build_rep(spin, params)
            rpt = checks.defect_spectrum_report(params, rep, 0.73,
                                                tol=args.tol)
            failed = failed or not rpt.passed
            p = dict(base)
            p.update(rpt.details)
            p.update({"tol": rpt.tolerance, "passed": rpt.passed})
            emitter.emit(_record("verify defect-spectrum", p,
                                 residual=rpt.residual))
            res = checks.defect_spin_spectrum_residual(rep)
            ok = res <= 1e-12
            failed = failed or not ok
            emitter.emit(_record(
                "verify defect-spectrum",
                {**base, "spin": spin, "part": "spin-multiset",
                 "tol": 1e-12, "passed": ok,
                 "multiset": checks.defect_spin_spectrum(rep)},
                residual=res))
    else:  # pragma: no cover - argparse restricts choices
        raise DefectBetheError(f"unknown verify target {args.what!r}")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# amp
# ---------------------------------------------------------------------------

def _amp_point(args, params, data, kind, lam):
    """(product, integral) AmplitudeValue pair at one rapidity; entries
    may be None when the method does not request them."""
    want_p = args.method in ("product", "both")
    want_i = args.method in ("integral", "both")
    prod = integ = None
    if kind == "kink":
        if want_p:
            prod = amp.kink_S_amplitude(params, lam)
        if want_i:
            integ = amp.kink_S_by_integral(params, lam)
    elif kind == "transmission":
        lam_hat = lam - args.theta
        if want_p:
            prod = amp.transmission_amplitude(params, data, lam_hat)
        if want_i:
            integ = amp.transmission_by_integral(params, data, lam_hat)
    elif kind == "breather-s":
        if want_p:
            val = amp.breather_S(args.n1, args.n2, lam, data.gamma)
            prod = sf.AmplitudeValue(val, err=1e-14 * abs(val), terms_used=0)
        if want_i:
            if (args.n1, args.n2) != (1, 1):
                raise DefectBetheError(
                    "the integral route covers the lightest breather only "
                    "(--n1 1 --n2 1)")
            integ = amp.breather_S_by_integral(params, lam)
    elif kind == "breather-t":
        lam_hat = lam - args.theta
        if want_p:
            e1, e2 = data.breather_shifts
            val = amp.breather_T(args.n1, lam_hat, data.gamma, e1, e2)
            prod = sf.AmplitudeValue(val, err=1e-14 * abs(val), terms_used=0)
        if want_i:
            if args.n1 != 1:
                raise DefectBetheError(
                    "the integral route covers the lightest breather only "
                    "(--n1 1)")
            integ = amp.breather_T_by_integral(params, data, lam_hat)
    return prod, integ


def _cmd_amp(args, cfg, emitter):
    params = _model(args)
    tol = _tolerance(args, cfg, "amp", 1e-8)
    data = None
    if args.kind in ("transmission", "breather-t", "breather-s"):
        if args.kind.startswith("breather") and (
                params.is_rational or params.regime != ATTRACTIVE):
            raise DefectBetheError(
                "breathers exist in the attractive trigonometric regime "
                "only; pass --model xxz --regime attractive")
        data = _regime_data(params, args.spin, theta=args.theta)
        if args.branch_m is not None and args.branch_m != data.branch_index:
            raise DefectBetheError(
                f"--branch-m {args.branch_m} contradicts the window for "
                f"spin {args.spin}: the branch index there is "
                f"{data.branch_index}")

    if args.sweep is not None:
        grid = _parse_sweep(args.sweep)
    elif args.lam is not None:
        grid = np.array([args.lam])
    else:
        raise DefectBetheError("need --lambda or --sweep")

    point = functools.partial(_amp_point, args, params, data, args.kind)
    results = _concurrent_map(point, grid)

    base = {"kind": args.kind, "model": args.model, "mu": args.mu,
            "regime": args.regime, "spin": args.spin, "theta": args.theta,
            "n1": args.n1, "n2": args.n2}
    failed = False
    for lam, (prod, integ) in zip(grid, results):
        gap = None
        if prod is not None and integ is not None:
            gap = abs(prod.value - integ.value)
            failed = failed or gap > tol
        for label, av in (("product", prod), ("integral", integ)):
            if av is None:
                continue
            extra = {}
            if gap is not None:
                extra["product_integral_gap"] = float(gap)
            emitter.emit(_record(
                f"amp {args.kind}", {**base, "method": label},
                lam=float(lam), value=av.value, err=av.err, **extra))
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# chain
# ---------------------------------------------------------------------------

def _bae_solutions(chain, M, rng, n_scatter=6):
    """Scan deterministic and seeded starting points, dedupe solutions."""
    seeds = []
    for center in np.linspace(-1.2, 1.2, 7):
        seeds.append([center + 0.17 * k for k in range(M)])
        if M > 1:
            seeds.append(list(spin_chain.string_seed(center, M,
                                                     chain.params)))
    for _ in range(n_scatter):
        seeds.append((rng.uniform(-1.5, 1.5, M)
                      + 1j * rng.uniform(-0.6, 0.6, M)).tolist())
    found = {}
    for seed in seeds:
        try:
            state = spin_chain.solve_bae(chain, M, seeds=seed)
        except DefectBetheError:
            continue
        key = tuple((round(z.real, 8), round(z.imag, 8))
                    for z in state.roots)
        if key not in found:
            found[key] = state
    return [found[k] for k in sorted(found)]


def _cmd_chain(args, cfg, emitter):
    params = _model(args)
    chain = spin_chain.ChainSpec(N=args.N, defect_spin=args.spin,
                                 params=params, theta=args.theta,
                                 defect_site=args.defect_site)
    chain.check_cap()
    base = {"N": args.N, "defect_site": chain.defect_site,
            "spin": args.spin, "theta": args.theta, "model": args.model,
            "mu": args.mu, "regime": args.regime}

    if args.action == "diagonalize":
        ham = spin_chain.hamiltonian(chain)
        herm = spin_chain.hermiticity_residual(ham)
        evals = np.linalg.eigvals(ham)
        evals = evals[np.argsort(evals.real)]
        for idx, ev in enumerate(evals):
            emitter.emit(_record("chain diagonalize",
                                 {**base, "index": idx}, value=ev))
        emitter.emit(_record("chain diagonalize",
                             {**base, "part": "hermiticity"},
                             residual=herm))
        return 0

    # bae
    tol = _tolerance(args, cfg, "bae", 1e-10)
    rng = np.random.default_rng(args.seed)
    states = _bae_solutions(chain, args.magnons, rng)
    failed = not states
    for s_idx, state in enumerate(states):
        res = spin_chain.bae_residual(chain, state)
        failed = failed or res > tol
        for root in state.roots:
            emitter.emit(_record(
                "chain bae",
                {**base, "magnons": args.magnons, "solution": s_idx,
                 "tol": tol, "passed": res <= tol},
                value=root, residual=res))
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# identity
# ---------------------------------------------------------------------------

def _cmd_identity(args, cfg, emitter):
    rng = np.random.default_rng(args.seed)
    failed = False
    if args.kind == "use1":
        tol = _tolerance(args, cfg, "use1", 1e-8)
        n = args.samples if args.samples else 20
        for mu in rng.uniform(0.05, 9.95, n):
            res = sf.verify_gamma_integral_identity("use1", mu)
            failed = failed or res > tol
            emitter.emit(_record("identity use1",
                                 {"mu_param": float(mu), "tol": tol,
                                  "passed": res <= tol},
                                 residual=res))
    else:
        tol = _tolerance(args, cfg, "use2", 1e-6)
        n = args.samples if args.samples else 10
        for _ in range(n):
            mu = float(rng.uniform(0.3, 4.5))
            beta = float(rng.uniform(0.3, 2.5))
            res = sf.verify_gamma_integral_identity("use2", mu, beta)
            failed = failed or res > tol
            emitter.emit(_record("identity use2",
                                 {"mu_param": mu, "beta_param": beta,
                                  "tol": tol, "passed": res <= tol},
                                 residual=res))
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser plumbing
# ---------------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--model", choices=["xxx", "xxz"], default="xxx")
    sub.add_argument("--mu", type=float, default=None,
                     help="anisotropy for --model xxz, in (0, pi)")
    sub.add_argument("--regime", choices=[REPULSIVE, ATTRACTIVE],
                     default=None)
    sub.add_argument("--tol", type=float, default=None,
                     help="override the default tolerance")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--format", choices=["json", "csv"], default="json")
    sub.add_argument("--config", default=None,
                     help="key=value file with tol_<name> defaults")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="defectbethe",
        description="Integrable spin chains with one transmitting defect: "
                    "verification suites, amplitudes, finite chains.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_verify = subs.add_parser("verify", help="run a residual suite")
    p_verify.add_argument("what", choices=["ybe", "rll", "rtt", "unitarity",
                                           "crossing", "casimir",
                                           "defect-spectrum"])
    p_verify.add_argument("--spin", type=float, action="append",
                          help="repeatable; defaults depend on the check")
    p_verify.add_argument("--samples", type=int, default=20)
    _add_common(p_verify)
    p_verify.set_defaults(fn=_cmd_verify)

    p_amp = subs.add_parser("amp", help="evaluate an amplitude")
    p_amp.add_argument("kind", choices=["kink", "transmission",
                                        "breather-s", "breather-t"])
    p_amp.add_argument("--lambda", dest="lam", type=float, default=None)
    p_amp.add_argument("--sweep", default=None, metavar="MIN:MAX:STEPS")
    p_amp.add_argument("--spin", type=float, default=0.5)
    p_amp.add_argument("--theta", type=float, default=0.0)
    p_amp.add_argument("--branch-m", type=int, default=None,
                       help="expected branch index; checked, not forced")
    p_amp.add_argument("--n1", type=int, default=1)
    p_amp.add_argument("--n2", type=int, default=1)
    p_amp.add_argument("--method", choices=["product", "integral", "both"],
                       default="product")
    _add_common(p_amp)
    p_amp.set_defaults(fn=_cmd_amp)

    p_chain = subs.add_parser("chain", help="finite-chain computations")
    p_chain.add_argument("action", choices=["diagonalize", "bae"])
    p_chain.add_argument("--N", type=int, required=True,
                         help="number of bulk spin-1/2 sites")
    p_chain.add_argument("--defect-site", type=int, default=None)
    p_chain.add_argument("--spin", type=float, default=0.5)
    p_chain.add_argument("--theta", type=float, default=0.0)
    p_chain.add_argument("--magnons", type=int, default=1)
    _add_common(p_chain)
    p_chain.set_defaults(fn=_cmd_chain)

    p_id = subs.add_parser("identity", help="gamma integral identities")
    p_id.add_argument("kind", choices=["use1", "use2"])
    p_id.add_argument("--samples", type=int, default=None)
    _add_common(p_id)
    p_id.set_defaults(fn=_cmd_identity)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _read_config(args.config)
        emitter = Emitter(args.format)
        return args.fn(args, cfg, emitter)
    except BrokenPipeError:
        # downstream consumer closed the pipe (e.g. piping into head);
        # point stdout at devnull so interpreter shutdown stays quiet
        try:
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        except (OSError, ValueError):
            pass  # stdout not a real fd (test capture); nothing to silence
        return 141
    except (DefectBetheError, ValueError, OSError) as exc:
        err = {"command": args.command, "error": str(exc),
               "params": {k: v for k, v in vars(args).items()
                          if k not in ("fn",) and not callable(v)}}
        sys.stderr.write(json.dumps(err, default=str) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
