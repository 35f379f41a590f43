"""kdscope command-line interface.

Subcommands: ``bases`` (construct and emit a transition matrix), ``kd``
(KD analysis of one state), ``incompat`` (incompatibility report),
``diagram`` (uncertainty diagram as CSV/JSON/SVG), ``verify`` (self-check
suite).  Exit codes: 0 success, 1 validation/computation error, 2 usage
error.  The environment variable KDSCOPE_SEED overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from . import __version__, serialize
from .bases import BasisSpec, TransitionMatrix, dft, mub4, perturbed, spin_transition
from .diagram import (
    CLASSICAL,
    EMPTY,
    SearchConfig,
    dft_min_states,
    mub4_edge_states,
    uncertainty_diagram,
)
from .errors import KDScopeError
from .incompat import (
    coinc_witness,
    incompat_report,
    is_coinc,
    is_stroinc,
    min_support_uncertainty,
)
from .kdcore import (
    StateVector,
    bound_report,
    is_kd_classical,
    kd_distribution,
    nonclassicality,
    random_state,
    support,
)
from .render import svg_document

_PRIMES = {2, 3, 5, 7, 11}


def parse_complex(text: str) -> complex:
    """Parse ``RE+IMi`` style complex literals, e.g. ``0+1i``, ``-0.5-0.8660254i``."""
    t = text.strip().replace(" ", "").replace("i", "j").replace("I", "j")
    t = re.sub(r"(?<![0-9.])j", "1j", t)
    try:
        return complex(t)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}") from exc


def parse_spin(text: str) -> float:
    t = text.strip()
    if "/" in t:
        num, den = t.split("/", 1)
        return float(num) / float(den)
    return float(t)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdscope",
        description="Kirkwood-Dirac nonclassicality and support-uncertainty toolkit",
    )
    parser.add_argument("--version", action="version", version=f"kdscope {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_basis: bool = True):
        if with_basis:
            p.add_argument("--basis", choices=["dft", "mub4", "perturbed", "spin", "file"])
            p.add_argument("--dim", type=int)
            p.add_argument("--s", type=parse_complex, help="unit-modulus parameter, RE+IMi")
            p.add_argument("--eps", type=float)
            p.add_argument("--spin", type=parse_spin)
            p.add_argument("--path", help="matrix JSON file (family 'file')")
            p.add_argument("--generator", help="Hermitian generator JSON file (family 'perturbed')")
        p.add_argument("--eta", type=float, default=1e-9, help="support zero tolerance")
        p.add_argument("--tau", type=float, default=1e-9, help="classicality tolerance on Q entries")
        p.add_argument("--tau-class", type=float, default=1e-6, help="classicality threshold on searched minima")
        p.add_argument("--minor-tol", type=float, default=1e-10, help="vanishing-minor tolerance")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=50)
        p.add_argument("--max-iter", type=int, default=2000)
        p.add_argument("--conv-tol", type=float, default=1e-10)
        p.add_argument("--format", choices=["csv", "json", "svg"], default="json")
        p.add_argument("--out", help="output path (default: stdout)")

    p_bases = sub.add_parser("bases", help="construct a transition matrix and emit it as JSON")
    add_common(p_bases)

    p_kd = sub.add_parser("kd", help="KD distribution, supports and bounds of one state")
    add_common(p_kd)
    p_kd.add_argument("--state", help="state JSON file (A-basis coordinates)")

    p_inc = sub.add_parser("incompat", help="overlap extrema, STROINC/COINC, minimal support uncertainty")
    add_common(p_inc)

    p_diag = sub.add_parser("diagram", help="enumerate and classify the uncertainty diagram")
    add_common(p_diag)
    p_diag.add_argument("--grid", action="store_true", help="include EMPTY lattice points")
    p_diag.add_argument("--jobs", type=int, default=1, help="parallel workers for cell classification")

    p_ver = sub.add_parser("verify", help="run the self-check suite")
    add_common(p_ver, with_basis=False)
    return parser


def _basis_spec(ns, parser: argparse.ArgumentParser) -> BasisSpec:
    if ns.basis is None:
        parser.error("--basis is required for this command")
    generator = None
    if ns.generator is not None:
        _, generator = serialize.read_matrix(ns.generator)
    try:
        return BasisSpec(
            family=ns.basis,
            d=ns.dim,
            s=ns.s,
            eps=ns.eps,
            generator=generator,
            spin=ns.spin,
            path=ns.path,
        )
    except KDScopeError as exc:
        parser.error(str(exc))


def _meta(ns, spec: BasisSpec | None) -> dict:
    meta = {
        "tool": "kdscope",
        "version": __version__,
        "command": ns.command,
        "tolerances": {
            "eta": ns.eta,
            "tau": ns.tau,
            "tau_class": ns.tau_class,
            "minor_tol": ns.minor_tol,
        },
        "search": {
            "seed": ns.seed,
            "restarts": ns.restarts,
            "max_iter": ns.max_iter,
            "conv_tol": ns.conv_tol,
        },
    }
    if spec is not None:
        meta["basis"] = spec.describe()
    return meta


def _emit(ns, text: str) -> None:
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _state_record(st: StateVector) -> dict:
    return {"d": st.d, "amps": [[z.real, z.imag] for z in st.amps]}


def _cmd_bases(ns, parser) -> int:
    spec = _basis_spec(ns, parser)
    if ns.format != "json":
        parser.error("bases supports --format json only")
    tm = spec.build()
    _emit(ns, serialize.matrix_document(tm.u, _meta(ns, spec)))
    return 0


def _cmd_kd(ns, parser) -> int:
    spec = _basis_spec(ns, parser)
    if ns.format != "json":
        parser.error("kd supports --format json only")
    if not ns.state:
        parser.error("kd requires --state (state JSON file)")
    tm = spec.build()
    d, amps = serialize.read_state(ns.state)
    st = StateVector(d, amps)
    dist = kd_distribution(tm, st)
    check = is_kd_classical(dist, ns.tau)
    prof = support(tm, st, ns.eta)
    bounds = bound_report(tm, st, ns.eta)
    doc = {
        "meta": _meta(ns, spec),
        "state": _state_record(st),
        "kd_matrix": [[[z.real, z.imag] for z in row] for row in dist.q],
        "marginals_a": [float(x) for x in np.abs(st.amps) ** 2],
        "marginals_b": [float(x) for x in np.abs(st.b_coordinates(tm)) ** 2],
        "ncc": nonclassicality(dist),
        "classical": check.classical,
        "worst_entry": None
        if check.classical
        else {"index": list(check.index), "value": [check.value.real, check.value.imag]},
        "support": {"S": list(prof.S), "T": list(prof.T), "n_a": prof.n_a, "n_b": prof.n_b},
        "bounds": {
            "n_a": bounds.n_a,
            "n_b": bounds.n_b,
            "product_lower_bound": bounds.product_lower_bound,
            "ncc": bounds.ncc,
            "ncc_upper_bound": bounds.ncc_upper_bound,
            "edge_value": bounds.edge_value,
        },
    }
    _emit(ns, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_incompat(ns, parser) -> int:
    spec = _basis_spec(ns, parser)
    if ns.format != "json":
        parser.error("incompat supports --format json only")
    tm = spec.build()
    report = incompat_report(tm, ns.eta, ns.minor_tol)
    doc = {"meta": _meta(ns, spec)}
    doc.update(report.to_json_dict())
    _emit(ns, json.dumps(doc, indent=2) + "\n")
    return 0


def _fmt_ncc(x: float) -> str:
    return "" if math.isnan(x) else format(x, ".17g")


def _cmd_diagram(ns, parser) -> int:
    spec = _basis_spec(ns, parser)
    tm = spec.build()
    cfg = SearchConfig(seed=ns.seed, restarts=ns.restarts, max_iter=ns.max_iter, conv_tol=ns.conv_tol)
    diagram = uncertainty_diagram(
        tm,
        cfg,
        eta=ns.eta,
        tau_exact=ns.tau,
        tau_class=ns.tau_class,
        jobs=ns.jobs,
    )
    meta = _meta(ns, spec)
    rows = list(diagram.points)
    if ns.grid:
        realized = diagram.realized()
        for n_a in range(1, diagram.d + 1):
            for n_b in range(1, diagram.d + 1):
                if (n_a, n_b) not in realized:
                    from .diagram import DiagramPoint

                    rows.append(DiagramPoint(n_a, n_b, EMPTY, float("nan"), 0))
        rows.sort(key=lambda p: (p.n_a, p.n_b))
    if ns.format == "csv":
        lines = [f"# kdscope {__version__}", "# " + json.dumps(meta, sort_keys=True)]
        lines.append("n_a,n_b,classification,min_ncc_found,cells")
        for p in rows:
            lines.append(f"{p.n_a},{p.n_b},{p.classification},{_fmt_ncc(p.min_ncc_found)},{p.cells}")
        _emit(ns, "\n".join(lines) + "\n")
    elif ns.format == "json":
        doc = {
            "meta": meta,
            "d": diagram.d,
            "hyperbola_constant": diagram.hyperbola_constant,
            "edge": diagram.edge,
            "n_min": diagram.n_min,
            "points": [
                {
                    "n_a": p.n_a,
                    "n_b": p.n_b,
                    "classification": p.classification,
                    "min_ncc_found": None if math.isnan(p.min_ncc_found) else p.min_ncc_found,
                    "cells": p.cells,
                    "witnesses": {
                        "classical": None
                        if p.classical_witness is None
                        else _state_record(p.classical_witness),
                        "nonclassical": None
                        if p.nonclassical_witness is None
                        else _state_record(p.nonclassical_witness),
                    },
                }
                for p in rows
            ],
        }
        _emit(ns, json.dumps(doc, indent=2) + "\n")
    else:
        _emit(ns, svg_document(diagram, meta, grid=ns.grid))
    return 0


def _verify_checks(seed: int):
    sqrt2 = math.sqrt(2.0)

    def dft_dichotomy():
        return all(is_coinc(dft(d)) == (d in _PRIMES) for d in range(2, 8))

    def mub4_not_coinc():
        u = mub4(1j)
        if is_coinc(u):
            return False
        pair = coinc_witness(u)
        return pair is not None and len(pair[0]) + len(pair[1]) <= 4

    def theorem2_crosscheck():
        mats = [dft(d) for d in range(2, 7)]
        mats += [mub4(1j), perturbed(mub4(1j), 0.1)]
        mats += [spin_transition(s / 2) for s in range(1, 5)]
        return all(is_coinc(u) == (min_support_uncertainty(u) == u.d + 1) for u in mats)

    def wigner_parity():
        for s in (1, 2, 3, 4):
            u = spin_transition(s).u
            row0 = u[s]
            for b in range(2 * s + 1):
                m = s - b
                if (s - m) % 2 == 1 and abs(row0[b]) > 1e-12:
                    return False
        return True

    def closed_form_states():
        plus, _ = mub4_edge_states(1j)
        ncc = nonclassicality(kd_distribution(mub4(1j), plus))
        if abs(ncc - (1 + sqrt2) / 2) > 1e-9:
            return False
        for d, p, q in ((4, 2, 2), (6, 2, 3), (6, 3, 2)):
            u = dft(d)
            for m in range(p):
                for s in range(q):
                    st = dft_min_states(d, p, q, m, s)
                    if abs(nonclassicality(kd_distribution(u, st)) - 1.0) > 1e-10:
                        return False
        return True

    def bound_suite():
        mats = [dft(5), dft(6), mub4(1j)]
        for idx, u in enumerate(mats):
            stro = is_stroinc(u)
            for k in range(100):
                st = random_state(u.d, seed + 1000 * idx + k)
                rep = bound_report(u, st)  # raises on any bound violation
                prof = support(u, st)
                if stro and prof.total > u.d + 1:
                    if is_kd_classical(kd_distribution(u, st)).classical:
                        return False
        return True

    return [
        ("dft-coinc-prime-dichotomy", dft_dichotomy),
        ("mub4-vanishing-minor-witness", mub4_not_coinc),
        ("coinc-iff-minimal-support", theorem2_crosscheck),
        ("wigner-parity-zeros", wigner_parity),
        ("closed-form-states", closed_form_states),
        ("support-bounds-and-edge", bound_suite),
    ]


def _cmd_verify(ns, parser) -> int:
    failures = 0
    for name, check in _verify_checks(ns.seed):
        try:
            ok = check()
        except KDScopeError as exc:
            ok = False
            print(f"FAIL {name}: {exc}")
            failures += 1
            continue
        print(("PASS" if ok else "FAIL") + f" {name}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1


_COMMANDS = {
    "bases": _cmd_bases,
    "kd": _cmd_kd,
    "incompat": _cmd_incompat,
    "diagram": _cmd_diagram,
    "verify": _cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    env_seed = os.environ.get("KDSCOPE_SEED")
    if env_seed is not None:
        try:
            ns.seed = int(env_seed)
        except ValueError:
            print(f"error: KDSCOPE_SEED must be an integer, got {env_seed!r}", file=sys.stderr)
            return 2
    try:
        return _COMMANDS[ns.command](ns, parser)
    except SystemExit as exc:  # parser.error inside a handler
        return int(exc.code or 0)
    except KDScopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
