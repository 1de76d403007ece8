"""``modlattice`` command line: proofs, series dumps, and lattice reports."""
from __future__ import annotations

import argparse
import json
import math
import random
import sys

from .qseries import DEFAULT_ORDER, PrecisionError, SeriesId

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, text: str, payload: dict | None = None) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if args.json and payload is not None:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=False)
            fh.write("\n")


def _series_payload(label: str, f) -> dict:
    return {"series": label, "precision": f.prec, "text": f.to_text()}


# -- subcommands -------------------------------------------------------------

def cmd_prove(args) -> int:
    from .prover import SUPPORTED_RANKS, verify_case

    if args.rank not in SUPPORTED_RANKS:
        raise UsageError(f"prove: rank {args.rank} is not supported (choose from {', '.join(map(str, SUPPORTED_RANKS))})")
    try:
        cert = verify_case(args.rank, args.order)
    except ValueError as exc:
        raise UsageError(f"prover.verify_case: {exc}") from exc
    lines = [f"rank {args.rank}: {cert.verdict}", f"survivors: {cert.survivors}"]
    lines += [f"  step {st['name']}" for st in cert.steps]
    _emit(args, "\n".join(lines), cert.to_json())
    return EXIT_OK if cert.proven else EXIT_FAIL


def cmd_qexp(args) -> int:
    try:
        sid = SeriesId.parse(args.series)
        f = sid.build(args.order)
    except ValueError as exc:
        raise UsageError(f"qseries: {exc}") from exc
    _emit(args, f.to_text(), _series_payload(args.series, f))
    return EXIT_OK


def cmd_forms(args) -> int:
    from .modforms import cusp_basis

    try:
        basis = cusp_basis(args.weight, args.order)
    except ValueError as exc:
        raise UsageError(f"modforms.cusp_basis: {exc}") from exc
    chunks, payload = [], {"weight": args.weight, "precision": args.order, "forms": []}
    for i, f in enumerate(basis.forms, 1):
        chunks.append(f"# f{i} (leading q^{f.valuation()})\n{f.to_text()}")
        payload["forms"].append(_series_payload(f"f{i}", f))
    _emit(args, "".join(chunks), payload)
    return EXIT_OK


def cmd_eigen(args) -> int:
    from .modforms import (
        eigen_split_weight26,
        hecke_recurrence_holds,
        multiplicative_holds,
        pseudo_eigen_check,
    )

    split = eigen_split_weight26(args.order)
    pseudo = pseudo_eigen_check(args.imax, args.order)
    ok = pseudo.ok and split.pseudo.check()
    lines = [f"precision used: split {split.precision}, pseudo-eigenform {pseudo.precision}"]
    payload = {"precision": {"split": split.precision, "pseudo": pseudo.precision}, "forms": {}}
    for name, h in (("h1", split.h1), ("h2", split.h2)):
        laws = hecke_recurrence_holds(h, 3) and multiplicative_holds(h)
        ok = ok and laws
        eig = {str(p): str(v) for p, v in sorted(h.hecke_eigenvalues.items())}
        lines.append(f"{name}: " + ", ".join(f"T{p}={v}" for p, v in eig.items()) + f" laws={'ok' if laws else 'FAIL'}")
        payload["forms"][name] = {"eigenvalues": eig, "laws": laws, "expansion": h.expansion.to_text()}
    lines.append(f"scale: {split.scale}")
    lines.append(f"a(2^i)=0 and a(3*2^i)=2^(12i) for i<= {args.imax}: {'ok' if pseudo.ok else 'FAIL'}")
    payload.update(scale=str(split.scale), trace=str(split.trace), det=str(split.det), pseudo=pseudo.to_json(), ok=ok)
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_zonal(args) -> int:
    from .zonal import zonal_coeffs

    try:
        z = zonal_coeffs(args.dim, args.degree)
    except ValueError as exc:
        raise UsageError(f"zonal.zonal_coeffs: {exc}") from exc
    coeffs = [f"{c.numerator}/{c.denominator}" for c in z]
    _emit(args, "\n".join(coeffs), {"dim": args.dim, "degree": args.degree, "coefficients": coeffs})
    return EXIT_OK


def cmd_config(args) -> int:
    from .configsys import CaseSpec, analyse_s, feasible_s_range

    try:
        case = CaseSpec.for_rank(args.rank)
    except ValueError as exc:
        raise UsageError(f"configsys.CaseSpec: {exc}") from exc
    if args.order <= case.m0 + 2:
        raise UsageError(f"config: --order must exceed {case.m0 + 2} for rank {args.rank}")
    payload = {"case": case.to_json(), "precision": args.order}
    if args.s is None:
        rng = feasible_s_range(case)
        payload["range"] = rng.to_json()
        text = f"rank {args.rank}: survivors {rng.survivors}"
    else:
        if args.s % 2 or args.s <= 0:
            raise UsageError("config: --s must be a positive even integer")
        br = analyse_s(case, args.s)
        payload["system"] = br.solution.system.to_json()
        payload["solution"] = br.solution.to_json()
        payload["verdict"] = br.to_json()
        text = json.dumps(payload, indent=2)
    _emit(args, text if args.s is not None else text + "\n" + json.dumps(payload["range"], indent=2), payload)
    return EXIT_OK


def _lattice(spec: str):
    from . import latoracle

    builtin = {"bw16": latoracle.bw16, "d4": latoracle.d4}
    if spec in builtin:
        return builtin[spec]()
    if spec.startswith("z") and spec[1:].isdigit():
        return latoracle.zn(int(spec[1:]))
    try:
        return latoracle.Lattice.from_file(spec)
    except OSError as exc:
        raise UsageError(f"latoracle.Lattice.from_file: {exc}") from exc


def cmd_oracle(args) -> int:
    from .configsys import CaseSpec, ShellVar, cross_theta_relations, moment_equations
    from .latoracle import (
        check_relations,
        design_defect,
        modularity_evidence,
        moment_sums,
        random_direction,
        theta_direct,
    )
    from .qseries import extremal_theta

    try:
        L = _lattice(args.lattice)
    except ValueError as exc:
        raise UsageError(f"latoracle.Lattice: {exc}") from exc
    checks: list[dict] = []

    def record(name, passed, **info):
        checks.append({"check": name, "passed": passed, **{k: str(v) for k, v in info.items()}})

    mod_prec = min(args.order, 8)
    ev = modularity_evidence(L, mod_prec)
    record("modularity", ev.passed, precision=mod_prec, note=ev.note)
    report = {"lattice": L.name, "rank": L.n, "seed": args.seed, "modularity": ev.to_json()}

    if ev.passed and L.n % 4 == 0 and L.n >= 8:
        case = CaseSpec.for_rank(L.n)
        m0, top = case.m0, case.m0 + 2
        prec = min(args.order, top + 1)
        theta = theta_direct(L, prec)
        ext = extremal_theta(L.n, prec)
        record("extremal-theta", theta == ext, precision=prec)
        report["theta"] = [str(c) for c in theta.coefficients()]
        shell = L.shell(m0)
        rng = random.Random(args.seed)
        for d in (2, 4, 6, 8):
            defect = design_defect(shell, d, args.trials, rng.randrange(2**32))
            expect_zero = d <= case.design_strength - 1
            record(f"design-defect d={d}", (defect == 0) == expect_zero, defect=defect, expected="0" if expect_zero else "nonzero")
        # integral x' in L for configuration moments
        xp = [rng.randint(-2, 2) for _ in range(L.n)]
        while not any(xp):
            xp = [rng.randint(-2, 2) for _ in range(L.n)]
        s = L.norm(xp)
        kmax = case.t
        eqs = moment_equations(case, ShellVar("M", "L", m0, math.isqrt(int(m0 * s))), s, kmax)
        got = moment_sums(L, xp, m0, kmax)
        for k, eq in enumerate(eqs):
            record(f"moment k={k}", got[k] == eq.rhs, computed=got[k], predicted=eq.rhs)
        Lp = L.rescaled_dual()
        for d in (8, 10):
            rels = cross_theta_relations(L.n, d, m0, range(m0, top + 1, 2), range(m0, top + 1, 2))
            for _ in range(args.trials):
                xq = random_direction(L.n, rng)
                vals = check_relations(L, xq, d, rels, top + 1, Lp)
                record(f"cross-theta d={d}", all(v == 0 for v in vals), direction=[str(v) for v in xq], relations=len(rels))
    else:
        # no design strength to compare against: report the defects only
        norms = [m for m in range(1, 9) if L.shell(m).vectors]
        if norms:
            shell = L.shell(norms[0])
            for d in (2, 4, 6):
                defect = design_defect(shell, d, args.trials, args.seed)
                record(f"design-defect d={d} (norm {shell.norm})", None, defect=defect)

    report["checks"] = checks
    tag = {True: "PASS", False: "FAIL", None: "INFO"}
    lines = []
    for c in checks:
        extra = f" = {c['defect']}" if c["passed"] is None else ""
        lines.append(f"{tag[c['passed']]} {c['check']}{extra}")
    _emit(args, "\n".join(lines), report)
    return EXIT_OK if all(c["passed"] is not False for c in checks) else EXIT_FAIL


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="series precision (default %(default)s)")
    common.add_argument("--json", metavar="PATH", help="also write a JSON report to PATH")

    p = argparse.ArgumentParser(prog="modlattice", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("prove", parents=[common], help="run a case and emit a certificate")
    sp.add_argument("--rank", type=int, required=True)
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("qexp", parents=[common], help="dump a q-expansion")
    sp.add_argument("--series", required=True, help="delta16, thetaD4, phi24, bigDelta1, bigDelta2 or extremal:N")
    sp.set_defaults(func=cmd_qexp)

    sp = sub.add_parser("forms", parents=[common], help="echelon cusp basis of a weight")
    sp.add_argument("--weight", type=int, required=True)
    sp.set_defaults(func=cmd_forms)

    sp = sub.add_parser("eigen", parents=[common], help="weight-26 eigen split and pseudo-eigenform laws")
    sp.add_argument("--imax", type=int, default=5)
    sp.set_defaults(func=cmd_eigen)

    sp = sub.add_parser("zonal", parents=[common], help="zonal harmonic coefficients")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.set_defaults(func=cmd_zonal)

    sp = sub.add_parser("config", parents=[common], help="assemble and solve configuration systems")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--s", type=int)
    sp.set_defaults(func=cmd_config)

    sp = sub.add_parser("oracle", parents=[common], help="enumeration checks on a concrete lattice")
    sp.add_argument("--lattice", required=True, help="bw16, d4, zN or a Gram file path")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=3)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.order < 1:
        parser.error("--order must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"modlattice {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"modlattice {args.command}: precision error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
