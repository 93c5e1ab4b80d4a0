"""zuslab command line.

Exit codes: 0 the property holds, 1 it fails on well-formed input,
2 the input could not be read or validated.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import os
import sys

import numpy as np

from . import constructions as C
from . import objects as O
from .algebra import DEFAULT_SEED, block_algebra, block_structure, generate_algebra, wedderburn_decompose
from .cpmaps import is_zus, lambda_map
from .errors import BlockStructureDefect, NotAZus, ZusError
from .jsonio import SCHEMA_VERSION, ProblemFile, load_problem, to_jsonable
from .linalg import DEFAULT_TOL, haar_unitary, proj, random_density
from .normal_form import a_zus_check, compute_normal_form
from .rigidity import verify_rigidity
from .steering import assemblage, bob_decoder, decoder_confusion, decoder_ranks, perfect_steering_check

log = logging.getLogger("zuslab")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def resolve_seed(args, problem: ProblemFile | None = None) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    if problem is not None and problem.seed is not None:
        return problem.seed
    env = os.environ.get("ZUSLAB_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"ZUSLAB_SEED={env!r} is not an integer") from None
    return DEFAULT_SEED


def _load(args) -> ProblemFile:
    tol = None
    if args.tol is not None:
        tol = DEFAULT_TOL.replace(eq_tol=args.tol)
    try:
        return load_problem(args.file, tol)
    except OSError as exc:
        raise InputError(str(exc)) from None


def _families(problem: ProblemFile, name: str | None) -> dict:
    if name is None:
        return problem.pvm_families
    if name not in problem.pvm_families:
        raise InputError(f"no family named {name!r}; available: {sorted(problem.pvm_families)}")
    return {name: problem.pvm_families[name]}


def _union(fams: dict) -> O.PvmFamily:
    pvms = [p for f in fams.values() for p in f]
    return O.PvmFamily(tuple(pvms), None, "+".join(fams))


def _emit(args, report: dict, lines: list[str]):
    if args.json:
        report = {"command": args.command, **report,
                  "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")}
        print(json.dumps(to_jsonable(report), indent=1, sort_keys=False))
    else:
        print("\n".join(lines))


def _fmt(x: float) -> str:
    return f"{x:.3e}" if abs(x) < 1e-3 and x != 0 else f"{x:.6g}"


def _algebra_label(alg, d: int) -> str:
    return f"full M{d}" if alg.dim == d * d else f"dim {alg.dim} (proper)"


# -- commands ---------------------------------------------------------------


def cmd_check_zus(args) -> int:
    problem = _load(args)
    L = lambda_map(problem.state, problem.tolerances)
    fams = _families(problem, args.family)
    lines = ["family\tpvm\tverdict\tworst_overlap\tfailing_pair"]
    out, all_ok, plots = {}, True, {}
    for fname, fam in fams.items():
        rows = []
        ok = True
        for i, pvm in enumerate(fam):
            v = is_zus(L, pvm)
            ok &= v.passed
            pname = pvm.name or str(i)
            plots[f"{fname}/{pname}"] = v
            lines.append(f"{fname}\t{pname}\t{'ZUS' if v.passed else 'FAIL'}\t{_fmt(v.worst_overlap)}\t"
                         f"{'' if v.failing_pair is None else '(' + ','.join(v.failing_pair) + ')'}")
            rows.append({"pvm": pname, "zus": v.passed, "worst_overlap": v.worst_overlap,
                         "failing_pair": v.failing_pair})
        out[fname] = {"common_zus": ok, "members": rows}
        lines.append(f"{fname}\tcommon\t{'ZUS' if ok else 'FAIL'}")
        all_ok &= ok
    report = {"families": out, "common_zus": all_ok}
    if args.plot:
        from .plotting import overlap_figure
        report["figures"] = [str(overlap_figure(plots, args.plot))]
    _emit(args, report, lines)
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_analyze(args) -> int:
    problem = _load(args)
    seed = resolve_seed(args, problem)
    tol = problem.tolerances
    st = problem.state
    fams = _families(problem, args.family)
    fam = _union(fams)
    alg = generate_algebra(fam.projectors(), st.d_a, tol)
    ws = wedderburn_decompose(alg, tol, seed)
    rep = verify_rigidity(st, fam, tol, algebra=alg)
    azus = a_zus_check(lambda_map(st, tol), alg, tol)
    steer = perfect_steering_check(assemblage(st, fam), tol)
    if rep.hypotheses_hold:
        verdict = "rigid: pure, maximally entangled" if rep.is_max_entangled else "THEOREM VIOLATION"
    else:
        missing = [k for k, v in (("dims_equal", rep.dims_equal), ("common_zus", rep.common_zus),
                                  ("algebra_full", rep.algebra_full)) if not v]
        verdict = f"rigidity theorem silent ({', '.join(missing)} false)"
    lines = [
        f"algebra\t{_algebra_label(alg, st.d_a)}",
        "blocks\t" + " ".join(f"({n},{m})" for n, m in ws.blocks),
        f"dims_equal\t{rep.dims_equal}",
        f"common_zus\t{rep.common_zus}",
        f"algebra_full\t{rep.algebra_full}",
        f"a_zus\t{azus.is_azus}\thom_defect={_fmt(azus.hom_defect)}\tcommutant_defect={_fmt(azus.commutant_defect)}",
        f"purity\t{_fmt(rep.purity)}",
        f"kraus_rank\t{rep.kraus_rank}",
        f"rho_a_defect\t{_fmt(rep.rho_a_maximally_mixed_defect)}",
        "schmidt\t" + (" ".join(_fmt(s) for s in rep.schmidt_coeffs) if rep.schmidt_coeffs else "n/a (mixed)"),
        f"max_entangled\t{rep.is_max_entangled}",
        f"steering\t{'pass' if steer.passed else 'fail'}",
        f"verdict\t{verdict}",
        f"theorem_violation\t{rep.theorem_violation}",
    ]
    report = {
        "algebra": {"dim": alg.dim, "full": rep.algebra_full, "blocks": [list(b) for b in ws.blocks]},
        "rigidity": rep.to_dict(),
        "a_zus": {"is_azus": azus.is_azus, "hom_defect": azus.hom_defect, "commutant_defect": azus.commutant_defect},
        "steering": {"passed": steer.passed, "settings": {k: v.passed for k, v in steer.settings.items()}},
        "verdict": verdict,
        "seed": seed,
    }
    if args.plot:
        from .plotting import rigidity_figure
        eigs = sorted(np.linalg.eigvalsh(st.reduced_a()), reverse=True)
        report["figures"] = [str(rigidity_figure(rep.schmidt_coeffs, eigs, st.d_a, args.plot))]
    _emit(args, report, lines)
    return EXIT_FAIL if rep.theorem_violation else EXIT_OK


def _observable_algebra(problem: ProblemFile, family: str | None):
    d = problem.state.d_a
    if problem.algebra_generators is not None:
        return generate_algebra(problem.algebra_generators, d, problem.tolerances)
    return generate_algebra(_union(_families(problem, family)).projectors(), d, problem.tolerances)


def cmd_normal_form(args) -> int:
    problem = _load(args)
    seed = resolve_seed(args, problem)
    L = lambda_map(problem.state, problem.tolerances)
    alg = _observable_algebra(problem, args.family)
    try:
        nf = compute_normal_form(L, alg, problem.tolerances, seed)
    except (NotAZus, BlockStructureDefect) as exc:
        _emit(args, {"a_zus": False, **exc.report, "algebra_dim": alg.dim},
              [f"a_zus\tFalse", f"error\t{exc.kind}\t{exc}"] +
              [f"{k}\t{_fmt(v)}" for k, v in exc.details.items() if isinstance(v, float)])
        return EXIT_FAIL
    lines = [f"a_zus\tTrue\thom_defect={_fmt(nf.check.hom_defect)}\tcommutant_defect={_fmt(nf.check.commutant_defect)}",
             f"algebra\t{_algebra_label(alg, problem.state.d_a)}",
             f"support_dim\t{nf.support_dim}",
             "block\tn\tk\ttau_spectrum"]
    for a, b in enumerate(nf.blocks):
        lines.append(f"{a}\t{b.n}\t{b.k}\t" + " ".join(_fmt(x) for x in b.tau_spectrum))
    for a, n, m in nf.omitted:
        lines.append(f"omitted\talgebra block {a} (n={n}, m={m}) acts as zero on supp(rho_B)")
    lines.append(f"lambda_reconstruction_defect\t{_fmt(nf.lambda_defect)}")
    report = {"a_zus": True, "normal_form": nf.to_dict(args.full_output), "seed": seed}
    if args.plot:
        from .plotting import tau_figure
        report["figures"] = [str(tau_figure(report["normal_form"]["blocks"], args.plot))]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_steering(args) -> int:
    problem = _load(args)
    tol = problem.tolerances
    fam = _union(_families(problem, args.family))
    asm = assemblage(problem.state, fam)
    verdict = perfect_steering_check(asm, tol)
    lines = ["setting\toutcome\tprob\trank"]
    settings = {}
    confusions = {}
    for s in asm.settings:
        for lab, e in zip(s.outcomes, s.elements):
            lines.append(f"{s.label}\t{lab}\t{_fmt(float(np.real(np.trace(e))))}\t{np.linalg.matrix_rank(e, 1e-9)}")
    lines.append("setting\tdistinguishable\tworst_overlap\tdecoder_ranks")
    for s in asm.settings:
        v = verdict.settings[s.label]
        entry = {"passed": v.passed, "worst_overlap": v.worst_overlap,
                 "elements": {lab: e for lab, e in zip(s.outcomes, s.elements)}}
        ranks = ""
        if v.passed:
            dec = bob_decoder(asm, s.label, tol)
            entry["decoder_ranks"] = decoder_ranks(dec)
            ranks = ",".join(map(str, entry["decoder_ranks"]))
            confusions[s.label] = (decoder_confusion(asm, s.label, dec), list(dec.labels), list(s.outcomes))
        else:
            entry["failing_pair"] = v.failing_pair
        settings[s.label] = entry
        lines.append(f"{s.label}\t{'pass' if v.passed else 'FAIL'}\t{_fmt(v.worst_overlap)}\t{ranks}")
    report = {"passed": verdict.passed, "settings": settings}
    if args.plot and confusions:
        from .plotting import steering_figure
        report["figures"] = [str(steering_figure(confusions, args.plot))]
    _emit(args, report, lines)
    return EXIT_OK if verdict.passed else EXIT_FAIL


# -- construct ----------------------------------------------------------------


def _parse_blocks(text: str) -> list[tuple[int, int]]:
    try:
        out = []
        for part in text.split(","):
            n, m = part.lower().split("x")
            out.append((int(n), int(m)))
    except ValueError:
        raise InputError(f"--blocks expects a list like '2x2' or '2x1,1x1', got {text!r}") from None
    if not out or any(n < 1 or m < 1 for n, m in out):
        raise InputError("block dimensions must be positive")
    return out


def _density_choice(kind: str, k: int, rng, rank: int | None = None) -> np.ndarray:
    if kind == "pure":
        return proj(np.eye(k)[0])
    if kind == "mixed":
        return np.eye(k) / k
    if kind == "random":
        return random_density(k, rng, rank)
    raise InputError(f"unknown density choice {kind!r}")


def _full_family(d: int, name: str = "ZF") -> O.PvmFamily:
    st = block_structure([(d, 1)])
    pvms = C.sample_pvms(st, 2, np.random.default_rng(0))
    return O.validate_family(pvms, d, name=name)


def _construct(args, rng) -> ProblemFile:
    kind = args.kind
    meta = {"construction": kind}
    if kind == "bell":
        return ProblemFile(O.bell(), {"S1": O.s1(), "S2": O.s2()}, metadata=meta)
    if kind == "mix":
        return ProblemFile(O.mix(), {"S1": O.s1(), "S2": O.s2()}, metadata=meta)
    if kind == "qutrit":
        fam = O.validate_family([O.qutrit_p(), O.qutrit_q()], 3, name="PQ")
        return ProblemFile(O.qutrit_phi3(), {"PQ": fam, "P": O.validate_family([O.qutrit_p()], 3)}, metadata=meta)
    if kind == "proper-subalgebra":
        blocks = _parse_blocks(args.blocks)
        d = sum(n * m for n, m in blocks)
        w = haar_unitary(d, rng) if args.rotate else None
        st = block_structure(blocks, w)
        recipe = C.default_recipe(st, args.block)
        state = C.proper_subalgebra_zus(recipe)
        pvms = C.sample_pvms(st, 2, rng)
        fam = O.validate_family(pvms, d, name="A")
        meta.update(blocks=[list(b) for b in blocks], block=args.block, rotated=bool(args.rotate))
        return ProblemFile(state, {"A": fam}, algebra_generators=list(block_algebra(blocks, w).basis), metadata=meta)
    if kind == "larger-memory":
        sigma = _density_choice(args.sigma, args.k, rng, args.rank)
        state = C.larger_memory_zus(args.d, sigma)
        meta.update(d=args.d, sigma=sigma, sigma_choice=args.sigma)
        return ProblemFile(state, {"ZF": _full_family(args.d)}, metadata=meta)
    if kind == "product-extension":
        base = O.bell() if args.base == "bell" else O.mix()
        omega = _density_choice(args.omega, args.k, rng)
        state = C.product_extension_zus(base, omega)
        meta.update(base=args.base, omega=omega)
        return ProblemFile(state, {"S1": O.s1(), "S2": O.s2()}, metadata=meta)
    if kind == "appendix-c-1":
        omegas = {"pure": proj([1, 0, 0, 0]), "mixed": np.eye(4) / 4, "entangled": O.bell().rho}
        omega = omegas[args.omega] if args.omega in omegas else random_density(4, rng)
        ex = C.appendix_c_example_1(omega)
        lifted = [O.validate_pvm([np.kron(p, np.eye(2)) for p in pvm.projections], labels=pvm.labels, name=pvm.name)
                  for pvm in (O.z_pvm(), O.x_pvm())]
        meta.update(omega=omega, tau=ex.memory)
        return ProblemFile(ex.state, {"A": O.validate_family(lifted, 4, name="A")}, metadata=meta)
    if kind == "appendix-c-2":
        sigma = _density_choice(args.sigma, 2, rng)
        ex = C.appendix_c_example_2(sigma)
        meta.update(sigma=sigma)
        return ProblemFile(ex.state, {"S1": O.s1()}, metadata=meta)
    raise InputError(f"unknown construction {kind!r}")


def cmd_construct(args) -> int:
    seed = resolve_seed(args)
    rng = np.random.default_rng(seed)
    problem = _construct(args, rng)
    problem.seed = seed
    problem.metadata["params"] = {k: v for k, v in vars(args).items()
                                  if k not in ("func", "command", "json", "out") and v is not None}
    text = problem.dumps()
    if args.out:
        with open(args.out, "w") as fp:
            fp.write(text + "\n")
        print(f"wrote\t{args.out}\t{args.kind}")
    else:
        print(text)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

CONSTRUCT_KINDS = ["proper-subalgebra", "larger-memory", "product-extension", "appendix-c-1", "appendix-c-2",
                   "bell", "mix", "qutrit"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=None, help="probe seed (fallback: file, then ZUSLAB_SEED)")
    common.add_argument("--debug", action="store_true")

    analysis = argparse.ArgumentParser(add_help=False, parents=[common])
    analysis.add_argument("file", help="problem file (zuslab/1 JSON)")
    analysis.add_argument("--family", default=None, help="restrict to one named PVM family")
    analysis.add_argument("--tol", type=float, default=None, help="override eq_tol")
    analysis.add_argument("--plot", metavar="DIR", default=None, help="also write figures into DIR")

    parser = argparse.ArgumentParser(prog="zuslab", description="Zero-uncertainty state analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-zus", parents=[analysis], help="per-PVM ZUS verdicts")
    p.set_defaults(func=cmd_check_zus)
    p = sub.add_parser("analyze", parents=[analysis], help="rigidity hypotheses and conclusions")
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("normal-form", parents=[analysis], help="A-ZUS verdict and block normal form")
    p.add_argument("--full-output", action="store_true", help="include the gauge unitary and tau matrices")
    p.set_defaults(func=cmd_normal_form)
    p = sub.add_parser("steering", parents=[analysis], help="assemblage and zero-error decoders")
    p.set_defaults(func=cmd_steering)

    p = sub.add_parser("construct", parents=[common], help="write a problem file for a named construction")
    p.add_argument("kind", choices=CONSTRUCT_KINDS)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--blocks", default="2x2", help="proper-subalgebra block pattern, e.g. 2x2 or 2x1,1x1")
    p.add_argument("--block", type=int, default=0, help="0-based block carrying the entangled factor")
    p.add_argument("--rotate", action="store_true", help="conjugate the block algebra by a Haar unitary")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=2, help="memory / ancilla dimension")
    p.add_argument("--rank", type=int, default=None, help="rank of a random sigma")
    p.add_argument("--sigma", default="mixed", choices=["pure", "mixed", "random"])
    p.add_argument("--omega", default="pure", choices=["pure", "mixed", "random", "entangled"])
    p.add_argument("--base", default="bell", choices=["bell", "mix"])
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.debug else logging.WARNING)
    try:
        return args.func(args)
    except (ZusError, InputError) as exc:
        report = exc.report if isinstance(exc, ZusError) else {"error": "InputError", "message": str(exc)}
        if getattr(args, "json", False):
            print(json.dumps(to_jsonable(report), indent=1))
        else:
            print("error\t" + "\t".join(f"{k}={v}" for k, v in report.items()), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
