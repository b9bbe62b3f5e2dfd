"""Command-line surface: solve, convert, export, gen, check, oracle, bench.

Result protocol: ``s SATISFIABLE|UNSATISFIABLE|UNKNOWN`` with a ``v`` model
line for SAT; process exit codes 10 (SAT), 20 (UNSAT), 0 (other), 1 (usage
or input error).  Statistics are printed as ``c`` comment lines.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from multiprocessing import Pool
from pathlib import Path

from .anf import AnfParseError, parse_anf
from .convert import DEFAULT_BUDGET, DEFAULT_SEED, system_to_2xnf, xnf_to_2xnf
from .encode import export_cnf, export_cnfxor
from .generate import GenSpec, gen_random
from .igs import preprocess, trivial_igs
from .oracle import brute_force_solve, count_models
from .solver import SAT, UNSAT, SolveResult, SolverConfig, dpll_solve, verify_model
from .xnf import XnfFormula, XnfParseError, parse_xnf, write_xnf

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_OTHER = 0
EXIT_USAGE = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_formula(path: str) -> XnfFormula:
    return parse_xnf(Path(path).read_text())


def _print_stats(result: SolveResult) -> None:
    st = result.stats
    print(f"c decisions {st.decisions}")
    print(f"c propagations {st.propagations}")
    print(f"c learned {st.learned}")
    print(f"c depth {st.peak_depth}")
    print(f"c seconds {st.seconds:.3f}")


def _print_result(result: SolveResult, num_vars: int) -> int:
    if result.status == SAT:
        print("s SATISFIABLE")
        lits = [str(i + 1) if b else str(-(i + 1)) for i, b in enumerate(result.model[:num_vars])]
        print("v " + " ".join(lits) + " 0")
        return EXIT_SAT
    if result.status == UNSAT:
        print("s UNSATISFIABLE")
        return EXIT_UNSAT
    print("s UNKNOWN")
    return EXIT_OTHER


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        heuristic=args.heuristic,
        extended_igs=args.extended_igs,
        preprocess=args.preprocess,
        edge_extension=args.edge_ext,
        use_tfls=not args.no_tfls,
        timeout=args.timeout,
    )


def _cmd_solve(args) -> int:
    formula = _read_formula(args.input)
    base_vars = formula.num_vars
    if formula.max_clause_width > 2:
        formula = xnf_to_2xnf(formula)
    cfg = _solver_config(args)
    if args.dot:
        igs = trivial_igs(formula, extended=cfg.extended_igs)
        if cfg.preprocess:
            preprocess(igs, edge_extension=cfg.edge_extension)
        Path(args.dot).write_text(igs.to_dot())
    result = dpll_solve(formula, cfg)
    _print_stats(result)
    if result.status == SAT and args.verify:
        original = _read_formula(args.input)
        if not verify_model(original, result.model[: original.num_vars]):
            print("c verification FAILED", file=sys.stderr)
            return EXIT_USAGE
        print("c verified")
    return _print_result(result, base_vars)


def _cmd_convert(args) -> int:
    text = Path(args.input).read_text()
    kind = "anf" if args.anf else "xnf" if args.xnf else None
    if kind is None:
        kind = "anf" if args.input.endswith(".anf") else "xnf"
    if kind == "anf":
        polys = parse_anf(text)
        formula, quad = system_to_2xnf(
            polys, share_relations=not args.no_share, budget=args.budget, seed=args.seed
        )
        if args.map:
            Path(args.map).write_text("\n".join(quad.map_lines()) + "\n")
    else:
        formula = xnf_to_2xnf(parse_xnf(text))
        if args.map:
            Path(args.map).write_text("")
    Path(args.output).write_text(write_xnf(formula))
    return EXIT_OTHER


def _cmd_export(args) -> int:
    formula = _read_formula(args.input)
    if args.format == "cnfxor":
        out = export_cnfxor(formula)
    else:
        out = export_cnf(formula, cutting=args.cutting)
    Path(args.output).write_text(out)
    return EXIT_OTHER


def _cmd_gen(args) -> int:
    spec = GenSpec(n=args.n, m=args.m, force_sat=args.sat, seed=args.seed)
    formula, _planted = gen_random(spec)
    header = f"xnfkit gen n={args.n} m={args.m} sat={int(args.sat)} seed={args.seed}"
    Path(args.output).write_text(write_xnf(formula, comments=[header]))
    return EXIT_OTHER


def _parse_model_file(text: str, num_vars: int) -> tuple[int, ...]:
    lits: list[int] = []
    v_lines = [l for l in text.splitlines() if l.startswith("v")]
    tokens = []
    if v_lines:
        for l in v_lines:
            tokens.extend(l.split()[1:])
    else:
        tokens = text.split()
    for tok in tokens:
        val = int(tok)
        if val != 0:
            lits.append(val)
    assignment = [None] * num_vars
    for lit in lits:
        v = abs(lit)
        if not 1 <= v <= num_vars:
            raise ValueError(f"literal {lit} out of range")
        assignment[v - 1] = 1 if lit > 0 else 0
    if any(a is None for a in assignment):
        raise ValueError("model does not assign every variable")
    return tuple(assignment)


def _cmd_check(args) -> int:
    formula = _read_formula(args.input)
    model = _parse_model_file(Path(args.model).read_text(), formula.num_vars)
    if verify_model(formula, model):
        print("c model valid")
        return EXIT_SAT
    print("c model invalid")
    return EXIT_UNSAT


def _cmd_oracle(args) -> int:
    formula = _read_formula(args.input)
    if args.count:
        print(f"c models {count_models(formula)}")
    result = brute_force_solve(formula)
    return _print_result(result, formula.num_vars)


def _bench_one(task) -> tuple[str, str, float, int, int, int]:
    path, heuristic, timeout = task
    formula = parse_xnf(Path(path).read_text())
    if formula.max_clause_width > 2:
        formula = xnf_to_2xnf(formula)
    cfg = SolverConfig(heuristic=heuristic, timeout=timeout)
    result = dpll_solve(formula, cfg)
    st = result.stats
    return (
        Path(path).name,
        result.status,
        st.seconds,
        st.decisions,
        st.learned,
        st.peak_depth,
    )


def _cmd_bench(args) -> int:
    paths = sorted(str(p) for p in Path(args.directory).glob("*.xnf"))
    if not paths:
        print("c no .xnf instances found", file=sys.stderr)
        return EXIT_USAGE
    tasks = [(p, args.heuristic, args.timeout) for p in paths]
    if args.jobs > 1:
        with Pool(args.jobs) as pool:
            rows = pool.map(_bench_one, tasks)
    else:
        rows = [_bench_one(t) for t in tasks]
    rows.sort(key=lambda r: r[0])
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["instance", "status", "seconds", "decisions", "learned", "depth"])
    for name, status, seconds, decisions, learned, depth in rows:
        writer.writerow([name, status, f"{seconds:.3f}", decisions, learned, depth])
    out = buf.getvalue()
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OTHER


def _build_parser() -> _Parser:
    parser = _Parser(prog="xnfkit", description="2-XNF SAT toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an XNF instance")
    p.add_argument("input")
    p.add_argument("--heuristic", choices=["maxreach", "maxbottleneck", "maxpath"],
                   default="maxbottleneck")
    p.add_argument("--no-tfls", action="store_true")
    p.add_argument("--preprocess", action="store_true")
    p.add_argument("--edge-ext", action="store_true")
    p.add_argument("--extended-igs", action="store_true")
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--dot", default=None, help="dump the initial IGS as DOT")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("convert", help="convert ANF or k-XNF to 2-XNF")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--anf", action="store_true")
    p.add_argument("--xnf", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--no-share", action="store_true")
    p.add_argument("--map", default=None, help="write fresh-variable products here")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("export", help="export 2-XNF to CNF-XOR or CNF")
    p.add_argument("input")
    p.add_argument("--format", choices=["cnfxor", "cnf"], required=True)
    p.add_argument("--cutting", type=int, default=5)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("gen", help="generate a random 2-XNF instance")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--sat", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("check", help="verify a model against an instance")
    p.add_argument("input")
    p.add_argument("model")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("oracle", help="brute-force solve (small instances)")
    p.add_argument("input")
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("bench", help="run a directory of instances, emit CSV")
    p.add_argument("directory")
    p.add_argument("--heuristic", choices=["maxreach", "maxbottleneck", "maxpath"],
                   default="maxbottleneck")
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_bench)

    return parser


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (XnfParseError, AnfParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
