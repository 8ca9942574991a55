"""Convergence sweeps from the command line.

    python -m c1superconv --method both --k 3 --mesh perturbed --n 2,4,8,16,32

Exit status: 0 on success, 2 if some system had a condition estimate above
1e14, 1 on failure (tables computed so far are still written).
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import (ERROR_KINDS, RateTable, convergence_rates, h2_norm_diff,
                       sample_errors, sup_diff, tables_to_csv, tables_to_text)
from .assembly import (IllConditionedWarning, SingularSystemError, assemble_collocation,
                       assemble_pg, solve)
from .c1space import C1Function
from .mesh import Perturbed, PiecewiseUniform, Uniform, build_mesh, dump_mesh
from .problems import PROBLEM_IDS, get_problem
from .projection import truncated_projection

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_WARN = 0, 1, 2
PERTURBATION = 0.01


@dataclass
class RunConfig:
    method: str = "pg"
    k: int = 3
    mesh: str = "perturbed"
    Ns: tuple = (2, 4, 8, 16, 32)
    problem: str = "example1"
    seed: int = 0
    breakpoint: float = 2.0 / 3.0
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    quad_points: int | None = None
    format: str = "csv"
    out: str | None = None
    nodes: str = "all"
    debug: bool = False

    def validate(self):
        if self.method not in ("pg", "gauss", "both"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.k < 3:
            raise ValueError("k must be >= 3")
        if any(b <= a for a, b in zip(self.Ns, self.Ns[1:])):
            raise ValueError("N list must be strictly increasing")
        if self.problem not in PROBLEM_IDS:
            raise KeyError(f"unknown problem {self.problem!r}; available: {', '.join(PROBLEM_IDS)}")
        if self.mesh not in ("uniform", "perturbed", "piecewise"):
            raise ValueError(f"unknown mesh family {self.mesh!r}")
        if self.format not in ("csv", "table"):
            raise ValueError(f"unknown format {self.format!r}")

    def mesh_spec(self, N: int):
        if self.mesh == "uniform":
            return Uniform(0.0, 1.0, N)
        if self.mesh == "piecewise":
            return PiecewiseUniform(0.0, 1.0, self.breakpoint, N)
        return Perturbed(0.0, 1.0, N, PERTURBATION, self.seed)


@dataclass
class SweepResult:
    tables: list  # (method, k, RateTable)
    exit_code: int
    messages: list

    def to_csv(self) -> str:
        return tables_to_csv(self.tables)

    def to_text(self) -> str:
        out = []
        for method in dict.fromkeys(m for m, _, _ in self.tables):
            group = [t for m, _, t in self.tables if m == method]
            k = next(k for m, k, _ in self.tables if m == method)
            out.append(tables_to_text(method, k, group))
        return "\n".join(out)

    def table(self, method: str, kind: str) -> RateTable:
        return next(t for m, _, t in self.tables if m == method and t.kind == kind)


def _methods(cfg: RunConfig):
    return ("pg", "gauss") if cfg.method == "both" else (cfg.method,)


def _build_tables(cfg, samples, scale):
    tables = []
    for method in _methods(cfg):
        for kind in ERROR_KINDS:
            pts = [(N, rep[method].get(kind)) for N, rep in samples if method in rep]
            if pts and all(e is not None for _, e in pts):
                tables.append((method, cfg.k, convergence_rates(pts, kind, scale)))
    if cfg.method == "both":
        pts = [(N, rep["superclose"]) for N, rep in samples if "superclose" in rep]
        if pts:
            tables.append(("both", cfg.k, convergence_rates(pts, "superclose", scale)))
    return tables


def run_sweep(cfg: RunConfig) -> SweepResult:
    """Solve, project and sample errors for every N; returns tables and exit code."""
    cfg.validate()
    p = get_problem(cfg.problem, cfg.alpha, cfg.beta, cfg.gamma)
    p.validate()
    scale = float(np.max(np.abs(p.exact.value(np.linspace(*p.domain, 1001)))))
    dump_dir = Path(cfg.out).parent if cfg.out else Path(".")
    samples, messages, code = [], [], EXIT_OK

    for N in cfg.Ns:
        mesh = build_mesh(cfg.mesh_spec(N))
        u_I = truncated_projection(p.exact, mesh, cfg.k)
        rep, sols = {}, {}
        try:
            for method in _methods(cfg):
                sys_ = (assemble_pg(p, mesh, cfg.k, cfg.quad_points) if method == "pg"
                        else assemble_collocation(p, mesh, cfg.k))
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", IllConditionedWarning)
                    res = solve(sys_)
                if res.ill_conditioned:
                    messages.extend(res.messages)
                    code = EXIT_WARN
                u_h = C1Function(mesh, cfg.k, res.coeffs)
                report = sample_errors(u_h, p.exact, method, nodes=cfg.nodes)
                report.h2_diff = h2_norm_diff(u_h, u_I)
                rep[method], sols[method] = report, u_h
                if cfg.debug:
                    stem = f"{cfg.problem}_{method}_k{cfg.k}_N{N}"
                    sys_.dump_triplets(dump_dir / f"{stem}_matrix.txt")
                    u_h.dump_csv(dump_dir / f"{stem}_solution.csv")
            if cfg.debug:
                dump_mesh(mesh, dump_dir / f"mesh_{cfg.mesh}_N{N}.txt")
        except SingularSystemError as exc:
            messages.append(str(exc))
            log.error("%s", exc)
            return SweepResult(_build_tables(cfg, samples, scale), EXIT_ERROR, messages)
        if cfg.method == "both":
            rep["superclose"] = sup_diff(sols["pg"], sols["gauss"])
        samples.append((N, rep))

    return SweepResult(_build_tables(cfg, samples, scale), code, messages)


def _int_list(text: str) -> tuple:
    return tuple(int(v) for v in text.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="c1superconv",
        description="C1 Petrov-Galerkin / Gauss collocation convergence sweeps.",
    )
    ap.add_argument("--method", choices=("pg", "gauss", "both"), default="pg")
    ap.add_argument("--k", type=int, default=3, help="polynomial degree (>= 3)")
    ap.add_argument("--mesh", choices=("uniform", "perturbed", "piecewise"), default="perturbed")
    ap.add_argument("--breakpoint", type=float, default=2.0 / 3.0,
                    help="interface of the piecewise-uniform mesh")
    ap.add_argument("--n", type=_int_list, default=(2, 4, 8, 16, 32),
                    help="comma-separated element counts")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--problem", default="example1", help=", ".join(PROBLEM_IDS))
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--quad-points", type=int, default=None,
                    help="Gauss points per element for PG assembly (default k+4)")
    ap.add_argument("--format", choices=("csv", "table"), default="csv")
    ap.add_argument("--out", default=None, help="output file (stdout if omitted)")
    ap.add_argument("--nodes", choices=("all", "interior"), default="all",
                    help="nodes entering the nodal error maxima")
    ap.add_argument("--debug", action="store_true",
                    help="dump meshes, matrices and solutions next to --out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    cfg = RunConfig(
        method=args.method, k=args.k, mesh=args.mesh, Ns=args.n, problem=args.problem,
        seed=args.seed, breakpoint=args.breakpoint, alpha=args.alpha, beta=args.beta,
        gamma=args.gamma, quad_points=args.quad_points, format=args.format, out=args.out,
        nodes=args.nodes, debug=args.debug,
    )
    try:
        result = run_sweep(cfg)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = result.to_csv() if cfg.format == "csv" else result.to_text()
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    for msg in result.messages:
        print(f"warning: {msg}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
