"""pgcode command line: enumeration, codes, maps, decomposition, analysis,
constructions, and the verification suite.

Every analysis command emits a Report (json by default) whose exact numbers
are serialized losslessly; `--seed` makes randomized sweeps reproducible
and identical configurations produce byte-identical reports apart from the
timing field.
"""

from __future__ import annotations

import dataclasses
import json
import sys
import time

import click
import numpy as np

from . import analysis, constructions, fileio, maps, report, suite
from .code import CodeHandle, build_code, enumerate_codewords, restrict
from .decompose import decompose as run_decompose
from .decompose import delta_cap, exhaustive_decompose, verify_combination
from .errors import BadConfig, PgcodeError, UnknownTask
from .geometry import projective_geometry
from .gf import factor_prime_power, field_new


def _resolve_field(q=None, p=None, h=None, irr=None):
    if q is not None:
        fp, fh = factor_prime_power(q)
    elif p is not None and h is not None:
        fp, fh = p, h
    else:
        raise BadConfig("specify --q or both --p and --h")
    coeffs = [int(x) for x in irr.split(",")] if irr else None
    return field_new(fp, fh, coeffs)


def _geom(n, q=None, p=None, h=None, irr=None):
    if n is None:
        raise BadConfig("--n is required")
    return projective_geometry(_resolve_field(q, p, h, irr), n)


def _emit(ctx_fmt, task, inputs, body, out=None, elapsed=None):
    rep = report.make_report(task, inputs, body, elapsed)
    text = report.emit(rep, ctx_fmt)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def _fail(err: PgcodeError):
    raise click.ClickException(f"{type(err).__name__}: {err}")


_field_opts = [
    click.option("--n", type=int, help="projective dimension"),
    click.option("--q", type=int, help="field order (prime power)"),
    click.option("--p", type=int, help="field characteristic"),
    click.option("--h", type=int, help="extension degree"),
    click.option("--irr", type=str, default=None, help="irreducible coefficients c0,c1,...,ch"),
]


def field_options(fn):
    for opt in reversed(_field_opts):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(report.VERSION, prog_name="pgcode")
@click.option("--threads", type=int, default=1, help="worker cap (results never depend on it)")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json")
@click.pass_context
def main(ctx, threads, fmt):
    """Exact computation with subspace-incidence codes of PG(n,q)."""
    ctx.ensure_object(dict)
    ctx.obj["fmt"] = fmt
    ctx.obj["threads"] = threads


@main.command("enum")
@field_options
@click.option("--dim", type=int, required=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def enum_cmd(ctx, n, q, p, h, irr, dim, out):
    """Enumerate all d-spaces in canonical order."""
    try:
        geom = _geom(n, q, p, h, irr)
        mat = geom.space_matrix(dim)
        rows = (tuple(tuple(int(x) for x in r) for r in m) for m in mat)
        text = fileio.write_subspaces(geom, rows, out)
        if not out:
            click.echo(text, nl=False)
        else:
            click.echo(f"wrote {len(mat)} subspaces to {out}")
    except PgcodeError as e:
        _fail(e)


@main.command("incidence")
@field_options
@click.option("--k", type=int, required=True)
@click.option("--j", type=int, required=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def incidence_cmd(ctx, n, q, p, h, irr, k, j, out):
    """Build the k-spaces versus j-spaces incidence matrix."""
    from .incidence import build_matrix

    try:
        geom = _geom(n, q, p, h, irr)
        inc = build_matrix(geom, k, j)
        text = fileio.write_incidence(inc, out)
        if not out:
            click.echo(text, nl=False)
        else:
            click.echo(f"wrote {inc.num_rows}x{inc.num_cols} incidence to {out}")
    except PgcodeError as e:
        _fail(e)


@main.group("code")
def code_group():
    """Code construction, membership, restriction, embedding, enumeration."""


@code_group.command("build")
@field_options
@click.option("--j", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.pass_context
def code_build(ctx, n, q, p, h, irr, j, k):
    try:
        t0 = time.perf_counter()
        geom = _geom(n, q, p, h, irr)
        code = build_code(geom, j, k)
        _emit(
            ctx.obj["fmt"],
            "code.build",
            {"n": geom.n, "q": geom.q, "j": j, "k": k},
            {"dimension": code.dimension, "length": geom.num_spaces(j)},
            elapsed=time.perf_counter() - t0,
        )
    except PgcodeError as e:
        _fail(e)


@code_group.command("member")
@field_options
@click.option("--j", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.option("--certificate", is_flag=True, default=False)
@click.pass_context
def code_member(ctx, n, q, p, h, irr, j, k, infile, certificate):
    try:
        cw = fileio.read_codeword(infile)
        code = build_code(cw.geom, j, k)
        if certificate:
            ok, cert = code.membership(cw, certificate=True)
            body = {"member": ok, "certificate": cert}
        else:
            body = {"member": code.membership(cw)}
        _emit(
            ctx.obj["fmt"],
            "code.member",
            {"n": cw.geom.n, "q": cw.geom.q, "j": j, "k": k, "weight": cw.weight},
            body,
        )
    except PgcodeError as e:
        _fail(e)


@code_group.command("restrict")
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.option("--space-dim", type=int, required=True)
@click.option("--space-index", type=int, required=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def code_restrict(ctx, infile, space_dim, space_index, out):
    """Restrict a codeword to the j-spaces of a chosen subspace."""
    try:
        cw = fileio.read_codeword(infile)
        iota = cw.geom.subspace_by_index(space_dim, space_index)
        res = restrict(cw, iota)
        text = fileio.write_codeword(res, out)
        if not out:
            click.echo(text, nl=False)
        else:
            click.echo(f"wrote restricted codeword (weight {res.weight}) to {out}")
    except PgcodeError as e:
        _fail(e)


@code_group.command("embed")
@field_options
@click.option("--k", type=int, required=True)
@click.option("--plane-index", type=int, required=True)
@click.option("--vertex-index", type=int, required=True)
@click.option("--pairs", type=str, required=True, help="lineindex:scalar,... (line indices within the plane's line list)")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def code_embed(ctx, n, q, p, h, irr, k, plane_index, vertex_index, pairs, out):
    """Lift a planar line combination through a disjoint vertex space."""
    from .code import embed_planar

    try:
        geom = _geom(n, q, p, h, irr)
        plane = geom.subspace_by_index(2, plane_index)
        vertex = geom.subspace_by_index(k - 2, vertex_index)
        lines = geom.contained_spaces(plane, 1)
        expr = []
        for item in pairs.split(","):
            li, a = item.split(":")
            expr.append((lines[int(li)], int(a)))
        cw = embed_planar(expr, plane, vertex)
        text = fileio.write_codeword(cw, out)
        if not out:
            click.echo(text, nl=False)
        else:
            click.echo(f"wrote embedded codeword (weight {cw.weight}) to {out}")
    except PgcodeError as e:
        _fail(e)


@code_group.command("enumerate")
@field_options
@click.option("--j", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.pass_context
def code_enumerate(ctx, n, q, p, h, irr, j, k):
    """Stream all codewords and report the weight distribution."""
    try:
        geom = _geom(n, q, p, h, irr)
        code = build_code(geom, j, k)
        hist: dict[int, int] = {}
        for w in enumerate_codewords(code):
            hist[w.weight] = hist.get(w.weight, 0) + 1
        _emit(
            ctx.obj["fmt"],
            "code.enumerate",
            {"n": geom.n, "q": geom.q, "j": j, "k": k},
            {"dimension": code.dimension, "weights": {str(k_): v for k_, v in sorted(hist.items())}},
        )
    except PgcodeError as e:
        _fail(e)


@main.group("map")
def map_group():
    """Projections, down-sums, kernels."""


@map_group.command("project")
@click.option("--r", "--R", "center", type=int, required=True, help="center point index")
@click.option("--pi", type=int, required=True, help="hyperplane index in the (n-1)-space enumeration")
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def map_project(ctx, center, pi, infile, out):
    try:
        cw = fileio.read_codeword(infile)
        geom = cw.geom
        hyper = geom.subspace_by_index(geom.n - 1, pi)
        frame = maps.ProjectionFrame(geom, center, hyper, cw.j)
        img = maps.project(frame, cw)
        text = fileio.write_codeword(img, out)
        if not out:
            click.echo(text, nl=False)
        else:
            click.echo(f"wrote projected codeword (weight {img.weight}) to {out}")
    except PgcodeError as e:
        _fail(e)


@map_group.command("lambda")
@click.option("--i", type=int, required=True)
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def map_lambda(ctx, i, infile, out):
    """Down-sum a j-space codeword onto i-spaces."""
    try:
        cw = fileio.read_codeword(infile)
        img = maps.down_sum(cw, i)
        text = fileio.write_codeword(img, out)
        if not out:
            click.echo(text, nl=False)
        else:
            click.echo(f"wrote down-sum (weight {img.weight}) to {out}")
    except PgcodeError as e:
        _fail(e)


@map_group.command("kernel")
@field_options
@click.option("--j", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--out", type=click.Path(), default=None, help="directory for the basis codeword files")
@click.pass_context
def map_kernel(ctx, n, q, p, h, irr, j, k, out):
    import os

    try:
        t0 = time.perf_counter()
        geom = _geom(n, q, p, h, irr)
        code = build_code(geom, j, k)
        ker = maps.kernel_basis(code)
        written = None
        if out:
            os.makedirs(out, exist_ok=True)
            for i, cw in enumerate(ker.basis_codewords()):
                fileio.write_codeword(cw, os.path.join(out, f"kernel_{i:04d}.txt"))
            written = out
        _emit(
            ctx.obj["fmt"],
            "map.kernel",
            {"n": geom.n, "q": geom.q, "j": j, "k": k},
            {
                "code_dimension": code.dimension,
                "kernel_dimension": ker.dimension,
                "basis_dir": written,
            },
            elapsed=time.perf_counter() - t0,
        )
    except PgcodeError as e:
        _fail(e)


@main.command("decompose")
@click.option("--code", "code_spec", type=str, required=True, help="n,q,j,k")
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.option("--exhaustive", type=int, default=None, help="also run the brute-force oracle up to this size")
@click.pass_context
def decompose_cmd(ctx, code_spec, infile, exhaustive):
    """Write a small-weight codeword as a combination of few k-spaces."""
    try:
        n, q, j, k = (int(x) for x in code_spec.split(","))
        cw = fileio.read_codeword(infile)
        if (cw.geom.n, cw.geom.q, cw.j) != (n, q, j):
            raise BadConfig("codeword file does not match --code parameters")
        code = CodeHandle(cw.geom, j, k)
        t0 = time.perf_counter()
        d = run_decompose(code, cw)
        body = {
            "status": d.status,
            "outside_hypothesis": d.outside_hypothesis,
            "pairs": [{"subspace": s, "scalar": a} for s, a in d.pairs],
            "residual_weight": d.residual.weight,
            "steps": d.steps,
            "verified": verify_combination(cw, d),
        }
        if exhaustive is not None:
            oracle = exhaustive_decompose(code, cw, exhaustive)
            body["exhaustive"] = (
                None
                if oracle is None
                else {"pairs": [{"subspace": s, "scalar": a} for s, a in oracle.pairs]}
            )
        _emit(
            ctx.obj["fmt"],
            "decompose",
            {"n": n, "q": q, "j": j, "k": k, "weight": cw.weight},
            body,
            elapsed=time.perf_counter() - t0,
        )
    except PgcodeError as e:
        _fail(e)


@main.group("analyze")
def analyze_group():
    """Spectra, dichotomy, expander bound, blocking sets, secancy caps."""


@analyze_group.command("spectrum")
@click.option("--r", type=int, required=True)
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.pass_context
def analyze_spectrum(ctx, r, infile):
    try:
        ps = fileio.read_pointset(infile)
        rep = analysis.spectrum(ps, r)
        _emit(
            ctx.obj["fmt"],
            "analyze.spectrum",
            {"n": ps.geom.n, "q": ps.geom.q, "r": r, "size": len(ps)},
            rep,
        )
    except PgcodeError as e:
        _fail(e)


@analyze_group.command("dichotomy")
@click.option("--r", type=int, required=True)
@click.option("--delta", type=int, required=True)
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.pass_context
def analyze_dichotomy(ctx, r, delta, infile):
    try:
        ps = fileio.read_pointset(infile)
        rep = analysis.dichotomy_check(ps, r, delta)
        _emit(
            ctx.obj["fmt"],
            "analyze.dichotomy",
            {"n": ps.geom.n, "q": ps.geom.q, "r": r, "delta": delta, "size": len(ps)},
            rep,
        )
    except PgcodeError as e:
        _fail(e)


@analyze_group.command("expander")
@click.option("--j", type=int, required=True)
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.option("--blocks", type=str, default=None, help="comma-separated j-space indices")
@click.option("--random-blocks", type=int, default=None)
@click.option("--seed", type=int, default=0)
@click.pass_context
def analyze_expander(ctx, j, infile, blocks, random_blocks, seed):
    try:
        ps = fileio.read_pointset(infile)
        if blocks is not None:
            t = [int(x) for x in blocks.split(",")]
        elif random_blocks is not None:
            rng = np.random.default_rng(seed)
            t = [int(x) for x in rng.choice(ps.geom.num_spaces(j), size=random_blocks, replace=False)]
        else:
            raise BadConfig("provide --blocks or --random-blocks")
        rep = analysis.expander_check(ps, t, j)
        _emit(
            ctx.obj["fmt"],
            "analyze.expander",
            {"n": ps.geom.n, "q": ps.geom.q, "j": j, "size_s": len(ps), "size_t": len(t), "seed": seed},
            rep,
        )
    except PgcodeError as e:
        _fail(e)


@analyze_group.command("blocking")
@click.option("--k", type=int, required=True)
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.pass_context
def analyze_blocking(ctx, k, infile):
    try:
        ps = fileio.read_pointset(infile)
        rep = analysis.blocking_check(ps, k)
        _emit(
            ctx.obj["fmt"],
            "analyze.blocking",
            {"n": ps.geom.n, "q": ps.geom.q, "k": k, "size": len(ps)},
            rep,
        )
    except PgcodeError as e:
        _fail(e)


@analyze_group.command("delta")
@click.option("--k", type=int, required=True)
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.pass_context
def analyze_delta(ctx, k, infile):
    """Largest realized small secancy of the support by (n-k)-spaces."""
    try:
        cw = fileio.read_codeword(infile)
        val = analysis.find_delta(cw, k)
        _emit(
            ctx.obj["fmt"],
            "analyze.delta",
            {"n": cw.geom.n, "q": cw.geom.q, "k": k, "weight": cw.weight},
            {"delta": val, "delta_cap": delta_cap(cw.geom.q)},
        )
    except PgcodeError as e:
        _fail(e)


@main.group("make")
def make_group():
    """Named constructions: unital, random combinations, disjoint unions."""


@make_group.command("hermitian")
@field_options
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def make_hermitian(ctx, n, q, p, h, irr, out):
    try:
        geom = _geom(n if n is not None else 2, q, p, h, irr)
        inst = constructions.hermitian_unital(geom)
        text = fileio.write_pointset(
            inst.pointset, out, comments=[f"label: {inst.label}", f"origin: {inst.provenance}"]
        )
        if not out:
            click.echo(text, nl=False)
        else:
            click.echo(f"wrote {inst.label} ({len(inst.pointset)} points) to {out}")
    except PgcodeError as e:
        _fail(e)


@make_group.command("combo")
@field_options
@click.option("--j", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--m", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def make_combo(ctx, n, q, p, h, irr, j, k, m, seed, out):
    try:
        geom = _geom(n, q, p, h, irr)
        code = CodeHandle(geom, j, k)
        cw, pairs = constructions.random_combination(code, m, seed)
        comments = [f"label: combination m={m} seed={seed}"]
        comments += [f"pair: {list(s.rows)} scalar {a}" for s, a in pairs]
        text = fileio.write_codeword(cw, out, comments=comments)
        if not out:
            click.echo(text, nl=False)
        else:
            click.echo(f"wrote weight-{cw.weight} combination to {out}")
    except PgcodeError as e:
        _fail(e)


@make_group.command("disjoint")
@field_options
@click.option("--d", type=int, required=True)
@click.option("--count", type=int, required=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def make_disjoint(ctx, n, q, p, h, irr, d, count, out):
    try:
        geom = _geom(n, q, p, h, irr)
        ps = constructions.disjoint_union(geom, d, count)
        text = fileio.write_pointset(ps, out, comments=[f"label: disjoint-union d={d} count={count}"])
        if not out:
            click.echo(text, nl=False)
        else:
            click.echo(f"wrote {len(ps)}-point set to {out}")
    except PgcodeError as e:
        _fail(e)


@dataclasses.dataclass
class ExperimentConfig:
    """Strict config for the one-shot runner; unknown fields are rejected."""

    task: str
    n: int | None = None
    q: int | None = None
    p: int | None = None
    h: int | None = None
    irr: str | None = None
    params: dict = dataclasses.field(default_factory=dict)
    seed: int = 0
    out: str | None = None
    format: str = "json"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise BadConfig(f"unknown config fields: {sorted(unknown)}")
        if "task" not in data:
            raise BadConfig("config needs a task")
        return cls(**data)


def run_config(config: ExperimentConfig) -> dict:
    """Dispatch a config to the matching task; returns the report dict."""
    geom = None
    if config.n is not None:
        geom = _geom(config.n, config.q, config.p, config.h, config.irr)
    pr = dict(config.params)
    t0 = time.perf_counter()
    task = config.task
    if task == "code.build":
        code = build_code(geom, pr["j"], pr["k"])
        body = {"dimension": code.dimension, "length": geom.num_spaces(pr["j"])}
    elif task == "map.kernel":
        code = build_code(geom, pr["j"], pr["k"])
        body = {"kernel_dimension": maps.kernel_basis(code).dimension}
    elif task == "make.combo":
        code = CodeHandle(geom, pr["j"], pr["k"])
        cw, pairs = constructions.random_combination(code, pr["m"], config.seed)
        body = {"weight": cw.weight, "pairs": [{"subspace": s, "scalar": a} for s, a in pairs]}
        if config.out:
            fileio.write_codeword(cw, config.out)
    elif task == "decompose":
        cw = fileio.read_codeword(pr["infile"])
        code = CodeHandle(cw.geom, cw.j, pr["k"])
        d = run_decompose(code, cw)
        body = {
            "status": d.status,
            "outside_hypothesis": d.outside_hypothesis,
            "size": d.size,
            "residual_weight": d.residual.weight,
        }
    elif task == "analyze.spectrum":
        ps = fileio.read_pointset(pr["infile"])
        body = report.jsonable(analysis.spectrum(ps, pr["r"]))
    elif task == "analyze.expander":
        ps = fileio.read_pointset(pr["infile"])
        rng = np.random.default_rng(config.seed)
        t = [int(x) for x in rng.choice(ps.geom.num_spaces(pr["j"]), size=pr["blocks"], replace=False)]
        body = report.jsonable(analysis.expander_check(ps, t, pr["j"]))
    elif task == "suite":
        ok, results = suite.run_suite(pr.get("name", "paper-checks"), pr.get("scale", "small"))
        body = {"ok": ok, "criteria": results}
    else:
        raise UnknownTask(f"unknown task {task!r}")
    inputs = {k: v for k, v in dataclasses.asdict(config).items() if v not in (None, {})}
    return report.make_report(task, inputs, body, time.perf_counter() - t0)


@main.command("run")
@click.argument("config_file", type=click.Path(exists=True))
@click.pass_context
def run_cmd(ctx, config_file):
    """Run a task described by a JSON experiment config."""
    try:
        with open(config_file) as fh:
            data = json.load(fh)
        config = ExperimentConfig.from_dict(data)
        rep = run_config(config)
        text = report.emit(rep, config.format)
        if config.out and config.task not in ("make.combo",):
            with open(config.out, "w") as fh:
                fh.write(text + "\n")
        else:
            click.echo(text)
    except (PgcodeError, json.JSONDecodeError, KeyError) as e:
        raise click.ClickException(str(e))


@main.command("suite")
@click.argument("name")
@click.option("--scale", type=click.Choice(["small", "medium"]), default="small")
@click.option("--only", type=str, default=None, help="comma-separated criterion names")
@click.pass_context
def suite_cmd(ctx, name, scale, only):
    """Run the verification battery; nonzero exit on any failure."""
    try:
        selected = only.split(",") if only else None
        ok, results = suite.run_suite(name, scale, selected, echo=click.echo)
        body = {"ok": ok, "criteria": results}
        _emit(ctx.obj["fmt"], "suite", {"name": name, "scale": scale}, body)
        if not ok:
            sys.exit(1)
    except PgcodeError as e:
        _fail(e)


if __name__ == "__main__":
    main()
