#!/usr/bin/env python3
"""eprcert command-line interface.

Usage:
    eprcert certify DATASET.json [-o cert.json]      Certify from histograms
    eprcert certify --variance 0.1                   Variance-product witness
    eprcert simulate --ratio 4 -n 1000000 -o out/    Synthetic double-Gaussian data
    eprcert converge --ratio 4 -o table.tsv          Continuum-limit study + curve data
    eprcert oracle --ratio 30.8                      Closed-form values

Exit status is 0 on success, 2 on usage errors and a distinct code per
error class otherwise (see ``eprcert.errors``).
"""
import argparse
from contextlib import contextmanager
import csv
import json
from pathlib import Path
import sys

import numpy as np

from . import __version__, oracle, qft
from .entropy import AxisSpec, Direction, Estimator, conditional_entropy
from .errors import EprCertError
from .formats import (
    CertificateDocument,
    DatasetDescriptor,
    DofEntry,
    bin_samples,
    file_digest,
    ingest_histogram,
    load_descriptor,
    pair_to_dict,
    save_descriptor,
    write_histogram,
)
from .monotones import certify, combine_dofs
from .witness import ObservablePairSpec, PairKind, assess, variance_assessment


@contextmanager
def _stage(name):
    try:
        yield
    except EprCertError as exc:
        exc.args = (f"{name}: {exc}",)
        raise


def _assessment_record(a, first, second):
    t1, t2 = a.terms
    return {
        "direction": a.direction.value,
        "relation_id": a.relation_id,
        "first_bits": float(t1),
        "second_bits": float(t2),
        "lhs_bits": a.lhs_bits,
        "bound_bits": a.bound_bits,
        "s_ab_upper_bits": a.s_ab_upper_bits,
        "vacuous": a.vacuous,
        "sample_sizes": [first.sample_size, second.sample_size],
    }


def _certify_dof(dof, estimator):
    with _stage(f"ingest {dof.first.name}"):
        ax = dof.axes.get("first", {})
        first = ingest_histogram(dof.first, ax.get("a"), ax.get("b"))
    with _stage(f"ingest {dof.second.name}"):
        ax = dof.axes.get("second", {})
        second = ingest_histogram(dof.second, ax.get("a"), ax.get("b"))
    assessments = []
    for direction in dof.directions:
        with _stage(f"{dof.label} {direction.value}"):
            assessments.append(assess(first, second, dof.pair, direction, estimator))
    with _stage(f"{dof.label} monotones"):
        by_dir = {a.direction: a for a in assessments}
        s_ab = by_dir.get(Direction.A_GIVEN_B) or assessments[0]
        s_ba = by_dir.get(s_ab.direction.mirrored)
        cert = certify(s_ab, s_ba, label=dof.label, estimator_note=estimator.value)
    record = {
        "label": dof.label,
        "pair": pair_to_dict(dof.pair),
        "conditional_entropies_bits": {
            f"{name}:{d.value}": conditional_entropy(dist, d, estimator).bits
            for name, dist in (("first", first), ("second", second)) for d in dof.directions
        },
        "assessments": [_assessment_record(a, first, second) for a in assessments],
        "ebits": cert.ef_ere_esq_lower,
    }
    return cert, record


def cmd_certify(descriptor, output=None, estimator=None):
    """Run ingestion, entropies, relations and monotone bounds for a dataset.

    ``descriptor`` is a :class:`DatasetDescriptor` or a path to one.
    Returns the :class:`CertificateDocument` (also written to ``output``).
    """
    if not isinstance(descriptor, DatasetDescriptor):
        with _stage("descriptor"):
            descriptor = load_descriptor(descriptor)
    estimator = Estimator(estimator or descriptor.estimator)
    certs, records = [], []
    for dof in descriptor.dofs:
        cert, record = _certify_dof(dof, estimator)
        certs.append(cert)
        records.append(record)
    with _stage("combine"):
        total = combine_dofs(certs)
    inputs = [{"path": str(p), "sha256": file_digest(p)} for p in descriptor.input_paths()]
    doc = CertificateDocument(total, records, inputs, estimator.value)
    if output is not None:
        doc.write(output)
    return doc


def cmd_certify_variance(sigma_x, sigma_k, dims=1, output=None):
    """Certificate from correlation widths alone (one assessment per dimension)."""
    with _stage("variance"):
        assessment = variance_assessment(sigma_x, sigma_k)
    labels = ["x", "y", "z"][:dims]
    certs = [certify(assessment, label=lab, estimator_note="variance") for lab in labels]
    total = combine_dofs(certs)
    records = [{"label": lab, "relation_id": "variance", "sigma_x": sigma_x, "sigma_k": sigma_k,
                "s_ab_upper_bits": assessment.s_ab_upper_bits,
                "ebits": c.ef_ere_esq_lower} for lab, c in zip(labels, certs)]
    doc = CertificateDocument(total, records, [], "variance")
    if output is not None:
        doc.write(output)
    return doc


def summarize(doc):
    cert = doc.certificate
    lines = [f"eprcert {doc.tool_version} certificate ({doc.estimator} estimator)"]
    for rec in doc.dofs:
        lines.append(f"  {rec['label']}: {rec['ebits']:.4f} ebits")
        for a in rec.get("assessments", []):
            flag = " [vacuous relation]" if a["vacuous"] else ""
            lines.append(f"    {a['direction']:<10} {a['relation_id']}: lhs {a['lhs_bits']:.4f} "
                         f"- bound {a['bound_bits']:.4f} = S upper {a['s_ab_upper_bits']:+.4f}{flag}")
    lines.append(f"  E_F, E_RE, E_SQ >= {cert.ef_ere_esq_lower:.4f} ebits")
    if cert.ed_certified:
        lines.append(f"  E_D >= {cert.ed_lower:.4f} ebits")
    else:
        lines.append("  E_D not certified (one steering direction only)")
    if cert.vacuous:
        lines.append("  nothing certified: correlations are compatible with a separable state")
    return "\n".join(lines)


def _sim_axes(params, bins, window):
    hx = window * params.marginal_std("position")
    hk = window * params.marginal_std("momentum")
    pos = (AxisSpec.centered("x_A", hx, bins, "mm"), AxisSpec.centered("x_B", hx, bins, "mm"))
    mom = (AxisSpec.centered("k_A", hk, bins, "rad/mm"), AxisSpec.centered("k_B", hk, bins, "rad/mm"))
    return pos, mom


def expected_values(params, dims=1):
    hx, hk = oracle.conditional_entropies(params)
    witnessed = oracle.witnessed_entanglement(params)
    maximum = oracle.max_entanglement(params)
    return {
        "ratio": params.ratio,
        "schmidt_lambda": oracle.schmidt_lambda(params),
        "conditional_entropy_x_bits": hx,
        "conditional_entropy_k_bits": hk,
        "conditional_entropy_sum_bits": oracle.conditional_entropy_sum(params),
        "witnessed_ebits_per_dim": witnessed,
        "max_ebits_per_dim": maximum,
        "witnessed_ebits_total": dims * witnessed,
        "max_ebits_total": dims * maximum,
        "expected_ef_ebits": dims * maximum,
    }


def cmd_simulate(params, n, seed, bins, window, output_dir, dims=1, exact=False, scale=2 ** 40):
    """Write position and momentum histograms, a manifest and a descriptor.

    Sampled mode draws ``n`` pairs per dimension from seeded child streams.
    ``exact`` mode instead writes the exact bin probabilities scaled by
    ``scale`` and rounded to integers.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    labels = ["x", "y"][:dims]
    (pa, pb), (ka, kb) = _sim_axes(params, bins, window)
    children = np.random.SeedSequence(seed).spawn(dims)
    dofs, files = [], {}
    dropped = {}
    for label, child in zip(labels, children):
        if exact:
            pos = np.rint(oracle.binned_probabilities(params, pa, pb, "position") * scale).astype(np.int64)
            mom = np.rint(oracle.binned_probabilities(params, ka, kb, "momentum") * scale).astype(np.int64)
            dropped[label] = None
        else:
            s = oracle.sample(params, n, child)
            pos, d_pos = bin_samples(s.x_a, s.x_b, pa, pb)
            mom, d_mom = bin_samples(s.k_a, s.k_b, ka, kb)
            dropped[label] = {"position": d_pos, "momentum": d_mom}
        fp, fk = out / f"{label}_position.hist", out / f"{label}_momentum.hist"
        note = [f"double-Gaussian R={params.ratio!r} dim={label} seed={seed}"]
        write_histogram(fp, pos, pa, pb, note)
        write_histogram(fk, mom, ka, kb, note)
        files[label] = [fp.name, fk.name]
        dofs.append(DofEntry(label, ObservablePairSpec(PairKind.POSITION_MOMENTUM), fp, fk))
    save_descriptor(out / "dataset.json", DatasetDescriptor(dofs))
    manifest = {
        "schema": "eprcert-simulation/1",
        "tool_version": __version__,
        "params": {"sigma_plus": params.sigma_plus, "sigma_minus": params.sigma_minus,
                   "anticorrelated": params.anticorrelated},
        "mode": "exact" if exact else "sampled",
        "n": None if exact else int(n),
        "scale": scale if exact else None,
        "seed": seed,
        "bins": bins,
        "window_sigmas": window,
        "dims": dims,
        "files": files,
        "dropped": dropped,
        "expected": expected_values(params, dims),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


_TABLE_FIELDS = ("ordering", "n", "dx", "dk", "lhs_differential", "analytic_lhs", "lhs_error",
                 "lhs_order", "s_ab_exact", "s_ab_analytic", "s_ab_error", "margin",
                 "norm_deficit", "status")


def curve_data(ratios):
    """Witnessed and maximum entanglement over two dimensions vs R."""
    rows = []
    for r in ratios:
        w = 2 * oracle.witnessed_entanglement(r)
        m = 2 * oracle.max_entanglement(r)
        rows.append({"R": float(r), "witnessed_ebits": w, "max_ebits": m, "gap_ebits": m - w})
    return rows


def cmd_converge(params, schedule, output, spacing_schedule=None, plot_output=None, workers=None):
    """Write the convergence table (and the R-sweep curve data) as TSV.

    ``schedule`` refines at a fixed window; ``spacing_schedule``, when
    given, grows N at a fixed spacing (the other ordering of the limits).
    Truncated rows are kept with ``status=truncated``.
    """
    output = Path(output)
    tables = [("fixed_window", schedule)]
    if spacing_schedule:
        tables.append(("fixed_spacing", spacing_schedule))
    rows = []
    for ordering, sched in tables:
        study = qft.convergence_study(params, sched, skip_truncated=True, workers=workers)
        orders = qft.observed_orders(study)
        for row, order in zip(study, orders):
            d = row._asdict()
            d.update(ordering=ordering, lhs_order=order)
            rows.append(d)
    with open(output, "w", newline="") as fh:
        fh.write(f"# eprcert convergence R={params.ratio!r} sigma_minus={params.sigma_minus!r}\n")
        w = csv.DictWriter(fh, fieldnames=_TABLE_FIELDS, delimiter="\t", extrasaction="ignore")
        w.writeheader()
        for d in rows:
            w.writerow({k: ("" if d[k] is None else d[k]) for k in _TABLE_FIELDS})
    plot_output = Path(plot_output) if plot_output else output.with_suffix(".curves.tsv")
    ratios = np.unique(np.concatenate([np.logspace(0, 5, 201), [oracle.witness_threshold(), 30.8]]))
    curves = curve_data(ratios)
    with open(plot_output, "w", newline="") as fh:
        fh.write(f"# witness threshold R={oracle.witness_threshold()!r}\n")
        fh.write(f"# asymptotic gap (two dims) = {oracle.gap_asymptote()!r} ebits\n")
        w = csv.DictWriter(fh, fieldnames=["R", "witnessed_ebits", "max_ebits", "gap_ebits"],
                           delimiter="\t")
        w.writeheader()
        w.writerows(curves)
    return rows, curves


def oracle_report(params, dims=1):
    e = expected_values(params, dims)
    e["witnessed_ebits_two_dims"] = 2 * e["witnessed_ebits_per_dim"]
    e["max_ebits_two_dims"] = 2 * e["max_ebits_per_dim"]
    e["witness_threshold_ratio"] = oracle.witness_threshold()
    e["gap_asymptote_two_dims"] = oracle.gap_asymptote()
    return e


def _params_from_args(args):
    if args.sigma_plus is not None:
        return oracle.DoubleGaussianParams(args.sigma_plus, args.sigma_minus)
    return oracle.DoubleGaussianParams.from_ratio(args.ratio, args.sigma_minus)


def _sizes(text):
    return [int(s) for s in text.split(",") if s.strip()]


def _main_certify(args):
    if args.variance is not None or args.sigma_x is not None:
        if args.variance is not None:
            sx, sk = args.variance, 1.0
        else:
            if args.sigma_k is None:
                raise SystemExit("--sigma-x needs --sigma-k")
            sx, sk = args.sigma_x, args.sigma_k
        doc = cmd_certify_variance(sx, sk, args.dims, args.output)
    else:
        if args.dataset is None:
            raise SystemExit("certify needs a dataset descriptor or --variance")
        doc = cmd_certify(args.dataset, args.output, args.estimator)
    print(summarize(doc))
    if args.output:
        print(f"certificate written to {args.output}")


def _main_simulate(args):
    params = _params_from_args(args)
    args.output = args.output or "simulated"
    m = cmd_simulate(params, args.n, args.seed, args.bins, args.window, args.output,
                     args.dims, args.exact)
    e = m["expected"]
    print(f"wrote {args.output}/dataset.json ({m['mode']}, R={params.ratio:g}, dims={args.dims})")
    print(f"  expected witnessed: {e['witnessed_ebits_total']:.4f} ebits; "
          f"maximum (E_F of the pure state): {e['max_ebits_total']:.4f} ebits")


def _main_converge(args):
    params = _params_from_args(args)
    args.output = args.output or "convergence.tsv"
    sizes = _sizes(args.sizes)
    schedule = qft.fixed_window_schedule(params, sizes, args.window)
    spacing = None
    if args.spacing is not None:
        spacing = qft.fixed_spacing_schedule(sizes, args.spacing)
    rows, _ = cmd_converge(params, schedule, args.output, spacing, args.plot_data, args.workers)
    print(f"{'ordering':<14}{'N':>6}{'dx':>12}{'lhs error':>12}{'S error':>12}{'margin':>10}")
    for r in rows:
        print(f"{r['ordering']:<14}{r['n']:>6}{r['dx']:>12.4g}{r['lhs_error']:>12.3e}"
              f"{r['s_ab_error']:>12.3e}{r['margin']:>10.4f}  {r['status']}")


def _main_oracle(args):
    params = _params_from_args(args)
    report = oracle_report(params, args.dims)
    if args.json:
        print(json.dumps(report, indent=2))
        return
    for key, value in report.items():
        print(f"{key:<30} {value:.6f}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("-o", "--output", help="output path")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--ratio", "-R", type=float, default=4.0, help="correlation ratio R")
    state.add_argument("--sigma-minus", type=float, default=1.0, help="difference width [mm]")
    state.add_argument("--sigma-plus", type=float, help="sum width [mm] (overrides --ratio)")
    state.add_argument("--dims", type=int, choices=(1, 2), default=1,
                       help="transverse dimensions")

    parser = argparse.ArgumentParser(prog="eprcert", description=__doc__.splitlines()[1])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[common], help="certify entanglement from data")
    p.add_argument("dataset", nargs="?", help="dataset descriptor (JSON)")
    p.add_argument("--estimator", choices=[e.value for e in Estimator])
    p.add_argument("--variance", type=float, help="product sigma(x_A-x_B) sigma(k_A+k_B)")
    p.add_argument("--sigma-x", type=float)
    p.add_argument("--sigma-k", type=float)
    p.add_argument("--dims", type=int, choices=(1, 2), default=1,
                   help="dimensions for variance mode")
    p.set_defaults(func=_main_certify)

    p = sub.add_parser("simulate", parents=[common, state], help="synthetic double-Gaussian data")
    p.add_argument("-n", type=int, default=1_000_000, help="pairs per dimension")
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--window", type=float, default=5.0, help="half-window in marginal widths")
    p.add_argument("--exact", action="store_true", help="write exact bin probabilities")
    p.set_defaults(func=_main_simulate)

    p = sub.add_parser("converge", parents=[common, state], help="continuum-limit study")
    p.add_argument("--sizes", default="16,32,64,128,256,512")
    p.add_argument("--window", type=float, default=6.0)
    p.add_argument("--spacing", type=float, help="also grow N at this fixed spacing")
    p.add_argument("--plot-data", help="curve data path (default: OUTPUT.curves.tsv)")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_main_converge)

    p = sub.add_parser("oracle", parents=[state], help="closed-form values for R")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_main_oracle)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except EprCertError as exc:
        print(f"eprcert: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"eprcert: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
