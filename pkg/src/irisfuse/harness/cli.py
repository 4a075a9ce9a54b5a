"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 infeasible configuration.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..encoders import Encoder, EncoderConfig, HaarHilbertParams, LogGaborParams
from ..errors import DataError, InvalidConfigurationError, InvalidInputError
from ..evaluation import ClassStats, ModelSet, PessimismParams, analyze, parse_regimes, regime_report
from ..f3vdm import band_from_discomfort, band_from_odds, discomfort
from ..matching import MatchConfig, fuse_single, similarity
from .codefile import load_codes, save_codes
from .dataset import SynthSpec, load_manifest, synth_dataset, write_manifest
from .experiments import code_records, run_exhaustive
from .report import ReportColumn, emit_report, roc_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INFEASIBLE = 0, 1, 2, 3

DEFAULT_REGIMES = "FRR=0.02,FRR=0.01,FRR=1e-3,FAR=1e-3,FAR=1e-4,FAR=1e-5,POFA=1e-3,POFR=1e-3"

log = logging.getLogger("irisfuse")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _encoder_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--encoder", choices=("hh", "lg", "combined"), default="combined")
    p.add_argument("--f0", type=float, default=1.0 / 18.0, help="log-Gabor centre frequency (cycles/sample)")
    p.add_argument("--sigma-ratio", type=float, default=0.5, help="log-Gabor sigma/f0")
    p.add_argument("--block", type=int, default=8, help="Haar-Hilbert block size")
    p.add_argument("--crop-lines", type=int, default=1, help="pupil-side rows removed before resampling")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--lenient", action="store_true", help="skip bad manifest rows instead of aborting")


def _source_args(p: argparse.ArgumentParser, required: bool) -> None:
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--manifest", type=Path)
    src.add_argument("--synth-spec", help="seed=..,subjects=..,samples=..,noise=..,rotation=.. or a file")
    p.add_argument("--scenario", choices=("single", "dual"), default="single")
    p.add_argument("--max-shift", type=int, default=0)
    p.add_argument("--pessimism-k", type=float, default=1.2)
    p.add_argument("--pessimism-shift-i", type=float, default=0.0)
    p.add_argument("--pessimism-shift-g", type=float, default=0.0)
    _encoder_args(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="irisfuse", description="Iris encoders, matching and decision-landscape evaluation")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--subjects", type=int, default=20)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--rotation", type=int, default=0)
    p.add_argument("--format", choices=("pgm", "csv"), default="pgm")
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("encode", help="encode a manifest into a code file")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    _encoder_args(p)

    p = sub.add_parser("match", help="compare the records of two code files")
    p.add_argument("--codes-a", type=Path, required=True)
    p.add_argument("--codes-b", type=Path, required=True)
    p.add_argument("--max-shift", type=int, default=0)

    p = sub.add_parser("evaluate", help="exhaustive test and decision-landscape report")
    _source_args(p, required=True)
    p.add_argument("--regimes", default=DEFAULT_REGIMES, help="comma list of METRIC=VALUE targets")
    p.add_argument("--report", type=Path, help="report file (default: stdout)")
    p.add_argument("--roc", type=Path, help="ROC CSV output")
    p.add_argument("--scores", type=Path, help="per-pair channel scores CSV output")

    p = sub.add_parser("f3vdm", help="build a fuzzy 3-valent safety band")
    _source_args(p, required=False)
    p.add_argument("--imposter-model", help="MU,SIGMA of the fitted imposter Gaussian")
    p.add_argument("--genuine-model", help="MU,SIGMA of the fitted genuine Gaussian")
    p.add_argument("--pofr-target", type=float)
    p.add_argument("--pofa-target", type=float)
    p.add_argument("--accept-threshold", type=float)
    p.add_argument("--discomfort-budget", type=float)
    p.add_argument("--out", type=Path)
    return parser


# --------------------------------------------------------------------------


def _encoder_config(args) -> EncoderConfig:
    return EncoderConfig(
        args.encoder,
        LogGaborParams(args.f0, args.sigma_ratio),
        HaarHilbertParams(args.block),
    )


def _pessimism(args) -> PessimismParams:
    return PessimismParams(args.pessimism_k, args.pessimism_shift_i, args.pessimism_shift_g)


def _dataset(args):
    if args.manifest is not None:
        return load_manifest(args.manifest, args.crop_lines, strict=not args.lenient)
    return synth_dataset(SynthSpec.parse(args.synth_spec))


def _write(path: Path | None, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        path.write_text(text)


def cmd_synth(args) -> int:
    spec = SynthSpec(args.seed, args.subjects, args.samples, args.noise, args.rotation)
    ds = synth_dataset(spec)
    args.out.mkdir(parents=True, exist_ok=True)
    write_manifest(args.out / "manifest.csv", ds, args.format)
    (args.out / "synth_spec.txt").write_text(spec.to_text())
    print(f"wrote {len(ds)} segments to {args.out}")
    return EXIT_OK


def cmd_encode(args) -> int:
    cfg = _encoder_config(args)
    ds = load_manifest(args.manifest, args.crop_lines, strict=not args.lenient)
    records = code_records(ds, cfg, args.workers)
    save_codes(args.out, records)
    print(f"encoded {len(ds)} samples into {len(records)} codes -> {args.out}")
    return EXIT_OK


def cmd_match(args) -> int:
    a = load_codes(args.codes_a)
    b = load_codes(args.codes_b)
    cfg = MatchConfig(args.max_shift)
    print("a,b,channel,similarity")
    per_pair = {}
    for ra in a:
        for rb in b:
            if ra.code.encoder is not rb.code.encoder:
                continue
            s = similarity(ra.code, rb.code, cfg)
            ka = "/".join(map(str, ra.meta.key))
            kb = "/".join(map(str, rb.meta.key))
            per_pair.setdefault((ka, kb), {})[ra.code.encoder.value] = s
            print(f"{ka},{kb},{ra.code.encoder.value},{s:.6f}")
    for (ka, kb), chans in per_pair.items():
        if len(chans) == 2:
            print(f"{ka},{kb},fused,{fuse_single(chans['HH'], chans['LG']):.6f}")
    return EXIT_OK


def _columns(result, cfg: EncoderConfig, pess: PessimismParams, targets):
    sizes = {"HH": "8x128", "LG": "16x256"}
    block = str(cfg.hh.block_size)
    cols = []
    for ch, pool in result.pools().items():
        summary = analyze(pool, pess)
        regimes = regime_report(pool, summary.models, targets) if targets else []
        if ch == "fused":
            code = ", ".join(sizes[e.value] for e in cfg.channels)
            filt = block if Encoder.HH in cfg.channels else "-"
        else:
            enc = ch.split("-")[-1]
            code, filt = sizes[enc], (block if enc == "HH" else "-")
        cols.append(ReportColumn(ch, summary, regimes, code, filt))
    return cols


def cmd_evaluate(args) -> int:
    cfg = _encoder_config(args)
    pess = _pessimism(args)
    targets = parse_regimes(args.regimes)
    ds = _dataset(args)
    result = run_exhaustive(ds, args.scenario, cfg, MatchConfig(args.max_shift), args.workers)
    _write(args.report, emit_report(_columns(result, cfg, pess, targets)))
    if args.roc:
        args.roc.write_text(roc_csv(result.pool()))
    if args.scores:
        chans = list(result.genuine)
        lines = ["class," + ",".join(chans)]
        for label, store in (("genuine", result.genuine), ("imposter", result.imposter)):
            for vals in zip(*(store[c] for c in chans)):
                lines.append(label + "," + ",".join(repr(float(v)) for v in vals))
        args.scores.write_text("\n".join(lines) + "\n")
    return EXIT_OK


def _parse_model(text: str) -> ClassStats:
    try:
        mu, sigma = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"model must be MU,SIGMA, got {text!r}") from exc
    return ClassStats(mu, sigma)


def cmd_f3vdm(args) -> int:
    pess = _pessimism(args)
    if args.imposter_model or args.genuine_model:
        if not (args.imposter_model and args.genuine_model):
            raise UsageError("--imposter-model and --genuine-model go together")
        models = ModelSet.from_stats(_parse_model(args.imposter_model), _parse_model(args.genuine_model), pess)
    elif args.manifest is not None or args.synth_spec is not None:
        result = run_exhaustive(_dataset(args), args.scenario, _encoder_config(args), MatchConfig(args.max_shift), args.workers)
        models = ModelSet.from_pool(result.pool(), pess)
    else:
        raise UsageError("give --imposter-model/--genuine-model or a data source")

    odds_mode = args.pofr_target is not None or args.pofa_target is not None
    budget_mode = args.accept_threshold is not None or args.discomfort_budget is not None
    if odds_mode == budget_mode:
        raise UsageError("use either --pofr-target/--pofa-target or --accept-threshold/--discomfort-budget")
    if odds_mode:
        if args.pofr_target is None or args.pofa_target is None:
            raise UsageError("--pofr-target and --pofa-target go together")
        band = band_from_odds(args.pofr_target, args.pofa_target, models.p_genuine, models.p_imposter, pess)
    else:
        if args.accept_threshold is None or args.discomfort_budget is None:
            raise UsageError("--accept-threshold and --discomfort-budget go together")
        band = band_from_discomfort(
            args.accept_threshold, args.discomfort_budget, models.p_genuine, models.p_imposter, pess
        )
    rep = discomfort(band, models.p_genuine, models.p_imposter)
    text = band.to_record() + (
        f"genuine_discomfort={rep.genuine_discomfort!r}\n"
        f"imposter_discomfort={rep.imposter_discomfort!r}\n"
        f"total_discomfort={rep.total!r}\n"
    )
    _write(args.out, text)
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "encode": cmd_encode,
    "match": cmd_match,
    "evaluate": cmd_evaluate,
    "f3vdm": cmd_f3vdm,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InvalidConfigurationError as exc:
        print(f"infeasible configuration: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (UsageError, InvalidInputError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
