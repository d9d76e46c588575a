"""Command-line interface.

Exit codes: 0 success, 1 runtime or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import DEFAULT_RTOL, condition_report
from .detector import DEFAULT_DB_FLOOR, DetectorSpec, SpectrogramDb, detect, to_db
from .errors import ComplexClipError, InvalidConfig
from .featurefile import FeatureFile
from .harness.experiment import ExperimentConfig, evaluate_scores, format_summary, run_pipeline, write_results
from .harness.roc import read_scores_csv
from .harness.synth import SynthConfig, write_corpus
from .signal_io import IngestConfig, condition_length, gate_report, read_wav, screen
from .stft import WINDOW_KINDS, StftParams, stft


class StageError(Exception):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ComplexClipError, OSError, ValueError, RuntimeError) as exc:
        raise StageError(name, exc) from exc


def _detector(text: str) -> DetectorSpec:
    try:
        return DetectorSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _dump_json(path: str, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def spectrogram_file(signal, params: StftParams, det: DetectorSpec, floor: float) -> FeatureFile:
    X = _stage("stft", stft, signal, params)
    Y = _stage("detector", detect, X, det)
    Ydb = _stage("db", to_db, Y, floor)
    header = {
        "detector": det.label,
        "phi": det.phi,
        "fft_size": params.fft_size,
        "hop": params.hop,
        "window": params.window_kind,
        "sample_rate": signal.sample_rate,
        "db_floor": floor,
        "source_id": signal.source_id,
    }
    return FeatureFile(Ydb.values, header)


def cmd_spectrogram(args) -> int:
    signal = _stage("read_wav", read_wav, args.input)
    signal = _stage("condition_length", condition_length, signal, args.duration)
    params = _stage("params", StftParams, args.fft_size, args.hop, args.window)
    ff = spectrogram_file(signal, params, args.detector, args.db_floor)
    _stage("write", ff.write, args.output)
    return 0


def _as_db(ff: FeatureFile) -> SpectrogramDb:
    floor = ff.db_floor if ff.db_floor is not None else DEFAULT_DB_FLOOR
    return SpectrogramDb(ff.values.astype("f8"), floor, DetectorSpec("magsq"))


def cmd_analyze(args) -> int:
    base = _stage("read baseline", FeatureFile.read, args.baseline)
    clip = _stage("read clipped", FeatureFile.read, args.clipped)
    source = clip.header.get("source_id") or base.header.get("source_id") or ""
    report = _stage("condition_report", condition_report, _as_db(base), _as_db(clip), args.rtol, source)
    _stage("write", _dump_json, args.output, report.to_json())
    return 0


def cmd_roc(args) -> int:
    data = _stage("read scores", read_scores_csv, args.scores)
    run = _stage("roc", evaluate_scores, data, None, args.bootstrap, args.level, args.seed)
    _stage("write", _dump_json, args.output, run.to_json())
    return 0


def cmd_experiment(args) -> int:
    try:
        config = ExperimentConfig.load(args.config)
    except (InvalidConfig, OSError) as exc:
        print(f"complexclip experiment: config: {exc}", file=sys.stderr)
        return 2
    result = _stage("experiment", run_pipeline, config)
    _stage("write", write_results, result, args.out_dir)
    print(format_summary(result.summary_rows()))
    return 0


def cmd_gate(args) -> int:
    cfg = IngestConfig(snr_threshold=args.threshold, target_duration=args.duration)
    signals = [_stage("read_wav", read_wav, p) for p in args.inputs]
    decisions = screen(signals, cfg)
    _stage("write", _dump_json, args.output, gate_report(decisions))
    if args.kept_dir:
        out = Path(args.kept_dir)
        out.mkdir(parents=True, exist_ok=True)
        params = StftParams(args.fft_size, args.hop, args.window)
        for d in decisions:
            if d.kept:
                sig = condition_length(d.signal, cfg.target_duration)
                ff = spectrogram_file(sig, params, args.detector, args.db_floor)
                _stage("write", ff.write, out / f"{sig.source_id}.cspc")
    return 0


def cmd_synth(args) -> int:
    try:
        cfg = SynthConfig(n_per_class=args.n_per_class, noise_snr_db=args.snr, seed=args.seed)
    except InvalidConfig as exc:
        print(f"complexclip synth: {exc}", file=sys.stderr)
        return 2
    _stage("write_corpus", write_corpus, cfg, args.out_dir)
    return 0


def _add_stft_flags(p):
    p.add_argument("--fft-size", type=int, default=512, help="FFT size K, a power of two (default: 512)")
    p.add_argument("--hop", type=int, default=128, help="hop size H in samples (default: 128)")
    p.add_argument("--window", choices=WINDOW_KINDS, default="hann", help="analysis window (default: hann)")
    p.add_argument(
        "--detector",
        type=_detector,
        default=DetectorSpec("clip"),
        help="magsq | clip | clip-rot | clip-angle=<radians> (default: clip)",
    )
    p.add_argument("--db-floor", type=float, default=DEFAULT_DB_FLOOR, help="dB floor (default: -80)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="complexclip", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrogram", help="WAV file -> dB spectrogram feature file")
    p.add_argument("--input", required=True, help="input WAV file")
    p.add_argument("--output", required=True, help="output feature file")
    p.add_argument("--duration", type=float, default=4.0, help="pad/truncate to this many seconds (default: 4.0)")
    _add_stft_flags(p)
    p.set_defaults(func=cmd_spectrogram)

    p = sub.add_parser("analyze", help="singular-value comparison of two feature files")
    p.add_argument("--baseline", required=True, help="baseline (magsq) feature file")
    p.add_argument("--clipped", required=True, help="clipped feature file")
    p.add_argument("--rtol", type=float, default=DEFAULT_RTOL, help="numerical rank tolerance (default: 1e-6)")
    p.add_argument("--output", required=True, help="output report JSON")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("roc", help="ROC, AUC and bootstrap CI from a score,label CSV")
    p.add_argument("--scores", required=True, help="CSV with header score,label")
    p.add_argument("--bootstrap", type=int, default=1000, help="bootstrap resamples (default: 1000)")
    p.add_argument("--level", type=float, default=0.95, help="confidence level (default: 0.95)")
    p.add_argument("--seed", type=int, default=42, help="bootstrap seed (default: 42)")
    p.add_argument("--output", required=True, help="output JSON")
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("experiment", help="run the synthetic desk experiment from a JSON config")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out-dir", required=True, help="directory for result artifacts")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("gate", help="SNR-gate WAV files and write a gate report")
    p.add_argument("inputs", nargs="+", help="WAV files")
    p.add_argument("--threshold", type=float, default=15.0, help="SNR threshold in dB (default: 15)")
    p.add_argument("--duration", type=float, default=4.0, help="target duration in seconds (default: 4.0)")
    p.add_argument("--output", required=True, help="gate report JSON")
    p.add_argument("--kept-dir", help="also write feature files for kept inputs here")
    _add_stft_flags(p)
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("synth", help="write the synthetic corpus as WAV files plus manifest.json")
    p.add_argument("--n-per-class", type=int, default=100, help="signals per class (default: 100)")
    p.add_argument("--snr", type=float, default=20.0, help="additive noise SNR in dB (default: 20)")
    p.add_argument("--seed", type=int, default=0, help="corpus seed (default: 0)")
    p.add_argument("--out-dir", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"complexclip {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
