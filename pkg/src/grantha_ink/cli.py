"""Command-line interface: train, recognize, convert, eval, serve.

Exit codes: 0 success, 1 usage error, 2 data/model error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .convert import Lexicon, convert_word, default_lexicon_path
from .dtw import DtwConfig, RecognitionModel, recognize, train
from .evaluate import evaluate
from .features import FeatureConfig
from .ink import InkSample, parse_unipen

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
MODEL_ENV = "GRANTHA_INK_MODEL"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_samples(data: str, require_labels: bool) -> list[InkSample]:
    path = Path(data)
    files = sorted(path.rglob("*.unipen")) if path.is_dir() else [path]
    if not files:
        raise ValueError(f"no .unipen files under {data!r}")
    samples: list[InkSample] = []
    for file in files:
        for sample in parse_unipen(file.read_text(encoding="utf-8")):
            if require_labels and sample.label is None:
                raise ValueError(f"unlabeled sample in {file}")
            samples.append(sample)
    return samples


def _load_model(path: str | None) -> RecognitionModel:
    if not path:
        raise ValueError(f"no model given; pass --model or set {MODEL_ENV}")
    return RecognitionModel.load(path)


def _cmd_train(args) -> int:
    samples = _read_samples(args.data, require_labels=True)
    model = train(
        samples,
        prototypes_per_class=args.prototypes,
        dtw_config=DtwConfig(window_fraction=args.window),
        feature_config=FeatureConfig(),
    )
    model.save(args.out)
    total_prototypes = sum(len(p) for p in model.prototypes)
    print(f"trained {len(model.classes)} classes from {len(samples)} samples; "
          f"{total_prototypes} prototypes -> {args.out}")
    return EXIT_OK


def _cmd_recognize(args) -> int:
    model = _load_model(args.model)
    samples = _read_samples(args.input, require_labels=False)
    for i, sample in enumerate(samples):
        if i:
            print()
        for rank, c in enumerate(recognize(model, sample, n_best=args.top, k=args.k), start=1):
            print(f"{rank} {c.class_id} {c.distance!r} {c.confidence!r}")
    return EXIT_OK


def _cmd_convert(args) -> int:
    lexicon = Lexicon.from_path(args.lexicon) if args.lexicon else None
    result = convert_word(args.text, lexicon)
    print(result.old_script)
    print(result.new_script)
    for note in result.notes:
        print(f"note: {note}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    model = _load_model(args.model)
    samples = _read_samples(args.data, require_labels=True)
    matrix, report = evaluate(model, samples, k=args.k, variant=args.variant)
    print(report.to_text(), end="")
    if args.report_json:
        Path(args.report_json).write_text(
            json.dumps(report.to_json_dict(), ensure_ascii=False, indent=2), encoding="utf-8")
    if args.matrix_csv:
        Path(args.matrix_csv).write_text(matrix.to_csv(), encoding="utf-8")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    model = _load_model(args.model)
    lexicon_path = args.lexicon or default_lexicon_path()
    lexicon = Lexicon.from_path(lexicon_path)
    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"--bind must be host:port, got {args.bind!r}")
    uvicorn.run(create_app(model, lexicon), host=host, port=int(port))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grantha-ink", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    model_default = os.environ.get(MODEL_ENV)

    p = sub.add_parser("train", help="train a model from labeled UNIPEN files")
    p.add_argument("--data", required=True, help="directory of .unipen files (or one file)")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--prototypes", type=int, default=4, help="prototypes per class")
    p.add_argument("--window", type=float, default=0.1, help="DTW band fraction")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("recognize", help="print candidates for a UNIPEN file")
    p.add_argument("--model", default=model_default)
    p.add_argument("--input", required=True)
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--k", type=int, default=3)
    p.set_defaults(func=_cmd_recognize)

    p = sub.add_parser("convert", help="convert a Grantha word to both Malayalam scripts")
    p.add_argument("--text", required=True)
    p.add_argument("--lexicon", default=None)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("eval", help="evaluate a model on labeled UNIPEN files")
    p.add_argument("--model", default=model_default)
    p.add_argument("--data", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--variant", choices=("dtw", "euclidean_resampled"), default="dtw")
    p.add_argument("--report-json", default=None)
    p.add_argument("--matrix-csv", default=None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP recognition service")
    p.add_argument("--model", default=model_default)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--bind", default="127.0.0.1:8765")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
