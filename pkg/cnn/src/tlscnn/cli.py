"""Command line: train, eval, predict.

    tlscnn train   --manifest corpus/manifest.jsonl --seed 0 --out model.pt
    tlscnn eval    --manifest corpus/manifest.jsonl --checkpoint model.pt
    tlscnn predict map.wtmap --checkpoint model.pt
"""

from __future__ import annotations

import argparse
import json
import sys

from .data import load_dataset
from .model import load_checkpoint
from .training import (Hyperparams, evaluate, midband_baseline_mae_mhz,
                       predict, save_model, train)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tlscnn",
        description="Convolutional defect-frequency regression on "
                    "two-tone spectroscopy maps")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a regressor from a manifest")
    p_train.add_argument("--manifest", required=True)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--out", required=True, help="checkpoint output path")
    p_train.add_argument("--report", help="write the training report JSON here")
    p_train.add_argument("--epochs", type=int, default=200)
    p_train.add_argument("--patience", type=int, default=20)
    p_train.add_argument("--batch-size", type=int, default=32)

    p_eval = sub.add_parser("eval", help="evaluate a checkpoint on a manifest")
    p_eval.add_argument("--manifest", required=True)
    p_eval.add_argument("--seed", type=int, default=0,
                        help="split seed (must match training to reuse splits)")
    p_eval.add_argument("--checkpoint", required=True)
    p_eval.add_argument("--out", help="write the metrics JSON here")

    p_pred = sub.add_parser("predict", help="predict defect frequencies for a map")
    p_pred.add_argument("mapfile")
    p_pred.add_argument("--checkpoint", required=True)
    p_pred.add_argument("--out", help="write the prediction JSON here")
    return parser


def cmd_train(args) -> int:
    splits = load_dataset(args.manifest, seed=args.seed)
    hyper = Hyperparams(max_epochs=args.epochs, patience=args.patience,
                        batch_size=args.batch_size, seed=args.seed)
    model, report = train(splits, hyper)
    save_model(model, args.out, report, hyper)
    if args.report:
        report.to_json(args.report)
    final = report.final
    print(f"stopped at epoch {report.stopping_epoch} "
          f"(best test epoch {report.best_epoch})")
    print(f"accuracy train/test/validation: "
          f"{final['train_accuracy']:.2f}/{final['test_accuracy']:.2f}/"
          f"{final['validation_accuracy']:.2f} %")
    print(f"MAE train/test/validation: "
          f"{final['train_mae_mhz']:.2f}/{final['test_mae_mhz']:.2f}/"
          f"{final['validation_mae_mhz']:.2f} MHz")
    baseline = midband_baseline_mae_mhz(splits.val_y)
    print(f"constant-midband baseline validation MAE: {baseline:.2f} MHz")
    return 0


def cmd_eval(args) -> int:
    model = load_checkpoint(args.checkpoint)
    splits = load_dataset(args.manifest, seed=args.seed)
    metrics = {}
    for name, x, y in [("train", splits.train_x, splits.train_y),
                       ("test", splits.test_x, splits.test_y),
                       ("validation", splits.val_x, splits.val_y)]:
        accuracy, mae = evaluate(model, x, y)
        metrics[name] = {"accuracy": accuracy, "mae_mhz": mae}
        print(f"{name}: accuracy {accuracy:.2f} %, MAE {mae:.2f} MHz")
    metrics["midband_baseline_mae_mhz"] = midband_baseline_mae_mhz(splits.val_y)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(metrics, fh, indent=2)
    return 0


def cmd_predict(args) -> int:
    model = load_checkpoint(args.checkpoint)
    frequencies = predict(model, args.mapfile)
    for value in frequencies:
        print(f"{value:.6f} GHz")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"frequencies_ghz": frequencies}, fh, indent=2)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"train": cmd_train, "eval": cmd_eval, "predict": cmd_predict}
    try:
        return handlers[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
