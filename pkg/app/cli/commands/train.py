import logging
from pathlib import Path

from app.cli import options
from app.neural.training import train_map
from app.schemas.training import HyperParams
from app.storage.dataset_file import load_dataset
from app.storage.model_file import save_map

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("train", help="Train a neural contact map from a dataset file")
    parser.add_argument("--dataset", required=True)
    parser.add_argument("--arch", default=None, help="Hidden layers x width, e.g. 5x64")
    parser.add_argument("--epochs", type=int, default=None)
    parser.add_argument("--learning-rate", type=float, default=None)
    parser.add_argument("--batch-size", type=int, default=None)
    parser.add_argument("--out", default=None, help="Model file (default <out-dir>/<a>__<b>.cem)")
    options.add_seed(parser)
    options.add_out_dir(parser)
    parser.set_defaults(func=run)


def hyper_from_args(args) -> HyperParams:
    given = {
        "epochs": args.epochs,
        "learning_rate": args.learning_rate,
        "batch_size": args.batch_size,
        "seed": args.seed,
    }
    return HyperParams(**{k: v for k, v in given.items() if v is not None})


def run(args) -> int:
    dataset = load_dataset(args.dataset)
    contact_map, report = train_map(dataset, args.arch, hyper_from_args(args))
    stem = options.pair_stem(dataset.shapeA_name, dataset.shapeB_name)
    out = Path(args.out) if args.out else Path(args.out_dir) / (stem + options.MAP_SUFFIX)
    save_map(contact_map, out)
    report_path = out.with_suffix(".json")
    report_path.write_text(report.model_dump_json(indent=2))
    print(report.model_dump_json(indent=2, exclude={"dist_loss", "arm_loss"}))
    print(f"Model written to {out}, training report to {report_path}")
    return 0
