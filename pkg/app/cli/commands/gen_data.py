import logging
from pathlib import Path

from app.cli import options
from app.core.config import settings
from app.neural.dataset import near_band_fraction, sample_dataset
from app.storage.dataset_file import save_dataset

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("gen-data", help="Sample a labelled contact dataset for a shape pair")
    parser.add_argument("--shape-a", required=True)
    parser.add_argument("--shape-b", required=True)
    parser.add_argument("--count", type=int, default=None, help="Number of samples")
    parser.add_argument("--near-fraction", type=float, default=None)
    parser.add_argument("--band", type=float, default=None)
    parser.add_argument("--resolution", type=int, default=None, help="Oracle grid resolution for labels")
    parser.add_argument("--out", default=None, help="Dataset file (default <out-dir>/<a>__<b>.ced)")
    options.add_library(parser)
    options.add_seed(parser)
    options.add_threads(parser)
    options.add_out_dir(parser)
    parser.set_defaults(func=run)


def run(args) -> int:
    shapes = options.library_shapes(args.library)
    shape_a = options.pick_shape(shapes, args.shape_a)
    shape_b = options.pick_shape(shapes, args.shape_b)
    dataset = sample_dataset(
        shape_a,
        shape_b,
        args.count or settings.DATASET_SIZE,
        near_frac=args.near_fraction,
        band=args.band,
        seed=args.seed,
        workers=args.threads,
        resolution=args.resolution,
    )
    out = Path(args.out) if args.out else Path(args.out_dir) / (options.pair_stem(shape_a.name, shape_b.name) + options.DATASET_SUFFIX)
    save_dataset(dataset, out)
    print(f"{len(dataset)} samples for {shape_a.name}/{shape_b.name}, near-band fraction {near_band_fraction(dataset):.3f} -> {out}")
    return 0
