import argparse
import logging
from pathlib import Path

from dotenv import load_dotenv
load_dotenv()

from app.cli import options
from app.core.config import settings
from app.engine.world import map_pairs
from app.neural.dataset import sample_dataset
from app.neural.training import train_map
from app.scenarios.loader import load_scene
from app.schemas.training import HyperParams
from app.storage.dataset_file import load_dataset, save_dataset
from app.storage.model_file import save_map

logger = logging.getLogger(__name__)


def seed_maps(scenes, map_dir, count=None, arch=None, epochs=None, seed=None, threads=None, force=False, boundary=True):
    """
    Generate datasets and train a contact map for every shape pair the given
    scenes need. Existing maps are kept unless ``force`` is set.
    """
    map_dir = Path(map_dir)
    map_dir.mkdir(parents=True, exist_ok=True)
    wanted = {}
    for scene in scenes:
        loaded = load_scene(options.scene_path(scene), backend="oracle")
        for pair in map_pairs(loaded.world.bodies, boundary=boundary):
            wanted.setdefault(pair, loaded.shapes)
        loaded.world.close()

    hyper = HyperParams(**({"epochs": epochs} if epochs is not None else {}), **({"seed": seed} if seed is not None else {}))
    trained = 0
    for (name_a, name_b), shapes in sorted(wanted.items()):
        stem = options.pair_stem(name_a, name_b)
        map_path = map_dir / (stem + options.MAP_SUFFIX)
        if map_path.exists() and not force:
            print(f"{map_path} already exists. Use --force to retrain it.")
            continue
        data_path = map_dir / (stem + options.DATASET_SUFFIX)
        if data_path.exists() and not force:
            dataset = load_dataset(data_path)
        else:
            dataset = sample_dataset(shapes[name_a], shapes[name_b], count or settings.DATASET_SIZE, seed=seed, workers=threads)
            save_dataset(dataset, data_path)
        contact_map, report = train_map(dataset, arch, hyper)
        save_map(contact_map, map_path)
        map_path.with_suffix(".json").write_text(report.model_dump_json(indent=2))
        trained += 1
        print(f"Trained {name_a}/{name_b}: holdout MAE {report.holdout_mae}, sign agreement {report.sign_agreement}")

    print(f"Successfully seeded {trained} maps into {map_dir} ({len(wanted)} pairs needed).")
    return trained


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Train neural contact maps for the shape pairs of one or more scenes")
    parser.add_argument("scenes", nargs="+", help="Scene files or shipped scene names")
    parser.add_argument("--map-dir", default="maps", help="Where datasets and maps are written")
    parser.add_argument("--count", type=int, default=None, help="Samples per pair")
    parser.add_argument("--arch", default=None, help="Hidden layers x width, e.g. 5x64")
    parser.add_argument("--epochs", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--dynamic-only", action="store_true", help="Skip maps against static and kinematic shapes")
    parser.add_argument("--force", action="store_true", help="Regenerate datasets and maps that already exist")
    args = parser.parse_args()

    logging.basicConfig(level=settings.LOG_LEVEL)
    seed_maps(args.scenes, args.map_dir, args.count, args.arch, args.epochs, args.seed, args.threads,
              force=args.force, boundary=not args.dynamic_only)
