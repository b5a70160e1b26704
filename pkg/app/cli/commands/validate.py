import json
import logging
from pathlib import Path

from app.cli import options
from app.core.config import settings
from app.core.errors import ValidationFailure
from app.scenarios.validation import SUITES, format_table, run_validation

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("validate", help="Run the stick/slip validation suites")
    parser.add_argument("--suite", action="append", choices=sorted(SUITES), default=None,
                        help="Suite to run (repeatable, default all)")
    parser.add_argument("--neural-map", default=None, help="Directory of maps; adds the neural inclined-plane suite")
    parser.add_argument("--scenes-dir", default=None)
    parser.add_argument("--out-dir", default=None, help="Write validation.json here")
    options.add_threads(parser)
    parser.set_defaults(func=run)


def run(args) -> int:
    scenes_dir = args.scenes_dir or settings.SCENES_DIR
    results = run_validation(args.suite, scenes_dir, neural_map_dir=args.neural_map, threads=args.threads)
    table = format_table(results)
    print(table)
    if args.out_dir:
        out = Path(args.out_dir) / "validation.json"
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps([r.model_dump() for r in results], indent=2))
    failed = [r for r in results if not r.passed]
    if failed:
        names = ", ".join(f"{r.suite}@{r.mu}" for r in failed)
        raise ValidationFailure(f"{len(failed)} of {len(results)} validation cases failed: {names}")
    logger.info(f"All {len(results)} validation cases passed")
    return 0
