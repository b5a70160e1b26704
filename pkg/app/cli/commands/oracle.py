"""
One-shot contact query, dumped as JSON for debugging.
"""
import logging

import numpy as np

from app.cli import options
from app.core.errors import ConfigError
from app.engine.narrow_phase import Backend, MapRegistry, narrow_phase
from app.models.contact import HalfPlane
from app.schemas.frame import ContactQueryRead

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("oracle", help="Print the contact query for one pair of posed shapes")
    parser.add_argument("--shape-a", default=None, help="Body A (omit when --halfplane is given)")
    parser.add_argument("--shape-b", required=True)
    parser.add_argument("--qa", nargs=3, type=float, default=(0.0, 0.0, 0.0), metavar=("THETA", "X", "Y"))
    parser.add_argument("--qb", nargs=3, type=float, default=(0.0, 0.0, 0.0), metavar=("THETA", "X", "Y"))
    parser.add_argument("--halfplane", nargs=3, type=float, default=None, metavar=("NX", "NY", "OFFSET"),
                        help="Query shape B against a halfplane instead of shape A")
    parser.add_argument("--map", action="append", default=[], help="Neural map file (with --backend neural)")
    options.add_library(parser)
    options.add_backend(parser)
    parser.set_defaults(func=run)


def run(args) -> int:
    shapes = options.library_shapes(args.library)
    shape_b = options.pick_shape(shapes, args.shape_b)
    if args.halfplane is not None:
        nx, ny, offset = args.halfplane
        try:
            body_a = HalfPlane(np.array([nx, ny]), offset, "halfplane")
        except ValueError as e:
            raise ConfigError(f"Bad halfplane: {e}")
    elif args.shape_a:
        body_a = options.pick_shape(shapes, args.shape_a)
    else:
        raise ConfigError("Give --shape-a or --halfplane")

    backend = Backend(args.backend or "oracle")
    registry = MapRegistry.from_files(args.map) if backend == Backend.NEURAL else None
    result = narrow_phase(body_a, shape_b, options.pose(args.qa), options.pose(args.qb), backend, registry)
    read = ContactQueryRead(
        d=float(result.d),
        x_star=tuple(float(c) for c in result.x_star),
        n_world=tuple(float(c) for c in result.n_world),
        grad_cfg=tuple(float(c) for c in result.grad_cfg),
        proj_rA=float(result.proj_rA),
        proj_rB=float(result.proj_rB),
        deep=bool(result.deep),
    )
    print(read.model_dump_json(indent=2))
    return 0
