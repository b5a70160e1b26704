"""
Rigid-body stick/slip validation: inclined plane, leaning triangle and a
block leaning against a wall, each run over a grid of friction coefficients.
"""
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.core.config import settings
from app.core.errors import ConfigError
from app.scenarios.loader import load_scene
from app.scenarios.runner import run_scene
from app.schemas.frame import ValidationResult

logger = logging.getLogger(__name__)

STATIC = "static"
SLIDES = "slides"


@dataclass(frozen=True)
class Suite:
    name: str
    scene: str
    expected: Dict[float, str]
    decreasing: bool = False
    backend: str = "oracle"
    required_maps: Tuple[Tuple[str, str], ...] = ()


SUITES: Dict[str, Suite] = {
    "inclined_plane": Suite("inclined_plane", "inclined_plane.json", {0.28: SLIDES, 0.30: STATIC, 0.32: STATIC}),
    "triangle": Suite("triangle", "triangle.json", {0.1: SLIDES, 0.3: STATIC, 0.5: STATIC}),
    "leaning_block": Suite("leaning_block", "leaning_block.json", {0.1: SLIDES, 0.3: SLIDES, 0.5: SLIDES}, decreasing=True),
}

NEURAL_SUITE = Suite(
    "inclined_plane_neural", "inclined_plane_boxes.json", {0.28: SLIDES, 0.30: STATIC, 0.32: STATIC},
    backend="neural",
    required_maps=(("incline_box", "incline_slab"),),
)


def classify(displacement: float) -> str:
    if displacement < settings.STATIC_DISPLACEMENT:
        return STATIC
    if displacement > settings.SLIDING_DISPLACEMENT:
        return SLIDES
    return "undecided"


def run_suite(
    suite: Suite,
    scenes_dir: Union[str, Path],
    map_dir: Optional[Union[str, Path]] = None,
    threads: Optional[int] = None,
) -> List[ValidationResult]:
    results = []
    for mu, expected in suite.expected.items():
        started = time.perf_counter()
        loaded = load_scene(Path(scenes_dir) / suite.scene, backend=suite.backend, mu=mu, threads=threads, map_dir=map_dir)
        for name_a, name_b in suite.required_maps:
            if loaded.world.registry.lookup(name_a, name_b) is None:
                raise ConfigError(f"Suite {suite.name} needs a neural map for {name_a}/{name_b}")
        summary = run_scene(loaded)
        observed = classify(summary.max_displacement)
        results.append(ValidationResult(
            suite=suite.name,
            mu=mu,
            backend=suite.backend,
            displacement=summary.max_displacement,
            expected=expected,
            observed=observed,
            passed=observed == expected,
            seconds=time.perf_counter() - started,
        ))
        logger.info(f"{suite.name} mu={mu}: displacement {summary.max_displacement:.3e} -> {observed} (expected {expected})")

    if suite.decreasing:
        ordered = sorted(results, key=lambda r: r.mu)
        monotone = all(a.displacement > b.displacement for a, b in zip(ordered, ordered[1:]))
        if not monotone:
            logger.warning(f"{suite.name}: displacement is not strictly decreasing in mu")
            results = [r.model_copy(update={"passed": False, "observed": f"{r.observed} (not decreasing)"}) for r in results]
    return results


def run_validation(
    names: Optional[Sequence[str]],
    scenes_dir: Union[str, Path],
    neural_map_dir: Optional[Union[str, Path]] = None,
    threads: Optional[int] = None,
) -> List[ValidationResult]:
    suites = [SUITES[name] for name in (names or SUITES)]
    if neural_map_dir is not None:
        suites.append(NEURAL_SUITE)
    results = []
    for suite in suites:
        results.extend(run_suite(suite, scenes_dir, map_dir=neural_map_dir, threads=threads))
    return results


def format_table(results: Sequence[ValidationResult]) -> str:
    header = f"{'suite':<24}{'mu':>6}{'displacement':>15}  {'expected':<10}{'observed':<22}{'ok':<4}{'secs':>8}"
    lines = [header, "-" * len(header)]
    for r in results:
        lines.append(
            f"{r.suite:<24}{r.mu:>6.2f}{r.displacement:>15.3e}  {r.expected:<10}{r.observed:<22}"
            f"{'yes' if r.passed else 'NO':<4}{r.seconds:>8.1f}"
        )
    return "\n".join(lines)
