from typing import Annotated, List, Literal, Tuple, Union

from pydantic import BaseModel, Field


class ShapeSpecBase(BaseModel):
    name: str
    density: float = Field(default=1.0, gt=0.0)


class PolygonShapeSpec(ShapeSpecBase):
    kind: Literal["polygon"]
    vertices: List[Tuple[float, float]]


class BoxShapeSpec(ShapeSpecBase):
    kind: Literal["box"]
    width: float = Field(gt=0.0)
    height: float = Field(gt=0.0)


class RegularShapeSpec(ShapeSpecBase):
    kind: Literal["regular"]
    n: int = Field(ge=3)
    circumradius: float = Field(gt=0.0)


class DiscShapeSpec(ShapeSpecBase):
    kind: Literal["disc"]
    radius: float = Field(gt=0.0)
    segments: int = 64


class ArcShapeSpec(ShapeSpecBase):
    kind: Literal["arc"]
    radius: float = Field(gt=0.0)
    thickness: float = Field(gt=0.0)
    fraction: float = Field(gt=0.0, le=1.0)
    segments: int = 64


ShapeSpec = Annotated[
    Union[PolygonShapeSpec, BoxShapeSpec, RegularShapeSpec, DiscShapeSpec, ArcShapeSpec],
    Field(discriminator="kind"),
]


class ShapeLibraryFile(BaseModel):
    shapes: List[ShapeSpec] = []
