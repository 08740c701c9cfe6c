from pydantic import BaseModel, ConfigDict, Field


class GroundSegmenterConfig(BaseModel):
    """Parameters of the polar-grid ground segmenter. Distances in meters,
    angles in degrees."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    cell_size: float = Field(default=2.0, gt=0.0, description="radial width of a grid cell")
    sector_deg: float = Field(default=22.5, gt=0.0, le=360.0, description="angular width of a grid cell")
    max_range: float = Field(default=100.0, gt=0.0, description="grid extent; farther points join the last ring")
    seed_height_margin: float = Field(default=0.2, gt=0.0)
    max_plane_distance: float = Field(default=0.15, gt=0.0)
    max_slope: float = Field(default=25.0, gt=0.0, lt=45.0)
    refinement_iterations: int = Field(default=3, ge=1)
    elevation_margin: float = Field(
        default=0.3, gt=0.0,
        description="cells whose ground sits this far above the median cell are not ground",
    )
    strict: bool = Field(default=False, description="raise EmptyInput on an empty cloud")
