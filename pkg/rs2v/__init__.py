__version__ = "0.1.0"

from . import geometry
from . import pointcloud
from . import annotations
from . import segmentation
from . import virtual_lidar
from . import pipeline
