"""Delaunay, Voronoi and nearest-site geometry"""

from .delaunay import Triangulation, delaunay, locate
from .spatial_index import GridIndex, knearest
from .voronoi import ClipRect, VoronoiDiagram, build_voronoi, voronoi
