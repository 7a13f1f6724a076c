from reegeom.geometry.bodies import Body, Vertex, TETRAHEDRON, OCTAHEDRON, \
    SurfaceMesh, nearest_vertex, surface_mesh, face_crossing, \
    in_tetrahedron, in_octahedron
from reegeom.geometry.crossing import CrossingPoint, line_surface_crossing
