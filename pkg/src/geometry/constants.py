"""
Fixed points and polygons of the coamoeba, all in the fundamental domain [0, 2pi]^2.
"""
import math

import numpy as np

PI = math.pi
TAU = 2.0 * math.pi
LN2 = math.log(2.0)

# Barycentres of the closed coamoeba triangles; centres of the radial flow.
O_CENTER = (2.0 * PI / 3.0, 4.0 * PI / 3.0)
O_PRIME = (4.0 * PI / 3.0, 2.0 * PI / 3.0)

T1_VERTICES = np.array([[0.0, PI], [PI, PI], [PI, TAU]])
T2_VERTICES = np.array([[PI, 0.0], [PI, PI], [TAU, PI]])

# Subdivision of the closed triangles by the three medians through O and O'.
# A* = closure Arg(H1), B* = closure Arg(H2), C* = closure Arg(H3).
A1_VERTICES = np.array([[0.0, PI], O_CENTER, [PI, PI]])
A2_VERTICES = np.array([[PI, PI], O_PRIME, [TAU, PI]])
B1_VERTICES = np.array([O_CENTER, [PI, PI], [PI, TAU]])
B2_VERTICES = np.array([[PI, 0.0], [PI, PI], O_PRIME])
C1_VERTICES = np.array([[0.0, PI], O_CENTER, [PI, TAU]])
C2_VERTICES = np.array([[PI, 0.0], O_PRIME, [TAU, PI]])

COAMOEBA_TRIANGLES = (T1_VERTICES, T2_VERTICES)
