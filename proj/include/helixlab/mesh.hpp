#pragma once

// Symmetric triangle meshes: rho_Y pairing, boundary pins into a BoundaryCurve,
// topology bookkeeping, refinement, Schwarz reflection, and file I/O.

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "helixlab/boundary.hpp"

namespace helixlab {

struct VertexPin {
    int piece = -1;  // -1: free vertex
    double param = 0.0;
    bool pinned() const { return piece >= 0; }
};

struct TopologyCache {
    int V = 0, E = 0, F = 0;
    int chi = 0;
    int components = 0;
    int boundary_loops = 0;
    int genus = 0;
};

struct SymMesh {
    AmbientParams amb;
    std::vector<ChartPoint> verts;
    std::vector<std::array<int, 3>> tris;
    std::vector<VertexPin> pins;       // per vertex
    std::vector<int> pairing;          // rho_Y involution on vertex indices
    std::vector<std::uint8_t> fixed_on_Y;  // pairing[v] == v, lies on Y
    std::shared_ptr<const BoundaryCurve> curve;  // pin target (may be null)

    int nv() const { return static_cast<int>(verts.size()); }
    int nf() const { return static_cast<int>(tris.size()); }
};

struct EdgeInfo {
    int a = 0, b = 0;        // a < b
    int t0 = -1, t1 = -1;    // incident triangles
    bool boundary() const { return t1 < 0; }
};

// Sorted unique edge list with incident triangles; throws on non-manifold edges.
std::vector<EdgeInfo> build_edges(const SymMesh& m);

// Structural checks: edge-manifold, consistent orientation, involutive pairing
// mapping triangles to triangles, pins on curve, fixed vertices on Y.
void validate_mesh(const SymMesh& m, double tol = 1e-7);

TopologyCache topology_summary(const SymMesh& m);

// Average each vertex with the rho_Y image of its partner; fixed vertices are
// projected onto Y exactly.  Idempotent.
void symmetrize(SymMesh& m);

// Re-evaluate every pinned vertex position from the mesh's curve.
void apply_pins(SymMesh& m);

// Max distance a vertex moved in the last symmetrize (chart metric approx).
double symmetry_defect(const SymMesh& m);

struct QualityConfig {
    double min_angle_floor = 0.25;      // radians
    double split_above = 0.0;           // split edges longer than this (0: off)
    double collapse_below = 0.0;        // collapse interior edges shorter (0: off)
    int flip_passes = 2;
};

// Uniform 1->4 split of every triangle.
void refine_uniform(SymMesh& m);

// Split one edge (adjacent triangles 1->2 each); returns the new vertex id.
// The caller is responsible for splitting the rho_Y mirror edge and linking
// the two midpoints, unless the edge is its own mirror.
int split_edge(SymMesh& m, int a, int b);

// Collapse an interior edge into its midpoint; returns false if rejected
// (boundary, pinned, fixed vertices, or link condition violated).
bool collapse_edge(SymMesh& m, int a, int b);

// Local quality pass: rho_Y-symmetric edge flips, long-edge splits, short-edge
// collapses.  Preserves boundary pins, pairing, orientation and topology.
void refine_quality(SymMesh& m, const QualityConfig& cfg);

// Double S across rho_Z and weld along the axes and X.  The input must be
// rho_Y-symmetric with boundary containing the axis segments and X.
SymMesh schwarz_reflect(const SymMesh& s, double weld_tol_factor = 1e-8);

// triangle vertices expressed in a common chart chosen per triangle
Chart tri_anchor_chart(const SymMesh& m, int t);
std::array<ChartPoint, 3> tri_points(const SymMesh& m, int t, Chart chart);

// metric edge lengths / angles of a triangle (anchor chart, metric at centroid)
double tri_min_angle(const SymMesh& m, int t);
double edge_metric_length(const SymMesh& m, int a, int b);

struct MeshProjection {
    ChartPoint point;
    double dist = 0.0;
    int tri = -1;
    bool ambiguous = false;
};

MeshProjection nearest_point_on_mesh(const SymMesh& m, const ChartPoint& p);

// Symmetric Hausdorff distance estimate between vertex sets and surfaces.
double mesh_hausdorff(const SymMesh& a, const SymMesh& b);

// apply an isometry to every vertex (pairing/pins unchanged)
SymMesh transform_mesh(const SymMesh& m, const Isometry& iso);

// I/O: chart coordinates + JSON sidecar carrying R, kappa, charts, pairing, pins.
void save_mesh(const SymMesh& m, const std::string& path_no_ext, const std::string& format,
               double kappa, bool embedded_view = false);
SymMesh load_mesh(const std::string& path_no_ext, const std::string& format);

}  // namespace helixlab
