#pragma once

// The boundary curve Gamma = Z_h u Z*_h u X u C u rhoY(C), its corner
// roundings Gamma(t) with a sign choice at O and O*, and the bridged
// curves Gamma(t,s) used by the s-continuation.
//
// Pieces carry exact parametrizations; meshes pin boundary vertices by
// (piece id, parameter) so re-pinning under continuation is exact.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "helixlab/helicoid.hpp"

namespace helixlab {

struct SymMesh;  // mesh.hpp

enum class CChoice : std::uint8_t { InH, Orthogonal };

enum class PieceRole : std::uint8_t {
    ZUp,     // axis at O, z in [>=0, h]
    ZDn,     // axis at O, z in [-h, <=0]
    ZsUp,    // axis at O*, upper
    ZsDn,    // axis at O*, lower
    XPlus,   // half of X at azimuth 0, from O to O*
    XMinus,  // half of X at azimuth pi
    CTop,    // semicircle at z = +h
    CBot,    // rhoY image at z = -h
    Arc,     // rounding arc
};

enum class CornerId : std::uint8_t { O, Ostar, TopZ, TopZstar, BotZ, BotZstar };

struct RoundArcGeom {
    CornerId corner = CornerId::O;
    Strip strip = Strip::A;
    double d = 0.0;       // offset of the arc endpoints from the corner
    double v_sign = 1.0;  // sign of the axis-side endpoint in local coords
};

struct CurvePiece {
    PieceRole role = PieceRole::ZUp;
    // AxisSeg pieces: param s in [0,1], z = z0 + s*(z1-z0)
    double z0 = 0.0, z1 = 0.0;
    // X / CTop / CBot pieces: polar range psi = psi0 + s*(psi1-psi0)
    double psi0 = 0.0, psi1 = 0.0;
    RoundArcGeom arc;  // for Arc pieces
};

struct BoundaryVertex {
    ChartPoint p;
    int piece = -1;
    double param = 0.0;
};

struct BoundaryCurve {
    HelicoidSpec spec;
    double h = 0.0;
    double t = 0.0;  // rounding scale, 0 = sharp corners
    CChoice c_choice = CChoice::InH;
    int sign_O = +1, sign_Ostar = +1;  // meaningful when t > 0

    std::vector<CurvePiece> pieces;
    std::vector<BoundaryVertex> polyline;          // sampled, for export/tests
    std::vector<std::vector<int>> components;      // polyline indices per loop (rounded curves)

    // Bridged state for Gamma(t,s): positions are blended toward the normal
    // projection onto a reference surface.
    double blend_s = 1.0;
    std::shared_ptr<const SymMesh> blend_ref;

    bool rounded() const { return t > 0.0; }

    ChartPoint eval(int piece, double s) const;
    int find_piece(PieceRole role) const;
    const CurvePiece& piece_of(PieceRole role) const { return pieces[find_piece(role)]; }
};

// Largest admissible rounding scale: half the minimal corner separation.
double rounding_scale_limit(double h, const AmbientParams& amb);

// Azimuth lift of the top semicircle C (z = +h).
double top_circle_lift(const HelicoidSpec& spec, double h, CChoice c);

BoundaryCurve build_gamma(double h, CChoice c_choice, const HelicoidSpec& spec,
                          int samples_per_piece = 48);

BoundaryCurve round_gamma(const BoundaryCurve& g, double t, int sign_O, int sign_Ostar);

// Vertex-wise blend between the nearest-point projection of gt onto ref (s=0)
// and gt itself (s=1).
BoundaryCurve gamma_ts(const BoundaryCurve& gt, double s, std::shared_ptr<const SymMesh> ref);

// Number of corners (tangent-direction discontinuities) of the sampled curve.
int count_corners(const BoundaryCurve& g, double angle_threshold = 0.3);

// Max turning angle between consecutive polyline segments away from corners.
double max_turning_angle(const BoundaryCurve& g, double corner_exclusion_radius);

// Hausdorff distance between sampled polylines (chart-metric approximation).
double curve_hausdorff(const BoundaryCurve& a, const BoundaryCurve& b);

}  // namespace helixlab
