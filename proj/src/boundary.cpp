#include "helixlab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "helixlab/mesh.hpp"

namespace helixlab {

double rounding_scale_limit(double h, const AmbientParams& amb) {
    // corner separations: h (O to a top corner along an axis), pi*R (O to O*)
    return 0.5 * std::min(h, M_PI * amb.R);
}

double top_circle_lift(const HelicoidSpec& spec, double h, CChoice c) {
    const double lift = M_PI * h / spec.eta();
    return c == CChoice::InH ? lift : lift + M_PI / 2;
}

// ---- quintic fillet ---------------------------------------------------------

// Quintic Hermite with prescribed value/first/second derivative at both ends.
static double quintic(double f0, double d0, double f1, double d1, double tau) {
    const double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau, t5 = t4 * tau;
    const double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double h10 = tau - 6 * t3 + 8 * t4 - 3 * t5;
    const double h01 = 10 * t3 - 15 * t4 + 6 * t5;
    const double h11 = -4 * t3 + 7 * t4 - 3 * t5;
    return f0 * h00 + d0 * h10 + f1 * h01 + d1 * h11;
}

// Fillet in local (u, v) coordinates: starts at (d, 0) tangent to the u-ray,
// ends at (0, sign*d) tangent to the axis ray.  Curvature vanishes at both
// junctions, so the join with the straight pieces is C^2.
static void fillet_uv(double d, double v_sign, double tau, double& u, double& v) {
    const double L = 1.5 * d;
    u = quintic(d, -L, 0.0, 0.0, tau);
    v = quintic(0.0, 0.0, v_sign * d, v_sign * L, tau);
}

// Local frame -> (psi, lift) for a rounding arc at the given corner/strip.
static ChartPoint arc_point(const RoundArcGeom& a, double tau, const HelicoidSpec& spec,
                            double h, double lift_top) {
    double u, v;
    fillet_uv(a.d, a.v_sign, tau, u, v);
    const double R = spec.amb.R;
    double psi = 0, lift = 0;
    switch (a.corner) {
        case CornerId::O:
            psi = u / R;
            lift = (a.strip == Strip::A ? 0.0 : M_PI) + M_PI * v / spec.eta();
            break;
        case CornerId::Ostar:
            psi = M_PI - u / R;
            lift = (a.strip == Strip::A ? 0.0 : M_PI) + M_PI * v / spec.eta();
            break;
        case CornerId::TopZ:
        case CornerId::TopZstar:
            psi = (a.corner == CornerId::TopZ) ? u / R : M_PI - u / R;
            lift = lift_top - M_PI * v / spec.eta();
            break;
        case CornerId::BotZ:
        case CornerId::BotZstar:
            psi = (a.corner == CornerId::BotZ) ? u / R : M_PI - u / R;
            lift = (M_PI - lift_top) + M_PI * v / spec.eta();
            break;
    }
    (void)h;
    return strip_point(a.strip, psi, lift, spec);
}

// ---- eval -------------------------------------------------------------------

static ChartPoint eval_geometry(const BoundaryCurve& g, int piece, double s) {
    const CurvePiece& pc = g.pieces[piece];
    const HelicoidSpec& spec = g.spec;
    const double lift_top = top_circle_lift(spec, g.h, g.c_choice);
    switch (pc.role) {
        case PieceRole::ZUp:
        case PieceRole::ZDn:
            return {0, 0, pc.z0 + s * (pc.z1 - pc.z0), Chart::NearO};
        case PieceRole::ZsUp:
        case PieceRole::ZsDn:
            return {0, 0, pc.z0 + s * (pc.z1 - pc.z0), Chart::NearOstar};
        case PieceRole::XPlus:
            return from_polar(pc.psi0 + s * (pc.psi1 - pc.psi0), 0.0, 0.0, spec.amb);
        case PieceRole::XMinus:
            return from_polar(pc.psi0 + s * (pc.psi1 - pc.psi0), M_PI, 0.0, spec.amb);
        case PieceRole::CTop:
            return from_polar(pc.psi0 + s * (pc.psi1 - pc.psi0), lift_top, g.h, spec.amb);
        case PieceRole::CBot:
            return from_polar(pc.psi0 + s * (pc.psi1 - pc.psi0), M_PI - lift_top, -g.h, spec.amb);
        case PieceRole::Arc:
            return arc_point(pc.arc, s, spec, g.h, M_PI * g.h / spec.eta());
    }
    throw std::logic_error("eval_geometry: bad piece");
}

ChartPoint BoundaryCurve::eval(int piece, double s) const {
    ChartPoint base = eval_geometry(*this, piece, s);
    if (!blend_ref || blend_s >= 1.0) return base;
    MeshProjection pr = nearest_point_on_mesh(*blend_ref, base);
    if (pr.ambiguous)
        throw std::runtime_error("gamma_ts: ambiguous nearest-point projection");
    ChartPoint proj = in_chart(pr.point, base.chart, spec.amb);
    ChartPoint out = base;
    out.x = proj.x + blend_s * (base.x - proj.x);
    out.y = proj.y + blend_s * (base.y - proj.y);
    out.z = proj.z + blend_s * (base.z - proj.z);
    return out;
}

int BoundaryCurve::find_piece(PieceRole role) const {
    for (size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].role == role) return static_cast<int>(i);
    throw std::runtime_error("BoundaryCurve: piece not found");
}

// ---- construction -----------------------------------------------------------

static void sample_piece(BoundaryCurve& g, int piece, int n) {
    for (int i = 0; i <= n; ++i) {
        const double s = double(i) / n;
        g.polyline.push_back({g.eval(piece, s), piece, s});
    }
}

BoundaryCurve build_gamma(double h, CChoice c_choice, const HelicoidSpec& spec,
                          int samples_per_piece) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("build_gamma: h must be positive and finite");
    BoundaryCurve g;
    g.spec = spec;
    g.h = h;
    g.c_choice = c_choice;
    g.pieces = {
        {PieceRole::ZUp, 0.0, h, 0, 0, {}},
        {PieceRole::ZDn, -h, 0.0, 0, 0, {}},
        {PieceRole::ZsUp, 0.0, h, 0, 0, {}},
        {PieceRole::ZsDn, -h, 0.0, 0, 0, {}},
        {PieceRole::XPlus, 0, 0, 0.0, M_PI, {}},
        {PieceRole::XMinus, 0, 0, 0.0, M_PI, {}},
        {PieceRole::CTop, 0, 0, 0.0, M_PI, {}},
        {PieceRole::CBot, 0, 0, 0.0, M_PI, {}},
    };
    for (size_t i = 0; i < g.pieces.size(); ++i)
        sample_piece(g, static_cast<int>(i), samples_per_piece);
    return g;
}

BoundaryCurve round_gamma(const BoundaryCurve& g0, double t, int sign_O, int sign_Ostar) {
    const double t0 = rounding_scale_limit(g0.h, g0.spec.amb);
    if (!(t > 0.0) || t >= t0)
        throw std::invalid_argument("round_gamma: need 0 < t < t0 (half min corner distance)");
    if (g0.rounded())
        throw std::invalid_argument("round_gamma: input already rounded");
    if (g0.c_choice != CChoice::InH)
        throw std::invalid_argument("round_gamma: roundings require the in-H circle choice");
    BoundaryCurve g;
    g.spec = g0.spec;
    g.h = g0.h;
    g.c_choice = g0.c_choice;
    g.t = t;
    g.sign_O = sign_O;
    g.sign_Ostar = sign_Ostar;

    const double R = g.spec.amb.R;
    const double d = 0.75 * t;   // arc endpoint offset along each ray
    const double dpsi = d / R;   // same offset in polar angle
    const double h = g.h;

    g.pieces = {
        {PieceRole::ZUp, d, h - d, 0, 0, {}},
        {PieceRole::ZDn, -h + d, -d, 0, 0, {}},
        {PieceRole::ZsUp, d, h - d, 0, 0, {}},
        {PieceRole::ZsDn, -h + d, -d, 0, 0, {}},
        {PieceRole::XPlus, 0, 0, dpsi, M_PI - dpsi, {}},
        {PieceRole::XMinus, 0, 0, dpsi, M_PI - dpsi, {}},
        {PieceRole::CTop, 0, 0, dpsi, M_PI - dpsi, {}},
        {PieceRole::CBot, 0, 0, dpsi, M_PI - dpsi, {}},
    };
    auto arc = [&](CornerId c, Strip s, double vs) {
        CurvePiece pc;
        pc.role = PieceRole::Arc;
        pc.arc = {c, s, d, vs};
        g.pieces.push_back(pc);
    };
    // crossing corners: wiring by sign
    arc(CornerId::O, Strip::A, sign_O > 0 ? +1.0 : -1.0);
    arc(CornerId::O, Strip::B, sign_O > 0 ? -1.0 : +1.0);
    arc(CornerId::Ostar, Strip::A, sign_Ostar > 0 ? +1.0 : -1.0);
    arc(CornerId::Ostar, Strip::B, sign_Ostar > 0 ? -1.0 : +1.0);
    // simple corners: single arc each
    arc(CornerId::TopZ, Strip::A, +1.0);
    arc(CornerId::TopZstar, Strip::A, +1.0);
    arc(CornerId::BotZ, Strip::B, +1.0);
    arc(CornerId::BotZstar, Strip::B, +1.0);

    for (size_t i = 0; i < g.pieces.size(); ++i)
        sample_piece(g, static_cast<int>(i), g.pieces[i].role == PieceRole::Arc ? 24 : 48);

    // component walk over piece endpoints
    const double tol = 1e-9 * R;
    const int np = static_cast<int>(g.pieces.size());
    std::vector<ChartPoint> end0(np), end1(np);
    for (int i = 0; i < np; ++i) {
        end0[i] = g.eval(i, 0.0);
        end1[i] = g.eval(i, 1.0);
    }
    auto close = [&](const ChartPoint& a, const ChartPoint& b) {
        return geodesic_distance(a, b, g.spec.amb) < tol;
    };
    std::vector<bool> used(np, false);
    for (int start = 0; start < np; ++start) {
        if (used[start]) continue;
        std::vector<int> loop;
        int cur = start;
        bool forward = true;
        while (true) {
            used[cur] = true;
            loop.push_back(cur);
            const ChartPoint tail = forward ? end1[cur] : end0[cur];
            int next = -1;
            bool next_forward = true;
            for (int j = 0; j < np; ++j) {
                if (used[j]) continue;
                if (close(end0[j], tail)) { next = j; next_forward = true; break; }
                if (close(end1[j], tail)) { next = j; next_forward = false; break; }
            }
            if (next < 0) break;
            cur = next;
            forward = next_forward;
        }
        g.components.push_back(loop);
    }
    return g;
}

BoundaryCurve gamma_ts(const BoundaryCurve& gt, double s, std::shared_ptr<const SymMesh> ref) {
    if (s < 0.0 || s > 1.0)
        throw std::invalid_argument("gamma_ts: s must be in [0,1]");
    BoundaryCurve g = gt;
    g.blend_s = s;
    g.blend_ref = std::move(ref);
    g.polyline.clear();
    for (size_t i = 0; i < g.pieces.size(); ++i)
        sample_piece(g, static_cast<int>(i), g.pieces[i].role == PieceRole::Arc ? 24 : 48);
    return g;
}

// ---- diagnostics ------------------------------------------------------------

namespace {
struct Node {
    ChartPoint p;
    std::vector<std::pair<int, bool>> ends;  // piece, at_start
};
}  // namespace

static std::vector<Node> junction_nodes(const BoundaryCurve& g) {
    std::vector<Node> nodes;
    const double tol = 1e-7 * g.spec.amb.R;
    for (size_t i = 0; i < g.pieces.size(); ++i) {
        for (int e = 0; e < 2; ++e) {
            ChartPoint p = g.eval(static_cast<int>(i), e == 0 ? 0.0 : 1.0);
            bool found = false;
            for (Node& n : nodes) {
                if (geodesic_distance(n.p, p, g.spec.amb) < tol) {
                    n.ends.push_back({static_cast<int>(i), e == 0});
                    found = true;
                    break;
                }
            }
            if (!found) nodes.push_back({p, {{static_cast<int>(i), e == 0}}});
        }
    }
    return nodes;
}

// unit tangent of piece i at an endpoint, pointing away from the endpoint
static Vec3 end_tangent(const BoundaryCurve& g, int piece, bool at_start) {
    const double s0 = at_start ? 0.0 : 1.0;
    const double s1 = at_start ? 1e-4 : 1.0 - 1e-4;
    ChartPoint a = g.eval(piece, s0);
    ChartPoint b = in_chart(g.eval(piece, s1), a.chart, g.spec.amb);
    const double rho = conformal_factor(a, g.spec.amb);
    Vec3 v{rho * (b.x - a.x), rho * (b.y - a.y), b.z - a.z};
    const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    return {v.x / n, v.y / n, v.z / n};
}

int count_corners(const BoundaryCurve& g, double angle_threshold) {
    int corners = 0;
    for (const Node& n : junction_nodes(g)) {
        if (n.ends.size() > 2) {
            ++corners;  // crossing point
            continue;
        }
        if (n.ends.size() != 2) continue;
        Vec3 ta = end_tangent(g, n.ends[0].first, n.ends[0].second);
        Vec3 tb = end_tangent(g, n.ends[1].first, n.ends[1].second);
        // straight continuation has ta = -tb
        const double dot = ta.x * tb.x + ta.y * tb.y + ta.z * tb.z;
        if (std::acos(std::clamp(-dot, -1.0, 1.0)) > angle_threshold) ++corners;
    }
    return corners;
}

double max_turning_angle(const BoundaryCurve& g, double corner_exclusion_radius) {
    std::vector<Node> nodes = junction_nodes(g);
    std::vector<ChartPoint> corner_pts;
    for (const Node& n : nodes)
        if (n.ends.size() > 2) corner_pts.push_back(n.p);
    double worst = 0.0;
    for (size_t i = 0; i + 2 < g.polyline.size(); ++i) {
        if (g.polyline[i].piece != g.polyline[i + 2].piece) continue;
        const ChartPoint& a = g.polyline[i].p;
        ChartPoint b = in_chart(g.polyline[i + 1].p, a.chart, g.spec.amb);
        ChartPoint c = in_chart(g.polyline[i + 2].p, a.chart, g.spec.amb);
        bool near_corner = false;
        for (const ChartPoint& q : corner_pts)
            if (geodesic_distance(b, q, g.spec.amb) < corner_exclusion_radius) near_corner = true;
        if (near_corner) continue;
        Vec3 u{b.x - a.x, b.y - a.y, b.z - a.z};
        Vec3 v{c.x - b.x, c.y - b.y, c.z - b.z};
        const double nu = std::sqrt(u.x * u.x + u.y * u.y + u.z * u.z);
        const double nv = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
        if (nu == 0 || nv == 0) continue;
        const double dot = (u.x * v.x + u.y * v.y + u.z * v.z) / (nu * nv);
        worst = std::max(worst, std::acos(std::clamp(dot, -1.0, 1.0)));
    }
    return worst;
}

static double one_sided_hausdorff(const BoundaryCurve& a, const BoundaryCurve& b) {
    double worst = 0.0;
    for (const BoundaryVertex& va : a.polyline) {
        double best = std::numeric_limits<double>::max();
        for (const BoundaryVertex& vb : b.polyline)
            best = std::min(best, geodesic_distance(va.p, vb.p, a.spec.amb));
        worst = std::max(worst, best);
    }
    return worst;
}

double curve_hausdorff(const BoundaryCurve& a, const BoundaryCurve& b) {
    return std::max(one_sided_hausdorff(a, b), one_sided_hausdorff(b, a));
}

}  // namespace helixlab
