#include "helixlab/ambient.hpp"

#include <algorithm>

namespace helixlab {

double conformal_factor(const ChartPoint& p, const AmbientParams& amb) {
    const double fourR2 = 4.0 * amb.R * amb.R;
    return fourR2 / (fourR2 + p.r2());
}

std::array<double, 9> metric_tensor(const ChartPoint& p, const AmbientParams& amb) {
    const double rho = conformal_factor(p, amb);
    return {rho * rho, 0, 0, 0, rho * rho, 0, 0, 0, 1.0};
}

ChartPoint swap_chart(const ChartPoint& p, const AmbientParams& amb) {
    const double r2 = p.r2();
    const double e2 = amb.equator_radius() * amb.equator_radius();
    if (r2 == 0.0)
        throw std::domain_error("swap_chart: chart center maps to infinity");
    const double s = e2 / r2;
    return {p.x * s, p.y * s, p.z, other_chart(p.chart)};
}

ChartPoint normalize_chart(const ChartPoint& p, const AmbientParams& amb) {
    if (p.r2() > amb.equator_radius() * amb.equator_radius())
        return swap_chart(p, amb);
    return p;
}

ChartPoint in_chart(const ChartPoint& p, Chart c, const AmbientParams& amb) {
    return p.chart == c ? p : swap_chart(p, amb);
}

double polar_angle(const ChartPoint& p, const AmbientParams& amb) {
    // r = 2R tan(psi/2) measured from the chart's own center
    const double psi_own = 2.0 * std::atan(p.r() / amb.equator_radius());
    return p.chart == Chart::NearO ? psi_own : M_PI - psi_own;
}

Vec3 sphere_point(const ChartPoint& p, const AmbientParams& amb) {
    const double psi = polar_angle(p, amb);
    const double r = p.r();
    double cx = 1.0, cy = 0.0;
    if (r > 0.0) {
        cx = p.x / r;
        cy = p.y / r;
    }
    return {amb.R * std::sin(psi) * cx, amb.R * std::sin(psi) * cy, amb.R * std::cos(psi)};
}

ChartPoint from_polar(double psi, double phi, double z, const AmbientParams& amb) {
    psi = std::clamp(psi, 0.0, M_PI);
    ChartPoint p;
    if (psi <= M_PI / 2) {
        const double r = amb.equator_radius() * std::tan(psi / 2);
        p = {r * std::cos(phi), r * std::sin(phi), z, Chart::NearO};
    } else {
        const double r = amb.equator_radius() * std::tan((M_PI - psi) / 2);
        p = {r * std::cos(phi), r * std::sin(phi), z, Chart::NearOstar};
    }
    return p;
}

double geodesic_distance(const ChartPoint& p, const ChartPoint& q, const AmbientParams& amb) {
    const Vec3 u = sphere_point(p, amb);
    const Vec3 v = sphere_point(q, amb);
    const double dot = u.x * v.x + u.y * v.y + u.z * v.z;
    const double cx = u.y * v.z - u.z * v.y;
    const double cy = u.z * v.x - u.x * v.z;
    const double cz = u.x * v.y - u.y * v.x;
    const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
    const double gamma = std::atan2(cross, dot);
    const double ds = amb.R * gamma;
    const double dz = p.z - q.z;
    return std::sqrt(ds * ds + dz * dz);
}

static ChartPoint apply_gen(const IsoGen& g, const ChartPoint& p, const AmbientParams& amb) {
    switch (g.kind) {
        case IsoKind::Identity:
            return p;
        case IsoKind::RhoX:
            return {p.x, -p.y, -p.z, p.chart};
        case IsoKind::RhoY:
            return {-p.x, p.y, -p.z, p.chart};
        case IsoKind::RhoZ:
            return {-p.x, -p.y, p.z, p.chart};
        case IsoKind::MuE:
            // Inversion in the equator cylinder: identical coordinates, other chart.
            return {p.x, p.y, p.z, other_chart(p.chart)};
        case IsoKind::Screw: {
            const double c = std::cos(g.screw_angle), s = std::sin(g.screw_angle);
            return {c * p.x - s * p.y, s * p.x + c * p.y, p.z + g.screw_shift, p.chart};
        }
    }
    return p;
}

ChartPoint apply_isometry(const Isometry& iso, const ChartPoint& p, const AmbientParams& amb) {
    ChartPoint q = p;
    for (const IsoGen& g : iso.word) q = apply_gen(g, q, amb);
    return q;
}

double azimuth(const ChartPoint& p) {
    if (p.r2() == 0.0)
        throw std::domain_error("azimuth undefined on the axes");
    return std::atan2(p.y, p.x);
}

double angle_of(const ChartPoint& p, AngleConvention conv, int sheet) {
    double a = azimuth(p) + 2.0 * M_PI * sheet;
    if (conv == AngleConvention::ZeroOnYplus) a -= M_PI / 2;
    return a;
}

}  // namespace helixlab
