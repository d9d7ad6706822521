#include "helixlab/helicoid.hpp"

namespace helixlab {

double implicit_value(const ChartPoint& p, const HelicoidSpec& h) {
    if (p.r2() == 0.0) return 0.0;  // axes lie in H
    const double phi = std::atan2(p.y, p.x);
    return std::sin(phi - M_PI * p.z / h.eta());
}

// Phase omega = azimuth - pi z / eta reduced to (-pi, pi]; H+ is omega in (0, pi).
static double phase(const ChartPoint& p, const HelicoidSpec& h) {
    const double phi = std::atan2(p.y, p.x);
    double w = std::remainder(phi - M_PI * p.z / h.eta(), 2.0 * M_PI);
    if (w <= -M_PI) w = M_PI;
    return w;
}

QuadrantSign quadrant_of(const ChartPoint& p, const HelicoidSpec& h, double tol) {
    if (p.r2() == 0.0)
        throw std::domain_error("quadrant_of: point lies on an axis");
    if (std::abs(implicit_value(p, h)) > tol)
        throw std::domain_error("quadrant_of: point is not on H");
    const double zscale = std::abs(p.z) / h.eta();
    if (zscale < 1e-12)
        throw std::domain_error("quadrant_of: point lies on X");
    const double phi = std::atan2(p.y, p.x);
    const long k = std::lround((phi - M_PI * p.z / h.eta()) / M_PI);
    const bool even = (k % 2) == 0;
    const bool above = p.z > 0.0;
    return (even == above) ? QuadrantSign::Positive : QuadrantSign::Negative;
}

std::array<double, 2> nearest_sheet_heights(double phi_lift, const HelicoidSpec& h) {
    const double base = h.eta() / M_PI * phi_lift;
    return {base, base + h.eta()};
}

ChartPoint strip_point(Strip s, double psi, double phi_lift, const HelicoidSpec& h) {
    return from_polar(psi, phi_lift, strip_height(s, phi_lift, h), h.amb);
}

double band_offset(const ChartPoint& p, const HelicoidSpec& h) {
    const double w = phase(p, h);
    return h.eta() / 2.0 - h.eta() / M_PI * w;
}

ChartPoint clamp_into_closure(const ChartPoint& p, const HelicoidSpec& h) {
    if (p.r2() == 0.0) return p;
    const double w = phase(p, h);
    if (w >= 0.0) return p;  // omega in [0, pi]: already in closure(H+)
    ChartPoint q = p;
    if (w > -M_PI / 2)
        q.z = p.z + h.eta() / M_PI * w;  // snap to omega = 0
    else
        q.z = p.z + h.eta() / M_PI * (w + M_PI);  // snap to omega = pi
    return q;
}

}  // namespace helixlab
