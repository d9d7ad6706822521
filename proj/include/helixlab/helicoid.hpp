#pragma once

// The reference helicoid H with axes Z and Z* and containing the horizontal
// great circle X.  In chart coordinates H is the set
//     { (r, phi, z) : phi = pi z / eta  (mod pi) },   eta = kappa / 2,
// and the side function below is positive exactly on the component H+ of the
// complement that contains Y+.

#include "helixlab/ambient.hpp"

namespace helixlab {

struct HelicoidSpec {
    double kappa = 2.0;  // pitch; finite and > 0 for solvers
    AmbientParams amb;

    double eta() const { return std::abs(kappa) / 2.0; }
};

// Degenerate infinite-pitch variant (the vertical cylinder X x R) is representable
// for bookkeeping but rejected by solvers.
struct CylinderSpec {
    AmbientParams amb;
};

enum class QuadrantSign : std::uint8_t { Positive, Negative };

// sin(phi - pi z / eta); zero on H, positive on H+, and by convention zero on the
// axes (which lie in H).  The same formula is valid in either chart.
double implicit_value(const ChartPoint& p, const HelicoidSpec& h);

// Which quadrant pair of H \ (X u Z u Z*) a point of H belongs to.
// Throws if p is not on H within tol, or lies on X or an axis.
QuadrantSign quadrant_of(const ChartPoint& p, const HelicoidSpec& h, double tol = 1e-9);

// The two consecutive heights at which the vertical line with lifted azimuth phi
// meets H; the gap is exactly eta.  phi is a lift (not reduced mod 2*pi).
std::array<double, 2> nearest_sheet_heights(double phi_lift, const HelicoidSpec& h);

// Height of the single H-sheet through azimuth-lift phi: z = (eta/pi) * phi.
inline double sheet_height(double phi_lift, const HelicoidSpec& h) {
    return h.eta() / M_PI * phi_lift;
}

// H \ (Z u Z*) has two components (strips), swept by X+ and X- respectively.
enum class Strip : std::uint8_t { A = 0, B = 1 };  // A contains X+, B contains X-

// Point of strip s at polar angle psi in (0, pi) and azimuth-lift phi.
// Strip A: azimuth = phi, z = (eta/pi) phi.  Strip B: azimuth = phi, z = (eta/pi)(phi - pi).
ChartPoint strip_point(Strip s, double psi, double phi_lift, const HelicoidSpec& h);

// z-height of strip s at azimuth-lift phi.
inline double strip_height(Strip s, double phi_lift, const HelicoidSpec& h) {
    return s == Strip::A ? sheet_height(phi_lift, h) : sheet_height(phi_lift - M_PI, h);
}

// Band offset w = z - (eta/pi)*(azimuth lift nearest to the H+ window); in (-eta/2, eta/2)
// strictly inside H+.  Returns the offset for the window containing p (or nearest).
double band_offset(const ChartPoint& p, const HelicoidSpec& h);

// Clamp a point into closure(H+) by adjusting z minimally; returns the adjusted point.
ChartPoint clamp_into_closure(const ChartPoint& p, const HelicoidSpec& h);

}  // namespace helixlab
