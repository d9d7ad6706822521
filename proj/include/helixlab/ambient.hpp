#pragma once

// Geometry of S^2(R) x R in stereographic charts.
//
// The product metric is written in a chart as
//     rho(x,y)^2 (dx^2 + dy^2) + dz^2,   rho = 4R^2 / (4R^2 + x^2 + y^2).
// Two charts cover the space: one centered at O (chart origin), one at the
// antipode O*.  The transition map between them is inversion in the circle
// of radius 2R, which is also how the reflection mu_E acts.  A point whose
// chart radius exceeds 2R should be re-normalized into the nearer chart.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace helixlab {

enum class Chart : std::uint8_t { NearO = 0, NearOstar = 1 };

struct AmbientParams {
    double R = 1.0;

    double equator_radius() const { return 2.0 * R; }
};

struct ChartPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    Chart chart = Chart::NearO;

    double r2() const { return x * x + y * y; }
    double r() const { return std::sqrt(r2()); }
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline Chart other_chart(Chart c) { return c == Chart::NearO ? Chart::NearOstar : Chart::NearO; }

// Conformal factor of the horizontal metric at p (in p's own chart).
double conformal_factor(const ChartPoint& p, const AmbientParams& amb);

// Metric tensor diag(rho^2, rho^2, 1) at p.
std::array<double, 9> metric_tensor(const ChartPoint& p, const AmbientParams& amb);

// Chart transition: same point expressed in the other chart (inversion in r = 2R).
ChartPoint swap_chart(const ChartPoint& p, const AmbientParams& amb);

// Store p in the chart where its radius is <= 2R (ties keep the current chart).
ChartPoint normalize_chart(const ChartPoint& p, const AmbientParams& amb);

// Express p in the requested chart.
ChartPoint in_chart(const ChartPoint& p, Chart c, const AmbientParams& amb);

// Embedding of the sphere factor into R^3 (radius R); z-factor reported separately.
Vec3 sphere_point(const ChartPoint& p, const AmbientParams& amb);

// Polar angle psi in [0, pi] measured from O along the sphere.
double polar_angle(const ChartPoint& p, const AmbientParams& amb);

// Chart point at polar angle psi (from O) and azimuth phi, height z,
// stored in the nearer chart.
ChartPoint from_polar(double psi, double phi, double z, const AmbientParams& amb);

// Exact geodesic distance: sqrt(d_sphere^2 + dz^2).
double geodesic_distance(const ChartPoint& p, const ChartPoint& q, const AmbientParams& amb);

enum class IsoKind : std::uint8_t { Identity, RhoX, RhoY, RhoZ, MuE, Screw };

struct IsoGen {
    IsoKind kind = IsoKind::Identity;
    double screw_angle = 0.0;  // radians, rotation about Z (and Z*)
    double screw_shift = 0.0;  // vertical translation
};

// An isometry as a word of generators, applied left to right.
struct Isometry {
    std::vector<IsoGen> word;

    static Isometry identity() { return {}; }
    static Isometry rho_X() { return {{{IsoKind::RhoX}}}; }
    static Isometry rho_Y() { return {{{IsoKind::RhoY}}}; }
    static Isometry rho_Z() { return {{{IsoKind::RhoZ}}}; }
    static Isometry mu_E() { return {{{IsoKind::MuE}}}; }
    static Isometry screw(double angle, double shift) {
        Isometry iso;
        iso.word.push_back({IsoKind::Screw, angle, shift});
        return iso;
    }
    // this followed by other
    Isometry then(const Isometry& other) const {
        Isometry out = *this;
        out.word.insert(out.word.end(), other.word.begin(), other.word.end());
        return out;
    }
};

ChartPoint apply_isometry(const Isometry& iso, const ChartPoint& p, const AmbientParams& amb);

enum class AngleConvention : std::uint8_t { ZeroOnXplus, ZeroOnYplus };

// Lifted angle function on the complement of the axes.  The sheet index selects
// the 2*pi branch; conventions differ by pi/2 (theta = 0 on Y+ vs on X+).
double angle_of(const ChartPoint& p, AngleConvention conv, int sheet);

// Azimuth measured from X+ in (-pi, pi]; the same in either chart.
double azimuth(const ChartPoint& p);

}  // namespace helixlab
