#pragma once

// Toy worlds fixed entirely by a constraint law: the Mandelbrot world and
// the lone-particle world.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "strongdet/modal.hpp"

namespace strongdet::toyworlds {

enum class MapVariant {
    Standard,      // z^2 + c
    PenroseCubic,  // z^3 + i z^2 + c
};

struct MandelbrotParams {
    int maxIter = 1000;
    double escapeRadius = 2.0;
    MapVariant variant = MapVariant::Standard;

    void validate() const;
};

enum class Status { CertifiedOut, CertifiedIn, Undetermined };
enum class InteriorReason { None, MainCardioid, Period2Bulb, FixedPoint };

/// Membership of c is semi-decidable: escape certifies non-membership in
/// finite time, interior tests certify membership for some regions, and
/// everything else stays undetermined.
struct MandelbrotVerdict {
    Status status = Status::Undetermined;
    int iteration = 0;  // escape iteration (certified-out) or iterations run (undetermined)
    InteriorReason reason = InteriorReason::None;
};

const char* to_string(Status s);
const char* to_string(InteriorReason r);

/// One application of the variant's map.
std::complex<double> step(std::complex<double> z, std::complex<double> c, MapVariant variant);

/// z_0 = 0, z_1, ..., z_n.
std::vector<std::complex<double>> orbit(std::complex<double> c, int n, MapVariant variant = MapVariant::Standard);

MandelbrotVerdict mandelbrot_membership(std::complex<double> c, const MandelbrotParams& params = {});

struct Region {
    double xmin, xmax, ymin, ymax;
};

/// Row-major verdict grid; row 0 is ymax.
struct Render {
    int width = 0;
    int height = 0;
    Region region{};
    MandelbrotParams params;
    std::vector<MandelbrotVerdict> verdicts;

    const MandelbrotVerdict& at(int row, int col) const { return verdicts[static_cast<std::size_t>(row) * width + col]; }
    /// Pixel center of (row, col).
    std::complex<double> point(int row, int col) const;
    /// 0 certified-in, escape iteration for certified-out, maxIter for undetermined.
    int raw_value(int row, int col) const;
    /// 0 certified-in, min(255, round(255 n / maxIter)) certified-out, 255 undetermined.
    std::uint8_t gray(int row, int col) const;
    double undetermined_fraction() const;
};

/// Pixel (row, col) maps to c at its center: x = xmin + (col + 1/2) dx,
/// y = ymax - (row + 1/2) dy, evaluated in a form that keeps conjugate
/// regions exact mirror images.
std::complex<double> pixel_center(const Region& region, int width, int height, int row, int col);

Render render_world(const Region& region, int width, int height, const MandelbrotParams& params = {},
                    unsigned threads = 1);

/// Binary PGM (P5, maxval 255).
std::string to_pgm(const Render& r);
/// x,y,status,iteration per pixel, row-major.
std::string to_verdict_csv(const Render& r);

/// The single world of a lone particle resting at x0 for `duration` steps.
modal::ModelSet lone_particle_model_set(int duration);

}  // namespace strongdet::toyworlds
