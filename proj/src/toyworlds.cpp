#include "strongdet/toyworlds.hpp"

#include <cmath>

#include "strongdet/errors.hpp"
#include "strongdet/macrostates.hpp"
#include "strongdet/parallel.hpp"

namespace strongdet::toyworlds {

void MandelbrotParams::validate() const {
    if (maxIter < 1) throw ValidationError("maxIter must be >= 1");
    if (!(escapeRadius > 0.0) || !std::isfinite(escapeRadius)) throw ValidationError("escape radius must be positive");
    if (variant == MapVariant::Standard && escapeRadius < 2.0)
        throw ValidationError("escape radius must be >= 2 for the standard map");
}

const char* to_string(Status s) {
    switch (s) {
        case Status::CertifiedOut: return "certified-out";
        case Status::CertifiedIn: return "certified-in";
        case Status::Undetermined: return "undetermined";
    }
    return "?";
}

const char* to_string(InteriorReason r) {
    switch (r) {
        case InteriorReason::None: return "none";
        case InteriorReason::MainCardioid: return "main-cardioid";
        case InteriorReason::Period2Bulb: return "period-2-bulb";
        case InteriorReason::FixedPoint: return "fixed-point";
    }
    return "?";
}

namespace {

// Explicit real arithmetic: conj(step(z, c)) == step(conj z, conj c) bit for
// bit, which std::complex multiplication does not promise.
struct Z {
    double re, im;
};

inline Z square(Z z) { return {z.re * z.re - z.im * z.im, 2.0 * z.re * z.im}; }
inline Z mul(Z a, Z b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

inline Z apply(Z z, Z c, MapVariant variant) {
    if (variant == MapVariant::Standard) {
        const Z z2 = square(z);
        return {z2.re + c.re, z2.im + c.im};
    }
    const Z z2 = square(z);
    const Z z3 = mul(z2, z);
    // i * z^2 = (-z2.im, z2.re)
    return {z3.re - z2.im + c.re, z3.im + z2.re + c.im};
}

inline double abs2(Z z) { return z.re * z.re + z.im * z.im; }

}  // namespace

std::complex<double> step(std::complex<double> z, std::complex<double> c, MapVariant variant) {
    const Z r = apply({z.real(), z.imag()}, {c.real(), c.imag()}, variant);
    return {r.re, r.im};
}

std::vector<std::complex<double>> orbit(std::complex<double> c, int n, MapVariant variant) {
    std::vector<std::complex<double>> out{{0.0, 0.0}};
    for (int i = 0; i < n; ++i) out.push_back(step(out.back(), c, variant));
    return out;
}

MandelbrotVerdict mandelbrot_membership(std::complex<double> c, const MandelbrotParams& params) {
    params.validate();
    const double x = c.real();
    const double y = c.imag();
    if (params.variant == MapVariant::Standard) {
        if (x == 0.0 && y == 0.0) return {Status::CertifiedIn, 0, InteriorReason::FixedPoint};
        const double q = x - 0.25;
        const double p = std::sqrt(q * q + y * y);
        if (x < p - 2.0 * p * p + 0.25) return {Status::CertifiedIn, 0, InteriorReason::MainCardioid};
        if ((x + 1.0) * (x + 1.0) + y * y < 0.0625) return {Status::CertifiedIn, 0, InteriorReason::Period2Bulb};
    }
    // For the cubic map an orbit with |z| > max(2, |c|) grows without bound,
    // so the certification radius is raised to cover large |c|.
    double radius = params.escapeRadius;
    if (params.variant == MapVariant::PenroseCubic) radius = std::max({radius, 2.0, std::abs(c)});
    const double r2 = radius * radius;
    const Z cc{x, y};
    Z z{0.0, 0.0};
    for (int n = 1; n <= params.maxIter; ++n) {
        z = apply(z, cc, params.variant);
        if (abs2(z) > r2) return {Status::CertifiedOut, n, InteriorReason::None};
        if (!std::isfinite(z.re) || !std::isfinite(z.im)) return {Status::CertifiedOut, n, InteriorReason::None};
    }
    return {Status::Undetermined, params.maxIter, InteriorReason::None};
}

std::complex<double> pixel_center(const Region& region, int width, int height, int row, int col) {
    const double w2 = 2.0 * width;
    const double h2 = 2.0 * height;
    const double x = (region.xmin * (w2 - 2.0 * col - 1.0) + region.xmax * (2.0 * col + 1.0)) / w2;
    const double y = (region.ymax * (h2 - 2.0 * row - 1.0) + region.ymin * (2.0 * row + 1.0)) / h2;
    return {x, y};
}

std::complex<double> Render::point(int row, int col) const { return pixel_center(region, width, height, row, col); }

int Render::raw_value(int row, int col) const {
    const auto& v = at(row, col);
    switch (v.status) {
        case Status::CertifiedIn: return 0;
        case Status::CertifiedOut: return v.iteration;
        case Status::Undetermined: return params.maxIter;
    }
    return params.maxIter;
}

std::uint8_t Render::gray(int row, int col) const {
    const auto& v = at(row, col);
    switch (v.status) {
        case Status::CertifiedIn: return 0;
        case Status::Undetermined: return 255;
        case Status::CertifiedOut: {
            const double scaled = std::round(255.0 * v.iteration / params.maxIter);
            return static_cast<std::uint8_t>(std::min(255.0, scaled));
        }
    }
    return 255;
}

double Render::undetermined_fraction() const {
    std::size_t count = 0;
    for (const auto& v : verdicts) count += v.status == Status::Undetermined;
    return verdicts.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(verdicts.size());
}

Render render_world(const Region& region, int width, int height, const MandelbrotParams& params, unsigned threads) {
    params.validate();
    if (width < 1 || height < 1) throw ValidationError("render size must be positive");
    if (!(region.xmin < region.xmax) || !(region.ymin < region.ymax))
        throw ValidationError("render region has zero area");
    Render r;
    r.width = width;
    r.height = height;
    r.region = region;
    r.params = params;
    r.verdicts.resize(static_cast<std::size_t>(width) * height);
    parallel_for(static_cast<std::size_t>(height), threads, [&](std::size_t row) {
        for (int col = 0; col < width; ++col)
            r.verdicts[row * width + col] =
                mandelbrot_membership(pixel_center(region, width, height, static_cast<int>(row), col), params);
    });
    return r;
}

std::string to_pgm(const Render& r) {
    std::string out = "P5\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n255\n";
    out.reserve(out.size() + r.verdicts.size());
    for (int row = 0; row < r.height; ++row)
        for (int col = 0; col < r.width; ++col) out.push_back(static_cast<char>(r.gray(row, col)));
    return out;
}

std::string to_verdict_csv(const Render& r) {
    std::string out = "x,y,status,iteration\n";
    for (int row = 0; row < r.height; ++row) {
        for (int col = 0; col < r.width; ++col) {
            const auto c = r.point(row, col);
            const auto& v = r.at(row, col);
            out += format_number(c.real()) + "," + format_number(c.imag()) + "," + to_string(v.status) + "," +
                   std::to_string(v.status == Status::CertifiedIn ? 0 : v.iteration) + "\n";
        }
    }
    return out;
}

modal::ModelSet lone_particle_model_set(int duration) {
    if (duration < 1) throw ValidationError("duration must be >= 1");
    modal::FiniteWorld w;
    w.id = "lone-particle";
    for (int t = 0; t < duration; ++t) w.trajectory[t] = "x0";
    return modal::ModelSet(0, duration - 1, {std::move(w)}, std::string("lone-particle"));
}

}  // namespace strongdet::toyworlds
