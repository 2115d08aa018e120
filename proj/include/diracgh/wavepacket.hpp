#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "ghshift.hpp"
#include "kinematics.hpp"
#include "matching.hpp"

namespace diracgh {

// Numerical beam oracle: synthesize the reflected packet at the interface
// from its transverse spectrum and read the displacement off the intensity
// centroid, without ever differentiating the phase analytically.

enum class Envelope {
    Rectangular, // hard aperture of half width a, sinc spectrum
    Gaussian,    // matched variance, sigma_z = a / sqrt(3); no slow tails
};

struct PacketOptions {
    Envelope envelope = Envelope::Rectangular;
    double a = 500.0;              // aperture half width, units of 1/m
    double spectral_cutoff = 40.0; // spectrum truncated at |pz - pz0| = cutoff / a
    int z_samples = 4001;          // uniform grid across the centroid window
    double window_factor = 10.0;   // window is [-window_factor * a, +window_factor * a]
    double centroid_tol = 1e-4;    // relative change between panel doublings
    int initial_panels = 16;       // 16-point panels on the spectral support
    int max_panels = 2048;
    double intensity_floor = 1e-12; // of the peak, excluded from the centroid
    bool modulate_spinor = false;   // carry the full spin structure, not just the phase
    double ell = 0.0;               // spin mixing used when modulate_spinor is set
    int threads = 0;                // 0: take DIRAC_GH_THREADS, else 1
    // Replaces the physical reflection phase when set (for synthetic probes).
    // Kinematic validity checks are skipped in that case.
    std::function<double(double)> phase_override;
};

struct Profile {
    std::vector<double> z;
    std::vector<double> intensity;
    double centroid = 0.0;
    int panels = 0; // panel count the synthesis converged at
};

struct PacketShift {
    double shift = 0.0; // centroid displacement attributable to the phase dispersion
    int panels = 0;
    Profile profile; // full-phase profile at the converged panel count
};

namespace detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DIRAC_GH_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 4096)
            throw std::invalid_argument("DIRAC_GH_THREADS must be an integer in [1, 4096]");
        return static_cast<int>(v);
    }
    return 1;
}

inline const std::array<std::pair<double, double>, 16>& gl16_nodes() {
    static const std::array<std::pair<double, double>, 16> table = [] {
        std::array<std::pair<double, double>, 16> t{};
        constexpr int n = 16;
        for (int k = 0; k < n; ++k) {
            double x = std::cos(3.141592653589793 * (k + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 60; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            t[k] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return t;
    }();
    return table;
}

// Spectral amplitude of the envelope as a function of u = pz0 - pz.
inline double spectrum(Envelope env, double a, double u) {
    if (env == Envelope::Rectangular) {
        const double ua = u * a;
        constexpr double norm = 0.7978845608028654; // sqrt(2/pi)
        if (std::abs(ua) < 1e-8) return norm * a * (1.0 - ua * ua / 6.0);
        return norm * std::sin(ua) / u;
    }
    const double sz = a / 1.7320508075688772; // matched variance to the hard aperture
    return 1.4142135623730951 * sz * std::exp(-sz * sz * u * u);
}

struct SpectralNode {
    double pz;
    double wF;    // quadrature weight times spectral amplitude
    double theta; // reflection phase at this node
    int nch;
    std::array<double, 4> w; // per-channel spin weights (all 1-channel unless modulated)
};

struct PacketContext {
    double E, m, V, pz0;
    PacketOptions opts;
    std::function<double(double)> phase;
};

inline PacketContext make_context(double E, double m, double V, double phi,
                                  const PacketOptions& opts) {
    if (!(opts.a > 0.0)) throw std::invalid_argument("aperture half width must be positive");
    if (!(opts.spectral_cutoff > 0.0)) throw std::invalid_argument("spectral cutoff must be positive");
    if (opts.z_samples < 3) throw std::invalid_argument("need at least 3 z samples");

    PacketContext ctx{E, m, V, 0.0, opts, {}};
    const Momenta k = derive_momenta(E, m, V, phi);
    ctx.pz0 = k.pz;
    const double half = opts.spectral_cutoff / opts.a;

    if (opts.phase_override) {
        ctx.phase = opts.phase_override;
        return ctx;
    }

    // The physical phase must exist across the whole truncated support, not
    // just at the carrier: every node sits under total reflection.
    if (classify_regime(E, m, V, phi) != Regime::TotalReflection)
        throw regime_error("packet synthesis needs total reflection at the carrier momentum");
    const double lo = ctx.pz0 - half, hi = ctx.pz0 + half;
    const double p2 = E * E - m * m;
    if (!(lo > 0.0) || !(hi * hi < p2) || !(lo * lo + m * m - (V - E) * (V - E) > 0.0))
        throw regime_error("spectral support leaves the total-reflection band");

    ReflectionPhase rp(E, m, V);
    ctx.phase = [rp](double pz) { return rp(pz); };
    return ctx;
}

inline std::vector<SpectralNode> spectral_nodes(const PacketContext& ctx, int panels,
                                                bool constant_phase) {
    const double half = ctx.opts.spectral_cutoff / ctx.opts.a;
    const double lo = ctx.pz0 - half;
    const double panel_width = 2.0 * half / panels;
    const double theta0 = ctx.phase(ctx.pz0);
    const auto& gl = gl16_nodes();

    std::vector<SpectralNode> nodes;
    nodes.reserve(static_cast<size_t>(panels) * gl.size());
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * panel_width;
        const double hw = 0.5 * panel_width;
        for (const auto& [x, w] : gl) {
            SpectralNode nd{};
            nd.pz = mid + hw * x;
            nd.wF = hw * w * spectrum(ctx.opts.envelope, ctx.opts.a, ctx.pz0 - nd.pz);
            nd.theta = constant_phase ? theta0 : ctx.phase(nd.pz);
            nd.nch = 1;
            nd.w = {1.0, 0.0, 0.0, 0.0};
            if (ctx.opts.modulate_spinor && !ctx.opts.phase_override) {
                const Momenta km = derive_momenta_pz(ctx.E, ctx.m, ctx.V, nd.pz);
                const Coefficients cf = closed_form_coefficients(
                    ctx.E, ctx.m, ctx.V, km, Regime::TotalReflection, ctx.opts.ell);
                const double th = constant_phase ? ctx.phase(nd.pz) : nd.theta;
                const cplx rot(std::cos(th), std::sin(th));
                const double ahat = (cf.A * rot).real();
                const double bhat = (cf.B * rot).real();
                const auto [r1, r2] = reflected_basis(ctx.E, ctx.m, km);
                nd.nch = 4;
                const double scale = 1.0 / (ctx.E + ctx.m); // keep channel weights O(1)
                for (int c = 0; c < 4; ++c)
                    nd.w[c] = scale * (ahat * r1[c].real() + bhat * r2[c].real());
            }
            nodes.push_back(nd);
        }
    }
    return nodes;
}

inline Profile synthesize(const PacketContext& ctx, const std::vector<SpectralNode>& nodes,
                          int panels) {
    const int nz = ctx.opts.z_samples;
    const double L = ctx.opts.window_factor * ctx.opts.a;
    const double dz = 2.0 * L / (nz - 1);

    Profile prof;
    prof.panels = panels;
    prof.z.resize(nz);
    prof.intensity.assign(nz, 0.0);
    for (int i = 0; i < nz; ++i) prof.z[i] = -L + i * dz;

    const int nch = nodes.empty() ? 1 : nodes.front().nch;
    constexpr double inv2pi = 0.15915494309189535; // 1 / (2 pi)

    const auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const double z = prof.z[i];
            double re[4] = {0, 0, 0, 0}, im[4] = {0, 0, 0, 0};
            for (const auto& nd : nodes) {
                const double ph = nd.pz * z - nd.theta;
                const double c = std::cos(ph), s = std::sin(ph);
                for (int ch = 0; ch < nch; ++ch) {
                    const double amp = nd.wF * nd.w[ch];
                    re[ch] += amp * c;
                    im[ch] += amp * s;
                }
            }
            double acc = 0.0;
            for (int ch = 0; ch < nch; ++ch) acc += re[ch] * re[ch] + im[ch] * im[ch];
            prof.intensity[i] = inv2pi * acc;
        }
    };

    const int nthreads = std::min(resolve_threads(ctx.opts.threads), nz);
    if (nthreads <= 1) {
        worker(0, nz);
    } else {
        // Disjoint slices of a preallocated buffer; the reduction below is a
        // fixed-order serial pass, so results do not depend on the thread count.
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) {
            const int b = static_cast<int>(static_cast<long long>(nz) * t / nthreads);
            const int e = static_cast<int>(static_cast<long long>(nz) * (t + 1) / nthreads);
            pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    double peak = 0.0;
    for (double v : prof.intensity) peak = std::max(peak, v);
    const double floor = ctx.opts.intensity_floor * peak;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < nz; ++i) {
        if (prof.intensity[i] < floor) continue;
        num += prof.z[i] * prof.intensity[i];
        den += prof.intensity[i];
    }
    prof.centroid = num / den;
    return prof;
}

inline bool ladder_converged(double cur, double prev, double tol) {
    return std::abs(cur - prev) <= tol * std::max(std::abs(cur), 1e-3);
}

} // namespace detail

// Reflected intensity profile at the interface, synthesized with the full
// momentum-dependent reflection phase. Panel count is doubled until the
// centroid stabilizes to opts.centroid_tol.
inline Profile reflected_profile(double E, double m, double V, double phi,
                                 const PacketOptions& opts) {
    const detail::PacketContext ctx = detail::make_context(E, m, V, phi, opts);
    double prev = 0.0;
    bool have_prev = false;
    for (int panels = opts.initial_panels; panels <= opts.max_panels; panels *= 2) {
        Profile prof = detail::synthesize(ctx, detail::spectral_nodes(ctx, panels, false), panels);
        if (have_prev && detail::ladder_converged(prof.centroid, prev, opts.centroid_tol))
            return prof;
        prev = prof.centroid;
        have_prev = true;
    }
    throw quadrature_error("packet centroid did not converge within the panel budget");
}

// Packet displacement: centroid of the full-phase profile minus the centroid
// of a reference profile built with the phase frozen at the carrier value.
// The difference isolates what the phase dispersion does to the beam.
inline PacketShift shift_from_packet(double E, double m, double V, double phi,
                                     const PacketOptions& opts) {
    const detail::PacketContext ctx = detail::make_context(E, m, V, phi, opts);
    double prev = 0.0;
    bool have_prev = false;
    for (int panels = opts.initial_panels; panels <= opts.max_panels; panels *= 2) {
        Profile full = detail::synthesize(ctx, detail::spectral_nodes(ctx, panels, false), panels);
        Profile ref = detail::synthesize(ctx, detail::spectral_nodes(ctx, panels, true), panels);
        const double shift = full.centroid - ref.centroid;
        if (have_prev && detail::ladder_converged(shift, prev, opts.centroid_tol))
            return PacketShift{shift, panels, std::move(full)};
        prev = shift;
        have_prev = true;
    }
    throw quadrature_error("packet shift did not converge within the panel budget");
}

} // namespace diracgh
