#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ghshift.hpp"
#include "kinematics.hpp"
#include "matching.hpp"
#include "wavepacket.hpp"

namespace diracgh {

// Evaluation layer behind the command line: plain records with optional
// fields (empty means "not defined in this regime") and deterministic
// formatting. Energies are multiples of the rest mass, angles in degrees,
// lengths in Compton units.

inline constexpr double kPi = 3.141592653589793;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct PointRecord {
    double E = 0.0, V = 0.0, phi_deg = 0.0, ell = 0.0;
    Regime regime = Regime::OutsideValidity;
    std::optional<double> R, T, theta, delta_z, delta_phase;
    bool near_edge = false;
    bool singular_barrier = false;
};

inline void validate_point_inputs(double E, double V, double phi_deg) {
    if (!(E > 1.0)) throw std::invalid_argument("E must exceed 1 (rest-mass units)");
    if (!(V > 0.0)) throw std::invalid_argument("V must be positive");
    if (!(phi_deg >= 0.0) || !(phi_deg < 90.0))
        throw std::invalid_argument("phi-deg must lie in [0, 90)");
}

inline PointRecord run_point(double E, double V, double phi_deg, double ell = 0.0) {
    validate_point_inputs(E, V, phi_deg);
    const double m = 1.0;
    const double phi = deg_to_rad(phi_deg);

    PointRecord rec;
    rec.E = E;
    rec.V = V;
    rec.phi_deg = phi_deg;
    rec.ell = ell;
    rec.regime = classify_regime(E, m, V, phi);

    if (rec.regime == Regime::OutsideValidity) return rec; // regime column only, never abort

    if (rec.regime == Regime::Transmitting) {
        const ScatterResult s = scatter(E, m, V, phi, ell);
        rec.R = s.R;
        rec.T = s.T;
        return rec;
    }

    rec.R = 1.0;
    rec.T = 0.0;
    const GhResult gh = gh_shift_analytic(E, m, V, phi);
    rec.delta_z = gh.delta_z;
    rec.delta_phase = gh.delta_phase;
    rec.near_edge = gh.near_edge;
    if (is_singular_barrier(E, m, V)) {
        // Amplitudes diverge at V = E - 1 but the displacement does not; keep
        // the row and just leave the phase blank.
        rec.singular_barrier = true;
    } else {
        rec.theta = gh.theta;
    }
    return rec;
}

struct SweepSpec {
    std::string var; // one of "E", "V", "phi-deg", "ell"
    double lo = 0.0, hi = 0.0;
    int samples = 0;
    double E = 0.0, V = 0.0, phi_deg = 0.0, ell = 0.0; // fixed values for the other inputs
    int threads = 0;
};

inline std::vector<PointRecord> run_sweep(const SweepSpec& spec) {
    if (spec.samples < 1) throw std::invalid_argument("samples must be at least 1");
    if (spec.var != "E" && spec.var != "V" && spec.var != "phi-deg" && spec.var != "ell")
        throw std::invalid_argument("sweep-var must be one of E, V, phi-deg, ell");
    if (!(spec.hi >= spec.lo)) throw std::invalid_argument("range must satisfy lo <= hi");

    std::vector<PointRecord> rows(spec.samples);
    const auto value_at = [&](int i) {
        if (spec.samples == 1) return spec.lo;
        return spec.lo + (spec.hi - spec.lo) * i / (spec.samples - 1);
    };
    const auto eval = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const double x = value_at(i);
            double E = spec.E, V = spec.V, phi = spec.phi_deg, ell = spec.ell;
            if (spec.var == "E") E = x;
            else if (spec.var == "V") V = x;
            else if (spec.var == "phi-deg") phi = x;
            else ell = x;
            rows[i] = run_point(E, V, phi, ell);
        }
    };

    const int n = spec.samples;
    const int nthreads = std::min(detail::resolve_threads(spec.threads), n);
    if (nthreads <= 1) {
        eval(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(eval, static_cast<int>(static_cast<long long>(n) * t / nthreads),
                              static_cast<int>(static_cast<long long>(n) * (t + 1) / nthreads));
        for (auto& th : pool) th.join();
    }
    return rows;
}

// Sign-change boundary of the displacement: the requested variable is solved
// from the closed-form threshold and, independently, by bisecting the sign of
// the displacement itself. Disagreement beyond rounding means a bug.
struct BoundaryRecord {
    std::string solve_for; // "E", "V" or "phi-deg"
    std::optional<double> E, V, phi_deg;
    std::optional<double> closed_form, bisection, abs_diff;
    std::string status = "ok"; // or "no_threshold"
};

namespace detail {

inline double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw engine_error("bisection bracket has no sign change");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(hi - lo > 1e-15 * std::max(1.0, std::abs(mid)))) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// The displacement vanishes identically at normal incidence, so boundary
// solves given phi = 0 sample its sign a hair above; the induced error in the
// located root is far below the bisection tolerance.
inline double sign_probe_angle(double phi) { return std::max(phi, 1e-7); }

} // namespace detail

inline BoundaryRecord run_boundary(const std::string& solve_for, std::optional<double> E,
                                   std::optional<double> V, std::optional<double> phi_deg) {
    const double m = 1.0;
    BoundaryRecord rec;
    rec.solve_for = solve_for;
    rec.E = E;
    rec.V = V;
    rec.phi_deg = phi_deg;

    const auto need = [](const std::optional<double>& v, const char* name) {
        if (!v) throw std::invalid_argument(std::string("boundary solve needs --") + name);
        return *v;
    };

    if (solve_for == "V") {
        const double Ev = need(E, "E");
        const double ph = deg_to_rad(need(phi_deg, "phi-deg"));
        if (V) throw std::invalid_argument("do not fix V when solving for it");
        validate_point_inputs(Ev, 1.0, rad_to_deg(ph));
        const Threshold th = threshold_potential(Ev, m, ph);
        const double g = gamma_scale(Ev, m, ph);
        const double probe = detail::sign_probe_angle(ph);
        const double margin = 1e-12 * (Ev + g);
        const double root = detail::bisect_sign_change(
            [&](double Vq) { return gh_shift_analytic(Ev, m, Vq, probe).delta_z; },
            Ev - g + margin, Ev + g - margin);
        rec.closed_form = th.value;
        rec.bisection = root;
        rec.abs_diff = std::abs(th.value - root);
        return rec;
    }

    if (solve_for == "phi-deg") {
        const double Ev = need(E, "E");
        const double Vv = need(V, "V");
        if (phi_deg) throw std::invalid_argument("do not fix phi-deg when solving for it");
        validate_point_inputs(Ev, Vv, 0.0);
        const Threshold th = threshold_angle(Ev, m, Vv);
        if (!th.exists) {
            rec.status = "no_threshold";
            return rec;
        }
        double lo = 1e-15;
        const double dE = std::abs(Ev - Vv);
        if (dE > m) {
            // Total reflection only opens above the angle where gamma = |E - V|.
            const double s2 = (dE * dE - m * m) / (Ev * Ev - m * m);
            lo = std::asin(std::sqrt(s2)) * (1.0 + 1e-12) + 1e-15;
        }
        const double hi = (kPi / 2.0) * (1.0 - 1e-12);
        const double root = detail::bisect_sign_change(
            [&](double ph) { return gh_shift_analytic(Ev, m, Vv, ph).delta_z; }, lo, hi);
        rec.closed_form = rad_to_deg(th.value);
        rec.bisection = rad_to_deg(root);
        rec.abs_diff = std::abs(*rec.closed_form - *rec.bisection);
        return rec;
    }

    if (solve_for == "E") {
        const double Vv = need(V, "V");
        const double phd = need(phi_deg, "phi-deg");
        const double ph = deg_to_rad(phd);
        if (E) throw std::invalid_argument("do not fix E when solving for it");
        if (!(Vv > 0.0)) throw std::invalid_argument("V must be positive");
        if (!(phd >= 0.0) || !(phd < 90.0))
            throw std::invalid_argument("phi-deg must lie in [0, 90)");
        const Threshold th = threshold_energy(m, Vv, ph);
        const double c2 = std::cos(ph) * std::cos(ph);
        const double s = std::sin(ph);
        const double disc = std::sqrt(Vv * Vv * s * s + m * m * c2 * c2);
        double lo = (Vv - disc) / c2;
        double hi = (Vv + disc) / c2;
        const double margin = 1e-12 * std::max(1.0, hi);
        lo = std::max(lo, m * (1.0 + 1e-12)) + margin;
        hi -= margin;
        const double probe = detail::sign_probe_angle(ph);
        const double root = detail::bisect_sign_change(
            [&](double Eq) { return gh_shift_analytic(Eq, m, Vv, probe).delta_z; }, lo, hi);
        rec.closed_form = th.value;
        rec.bisection = root;
        rec.abs_diff = std::abs(th.value - root);
        return rec;
    }

    throw std::invalid_argument("solve-for must be one of E, V, phi-deg");
}

// Oracle comparisons: the analytic displacement against its two independent
// numerical estimates.
struct OracleSpec {
    double E = 0.0, V = 0.0, phi_deg = 0.0;
    double fd_tol = 1e-6;
    double a = 0.0; // aperture half width; > 0 enables the packet oracle
    Envelope envelope = Envelope::Rectangular;
    double spectral_cutoff = 40.0;
    double packet_tol = 0.05;
    double synthetic_slope = std::numeric_limits<double>::quiet_NaN();
    double synthetic_tol = 1e-8;
    int threads = 0;
};

struct OracleRecord {
    double E = 0.0, V = 0.0, phi_deg = 0.0;
    double analytic = 0.0;
    double fd = 0.0, fd_h = 0.0, fd_rel_err = 0.0;
    bool fd_ok = false;
    std::optional<double> packet_shift, packet_rel_err;
    int panels = 0;
    bool packet_ok = true;
    std::optional<double> synthetic_shift, synthetic_rel_err;
    bool synthetic_ok = true;
    bool ok = false;
    Profile profile; // full-phase profile when the packet oracle ran
};

inline OracleRecord run_oracle(const OracleSpec& spec) {
    validate_point_inputs(spec.E, spec.V, spec.phi_deg);
    const double m = 1.0;
    const double phi = deg_to_rad(spec.phi_deg);

    OracleRecord rec;
    rec.E = spec.E;
    rec.V = spec.V;
    rec.phi_deg = spec.phi_deg;
    rec.analytic = gh_shift_analytic(spec.E, m, spec.V, phi).delta_z;

    const FdResult fd = gh_shift_fd(spec.E, m, spec.V, phi);
    rec.fd = fd.value;
    rec.fd_h = fd.h;
    rec.fd_rel_err = std::abs(fd.value - rec.analytic) / std::max(std::abs(rec.analytic), 1e-300);
    rec.fd_ok = rec.fd_rel_err <= spec.fd_tol;

    if (spec.a > 0.0) {
        PacketOptions opts;
        opts.envelope = spec.envelope;
        opts.a = spec.a;
        opts.spectral_cutoff = spec.spectral_cutoff;
        opts.threads = spec.threads;
        const PacketShift ps = shift_from_packet(spec.E, m, spec.V, phi, opts);
        rec.packet_shift = ps.shift;
        rec.panels = ps.panels;
        rec.profile = ps.profile;
        rec.packet_rel_err = std::abs(ps.shift - rec.analytic) / std::abs(rec.analytic);
        rec.packet_ok = *rec.packet_rel_err <= spec.packet_tol;

        if (!std::isnan(spec.synthetic_slope)) {
            PacketOptions sopts = opts;
            const double slope = spec.synthetic_slope;
            sopts.phase_override = [slope](double pz) { return slope * pz; };
            // the synthetic probe certifies the quadrature itself, so its
            // ladder must converge well below the tolerance it is judged by
            sopts.centroid_tol = std::min(sopts.centroid_tol, 1e-8);
            const PacketShift ss = shift_from_packet(spec.E, m, spec.V, phi, sopts);
            rec.synthetic_shift = ss.shift;
            rec.synthetic_rel_err = std::abs(ss.shift - slope) / std::max(std::abs(slope), 1e-300);
            rec.synthetic_ok = *rec.synthetic_rel_err <= spec.synthetic_tol;
        }
    }

    rec.ok = rec.fd_ok && rec.packet_ok && rec.synthetic_ok;
    return rec;
}

// ----- deterministic text output -----

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string fmt12(const std::optional<double>& v) { return v ? fmt12(*v) : std::string(); }

inline const std::vector<std::string>& default_columns() {
    static const std::vector<std::string> cols{"phi_deg", "E",     "V",       "regime", "R",
                                               "T",       "theta", "delta_z", "delta_phase"};
    return cols;
}

inline std::string point_field(const PointRecord& r, const std::string& col) {
    if (col == "phi_deg") return fmt12(r.phi_deg);
    if (col == "E") return fmt12(r.E);
    if (col == "V") return fmt12(r.V);
    if (col == "regime") return regime_name(r.regime);
    if (col == "R") return fmt12(r.R);
    if (col == "T") return fmt12(r.T);
    if (col == "theta") return fmt12(r.theta);
    if (col == "delta_z") return fmt12(r.delta_z);
    if (col == "delta_phase") return fmt12(r.delta_phase);
    throw std::invalid_argument("unknown column: \"" + col + "\"");
}

inline void write_points_csv(std::ostream& os, const std::vector<PointRecord>& rows,
                             const std::vector<std::string>& columns = default_columns()) {
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& r : rows) {
        for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << point_field(r, columns[i]);
        os << "\n";
    }
}

inline void write_boundary_csv(std::ostream& os, const BoundaryRecord& rec) {
    os << "solve_for,E,V,phi_deg,closed_form,bisection,abs_diff,status\n";
    os << rec.solve_for << ',' << fmt12(rec.E) << ',' << fmt12(rec.V) << ',' << fmt12(rec.phi_deg)
       << ',' << fmt12(rec.closed_form) << ',' << fmt12(rec.bisection) << ',' << fmt12(rec.abs_diff)
       << ',' << rec.status << "\n";
}

inline void write_oracle_csv(std::ostream& os, const OracleRecord& rec) {
    os << "E,V,phi_deg,delta_z_analytic,delta_z_fd,fd_h,fd_rel_err,packet_shift,packet_rel_err,"
          "panels,synthetic_shift,synthetic_rel_err,status\n";
    os << fmt12(rec.E) << ',' << fmt12(rec.V) << ',' << fmt12(rec.phi_deg) << ','
       << fmt12(rec.analytic) << ',' << fmt12(rec.fd) << ',' << fmt12(rec.fd_h) << ','
       << fmt12(rec.fd_rel_err) << ',' << fmt12(rec.packet_shift) << ','
       << fmt12(rec.packet_rel_err) << ',' << (rec.packet_shift ? std::to_string(rec.panels) : "")
       << ',' << fmt12(rec.synthetic_shift) << ',' << fmt12(rec.synthetic_rel_err) << ','
       << (rec.ok ? "ok" : "tolerance_exceeded") << "\n";
}

// Raw profile dump, one "z intensity" pair per line at full precision.
inline void write_profile(std::ostream& os, const Profile& prof) {
    char buf[80];
    for (size_t i = 0; i < prof.z.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", prof.z[i], prof.intensity[i]);
        os << buf;
    }
}

} // namespace diracgh
