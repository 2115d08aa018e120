#include <CLI11.hpp>
#include <json.hpp>

#include <diracgh.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json point_json(const diracgh::PointRecord& r) {
    return json{{"phi_deg", r.phi_deg},
                {"E", r.E},
                {"V", r.V},
                {"ell", r.ell},
                {"regime", diracgh::regime_name(r.regime)},
                {"R", opt_json(r.R)},
                {"T", opt_json(r.T)},
                {"theta", opt_json(r.theta)},
                {"delta_z", opt_json(r.delta_z)},
                {"delta_phase", opt_json(r.delta_phase)},
                {"near_edge", r.near_edge},
                {"singular_barrier", r.singular_barrier}};
}

std::pair<double, double> parse_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= s.size())
        throw std::invalid_argument("--range expects lo:hi");
    size_t used = 0;
    const double lo = std::stod(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("--range expects lo:hi");
    const std::string hi_part = s.substr(colon + 1);
    const double hi = std::stod(hi_part, &used);
    if (used != hi_part.size()) throw std::invalid_argument("--range expects lo:hi");
    return {lo, hi};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Step-barrier scattering of relativistic spin-1/2 waves: reflection, "
                 "transmission and the lateral displacement of totally reflected beams"};
    app.set_config("--config", "", "file with key=value lines; command-line flags win");

    std::string mode, sweep_var, solve_for, range_str, out_path, profile_out;
    std::vector<std::string> columns;
    std::string format = "csv", envelope_str = "rect";
    double E = 0, V = 0, phi_deg = 0, ell = 0;
    double fd_tol = 1e-6, a = 0, cutoff = 40.0, packet_tol = 0.05, synthetic_tol = 1e-8;
    double synthetic_slope = std::numeric_limits<double>::quiet_NaN();
    int samples = 0, threads = 0;

    app.add_option("--mode", mode, "point | sweep | boundary | oracle")
        ->required()
        ->check(CLI::IsMember({"point", "sweep", "boundary", "oracle"}));
    auto* oE = app.add_option("--E", E, "total energy, units of mc^2 (must exceed 1)");
    auto* oV = app.add_option("--V", V, "step height, units of mc^2");
    auto* oPhi = app.add_option("--phi-deg", phi_deg, "incidence angle from the step normal, degrees");
    app.add_option("--ell", ell, "spin mixing between the two transverse channels")
        ->capture_default_str();
    app.add_option("--sweep-var", sweep_var, "E | V | phi-deg | ell");
    app.add_option("--range", range_str, "sweep interval, lo:hi");
    app.add_option("--samples", samples, "number of sweep samples");
    app.add_option("--solve-for", solve_for, "boundary variable: E | V | phi-deg");
    app.add_option("--a", a, "packet aperture half width (enables the packet oracle)");
    app.add_option("--envelope", envelope_str, "packet envelope")
        ->capture_default_str()
        ->check(CLI::IsMember({"rect", "gauss"}));
    app.add_option("--spectral-cutoff", cutoff, "spectrum truncation, units of 1/a")
        ->capture_default_str();
    app.add_option("--fd-tol", fd_tol, "relative tolerance for the finite-difference oracle")
        ->capture_default_str();
    app.add_option("--packet-tol", packet_tol, "relative tolerance for the packet oracle")
        ->capture_default_str();
    app.add_option("--synthetic-slope", synthetic_slope,
                   "also run the packet machinery on a linear phase with this slope");
    app.add_option("--synthetic-tol", synthetic_tol, "relative tolerance for the synthetic probe")
        ->capture_default_str();
    app.add_option("--profile-out", profile_out, "write the reflected intensity profile here");
    app.add_option("--columns", columns, "comma list of point/sweep output columns")
        ->delimiter(',');
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv | json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads; 0 reads DIRAC_GH_THREADS")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        diracgh::detail::resolve_threads(threads); // fail fast on a bad environment value

        std::ofstream file_out;
        if (!out_path.empty()) {
            file_out.open(out_path);
            if (!file_out) throw diracgh::engine_error("cannot open output file: " + out_path);
        }
        std::ostream& os = out_path.empty() ? std::cout : file_out;

        const auto require_flag = [](const CLI::Option* opt, const char* name) {
            if (!opt->count())
                throw std::invalid_argument(std::string("this mode needs --") + name);
        };

        const auto select_columns = [&]() -> const std::vector<std::string>& {
            const auto& cols = columns.empty() ? diracgh::default_columns() : columns;
            for (const auto& c : cols)
                diracgh::point_field(diracgh::PointRecord{}, c); // reject bad names before any output
            return cols;
        };

        if (mode == "point") {
            require_flag(oE, "E");
            require_flag(oV, "V");
            require_flag(oPhi, "phi-deg");
            const diracgh::PointRecord rec = diracgh::run_point(E, V, phi_deg, ell);
            const auto& cols = select_columns();
            if (format == "csv")
                diracgh::write_points_csv(os, {rec}, cols);
            else
                os << point_json(rec).dump(2) << "\n";
            return 0;
        }

        if (mode == "sweep") {
            if (sweep_var.empty()) throw std::invalid_argument("sweep needs --sweep-var");
            if (range_str.empty()) throw std::invalid_argument("sweep needs --range lo:hi");
            if (samples < 1) throw std::invalid_argument("sweep needs --samples >= 1");
            if (sweep_var != "E") require_flag(oE, "E");
            if (sweep_var != "V") require_flag(oV, "V");
            if (sweep_var != "phi-deg") require_flag(oPhi, "phi-deg");

            diracgh::SweepSpec spec;
            spec.var = sweep_var;
            std::tie(spec.lo, spec.hi) = parse_range(range_str);
            spec.samples = samples;
            spec.E = E;
            spec.V = V;
            spec.phi_deg = phi_deg;
            spec.ell = ell;
            spec.threads = threads;
            const auto& cols = select_columns();
            const auto rows = diracgh::run_sweep(spec);
            if (format == "csv") {
                diracgh::write_points_csv(os, rows, cols);
            } else {
                json arr = json::array();
                for (const auto& r : rows) arr.push_back(point_json(r));
                os << json{{"rows", arr}}.dump(2) << "\n";
            }
            return 0;
        }

        if (mode == "boundary") {
            if (solve_for.empty()) throw std::invalid_argument("boundary needs --solve-for");
            const auto opt_of = [](const CLI::Option* o, double v) {
                return o->count() ? std::optional<double>(v) : std::nullopt;
            };
            const diracgh::BoundaryRecord rec = diracgh::run_boundary(
                solve_for, opt_of(oE, E), opt_of(oV, V), opt_of(oPhi, phi_deg));
            if (format == "csv") {
                diracgh::write_boundary_csv(os, rec);
            } else {
                os << json{{"solve_for", rec.solve_for},
                           {"E", opt_json(rec.E)},
                           {"V", opt_json(rec.V)},
                           {"phi_deg", opt_json(rec.phi_deg)},
                           {"closed_form", opt_json(rec.closed_form)},
                           {"bisection", opt_json(rec.bisection)},
                           {"abs_diff", opt_json(rec.abs_diff)},
                           {"status", rec.status}}
                          .dump(2)
                   << "\n";
            }
            return 0;
        }

        // oracle
        require_flag(oE, "E");
        require_flag(oV, "V");
        require_flag(oPhi, "phi-deg");
        diracgh::OracleSpec spec;
        spec.E = E;
        spec.V = V;
        spec.phi_deg = phi_deg;
        spec.fd_tol = fd_tol;
        spec.a = a;
        spec.envelope =
            envelope_str == "gauss" ? diracgh::Envelope::Gaussian : diracgh::Envelope::Rectangular;
        spec.spectral_cutoff = cutoff;
        spec.packet_tol = packet_tol;
        spec.synthetic_slope = synthetic_slope;
        spec.synthetic_tol = synthetic_tol;
        spec.threads = threads;
        if (!profile_out.empty() && !(a > 0.0))
            throw std::invalid_argument("--profile-out needs the packet oracle (--a > 0)");

        const diracgh::OracleRecord rec = diracgh::run_oracle(spec);
        if (format == "csv") {
            diracgh::write_oracle_csv(os, rec);
        } else {
            os << json{{"E", rec.E},
                       {"V", rec.V},
                       {"phi_deg", rec.phi_deg},
                       {"delta_z_analytic", rec.analytic},
                       {"delta_z_fd", rec.fd},
                       {"fd_h", rec.fd_h},
                       {"fd_rel_err", rec.fd_rel_err},
                       {"packet_shift", opt_json(rec.packet_shift)},
                       {"packet_rel_err", opt_json(rec.packet_rel_err)},
                       {"panels", rec.packet_shift ? json(rec.panels) : json(nullptr)},
                       {"synthetic_shift", opt_json(rec.synthetic_shift)},
                       {"synthetic_rel_err", opt_json(rec.synthetic_rel_err)},
                       {"status", rec.ok ? "ok" : "tolerance_exceeded"}}
                      .dump(2)
               << "\n";
        }
        if (!profile_out.empty()) {
            std::ofstream pf(profile_out);
            if (!pf) throw diracgh::engine_error("cannot open profile file: " + profile_out);
            diracgh::write_profile(pf, rec.profile);
        }
        return rec.ok ? 0 : 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
