// wpc: surface-group checks, nets, and bound certificates from the command line.
//
//   wpc surface-check --config S.json [--L 8]
//   wpc net --config S.json --eps 1.0 --seed 42
//   wpc certify --config S.json --eps0 4.0 --samples 1000000 --seed 42 --out report.json
//
// Exit codes: 0 pass, 1 assertion failure, 2 usage/config error, 3 resource cap.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wpc/beltrami.hpp"
#include "wpc/bergman.hpp"
#include "wpc/curvature.hpp"
#include "wpc/group.hpp"
#include "wpc/nets.hpp"
#include "wpc/quadrature.hpp"

using nlohmann::json;
using namespace wpc;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot write output: " + out_path);
        out << j.dump(2) << "\n";
    }
}

json estimate_json(const McEstimate& m) {
    return json{{"value", m.value},
                {"std_error", m.std_error},
                {"samples", m.samples},
                {"seed", m.seed}};
}

double nan_to_null_safe(double x) { return x; }

json maybe_nan(double x) {
    if (std::isnan(x)) return nullptr;
    return nan_to_null_safe(x);
}

json checks_json(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks) {
        const char* s = c.status == CheckStatus::pass   ? "pass"
                        : c.status == CheckStatus::fail ? "fail"
                                                        : "skipped";
        arr.push_back(json{{"name", c.name}, {"status", s}, {"detail", c.detail}});
    }
    return arr;
}

json net_json(const NetResult& net) {
    json pts = json::array();
    for (const auto& p : net.points) pts.push_back({p.lift.z.real(), p.lift.z.imag()});
    return json{{"count", net.count},
                {"epsilon", net.epsilon},
                {"min_pairwise_distance", net.min_pairwise_distance},
                {"covering_radius_on_samples", net.covering_radius_on_samples},
                {"max_injectivity_seen", net.max_injectivity_seen},
                {"lifts", pts}};
}

json certificate_json(const BoundCertificate& c) {
    return json{{"delta", maybe_nan(c.delta)},
                {"C3", maybe_nan(c.c3)},
                {"C4", maybe_nan(c.c4)},
                {"C1_r", c.c1_r},
                {"sup_mu_estimate", c.sup_mu_estimate},
                {"min_base_value", c.min_base_value},
                {"samples", c.samples},
                {"truncation_tail", c.truncation_tail},
                {"hypothesis_satisfied", c.hypothesis_satisfied},
                {"sup_f_balls", c.sup_f_balls},
                {"sup_f_domain_samples", c.sup_f_domain_samples},
                {"epsilon0", c.epsilon0},
                {"n_bases", c.n_bases},
                {"seed", c.seed}};
}

json bracket_json(const CurvatureBracket& b) {
    return json{{"hk_lower", b.hk_lower},
                {"tw_upper", maybe_nan(b.tw_upper)},
                {"genus", b.genus},
                {"slack_3sigma", b.slack},
                {"consistent", b.consistent},
                {"asserted", b.asserted},
                {"width", maybe_nan(b.width)},
                {"ratio_times_genus", maybe_nan(b.ratio_times_genus)}};
}

json tolerance_table() {
    return json{{"relator_residual", 1e-9},
                {"majorant_slack", 1e-12},
                {"identity_slack", 1e-12},
                {"mc_band_sigmas", 3.0},
                {"area_relative", 0.02},
                {"laplacian_tolerance", 1e-6}};
}

struct CommonArgs {
    std::string config_path;
    int L = -1;  // -1: take from config
    std::uint64_t seed = 42;
    std::size_t samples = 200000;
    std::string out_path;
};

struct Loaded {
    GroupPresentation pres;
    GroupEnumeration enumeration;
    std::string config_hash;
    int L = 0;
};

Loaded load_and_enumerate(const CommonArgs& args) {
    Loaded l;
    l.config_hash = fnv1a_hex(read_file(args.config_path));
    l.pres = load_presentation(args.config_path);
    l.L = args.L >= 0 ? args.L : l.pres.max_word_length;
    l.enumeration = enumerate_group(l.pres, l.L);
    return l;
}

json header_json(const Loaded& l, std::uint64_t seed) {
    return json{{"config_hash", l.config_hash},
                {"seed", seed},
                {"L", l.L},
                {"element_count", l.enumeration.size()},
                {"tolerances", tolerance_table()}};
}

int cmd_surface_check(const CommonArgs& args) {
    const Loaded l = load_and_enumerate(args);
    const GroupEnumeration& e = l.enumeration;

    json rep = header_json(l, args.seed);
    rep["genus"] = l.pres.genus;
    rep["relator_residual"] = relator_residual(l.pres);
    rep["level_counts"] = level_counts(e);
    rep["domain_exact"] = e.domain_exact;

    bool ok = true;
    if (!l.pres.trivial()) {
        rep["systole_estimate"] = systole_estimate(e);
        rep["injectivity_radius_at_origin"] =
            injectivity_radius(e, SurfacePoint{disk_point({0.0, 0.0})});
        rep["circumradius"] = e.circumradius;
        rep["inradius"] = e.inradius;
        if (l.L == 0) {
            rep["area"] = nullptr;
            rep["warning"] = "identity-only enumeration; area check skipped";
            std::cerr << "warning: L = 0, area check skipped\n";
        } else {
            const McEstimate area =
                integrate_domain(e, [](complexd) { return 1.0; }, args.samples, args.seed);
            const double expected = 4.0 * M_PI * (l.pres.genus - 1);
            rep["area"] = estimate_json(area);
            rep["area_expected"] = expected;
            const bool area_ok = std::abs(area.value - expected) <= 0.02 * expected;
            rep["area_within_2pct"] = area_ok;
            ok = ok && area_ok;
        }
    }
    write_output(rep, args.out_path);
    return ok ? kExitPass : kExitAssertion;
}

int cmd_net(const CommonArgs& args, double eps, const std::string& format) {
    const Loaded l = load_and_enumerate(args);
    const GroupEnumeration& e = l.enumeration;
    if (l.pres.trivial()) {
        throw std::invalid_argument("net: the trivial pseudo-surface has no finite-area domain");
    }

    const auto samples = sample_surface(e, args.samples, args.seed);
    const NetResult net = greedy_net(samples, eps, e);
    const auto bracket = count_bracket(l.pres.genus, eps);

    const bool separation_ok = net.min_pairwise_distance >= eps ||
                               net.count < 2;
    const bool covering_ok = net.covering_radius_on_samples <= eps;

    if (format == "csv") {
        std::ostringstream os;
        os << "index,re,im\n";
        for (std::size_t i = 0; i < net.points.size(); ++i) {
            os << i << "," << std::setprecision(17) << net.points[i].lift.z.real() << ","
               << net.points[i].lift.z.imag() << "\n";
        }
        if (args.out_path.empty()) {
            std::cout << os.str();
        } else {
            std::ofstream out(args.out_path);
            out << os.str();
        }
        return separation_ok && covering_ok ? kExitPass : kExitAssertion;
    }

    json rep = header_json(l, args.seed);
    rep["net"] = net_json(net);
    rep["samples"] = samples.size();
    rep["count_bracket"] = {bracket.first, bracket.second};
    rep["separation_ok"] = separation_ok;
    rep["covering_ok"] = covering_ok;
    write_output(rep, args.out_path);
    return separation_ok && covering_ok ? kExitPass : kExitAssertion;
}

void emit_radial_slices(const BeltramiField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write: " + path);
    out << "angle,t,f,abs_mu\n";
    const int n_angles = 8, n_radial = 200;
    for (int a = 0; a < n_angles; ++a) {
        const double phi = 2.0 * M_PI * a / n_angles;
        for (int i = 0; i < n_radial; ++i) {
            const double t = 0.98 * i / (n_radial - 1);
            const MuF v = eval_mu_f(field, std::polar(t, phi), field.series_tol);
            out << std::setprecision(10) << phi << "," << t << "," << v.f << ","
                << std::abs(v.mu) << "\n";
        }
    }
}

void emit_grid(const BeltramiField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write: " + path);
    out << "re,im,abs_mu,in_domain\n";
    const int n = 160;
    const GroupEnumeration& e = *field.enumeration;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = -0.98 + 1.96 * i / (n - 1);
            const double y = -0.98 + 1.96 * j / (n - 1);
            const complexd z{x, y};
            if (std::norm(z) >= 0.96) continue;
            const bool inside = e.trivial() ? true : in_domain(e, z);
            const MuF v = eval_mu_f(field, z, field.series_tol);
            out << std::setprecision(10) << x << "," << y << "," << std::abs(v.mu) << ","
                << (inside ? 1 : 0) << "\n";
        }
    }
}

int cmd_certify(const CommonArgs& args, double eps0, const std::string& slices_path,
                const std::string& grid_path) {
    const Loaded l = load_and_enumerate(args);
    const GroupEnumeration& e = l.enumeration;

    json rep = header_json(l, args.seed);
    rep["eps0"] = eps0;

    // base selection: the origin, then a greedy eps0-net over the surface
    std::vector<SurfacePoint> bases{SurfacePoint{disk_point({0.0, 0.0})}};
    if (!l.pres.trivial()) {
        auto samples = sample_surface(e, std::min<std::size_t>(args.samples, 20000), args.seed);
        std::vector<SurfacePoint> seeded;
        seeded.push_back(bases[0]);
        seeded.insert(seeded.end(), samples.begin(), samples.end());
        const NetResult net = greedy_net(seeded, eps0, e);
        bases = net.points;
        rep["net"] = net_json(net);
    }

    const BeltramiField field = make_field(e, bases, eps0);
    CertifyOptions opts;
    opts.seed = args.seed;
    const CertifyOutcome outcome = certify(field, opts);
    rep["certificate"] = certificate_json(outcome.certificate);
    rep["checks"] = checks_json(outcome.checks);

    const McEstimate norm = wp_norm_squared(field, args.samples, args.seed + 1);
    rep["wp_norm_squared"] = estimate_json(norm);

    const CurvatureBracket bracket =
        bracket_report(field, outcome.certificate, norm, l.pres.genus);
    rep["bracket"] = bracket_json(bracket);

    if (!slices_path.empty()) emit_radial_slices(field, slices_path);
    if (!grid_path.empty()) emit_grid(field, grid_path);

    const bool ok = outcome.all_passed() && (!bracket.asserted || bracket.consistent);
    rep["all_checks_passed"] = ok;
    write_output(rep, args.out_path);
    return ok ? kExitPass : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical bound certificates for Beltrami differentials on hyperbolic surfaces"};
    app.require_subcommand(1);

    CommonArgs args;
    double eps = 1.0, eps0 = 4.0;
    std::string format = "json", slices_path, grid_path;

    auto add_common = [&args](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "surface config JSON")->required();
        cmd->add_option("--L", args.L, "truncation word length (default: from config)");
        cmd->add_option("--seed", args.seed, "RNG seed");
        cmd->add_option("--samples", args.samples, "Monte-Carlo sample count");
        cmd->add_option("--out", args.out_path, "output path (default: stdout)");
    };

    CLI::App* sc = app.add_subcommand("surface-check", "validate a surface config");
    add_common(sc);

    CLI::App* net = app.add_subcommand("net", "greedy separated net on the surface");
    add_common(net);
    net->add_option("--eps", eps, "net separation radius")->required();
    net->add_option("--format", format, "json or csv");

    CLI::App* cert = app.add_subcommand("certify", "build the field and certify the bounds");
    add_common(cert);
    cert->add_option("--eps0", eps0, "separation parameter for the base net");
    cert->add_option("--slices", slices_path, "CSV of f and |mu| along radial slices");
    cert->add_option("--grid", grid_path, "CSV heat grid of |mu|");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (sc->parsed()) return cmd_surface_check(args);
        if (net->parsed()) return cmd_net(args, eps, format);
        if (cert->parsed()) return cmd_certify(args, eps0, slices_path, grid_path);
    } catch (const resource_error& ex) {
        std::cerr << "resource error: " << ex.what() << "\n";
        return kExitResource;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitAssertion;
    }
    return kExitUsage;
}
