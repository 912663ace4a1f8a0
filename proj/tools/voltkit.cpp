#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "voltkit/error.hpp"
#include "voltkit/laxkit.hpp"
#include "voltkit/report.hpp"

namespace {

using namespace voltkit;

enum Exit { kOk = 0, kNoLax = 2, kParse = 3, kConstraint = 4, kCertificate = 5 };

struct Common {
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--out", c.out, "Write output to FILE instead of stdout");
    cmd->add_option("--seed", c.seed, "Seed for random points")->envname("VOLTKIT_SEED");
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw Error(ErrorKind::Constraint, "cannot open '" + c.out + "' for writing");
    f << text;
}

void emit_json(const Common& c, const Json& j) { emit(c, j.dump(2) + "\n"); }

int emit_analysis(const Common& c, const SystemAnalysis& s) {
    emit(c, c.format == "text" ? to_text(s) : to_json(s).dump(2) + "\n");
    return s.symbolic_passed() ? kOk : kCertificate;
}

int exit_for(ErrorKind k) {
    switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidRoot:
        return kParse;
    case ErrorKind::Divergence:
        return kCertificate;
    default:
        return kConstraint;
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::Parse, "cannot read '" + path + "'");
    try {
        return Json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
    }
}

std::optional<LaxPair> build_pair(std::size_t rank, const std::string& phi_text, std::optional<std::size_t> solution) {
    PhiSystem phi = PhiSystem::parse(rank, phi_text);
    if (!solution) return search_signs(phi);
    auto sols = all_sign_solutions(phi, *solution + 1);
    if (sols.size() <= *solution) return std::nullopt;
    return sols[*solution];
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"voltkit: Lax pairs, Poisson structures and integrals of generalized Volterra systems"};
    app.require_subcommand(1);

    Common common;
    AnalyzeOptions aopts;
    std::size_t rank = 0, m = 0, n = 0, solution = 0, sample = 100, max_rank = 6;
    std::string phi, family_case, input;
    int jobs = 0;
    double step = 1e-3, t_end = 10;

    auto* build = app.add_subcommand("build", "Search signs for a root subset and analyse the system");
    build->add_option("--rank", rank, "Rank n of A_n")->required();
    build->add_option("--phi", phi, "Comma-separated roots, e.g. \"1,2,3,1+2\"")->required();
    auto* sol_opt = build->add_option("--solution", solution, "Use the K-th sign solution (0-based)");
    build->add_flag("--numeric", aopts.numeric, "Add RK4 drift checks");
    add_common(build, common);

    auto* family = app.add_subcommand("family", "Closed-form LV family (km, pkm, f2, f3, f4)");
    family->add_option("--case", family_case, "Family case")->required();
    family->add_option("--rank", rank, "Rank n")->required();
    family->add_flag("--numeric", aopts.numeric, "Add RK4 drift checks");
    add_common(family, common);

    auto* twodiag = app.add_subcommand("twodiag", "Two-diagonal family of size n with m extra diagonal entries");
    twodiag->add_option("--m", m, "Number of extra entries")->required();
    twodiag->add_option("--n", n, "Matrix size")->required();
    twodiag->add_flag("--numeric", aopts.numeric, "Add RK4 drift checks");
    add_common(twodiag, common);

    auto* enumerate = app.add_subcommand("enumerate", "Classify every root subset of A_n");
    enumerate->add_option("--rank", rank, "Rank n")->required();
    enumerate->add_option("--jobs", jobs, "Worker threads (0 = all)");
    enumerate->add_option("--max-rank", max_rank, "Largest rank accepted");
    add_common(enumerate, common);

    auto* verify = app.add_subcommand("verify", "Re-certify a system report");
    verify->add_option("--input", input, "System JSON")->required();
    bool verify_numeric = false;
    verify->add_flag("--numeric", verify_numeric, "Add RK4 drift checks");
    add_common(verify, common);

    auto* integrate = app.add_subcommand("integrate", "RK4 trajectory and drift of the certified integrals");
    integrate->add_option("--input", input, "System JSON (otherwise use --rank/--phi, --case/--rank or --m/--n)");
    integrate->add_option("--rank", rank, "Rank n");
    integrate->add_option("--phi", phi, "Root subset");
    integrate->add_option("--case", family_case, "Family case");
    integrate->add_option("--m", m, "Two-diagonal m");
    integrate->add_option("--n", n, "Two-diagonal n");
    integrate->add_option("--step", step, "Step size");
    integrate->add_option("--t-end", t_end, "Final time");
    integrate->add_option("--sample", sample, "Keep every K-th state in the output");
    add_common(integrate, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParse;
    }

    try {
        aopts.seed = common.seed;
        if (*build) {
            std::optional<std::size_t> which;
            if (*sol_opt) which = solution;
            auto lp = build_pair(rank, phi, which);
            if (!lp) {
                std::cerr << "no Lax pair for Phi = {" << phi << "} in A" << rank << "\n";
                return kNoLax;
            }
            return emit_analysis(common, analyze(*lp, aopts));
        }
        if (*family) return emit_analysis(common, analyze(named_family(parse_family_case(family_case), rank), aopts));
        if (*twodiag) return emit_analysis(common, analyze(two_diagonal_family(m, n), aopts));
        if (*enumerate) {
            if (rank > max_rank)
                throw Error(ErrorKind::SearchTooLarge,
                            "rank " + std::to_string(rank) + " exceeds --max-rank " + std::to_string(max_rank));
            auto summary = enumerate_parallel(rank, jobs);
            if (common.format == "text") {
                std::ostringstream os;
                os << "A" << rank << ": " << summary.lax_count() << " of " << summary.entries.size()
                   << " subsets admit a Lax pair, " << summary.lv_masks().size() << " of LV type\n";
                for (auto mask : summary.failing_masks())
                    os << "  no Lax pair: {" << phi_from_mask(rank, mask).to_string() << "}\n";
                for (auto mask : summary.lv_masks())
                    os << "  LV: {" << phi_from_mask(rank, mask).to_string() << "}\n";
                emit(common, os.str());
            } else {
                emit_json(common, enumeration_to_json(summary));
            }
            return kOk;
        }
        if (*verify) {
            const auto views = parse_system_json(read_json_file(input));
            Json out;
            out["schema"] = kSchemaVersion;
            out["system_id"] = views.front().system_id;
            Json checks = Json::array();
            bool ok = true;
            for (const auto& v : views) {
                Certificate cert = recertify(v, common.seed);
                if (verify_numeric) {
                    auto x0 = unit_scale_point(v.equations.size(), common.seed);
                    Trajectory tr = integrate_rk4_until(v.equations, x0, step, t_end);
                    if (tr.diverged_at) {
                        Check c;
                        c.name = "trajectory";
                        c.kind = CheckKind::Numeric;
                        c.value = *tr.diverged_at;
                        c.note = "diverged before t_end";
                        cert.checks.push_back(c);
                    }
                    cert.append(drift_report(tr, v.integrals));
                    if (!tr.diverged_at) cert.append(step_halving_report(v.equations, x0, v.integrals));
                }
                ok = ok && cert.symbolic_passed();
                for (auto& c : certificate_to_json(cert, VarNames::indexed(v.prefix, v.equations.size()))) {
                    c["view"] = v.prefix;
                    checks.push_back(std::move(c));
                }
            }
            out["certificates"] = std::move(checks);
            out["status"] = ok ? "pass" : "fail";
            if (common.format == "text") {
                std::ostringstream os;
                os << views.front().system_id << ": " << (ok ? "pass" : "fail") << "\n";
                for (const auto& c : out["certificates"])
                    os << "  [" << c["view"].get<std::string>() << "] " << c["name"].get<std::string>() << " "
                       << c["status"].get<std::string>() << "\n";
                emit(common, os.str());
            } else {
                emit_json(common, out);
            }
            return ok ? kOk : kCertificate;
        }
        if (*integrate) {
            std::vector<Poly> eqs;
            IntegralSet ints;
            std::string id;
            if (!input.empty()) {
                auto views = parse_system_json(read_json_file(input));
                eqs = views.front().equations;
                ints = views.front().integrals;
                id = views.front().system_id;
            } else {
                std::optional<LaxPair> lp;
                if (!phi.empty()) lp = build_pair(rank, phi, std::nullopt);
                else if (!family_case.empty()) lp = named_family(parse_family_case(family_case), rank);
                else if (m > 0) lp = two_diagonal_family(m, n);
                else throw Error(ErrorKind::Parse, "integrate needs --input, --phi, --case or --m/--n");
                if (!lp) {
                    std::cerr << "no Lax pair for Phi = {" << phi << "} in A" << rank << "\n";
                    return kNoLax;
                }
                SystemAnalysis s = analyze(*lp, aopts);
                eqs = s.a.equations;
                ints = s.a.integrals;
                id = s.system_id;
            }
            auto x0 = unit_scale_point(eqs.size(), common.seed);
            Trajectory tr = integrate_rk4_until(eqs, x0, step, t_end);
            Json out;
            out["schema"] = kSchemaVersion;
            out["system_id"] = id;
            out["seed"] = common.seed;
            out["t_end"] = t_end;
            out["trajectory"] = trajectory_to_json(tr, sample);
            out["drift"] = certificate_to_json(drift_report(tr, ints), VarNames::indexed("a", eqs.size()));
            if (common.format == "text") {
                std::ostringstream os;
                os << id << ": " << tr.times.size() << " states, step " << step << "\n";
                if (tr.diverged_at) os << "diverged at t=" << *tr.diverged_at << "\n";
                for (const auto& c : out["drift"])
                    os << "  " << c["name"].get<std::string>() << " " << c["witness"].dump() << " "
                       << c["status"].get<std::string>() << "\n";
                emit(common, os.str());
            } else {
                emit_json(common, out);
            }
            if (tr.diverged_at) {
                std::cerr << "trajectory diverged at t=" << *tr.diverged_at << "\n";
                return kCertificate;
            }
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_for(e.kind());
    }
    return kOk;
}
