#include "voltkit/report.hpp"

#include <random>
#include <sstream>

#include "voltkit/error.hpp"

namespace voltkit {

bool SystemAnalysis::symbolic_passed() const {
    return a.certificate.symbolic_passed() && (!x || x->certificate.symbolic_passed());
}

bool SystemAnalysis::all_passed() const { return a.certificate.passed() && (!x || x->certificate.passed()); }

std::vector<double> unit_scale_point(std::size_t nvars, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    std::vector<double> p(nvars);
    for (auto& v : p) v = u(rng);
    return p;
}

namespace {

Check symbolic_check(std::string name, Poly residual) {
    Check c;
    c.name = std::move(name);
    c.passed = residual.is_zero();
    c.residual = std::move(residual);
    return c;
}

Poly sum_of_variables(std::size_t nv) {
    Poly h(nv);
    for (std::size_t i = 0; i < nv; ++i) h += Poly::variable(nv, i);
    return h;
}

Poly view_hamiltonian(const std::string& prefix, std::size_t nv) {
    return prefix == "x" ? sum_of_variables(nv) : half_sum_of_squares(nv);
}

// `equations`, when given, must equal pi * grad(H).
void certify_poisson(Certificate& cert, const PolyMatrix& pi, const std::vector<Poly>* equations, const Poly& H,
                     std::uint64_t seed, int* rank_out) {
    JacobiResult jr = jacobi_check(pi);
    Check jc = symbolic_check("jacobi", jr.residual);
    jc.passed = jr.ok;
    jc.note = std::to_string(jr.triples) + " triples";
    if (jr.failing) {
        const auto& f = *jr.failing;
        jc.note += "; fails at (" + std::to_string(f[0] + 1) + "," + std::to_string(f[1] + 1) + "," +
                   std::to_string(f[2] + 1) + ")";
    }
    cert.checks.push_back(std::move(jc));

    if (equations) {
        auto field = hamiltonian_field(pi, H);
        Poly worst(pi.nvars());
        for (std::size_t k = 0; k < field.size(); ++k) {
            Poly d = field[k] - (*equations)[k];
            if (!d.is_zero()) {
                worst = d;
                break;
            }
        }
        cert.checks.push_back(symbolic_check("hamiltonian", worst));
    }

    Check rc;
    rc.name = "rank-even";
    rc.seed = seed;
    try {
        const int r = generic_rank(pi, seed);
        rc.value = r;
        rc.passed = r % 2 == 0;
        rc.residual = Poly(pi.nvars());
        rc.note = "generic rank " + std::to_string(r);
        if (rank_out) *rank_out = r;
    } catch (const Error& e) {
        rc.passed = false;
        rc.note = e.what();
    }
    cert.checks.push_back(std::move(rc));
}

void certify_view(CoordinateView& v, const AnalyzeOptions& opts) {
    Certificate cert = certify_constants(v.integrals, v.equations);
    if (v.poisson) {
        int r = -1;
        certify_poisson(cert, v.poisson->pi, &v.equations, view_hamiltonian(v.prefix, v.equations.size()), opts.seed,
                        &r);
        if (r >= 0) v.poisson->generic_rank = r;
        cert.append(check_involution(v.integrals, *v.poisson));
    }
    if (!v.integrals.empty()) cert.append(functional_independence(v.integrals, opts.independence_trials, opts.seed));
    v.certificate.append(cert);
}

void numeric_view(CoordinateView& v, const std::vector<double>& x0, const AnalyzeOptions& opts) {
    Trajectory tr = integrate_rk4_until(v.equations, x0, opts.step, opts.t_end);
    if (tr.diverged_at) {
        Check c;
        c.name = "trajectory";
        c.kind = CheckKind::Numeric;
        c.value = *tr.diverged_at;
        c.note = "diverged before t_end at t=" + std::to_string(*tr.diverged_at);
        v.certificate.checks.push_back(std::move(c));
    }
    v.certificate.append(drift_report(tr, v.integrals));
    if (!tr.diverged_at) v.certificate.append(step_halving_report(v.equations, x0, v.integrals));
}

std::string system_id_for(const LaxPair& lax, const std::optional<std::pair<std::size_t, std::size_t>>& td) {
    if (td) return "twodiag:m=" + std::to_string(td->first) + ",n=" + std::to_string(td->second);
    return lax.origin + ":A" + std::to_string(lax.phi.rank()) + ":" + lax.phi.to_string();
}

} // namespace

SystemAnalysis analyze(const LaxPair& lax, const AnalyzeOptions& opts) {
    SystemAnalysis s(lax);
    s.seed = opts.seed;
    const std::size_t nv = lax.xdot.size();
    const std::size_t dim = lax.L.dim();
    if (lax.origin == "twodiag") s.twodiag = std::make_pair(nv + 1 - dim, dim);
    s.system_id = system_id_for(lax, s.twodiag);

    for (unsigned k = 2; k <= dim; ++k) {
        Poly t = trace_power(lax.L, k);
        if (!t.is_zero()) s.traces.push_back({k, trace_normalization(k), std::move(t)});
    }
    s.det_L = det(lax.L);
    if (dim <= opts.max_chop_dim)
        for (std::size_t k = 1; 2 * k < dim; ++k) s.chops.push_back(chop(lax.L, k));
    if (moser_partition_recovers(lax.L)) {
        s.moser.push_back(moser_reduce(lax.L, MoserParity::Odd));
        s.moser.push_back(moser_reduce(lax.L, MoserParity::Even));
    }

    IntegralSet cand;
    if (s.twodiag) {
        const auto [m, n] = *s.twodiag;
        if (m == 1) s.notes.push_back("m=1: periodic KM system");
        try {
            for (auto& c : twodiag_casimirs(m, n)) cand.polys.push_back(c);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Unimplemented) throw;
        }
        try {
            s.moser_extra = moser_extra_integral(m, n);
            cand.polys.push_back({"F", *s.moser_extra, "Moser extra integral"});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Unimplemented) throw;
        }
    }
    cand.polys.push_back({"det L", s.det_L, "det(L)"});
    for (const auto& t : s.traces) cand.polys.push_back({"H" + std::to_string(t.k), t.poly, t.normalization});
    for (const auto& c : s.chops)
        for (std::size_t r = 0; r < c.ratios.size(); ++r)
            cand.rationals.push_back({"I" + std::to_string(r + 1) + "," + std::to_string(c.k), c.ratios[r],
                                      "chopped determinant ratio"});

    s.a.prefix = "a";
    s.a.equations = lax.xdot;
    {
        Selection sel = select_integrals(cand, lax.xdot, opts.seed);
        s.a.integrals = std::move(sel.kept);
        s.a.rejected_dependent = std::move(sel.rejected_dependent);
        s.a.rejected_not_constant = std::move(sel.rejected_not_constant);
    }
    DeriveOptions dopts;
    dopts.seed = opts.seed;
    s.a.poisson = derive_a_poisson(lax, dopts);
    if (!s.a.poisson) s.notes.push_back("no quadratic Poisson structure found within the candidate budget");
    certify_view(s.a, opts);

    s.lv = detect_lv(lax);
    if (s.lv) {
        CoordinateView xv;
        xv.prefix = "x";
        xv.equations = s.lv->x_equations;
        xv.poisson = lv_poisson(s.lv->A, opts.seed);
        IntegralSet xc;
        std::size_t idx = 0;
        for (const auto& mc : monomial_casimirs(s.lv->A)) {
            const std::string label = "C" + std::to_string(++idx);
            if (mc.is_polynomial()) xc.polys.push_back({label, mc.to_poly(nv), "monomial Casimir"});
            else xc.rationals.push_back({label, mc.to_function(nv), "monomial Casimir"});
        }
        xc.polys.push_back({"H", sum_of_variables(nv), "sum of x"});
        Selection sel = select_integrals(xc, xv.equations, opts.seed);
        xv.integrals = std::move(sel.kept);
        xv.rejected_dependent = std::move(sel.rejected_dependent);
        xv.rejected_not_constant = std::move(sel.rejected_not_constant);
        certify_view(xv, opts);
        s.x = std::move(xv);
    }

    if (opts.numeric) {
        const auto a0 = unit_scale_point(nv, opts.seed);
        numeric_view(s.a, a0, opts);
        if (s.x) {
            std::vector<double> x0(nv);
            for (std::size_t i = 0; i < nv; ++i) x0[i] = static_cast<double>(s.lv->scale) * a0[i] * a0[i];
            numeric_view(*s.x, x0, opts);
        }
    }
    return s;
}

// ---------------------------------------------------------------- JSON

namespace {

Json matrix_json(const PolyMatrix& m, const VarNames& names) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(m.at(r, c).to_string(names));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json integrals_json(const IntegralSet& set, const VarNames& names) {
    Json arr = Json::array();
    for (const auto& p : set.polys)
        arr.push_back({{"label", p.label}, {"type", "poly"}, {"expr", p.poly.to_string(names)}, {"note", p.note}});
    for (const auto& r : set.rationals)
        arr.push_back({{"label", r.label},
                       {"type", "rational"},
                       {"num", r.fn.num().to_string(names)},
                       {"den", r.fn.den().to_string(names)},
                       {"note", r.note}});
    return arr;
}

Json poisson_json(const PoissonMatrix& p, const VarNames& names) {
    return {{"matrix", matrix_json(p.pi, names)},
            {"jacobi_certified", p.jacobi_certified},
            {"generic_rank", p.generic_rank},
            {"rank_seed", p.rank_seed},
            {"origin", p.origin}};
}

Json equations_json(const std::vector<Poly>& eqs, const VarNames& names) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < eqs.size(); ++i) arr.push_back({{"var", names[i]}, {"rhs", eqs[i].to_string(names)}});
    return arr;
}

Json view_certificates(const CoordinateView& v, const VarNames& names) {
    Json arr = certificate_to_json(v.certificate, names);
    for (auto& c : arr) c["view"] = v.prefix;
    return arr;
}

} // namespace

Json certificate_to_json(const Certificate& cert, const VarNames& names) {
    Json arr = Json::array();
    for (const auto& c : cert.checks) {
        Json j;
        j["name"] = c.name;
        j["kind"] = to_string(c.kind);
        j["status"] = c.passed ? "pass" : "fail";
        if (c.kind == CheckKind::Symbolic && c.residual) j["witness"] = c.residual->to_string(names);
        else j["witness"] = c.value;
        if (c.kind == CheckKind::Numeric) j["tolerance"] = c.tolerance;
        j["seed"] = c.seed;
        if (!c.point.empty()) {
            Json pt = Json::array();
            for (const auto& q : c.point) pt.push_back(rational_to_string(q));
            j["point"] = std::move(pt);
        }
        if (!c.note.empty()) j["note"] = c.note;
        arr.push_back(std::move(j));
    }
    return arr;
}

Json to_json(const SystemAnalysis& s) {
    const std::size_t nv = s.lax.xdot.size();
    const VarNames an = VarNames::indexed("a", nv);
    const VarNames xn = VarNames::indexed("x", nv);
    Json j;
    j["schema"] = kSchemaVersion;
    j["metadata"] = {{"system_id", s.system_id},
                     {"rank", s.lax.phi.rank()},
                     {"phi", s.lax.phi.to_string()},
                     {"var_count", nv},
                     {"convention", kLaxConvention},
                     {"origin", s.lax.origin},
                     {"seed", s.seed}};
    if (s.twodiag) j["metadata"]["twodiag"] = {{"m", s.twodiag->first}, {"n", s.twodiag->second}};

    Json positions = Json::array();
    for (const auto& p : s.lax.positions) positions.push_back({p.row, p.col});
    j["lax"] = {{"L", matrix_json(s.lax.L, an)},
                {"B", matrix_json(s.lax.B, an)},
                {"signs", s.lax.signs},
                {"positions", positions}};

    j["odes"]["a"] = equations_json(s.a.equations, an);
    if (s.x) {
        j["odes"]["x"] = {{"scale", s.lv->scale}, {"A", s.lv->A}, {"equations", equations_json(s.x->equations, xn)}};
    }

    j["poisson"] = Json::object();
    if (s.a.poisson) j["poisson"]["a"] = poisson_json(*s.a.poisson, an);
    if (s.x && s.x->poisson) j["poisson"]["x"] = poisson_json(*s.x->poisson, xn);

    Json ints;
    ints["a"] = integrals_json(s.a.integrals, an);
    if (s.x) ints["x"] = integrals_json(s.x->integrals, xn);
    Json rejected = {{"dependent", s.a.rejected_dependent}, {"not_constant", s.a.rejected_not_constant}};
    ints["rejected"] = std::move(rejected);
    Json traces = Json::array();
    for (const auto& t : s.traces)
        traces.push_back({{"k", t.k}, {"normalization", t.normalization}, {"poly", t.poly.to_string(an)}});
    ints["traces"] = std::move(traces);
    ints["det"] = s.det_L.to_string(an);
    Json chops = Json::array();
    for (const auto& c : s.chops) {
        Json coeffs = Json::array();
        for (const auto& p : c.coeffs) coeffs.push_back(p.to_string(an));
        Json rats = Json::array();
        for (const auto& r : c.ratios) rats.push_back({{"num", r.num().to_string(an)}, {"den", r.den().to_string(an)}});
        chops.push_back({{"k", c.k}, {"coeffs", coeffs}, {"leading", c.leading}, {"rationals", rats}});
    }
    ints["chops"] = std::move(chops);
    if (!s.moser.empty()) {
        Json red = Json::array();
        for (const auto& m : s.moser) {
            Json vm = Json::array();
            for (const auto& [label, p] : m.var_map) vm.push_back({{"label", label}, {"poly", p.to_string(an)}});
            red.push_back({{"parity", parity_name(m.parity)},
                           {"kept", m.kept},
                           {"matrix", matrix_json(m.reduced, an)},
                           {"var_map", vm}});
        }
        ints["moser"] = {{"reductions", red}};
        if (s.moser_extra) ints["moser"]["extra_integral"] = s.moser_extra->to_string(an);
    }
    j["integrals"] = std::move(ints);

    Json certs = view_certificates(s.a, an);
    if (s.x)
        for (auto& c : view_certificates(*s.x, xn)) certs.push_back(std::move(c));
    j["certificates"] = std::move(certs);
    j["status"] = {{"symbolic", s.symbolic_passed() ? "pass" : "fail"}, {"all", s.all_passed() ? "pass" : "fail"}};
    j["notes"] = s.notes;
    return j;
}

namespace {

void text_matrix(std::ostringstream& os, const PolyMatrix& m, const VarNames& names) {
    for (std::size_t r = 0; r < m.dim(); ++r) {
        os << "  [";
        for (std::size_t c = 0; c < m.dim(); ++c) os << (c ? ", " : "") << m.at(r, c).to_string(names);
        os << "]\n";
    }
}

void text_view(std::ostringstream& os, const CoordinateView& v, const VarNames& names) {
    os << "\nODEs (" << v.prefix << "):\n";
    for (std::size_t i = 0; i < v.equations.size(); ++i)
        os << "  d" << names[i] << "/dt = " << v.equations[i].to_string(names) << "\n";
    if (v.poisson) {
        os << "\nPoisson matrix (" << v.prefix << "), generic rank " << v.poisson->generic_rank << ":\n";
        text_matrix(os, v.poisson->pi, names);
    }
    os << "\nIntegrals (" << v.prefix << "):\n";
    for (const auto& p : v.integrals.polys) os << "  " << p.label << " = " << p.poly.to_string(names) << "\n";
    for (const auto& r : v.integrals.rationals) os << "  " << r.label << " = " << r.fn.to_string(names) << "\n";
    std::size_t pass = 0;
    for (const auto& c : v.certificate.checks) pass += c.passed;
    os << "\nCertificates (" << v.prefix << "): " << pass << "/" << v.certificate.checks.size() << " pass\n";
    for (const auto& c : v.certificate.checks)
        if (!c.passed) os << "  FAIL " << c.name << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
}

} // namespace

std::string to_text(const SystemAnalysis& s) {
    const std::size_t nv = s.lax.xdot.size();
    const VarNames an = VarNames::indexed("a", nv);
    std::ostringstream os;
    os << "System " << s.system_id << " (seed " << s.seed << ")\n";
    os << "Convention: " << kLaxConvention << "\n";
    os << "\nL:\n";
    text_matrix(os, s.lax.L, an);
    os << "\nB:\n";
    text_matrix(os, s.lax.B, an);
    text_view(os, s.a, an);
    if (s.x) text_view(os, *s.x, VarNames::indexed("x", nv));
    for (const auto& n : s.notes) os << "\nNote: " << n << "\n";
    os << "\nOverall: symbolic " << (s.symbolic_passed() ? "pass" : "fail") << ", all "
       << (s.all_passed() ? "pass" : "fail") << "\n";
    return os.str();
}

Json enumeration_to_json(const EnumerationSummary& s) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["rank"] = s.rank;
    j["total"] = s.entries.size();
    j["lax_count"] = s.lax_count();
    j["lv_count"] = s.lv_count();
    j["failing_masks"] = s.failing_masks();
    Json failing_phi = Json::array();
    for (const auto& e : s.entries)
        if (!e.lax) failing_phi.push_back(e.phi);
    j["failing_phi"] = std::move(failing_phi);
    j["lv_masks"] = s.lv_masks();
    Json entries = Json::array();
    for (const auto& e : s.entries)
        entries.push_back({{"mask", e.mask}, {"phi", e.phi}, {"lax", e.lax ? "ok" : "none"}, {"lv", e.lv ? "yes" : "no"}});
    j["entries"] = std::move(entries);
    return j;
}

Json trajectory_to_json(const Trajectory& t, std::size_t sample_every) {
    if (sample_every == 0) sample_every = 1;
    Json j;
    j["method"] = t.method;
    j["step"] = t.step;
    j["sample_every"] = sample_every;
    Json times = Json::array(), states = Json::array();
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        if (i % sample_every != 0 && i + 1 != t.times.size()) continue;
        times.push_back(t.times[i]);
        states.push_back(t.states[i]);
    }
    j["times"] = std::move(times);
    j["states"] = std::move(states);
    j["diverged_at"] = t.diverged_at ? Json(*t.diverged_at) : Json(nullptr);
    return j;
}

// ---------------------------------------------------------------- reading reports back

namespace {

const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing key '") + key + "'");
    return j.at(key);
}

std::string text_of(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_string()) throw Error(ErrorKind::Parse, std::string("key '") + key + "' must be a string");
    return v.get<std::string>();
}

std::optional<SystemInput> read_view(const Json& j, const std::string& prefix, std::size_t nv, const std::string& id) {
    const Json& odes = require(j, "odes");
    if (!odes.contains(prefix)) return std::nullopt;
    const VarNames names = VarNames::indexed(prefix, nv);
    SystemInput in;
    in.system_id = id;
    in.prefix = prefix;
    const Json& eq = prefix == "a" ? odes.at("a") : require(odes.at(prefix), "equations");
    if (!eq.is_array() || eq.size() != nv) throw Error(ErrorKind::Parse, "equation list must have var_count entries");
    for (const auto& e : eq) in.equations.push_back(Poly::parse(text_of(e, "rhs"), names));

    if (j.contains("poisson") && j.at("poisson").contains(prefix)) {
        const Json& rows = require(j.at("poisson").at(prefix), "matrix");
        if (!rows.is_array() || rows.size() != nv) throw Error(ErrorKind::Parse, "Poisson matrix must be var_count square");
        PolyMatrix pi(nv, nv);
        for (std::size_t r = 0; r < nv; ++r) {
            if (!rows[r].is_array() || rows[r].size() != nv) throw Error(ErrorKind::Parse, "Poisson matrix row has wrong length");
            for (std::size_t c = 0; c < nv; ++c) pi.at(r, c) = Poly::parse(rows[r][c].get<std::string>(), names);
        }
        in.poisson = std::move(pi);
    }
    if (j.contains("integrals") && j.at("integrals").contains(prefix)) {
        for (const auto& e : j.at("integrals").at(prefix)) {
            const std::string label = text_of(e, "label");
            const std::string note = e.contains("note") ? e.at("note").get<std::string>() : "";
            const std::string type = e.contains("type") ? e.at("type").get<std::string>() : "poly";
            if (type == "poly") {
                in.integrals.polys.push_back({label, Poly::parse(text_of(e, "expr"), names), note});
            } else if (type == "rational") {
                in.integrals.rationals.push_back(
                    {label, RationalFn(Poly::parse(text_of(e, "num"), names), Poly::parse(text_of(e, "den"), names)), note});
            } else {
                throw Error(ErrorKind::Parse, "unknown integral type '" + type + "'");
            }
        }
    }
    return in;
}

} // namespace

std::vector<SystemInput> parse_system_json(const Json& j) {
    if (j.contains("schema") && j.at("schema") != kSchemaVersion)
        throw Error(ErrorKind::Parse, "unsupported schema version");
    const Json& meta = require(j, "metadata");
    const Json& count = require(meta, "var_count");
    if (!count.is_number_unsigned() || count.get<std::size_t>() == 0 || count.get<std::size_t>() > kMaxVars)
        throw Error(ErrorKind::Parse, "var_count must be a positive integer up to 32");
    const std::size_t nv = count.get<std::size_t>();
    const std::string id = meta.contains("system_id") ? meta.at("system_id").get<std::string>() : "input";
    std::vector<SystemInput> out;
    for (const char* prefix : {"a", "x"})
        if (auto v = read_view(j, prefix, nv, id)) out.push_back(std::move(*v));
    if (out.empty()) throw Error(ErrorKind::Parse, "no equations found under 'odes'");
    return out;
}

Certificate recertify(const SystemInput& in, std::uint64_t seed, std::size_t trials) {
    Certificate cert = certify_constants(in.integrals, in.equations);
    cert.system_id = in.system_id;
    if (in.poisson) {
        if (!in.poisson->is_skew()) {
            Check c;
            c.name = "skew";
            c.note = "Poisson matrix is not skew-symmetric";
            cert.checks.push_back(std::move(c));
        } else {
            certify_poisson(cert, *in.poisson, &in.equations, view_hamiltonian(in.prefix, in.equations.size()), seed,
                            nullptr);
            PoissonMatrix pm;
            pm.pi = *in.poisson;
            cert.append(check_involution(in.integrals, pm));
        }
    }
    if (!in.integrals.empty()) cert.append(functional_independence(in.integrals, trials, seed));
    return cert;
}

} // namespace voltkit
