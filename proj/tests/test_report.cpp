#include <doctest.h>

#include "helpers.hpp"
#include "voltkit/error.hpp"
#include "voltkit/laxkit.hpp"
#include "voltkit/report.hpp"

using namespace voltkit;
using testing::P;

namespace {

std::vector<SystemAnalysis> sample_systems() {
    std::vector<SystemAnalysis> out;
    out.push_back(analyze(search_signs(PhiSystem::parse(3, "1,2,3,1+2")).value()));
    out.push_back(analyze(all_sign_solutions(PhiSystem::parse(3, "1,2,3,1+2,2+3"), 4).at(3)));
    out.push_back(analyze(named_family(FamilyCase::Family4, 5)));
    out.push_back(analyze(two_diagonal_family(3, 8)));
    return out;
}

void check_reparse(const std::string& text, const VarNames& names) {
    CAPTURE(text);
    Poly p = Poly::parse(text, names);
    CHECK(p.to_string(names) == text);
}

} // namespace

TEST_CASE("every polynomial string in a report re-parses to itself") {
    for (const auto& s : sample_systems()) {
        CAPTURE(s.system_id);
        Json j = to_json(s);
        const std::size_t nv = j["metadata"]["var_count"];
        const auto an = VarNames::indexed("a", nv), xn = VarNames::indexed("x", nv);
        for (std::size_t i = 0; i < nv; ++i) {
            const std::string rhs = j["odes"]["a"][i]["rhs"];
            check_reparse(rhs, an);
            CHECK(Poly::parse(rhs, an) == s.a.equations[i]);
        }
        for (const auto& row : j["lax"]["L"])
            for (const auto& e : row) check_reparse(e.get<std::string>(), an);
        for (const auto& row : j["lax"]["B"])
            for (const auto& e : row) check_reparse(e.get<std::string>(), an);
        for (const auto& t : j["integrals"]["traces"]) check_reparse(t["poly"].get<std::string>(), an);
        check_reparse(j["integrals"]["det"].get<std::string>(), an);
        for (const char* view : {"a", "x"}) {
            if (!j["integrals"].contains(view)) continue;
            const auto& names = std::string(view) == "a" ? an : xn;
            for (const auto& f : j["integrals"][view]) {
                if (f["type"] == "poly") check_reparse(f["expr"].get<std::string>(), names);
                else {
                    check_reparse(f["num"].get<std::string>(), names);
                    check_reparse(f["den"].get<std::string>(), names);
                }
            }
            if (j["poisson"].contains(view))
                for (const auto& row : j["poisson"][view]["matrix"])
                    for (const auto& e : row) check_reparse(e.get<std::string>(), names);
        }
    }
}

TEST_CASE("reports are byte-identical for the same seed") {
    auto lp = named_family(FamilyCase::Family2, 5);
    AnalyzeOptions o;
    o.seed = 42;
    o.numeric = true;
    CHECK(to_json(analyze(lp, o)).dump() == to_json(analyze(lp, o)).dump());
    CHECK(to_text(analyze(lp, o)) == to_text(analyze(lp, o)));
}

TEST_CASE("reports carry passing certificates") {
    for (const auto& s : sample_systems()) {
        CAPTURE(s.system_id);
        CHECK(s.symbolic_passed());
        Json j = to_json(s);
        CHECK(j["schema"] == kSchemaVersion);
        CHECK(!j["certificates"].empty());
        CHECK(j["status"]["symbolic"] == "pass");
        bool has_jacobi = false, has_independence = false;
        for (const auto& c : j["certificates"]) {
            CHECK(c["status"] == "pass");
            has_jacobi = has_jacobi || c["name"] == "jacobi";
            has_independence = has_independence || c["name"] == "independence";
        }
        CHECK(has_jacobi);
        CHECK(has_independence);
    }
}

TEST_CASE("parsed reports re-certify") {
    for (const auto& s : sample_systems()) {
        CAPTURE(s.system_id);
        auto views = parse_system_json(to_json(s));
        REQUIRE(!views.empty());
        CHECK(views[0].prefix == "a");
        CHECK(views[0].equations == s.a.equations);
        CHECK(views[0].integrals.size() == s.a.integrals.size());
        for (const auto& v : views) CHECK(recertify(v, 7).symbolic_passed());
    }
}

TEST_CASE("a tampered report fails re-certification") {
    auto s = analyze(search_signs(PhiSystem::parse(3, "1,2,3,1+2")).value());
    Json j = to_json(s);
    j["odes"]["a"][0]["rhs"] = "a1*a2^2 + a1*a4^2";
    auto views = parse_system_json(j);
    CHECK(!recertify(views[0], 1).symbolic_passed());

    Json bad = to_json(s);
    bad["odes"]["a"][0]["rhs"] = "a1*(a2";
    CHECK_THROWS_AS(parse_system_json(bad), Error);
    CHECK_THROWS_AS(parse_system_json(Json::object()), Error);
}

TEST_CASE("two-diagonal m = 4, n = 10 report") {
    auto s = analyze(two_diagonal_family(4, 10));
    CHECK(s.system_id == "twodiag:m=4,n=10");
    CHECK(s.a.integrals.labels() == std::vector<std::string>{"det L", "H2", "H4", "H6", "H7", "H8", "H9"});
    REQUIRE(s.a.poisson);
    CHECK(s.a.poisson->generic_rank == 12);
    CHECK(s.symbolic_passed());
}

TEST_CASE("numeric mode adds drift and halving checks") {
    AnalyzeOptions o;
    o.numeric = true;
    auto s = analyze(search_signs(PhiSystem::parse(3, "1,2,3,1+2")).value(), o);
    std::size_t drift = 0, halving = 0;
    for (const auto& c : s.a.certificate.checks) {
        drift += c.name.rfind("drift:", 0) == 0;
        halving += c.name.rfind("halving:", 0) == 0;
    }
    CHECK(drift == s.a.integrals.size());
    CHECK(halving == s.a.integrals.size());
    CHECK(s.all_passed());
}

TEST_CASE("unit scale points") {
    auto p = unit_scale_point(20, 3);
    CHECK(p == unit_scale_point(20, 3));
    CHECK(p != unit_scale_point(20, 4));
    for (double v : p) {
        CHECK(v >= 0.5);
        CHECK(v <= 1.5);
    }
}

TEST_CASE("enumeration and trajectory JSON") {
    Json e = enumeration_to_json(enumerate_serial(3));
    CHECK(e["rank"] == 3);
    CHECK(e["lax_count"] == 8);
    Trajectory t;
    for (int i = 0; i <= 10; ++i) {
        t.times.push_back(i * 0.1);
        t.states.push_back({double(i)});
    }
    Json tj = trajectory_to_json(t, 5);
    CHECK(tj["times"].size() == 3);
    CHECK(tj["states"].size() == 3);
    CHECK(tj["diverged_at"].is_null());
}
