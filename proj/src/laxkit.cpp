#include "voltkit/laxkit.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>

#include <omp.h>

#include "voltkit/error.hpp"

namespace voltkit {

// ---------------------------------------------------------------- construction

std::vector<ContributorPair> contributor_pairs(const PhiSystem& phi) {
    struct Elem {
        std::size_t var;
        int sign;
        std::size_t r, c; // elementary matrix E_{r,c}, 1-based
    };
    std::vector<Elem> elems;
    for (std::size_t k = 0; k < phi.var_count(); ++k) {
        RootPosition p = position_of(phi.roots()[k]);
        elems.push_back({k, +1, p.row, p.col});
        elems.push_back({k, -1, p.col, p.row});
    }
    std::vector<ContributorPair> out;
    for (std::size_t x = 0; x < elems.size(); ++x) {
        for (std::size_t y = x + 1; y < elems.size(); ++y) {
            const Elem& e1 = elems[x];
            const Elem& e2 = elems[y];
            if (e1.var == e2.var) continue;
            if (e1.c == e2.r && e1.r < e2.c) {
                out.push_back({e1.var, e1.sign, e2.var, e2.sign, {e1.r, e2.c}});
            } else if (e2.c == e1.r && e2.r < e1.c) {
                out.push_back({e1.var, e1.sign, e2.var, e2.sign, {e2.r, e1.c}});
            }
        }
    }
    return out;
}

std::vector<PsiPair> build_psi(const PhiSystem& phi) {
    const auto pairs = contributor_pairs(phi);
    std::vector<PsiPair> out;
    for (const auto& root : positive_roots(phi.rank())) {
        RootPosition pos = position_of(root);
        PsiPair pp{root, {}};
        for (std::size_t p = 0; p < pairs.size(); ++p)
            if (pairs[p].pos == pos) pp.contributors.push_back(p);
        if (!pp.contributors.empty()) out.push_back(std::move(pp));
    }
    return out;
}

PolyMatrix build_L(const PhiSystem& phi) {
    const std::size_t m = phi.var_count();
    PolyMatrix L(phi.dim(), m);
    for (std::size_t k = 0; k < m; ++k) {
        RootPosition p = position_of(phi.roots()[k]);
        L.at(p.row - 1, p.col - 1) = Poly::variable(m, k);
        L.at(p.col - 1, p.row - 1) = Poly::variable(m, k);
    }
    return L;
}

PolyMatrix build_B(const PhiSystem& phi, const std::vector<ContributorPair>& pairs, const std::vector<int>& signs) {
    if (signs.size() != pairs.size()) throw Error(ErrorKind::Constraint, "one sign per contributor pair required");
    const std::size_t m = phi.var_count();
    PolyMatrix B(phi.dim(), m);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& cp = pairs[p];
        std::size_t vars[2] = {cp.i, cp.j};
        Poly t = Poly::product(m, vars, signs[p]);
        B.at(cp.pos.row - 1, cp.pos.col - 1) += t;
        B.at(cp.pos.col - 1, cp.pos.row - 1) -= t;
    }
    return B;
}

std::vector<Poly> extract_xdot(const PolyMatrix& L, const PolyMatrix& B, const std::vector<RootPosition>& positions) {
    PolyMatrix C = commutator(B, L);
    const std::size_t n = L.dim();
    std::vector<char> support(n * n, 0);
    for (const auto& p : positions) {
        support[(p.row - 1) * n + (p.col - 1)] = 1;
        support[(p.col - 1) * n + (p.row - 1)] = 1;
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (!support[r * n + c] && !C.at(r, c).is_zero()) {
                throw Error(ErrorKind::Constraint, "[B,L] has a nonzero entry at (" + std::to_string(r + 1) + "," +
                                                       std::to_string(c + 1) + ") outside the support of L");
            }
        }
    }
    if (!C.is_symmetric()) throw Error(ErrorKind::Constraint, "[B,L] is not symmetric");
    std::vector<Poly> xdot;
    for (const auto& p : positions) xdot.push_back(C.at(p.row - 1, p.col - 1));
    return xdot;
}

namespace {

std::vector<RootPosition> phi_positions(const PhiSystem& phi) {
    std::vector<RootPosition> out;
    for (const auto& r : phi.roots()) out.push_back(position_of(r));
    return out;
}

} // namespace

LaxPair assemble_lax_pair(const PhiSystem& phi, const std::vector<ContributorPair>& pairs,
                          const std::vector<int>& signs) {
    LaxPair lp{phi, build_L(phi), build_B(phi, pairs, signs), pairs, signs, {}, phi_positions(phi), "search"};
    lp.xdot = extract_xdot(lp.L, lp.B, lp.positions);
    return lp;
}

// ---------------------------------------------------------------- constraint system

namespace {

using MonoKey = std::uint32_t;

MonoKey mono_key(std::size_t i, std::size_t j, std::size_t k) {
    std::size_t v[3] = {i, j, k};
    std::sort(v, v + 3);
    return MonoKey(v[0] << 20 | v[1] << 10 | v[2]);
}

bool is_lv_monomial(MonoKey key, std::size_t k) {
    std::size_t v[3] = {key >> 20, (key >> 10) & 1023u, key & 1023u};
    auto it = std::find(v, v + 3, k);
    if (it == v + 3) return false;
    std::size_t rest[2];
    std::size_t n = 0;
    bool removed = false;
    for (auto x : v) {
        if (x == k && !removed) {
            removed = true;
            continue;
        }
        rest[n++] = x;
    }
    return rest[0] == rest[1] && rest[0] != k;
}

struct Equation {
    std::vector<std::pair<std::size_t, int>> terms; // (pair index, weight)
};

// For every upper entry (r,c), r<=c: monomial -> (pair -> integer weight) of [B,L]_{rc}.
using EntryTerms = std::map<MonoKey, std::map<std::size_t, int>>;

std::map<std::pair<std::size_t, std::size_t>, EntryTerms> commutator_terms(const PhiSystem& phi,
                                                                           const std::vector<ContributorPair>& pairs) {
    const std::size_t n = phi.dim();
    std::vector<int> lvar(n * n, -1);
    for (std::size_t k = 0; k < phi.var_count(); ++k) {
        RootPosition p = position_of(phi.roots()[k]);
        lvar[(p.row - 1) * n + p.col - 1] = int(k);
        lvar[(p.col - 1) * n + p.row - 1] = int(k);
    }
    struct BEntry {
        std::size_t pair;
        int sign;
    };
    std::vector<std::vector<BEntry>> bent(n * n);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto [r, c] = pairs[p].pos;
        bent[(r - 1) * n + c - 1].push_back({p, +1});
        bent[(c - 1) * n + r - 1].push_back({p, -1});
    }
    std::map<std::pair<std::size_t, std::size_t>, EntryTerms> out;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r; c < n; ++c) {
            EntryTerms terms;
            for (std::size_t s = 0; s < n; ++s) {
                int lsc = lvar[s * n + c];
                if (lsc >= 0) {
                    for (const auto& b : bent[r * n + s]) {
                        auto& w = terms[mono_key(pairs[b.pair].i, pairs[b.pair].j, std::size_t(lsc))][b.pair];
                        w += b.sign;
                    }
                }
                int lrs = lvar[r * n + s];
                if (lrs >= 0) {
                    for (const auto& b : bent[s * n + c]) {
                        auto& w = terms[mono_key(pairs[b.pair].i, pairs[b.pair].j, std::size_t(lrs))][b.pair];
                        w -= b.sign;
                    }
                }
            }
            out[{r, c}] = std::move(terms);
        }
    }
    return out;
}

std::vector<Equation> build_equations(const PhiSystem& phi, const std::vector<ContributorPair>& pairs,
                                      bool require_lv) {
    auto entries = commutator_terms(phi, pairs);
    std::vector<Equation> eqs;
    for (const auto& [rc, terms] : entries) {
        std::size_t var = phi.var_at({rc.first + 1, rc.second + 1});
        const bool on_support = rc.first != rc.second && var < phi.var_count();
        for (const auto& [mono, weights] : terms) {
            if (on_support && (!require_lv || is_lv_monomial(mono, var))) continue;
            Equation e;
            for (const auto& [p, w] : weights)
                if (w != 0) e.terms.emplace_back(p, w);
            if (!e.terms.empty()) eqs.push_back(std::move(e));
        }
    }
    return eqs;
}

// Depth-first search over ±1 assignments with bound, parity and unit
// propagation. Branches on the lowest unassigned variable, +1 first, so
// solutions appear in lexicographic order.
class SignSearch {
public:
    SignSearch(std::size_t nvars, std::vector<Equation> eqs, std::uint64_t cap)
        : eqs_(std::move(eqs)), occurs_(nvars), value_(nvars, 0), cap_(cap) {
        state_.resize(eqs_.size());
        for (std::size_t e = 0; e < eqs_.size(); ++e) {
            for (const auto& [v, w] : eqs_[e].terms) {
                occurs_[v].emplace_back(e, w);
                state_[e].rem_abs += std::abs(w);
                ++state_[e].unassigned;
            }
        }
    }

    // Calls `on_solution` for each solution until it returns false.
    void run(const std::function<bool(const std::vector<int>&)>& on_solution) {
        on_solution_ = &on_solution;
        std::vector<std::pair<std::size_t, int>> queue;
        for (std::size_t e = 0; e < eqs_.size(); ++e) {
            if (!consistent(e, queue)) return;
        }
        if (!drain(queue)) return;
        dfs(0);
    }

    std::uint64_t decisions() const { return decisions_; }

private:
    struct EqState {
        long partial = 0;
        long rem_abs = 0;
        std::size_t unassigned = 0;
    };

    bool consistent(std::size_t e, std::vector<std::pair<std::size_t, int>>& queue) {
        const EqState& s = state_[e];
        if (std::labs(s.partial) > s.rem_abs) return false;
        if ((s.partial + s.rem_abs) % 2 != 0) return false;
        if (s.unassigned == 1) {
            for (const auto& [v, w] : eqs_[e].terms) {
                if (value_[v] != 0) continue;
                if (s.partial % w != 0) return false;
                long forced = -s.partial / w;
                if (forced != 1 && forced != -1) return false;
                queue.emplace_back(v, int(forced));
                break;
            }
        }
        return true;
    }

    bool assign(std::size_t v, int val, std::vector<std::pair<std::size_t, int>>& queue) {
        value_[v] = val;
        trail_.push_back(v);
        bool ok = true;
        for (const auto& [e, w] : occurs_[v]) {
            EqState& s = state_[e];
            s.partial += long(w) * val;
            s.rem_abs -= std::abs(w);
            --s.unassigned;
        }
        for (const auto& [e, w] : occurs_[v]) {
            if (!consistent(e, queue)) {
                ok = false;
                break;
            }
        }
        return ok;
    }

    bool drain(std::vector<std::pair<std::size_t, int>>& queue) {
        while (!queue.empty()) {
            auto [v, val] = queue.back();
            queue.pop_back();
            if (value_[v] != 0) {
                if (value_[v] != val) return false;
                continue;
            }
            if (!assign(v, val, queue)) return false;
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            std::size_t v = trail_.back();
            trail_.pop_back();
            for (const auto& [e, w] : occurs_[v]) {
                EqState& s = state_[e];
                s.partial -= long(w) * value_[v];
                s.rem_abs += std::abs(w);
                ++s.unassigned;
            }
            value_[v] = 0;
        }
    }

    // Returns false once the caller asked to stop.
    bool dfs(std::size_t from) {
        std::size_t v = from;
        while (v < value_.size() && value_[v] != 0) ++v;
        if (v == value_.size()) return (*on_solution_)(value_);
        for (int val : {+1, -1}) {
            if (++decisions_ > cap_) {
                throw Error(ErrorKind::SearchTooLarge,
                            "sign search exceeded " + std::to_string(cap_) + " candidate decisions");
            }
            const std::size_t mark = trail_.size();
            std::vector<std::pair<std::size_t, int>> queue;
            bool ok = assign(v, val, queue) && drain(queue);
            bool keep_going = true;
            if (ok) keep_going = dfs(v + 1);
            undo(mark);
            if (!keep_going) return false;
        }
        return true;
    }

    std::vector<Equation> eqs_;
    std::vector<std::vector<std::pair<std::size_t, int>>> occurs_;
    std::vector<EqState> state_;
    std::vector<int> value_;
    std::vector<std::size_t> trail_;
    std::uint64_t cap_;
    std::uint64_t decisions_ = 0;
    const std::function<bool(const std::vector<int>&)>* on_solution_ = nullptr;
};

std::vector<std::vector<int>> find_signs(const PhiSystem& phi, const std::vector<ContributorPair>& pairs,
                                         const SearchOptions& opts, std::size_t limit, SearchStats* stats) {
    auto eqs = build_equations(phi, pairs, opts.require_lv);
    if (stats) {
        stats->pairs = pairs.size();
        stats->equations = eqs.size();
    }
    SignSearch search(pairs.size(), std::move(eqs), opts.max_candidates);
    std::vector<std::vector<int>> found;
    search.run([&](const std::vector<int>& s) {
        found.push_back(s);
        return found.size() < limit;
    });
    if (stats) stats->decisions = search.decisions();
    return found;
}

} // namespace

std::optional<LaxPair> search_signs(const PhiSystem& phi, const SearchOptions& opts, SearchStats* stats) {
    const auto pairs = contributor_pairs(phi);
    auto found = find_signs(phi, pairs, opts, 1, stats);
    if (found.empty()) return std::nullopt;
    return assemble_lax_pair(phi, pairs, found.front());
}

std::vector<LaxPair> all_sign_solutions(const PhiSystem& phi, std::size_t limit, const SearchOptions& opts) {
    const auto pairs = contributor_pairs(phi);
    std::vector<LaxPair> out;
    for (const auto& s : find_signs(phi, pairs, opts, limit, nullptr)) out.push_back(assemble_lax_pair(phi, pairs, s));
    return out;
}

// ---------------------------------------------------------------- Lotka-Volterra

std::vector<Poly> lv_equations(const std::vector<std::vector<long long>>& A) {
    const std::size_t m = A.size();
    std::vector<Poly> out;
    for (std::size_t k = 0; k < m; ++k) {
        Poly rhs(m);
        for (std::size_t j = 0; j < m; ++j)
            if (A[k][j] != 0) rhs += Poly::variable(m, j) * Rational(static_cast<long>(A[k][j]));
        out.push_back(Poly::variable(m, k) * rhs);
    }
    return out;
}

std::optional<LVReduction> detect_lv(const LaxPair& pair) {
    const std::size_t m = pair.xdot.size();
    std::vector<std::vector<long long>> A(m, std::vector<long long>(m, 0));
    for (std::size_t k = 0; k < m; ++k) {
        for (const auto& t : pair.xdot[k].terms()) {
            if (t.mono[k] == 0) return std::nullopt;
            Monomial rest = t.mono / Monomial::var(k);
            if (rest.degree != 2) return std::nullopt;
            std::size_t j = m;
            for (std::size_t v = 0; v < m; ++v)
                if (rest[v] == 2) j = v;
            if (j == m || j == k) return std::nullopt;
            if (t.coeff.get_den() != 1) return std::nullopt;
            A[k][j] += t.coeff.get_num().get_si();
        }
    }
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j)
            if (A[k][j] != -A[j][k]) return std::nullopt;
    LVReduction red;
    red.A = A;
    red.x_equations = lv_equations(A);
    return red;
}

// ---------------------------------------------------------------- families

FamilyCase parse_family_case(const std::string& text) {
    if (text == "km") return FamilyCase::KM;
    if (text == "pkm") return FamilyCase::PeriodicKM;
    if (text == "f2") return FamilyCase::Family2;
    if (text == "f3") return FamilyCase::Family3;
    if (text == "f4") return FamilyCase::Family4;
    throw Error(ErrorKind::Parse, "unknown family case '" + text + "' (expected km|pkm|f2|f3|f4)");
}

std::string family_case_name(FamilyCase c) {
    switch (c) {
    case FamilyCase::KM: return "km";
    case FamilyCase::PeriodicKM: return "pkm";
    case FamilyCase::Family2: return "f2";
    case FamilyCase::Family3: return "f3";
    case FamilyCase::Family4: return "f4";
    }
    return "?";
}

PhiSystem family_phi(FamilyCase c, std::size_t n) {
    auto need = [&](std::size_t min_rank) {
        if (n < min_rank) {
            throw Error(ErrorKind::InvalidRank, "family " + family_case_name(c) + " needs rank >= " +
                                                    std::to_string(min_rank));
        }
    };
    switch (c) {
    case FamilyCase::KM: need(1); return PhiSystem(n, {});
    case FamilyCase::PeriodicKM: need(2); return PhiSystem(n, {Root::block(n, 1, n)});
    case FamilyCase::Family2: need(4); return PhiSystem(n, {Root::block(n, 2, n - 1)});
    case FamilyCase::Family3: need(3); return PhiSystem(n, {Root::block(n, 1, n - 1)});
    case FamilyCase::Family4: need(3); return PhiSystem(n, {Root::block(n, 2, n)});
    }
    throw Error(ErrorKind::Parse, "unknown family");
}

LaxPair named_family(FamilyCase c, std::size_t n) {
    PhiSystem phi = family_phi(c, n);
    SearchOptions opts;
    opts.require_lv = true;
    auto lp = search_signs(phi, opts);
    if (!lp) throw Error(ErrorKind::Constraint, "no Lotka-Volterra sign assignment for family " + family_case_name(c));
    lp->origin = "family:" + family_case_name(c);
    return *lp;
}

LaxPair two_diagonal_family(std::size_t m, std::size_t n) {
    if (m < 1) throw Error(ErrorKind::InvalidRank, "two-diagonal family needs m >= 1");
    if (m >= 2 && n < 2 * m) throw Error(ErrorKind::InvalidRank, "two-diagonal family needs n >= 2m");
    if (n < m + 2) throw Error(ErrorKind::InvalidRank, "two-diagonal family needs n - m >= 2");
    const std::size_t rank = n - 1;
    std::vector<Root> extra;
    for (std::size_t i = 1; i <= m; ++i) extra.push_back(Root::block(rank, i, i + n - m - 1));
    PhiSystem phi(rank, extra);
    const std::size_t nv = phi.var_count();
    auto a = [&](std::size_t i) { return Poly::variable(nv, i - 1); };

    PolyMatrix B(n, nv);
    // Diagonal with k entries starts at column n-k+1 (1-based).
    auto set_diagonal = [&](std::size_t k, const std::vector<Poly>& vals) {
        for (std::size_t i = 0; i < k; ++i) {
            B.at(i, i + n - k) += vals[i];
            B.at(i + n - k, i) -= vals[i];
        }
    };
    std::vector<Poly> d;
    for (std::size_t i = 1; i + 1 <= n - 1; ++i) d.push_back(a(i) * a(i + 1));
    set_diagonal(n - 2, d);

    d.clear();
    d.push_back(-(a(n - m) * a(n)));
    for (std::size_t j = 1; j < m; ++j) d.push_back(-(a(n - m + j) * a(n + j)) - a(j) * a(n + j - 1));
    d.push_back(-(a(m) * a(n + m - 1)));
    set_diagonal(m + 1, d);

    if (m >= 2) {
        d.clear();
        for (std::size_t j = 1; j < m; ++j) d.push_back(a(n - m + j) * a(n + j - 1) + a(j) * a(n + j));
        set_diagonal(m - 1, d);
    }

    LaxPair lp{phi, build_L(phi), B, {}, {}, {}, phi_positions(phi), "twodiag"};
    lp.xdot = extract_xdot(lp.L, lp.B, lp.positions);
    return lp;
}

// ---------------------------------------------------------------- enumeration

std::size_t EnumerationSummary::lax_count() const {
    return std::size_t(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.lax; }));
}

std::size_t EnumerationSummary::lv_count() const {
    return std::size_t(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.lv; }));
}

std::vector<std::uint64_t> EnumerationSummary::failing_masks() const {
    std::vector<std::uint64_t> out;
    for (const auto& e : entries)
        if (!e.lax) out.push_back(e.mask);
    return out;
}

std::vector<std::uint64_t> EnumerationSummary::lv_masks() const {
    std::vector<std::uint64_t> out;
    for (const auto& e : entries)
        if (e.lv) out.push_back(e.mask);
    return out;
}

EnumerationEntry classify_phi(const PhiSystem& phi, const SearchOptions& opts) {
    EnumerationEntry e;
    e.mask = phi.mask();
    e.phi = phi.to_string();
    const auto pairs = contributor_pairs(phi);
    e.solution_pairs = pairs.size();
    SearchOptions plain = opts;
    plain.require_lv = false;
    e.lax = !find_signs(phi, pairs, plain, 1, nullptr).empty();
    if (e.lax) {
        SearchOptions lv = opts;
        lv.require_lv = true;
        e.lv = !find_signs(phi, pairs, lv, 1, nullptr).empty();
    }
    return e;
}

EnumerationSummary enumerate_serial(std::size_t n, const SearchOptions& opts) {
    EnumerationSummary s;
    s.rank = n;
    for (const auto& phi : enumerate_phi(n)) s.entries.push_back(classify_phi(phi, opts));
    return s;
}

EnumerationSummary enumerate_parallel(std::size_t n, int jobs, const SearchOptions& opts) {
    const std::size_t bits = non_simple_count(n);
    if (bits > 24) throw Error(ErrorKind::SearchTooLarge, "too many subsets to enumerate");
    const long long count = 1LL << bits;
    EnumerationSummary s;
    s.rank = n;
    s.entries.resize(std::size_t(count));
    std::string failure;
    bool failed = false;
    ErrorKind failure_kind = ErrorKind::Constraint;
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long mask = 0; mask < count; ++mask) {
        try {
            s.entries[std::size_t(mask)] = classify_phi(phi_from_mask(n, std::uint64_t(mask)), opts);
        } catch (const Error& e) {
#pragma omp critical(voltkit_enumerate_error)
            {
                if (!failed) {
                    failed = true;
                    failure = e.what();
                    failure_kind = e.kind();
                }
            }
        }
    }
    if (failed) throw Error(failure_kind, failure);
    return s;
}

} // namespace voltkit
